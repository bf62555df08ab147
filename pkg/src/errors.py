"""
Exceptions raised across the package.
"""


class ComputationRefused(ValueError):
    """
    A computation declined its inputs: a cap was exceeded, an argument left
    the domain, or a numerical routine did not converge.
    """


class ConfigError(ValueError):
    """
    The command-line configuration failed validation.
    """
