"""
Logging utility functions.
"""

import logging

import src.constants as constants

console = logging.getLogger('console')


def init_loggers(log_path: str = constants.LOG_PATH):
    """
    Initialize the console logger and the file logger.

    Console messages go to the diagnostic stream so that numeric output
    written to stdout stays clean.
    """
    # Set the global logging level to DEBUG
    logging.getLogger().setLevel(logging.DEBUG)

    if not console.handlers:
        # Handler for console, print only the message
        c_handler = logging.StreamHandler()
        c_handler.setFormatter(logging.Formatter('%(message)s'))
        c_handler.setLevel(logging.INFO)
        console.addHandler(c_handler)

    root = logging.getLogger()
    if not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        f_handler = logging.FileHandler(log_path, encoding='utf-8')
        f_handler.setFormatter(formatter)

        # Everything will be written to the log file
        f_handler.setLevel(logging.DEBUG)
        root.addHandler(f_handler)
