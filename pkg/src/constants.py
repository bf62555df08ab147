# Euler-Mascheroni constant, held to full double precision
EULER_GAMMA = 0.5772156649015329

# Partition oracle
ORACLE_CAP = 40

# Triangle builds
EXACT_CAP = 500
FLOAT_CAP = 5000
FLOAT_RELATIVE_TOLERANCE = 1e-10

# Limit function
R_MAX = 20
QUAD_ABS_TOL = 1e-10
QUAD_MAX_DEPTH = 40
PIECE_DEGREE = 31
ODE_STEPS = 2048

# Experiments
DEFAULT_X_LIST = ('0.15', '0.3', '0.45', '0.6', '0.75')
DEFAULT_N_LIST = (500, 1000, 2000, 4000)
EXACT_CHECK_N_LIST = (50, 100, 200, 300)
LEHMER_N_LIST = tuple(range(100, 4001, 100))
LIMIT_GRID_SIZE = 20
FLOOR_NUDGE = 1e-12

# Laplace check
X_MAX = 15.0
MIN_TAIL_EXPONENT = 7.5
MIN_X_MAX = 8.0
DEFAULT_T_LIST = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
E1_SWITCHOVER = 1.0
E1_MAX_ITERATIONS = 100000
E1_EPS = 1e-15
DELAY_STEP = 1e-5
DELAY_GRID = tuple(round(1.1 + 0.2 * i, 10) for i in range(15))
DELAY_TOLERANCE = 1e-4
SPREAD_TOLERANCE = 0.01

# Plots
PLOT_WIDTH = 960
PLOT_HEIGHT = 600
PLOT_LEFT_MARGIN = 80
PLOT_RIGHT_MARGIN = 30
PLOT_TOP_MARGIN = 40
PLOT_BOTTOM_MARGIN = 60
PLOT_SAMPLES = 1000

# Logging
LOG_PATH = './partition_limits.log'
