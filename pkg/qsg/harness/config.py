# qsg/harness/config.py
class Config:
    TOOL_VERSION = '1.0.0'
    THREADS_ENV_VAR = 'QSG_THREADS'

    RANK_TOL = 1e-8
    QUAD_TOL = 1e-10
    EIG_TOL = 1e-6
    ODE_TOL = 1e-8

    QUAD_MAX_DEPTH = 24
    EIG_RESIDUAL_FACTOR = 1e-8

    GENERATOR_STEP = 1e-5
    CONTINUITY_EPSILON = 1e-6
    DERIVATIVE_STEP = 1e-4
    AVERAGING_STEPS = (0.1, 0.05, 0.025, 0.0125)
    BOUND_SLACK = 1e-8

    EVOLUTION_STEP = 0.1
    EVOLUTION_HORIZON = 3.0
    EVOLUTION_MAX_HALVINGS = 10
    EVOLUTION_BOUND_SAMPLES = 129
    PROPAGATOR_CACHE_SIZE = 4096
    ORDER_STEP = 1e-3
    MIN_GENERATOR_ORDER = 0.9
    AVERAGING_RATIO_SLACK = 2.0

    RANDOM_DIM = 4
    DEFAULT_THREADS = 4

    DEFAULT_POWERS = (1, 2, 3)
    DEFAULT_GRID_T = (0.0, 0.5, 1.0)
    DEFAULT_GRID_S = (0.0, 0.5, 1.0)
    DEFAULT_GRID_R = (0.5,)
