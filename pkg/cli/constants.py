"""
Constants used to avoid magic numbers.
"""

import scipy.constants as scpct

SPEED_OF_LIGHT = scpct.c
VACUUM_PERMITTIVITY = scpct.epsilon_0
GRAVITATIONAL_CONSTANT = scpct.G
ELEMENTARY_CHARGE = scpct.e
ELECTRON_MASS = scpct.m_e
HBAR = scpct.hbar

# kernels
QUAD_TOLERANCE = 1e-11
KERNEL_QUAD_TOLERANCE = 1e-13
QUAD_SUBDIVISION_LIMIT = 60
CLAMP_TOLERANCE = 1e-12
INVERSE_TOLERANCE = 1e-12
INVERSE_MAX_ITERATIONS = 60
# e^{-u^2} underflows relative to one beyond this
MAX_CYLINDER_COLLAPSE_VARIABLE = 6.5
# exp(u^2) overflows a double just past this
MAX_CYLINDER_EXPANSION_VARIABLE = 26.0

# characteristics
SHOCK_TIME_STEPS = 400
SHOCK_BISECTION_RTOL = 1e-12
CENTRAL_COLLAPSE_RADIUS = 1e-6
SIMULTANEITY_SPREAD = 1e-8
ARRIVAL_MARGIN = 1e-9
DEFAULT_LAYER_COUNT = 64
UNIFORM_SUPPORT_FLOOR = 1e-3

# density
NEAR_CAUSTIC_JACOBIAN = 1e-9
CONSERVATION_FD_STEP = 1e-4
CONSERVATION_QUAD_TOLERANCE = 1e-10

# oracle
ODE_TOLERANCE = 1e-10
ODE_FLOOR_FRACTION = 1e-8
FLIGHT_QUAD_TOLERANCE = 1e-12
VERIFY_ODE_TOLERANCE = 1e-6
VERIFY_QUADRATURE_TOLERANCE = 1e-9
VERIFY_TIME_FRACTION = 0.95
VERIFY_LIGHT_CROSSINGS = 3.0
VERIFY_SAMPLES = 12

# analysis
MIN_INTERIOR_POINTS = 5
LOW_CONFIDENCE_EDGE = 2
COEFFICIENT_FD_STEP = 1e-4

# log-normal support spans this many standard deviations each side
LOG_NORMAL_SUPPORT_WIDTH = 6.0
# warn when a layer grid leaves more of the shell than this outside
LOG_NORMAL_MISSED_FRACTION = 1e-3

CSV_FLOAT_FORMAT = "%.17g"
