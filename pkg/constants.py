import math

# App Info
APP_NAME = "sleperc"
APP_VERSION = "1.0"

# Environment overrides (flag > env > prefs.json > default below)
ENV_WORKERS = "SLEPERC_WORKERS"
ENV_HOME = "SLEPERC_HOME"

# ----------------------------------------------------------------------
# Run defaults
# ----------------------------------------------------------------------
DEFAULT_SEED = 0
DEFAULT_SLE_SAMPLES = 100_000
DEFAULT_ARC_SAMPLES = 20_000
DEFAULT_DELTA = 1 / 75

# Diffusion discretization. The step is relative: each Euler step advances
# u by step * (1 + w^2), so the path crosses every dyadic scale of |w| in
# roughly the same number of steps.
DEFAULT_STEP = 1e-3
DEFAULT_ESCAPE = 20.0
DEFAULT_MAX_STEPS = 1_000_000
MIN_ESCAPE = 10.0

# Loewner flow: rescale (x, y) -> (x/y, 1) once y falls below this fraction
# of its starting value.
LOEWNER_RESCALE_FLOOR = 1e-6

# Monte Carlo harness
DEFAULT_CHUNK_SIZE = 256
NOISE_CHUNK = 512
DEFAULT_CONFIDENCE = 0.95
MIN_TRIALS = 100
# Fraction of truncated paths tolerated before an estimate is refused.
TRUNCATION_BUDGET = 0.01
# Fraction of percolation samples allowed to need a margin-doubling redraw.
REDRAW_BUDGET = 0.001

# ----------------------------------------------------------------------
# Special functions
# ----------------------------------------------------------------------
SERIES_RTOL = 1e-16
SERIES_MAX_TERMS = 100_000

# ----------------------------------------------------------------------
# Percolation lattice
# ----------------------------------------------------------------------
MAX_DELTA = 2.0
# Sublattice offset as a fraction of delta; keeps 0 and 1 off every edge.
OFFSET_FRACTION = (1 / 7, 1 / 13)
MIN_MARGIN = 0.1
MARGIN_PER_DELTA = 10.0
# Minimum clearance (in units of delta) between 0, 1, e^{i theta} and the
# nearest hexagon edge.
GENERIC_CLEARANCE = 1e-9
THETA_EPS = 1e-8
TWO_PI = 2 * math.pi

# ----------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------
CSV_COLUMNS = [
    "experiment",
    "kappa",
    "theta",
    "x0",
    "y0",
    "delta",
    "n",
    "method",
    "p_hat",
    "se",
    "ci_low",
    "ci_high",
    "formula",
    "z",
    "seed",
    "rejected",
    "bias",
    "margin",
    "step",
    "escape",
    "max_steps",
    "escape_correction",
    "version",
]
OUTPUT_FORMATS = ("csv", "json")

# Exit codes
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_BUDGET = 3
EXIT_CANCELLED = 130
