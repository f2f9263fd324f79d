"""
Constants and default values for amdiqkd.

Centralized physical defaults, numerical tolerances, bound constants and CLI exit
codes that need to be consistent across the sources, oracle, closed-form and rate code.
"""

from fractions import Fraction

# =============================================================================
# Physical Defaults
# =============================================================================

DEFAULT_ATTENUATION_LENGTH_KM: float = 22.0
DEFAULT_C_FIBER_M_PER_S: float = 2.0e8
DEFAULT_TAU_NS: float = 67.0
DEFAULT_TAU_S: float = 67e-9
DEFAULT_ETA_DET: float = 1.0

# Pair-number truncation (q_n = p_n = 0 for n >= 3)
DEFAULT_N_MAX: int = 2

POLARIZATIONS: tuple[str, str] = ("H", "V")

# =============================================================================
# Numerical Tolerances
# =============================================================================

# Normalization slack for photon statistics
EPS_NORM: float = 1e-12

# Hermiticity / trace checks on oracle operators
OPERATOR_TOLERANCE: float = 1e-12

# Oracle entries below this magnitude are cancellation residue
AMPLITUDE_FLOOR: float = 1e-20

# Binomials are exact integers up to this n, log-gamma beyond
EXACT_BINOMIAL_LIMIT: int = 60

# Transmittances below this are reported as exactly zero
TRANSMITTANCE_FLOOR: float = 1e-300

# =============================================================================
# Bound Constants
# =============================================================================

# Taylor floor of the repeaterless bound, used exactly as printed
PLOB_TAYLOR_CONSTANT: float = 1.44

# q2 <= NECESSARY_Q2_COEFFICIENT * p1 * q1**2  (3 / (8 * 1.44))
NECESSARY_Q2_COEFFICIENT: Fraction = Fraction(25, 96)

# PDC corollary: lambda / ((1+lambda)^3 (1+mu)^2) must reach this
PDC_REQUIRED_THRESHOLD: Fraction = Fraction(36, 25)

# max over lambda of lambda / (1+lambda)^3
PDC_ACHIEVABLE_MAXIMUM: Fraction = Fraction(4, 27)

# =============================================================================
# Distance Grid
# =============================================================================

DEFAULT_L_START_KM: float = 1.0
DEFAULT_L_STOP_KM: float = 1000.0
DEFAULT_L_POINTS: int = 200
DEFAULT_L_SPACING: str = "log"

# =============================================================================
# Q^max Search
# =============================================================================

DEFAULT_QMAX_TOLERANCE: float = 1e-6
QMAX_PRECHECK_POINTS: int = 12
QMAX_FALLBACK_FACTOR: int = 10

# =============================================================================
# CLI Exit Codes
# =============================================================================

EXIT_OK: int = 0
EXIT_CONFIG_ERROR: int = 1
EXIT_VERIFICATION_FAILED: int = 2
EXIT_IO_ERROR: int = 3

# 17 significant digits round-trip every double
CSV_FLOAT_FORMAT: str = ".17g"
