import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# ── Paths ─────────────────────────────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent.parent.parent
DATA_DIR = Path(os.getenv("DATA_DIR", str(BASE_DIR / "data")))
# Per-subcommand artifact directories are managed by artifact_store.py.
ARTIFACTS_DIR = Path(os.getenv("ARTIFACTS_DIR", str(DATA_DIR / "artifacts")))

# ── Quadrature and root finding ───────────────────────────────────────────────
QUAD_EPSREL: float = float(os.getenv("QUAD_EPSREL", "1e-12"))
QUAD_LIMIT: int = int(os.getenv("QUAD_LIMIT", "400"))
ROOT_XTOL: float = float(os.getenv("ROOT_XTOL", "1e-14"))
SCAN_POINTS: int = int(os.getenv("SCAN_POINTS", "2001"))
FD_STEP_FACTOR: float = float(os.getenv("FD_STEP_FACTOR", "1e-3"))

# ── Semiclassical solvers ─────────────────────────────────────────────────────
COALESCENCE_TOL: float = float(os.getenv("COALESCENCE_TOL", "1e-8"))
ENERGY_RTOL: float = float(os.getenv("ENERGY_RTOL", "1e-13"))
RESIDUAL_TOL: float = float(os.getenv("RESIDUAL_TOL", "1e-10"))
OFF_SHELL_TOL: float = float(os.getenv("OFF_SHELL_TOL", "1e-6"))

# ── ODE integration ───────────────────────────────────────────────────────────
ODE_RTOL: float = float(os.getenv("ODE_RTOL", "1e-12"))
ODE_ATOL: float = float(os.getenv("ODE_ATOL", "1e-14"))

# ── Special functions ─────────────────────────────────────────────────────────
AIRY_SERIES_LIMIT: float = float(os.getenv("AIRY_SERIES_LIMIT", "4.5"))
AIRY_ASYMPTOTIC_LIMIT: float = float(os.getenv("AIRY_ASYMPTOTIC_LIMIT", "8.5"))
PCF_SERIES_LIMIT: float = float(os.getenv("PCF_SERIES_LIMIT", "4.0"))
PCF_MAX_ABS_A: float = float(os.getenv("PCF_MAX_ABS_A", "1000"))
PCF_MAX_ABS_Z: float = float(os.getenv("PCF_MAX_ABS_Z", "60"))

# ── Numerov / scattering oracle ───────────────────────────────────────────────
NUMEROV_X_MIN: float = float(os.getenv("NUMEROV_X_MIN", "1e-6"))
NUMEROV_STEP: float = float(os.getenv("NUMEROV_STEP", "2e-3"))
NUMEROV_DECAY_EXPONENT: float = float(os.getenv("NUMEROV_DECAY_EXPONENT", "36"))

# ── CLI ───────────────────────────────────────────────────────────────────────
DEFAULT_MASS: float = float(os.getenv("DEFAULT_MASS", "1"))
DEFAULT_HBAR: float = float(os.getenv("DEFAULT_HBAR", "1"))
CSV_SIGNIFICANT_DIGITS: int = int(os.getenv("CSV_SIGNIFICANT_DIGITS", "17"))

# ── Logging ───────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
