"""
Configuration for the one-way quantum computing toolkit
Environment-aware configuration that changes based on MBQC_ENV
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Environment detection
MBQC_ENV = os.environ.get("MBQC_ENV", "development").lower()
IS_PRODUCTION = MBQC_ENV == "production"

# ============================================================================
# SIMULATION CONFIGURATION
# ============================================================================
DEFAULT_SEED = int(os.environ.get("MBQC_SEED", 7))
DEFAULT_SHOTS = int(os.environ.get("MBQC_SHOTS", 1000))

# Dense state vectors hold 2**n complex amplitudes
MAX_DENSE_QUBITS = int(os.environ.get("MBQC_MAX_DENSE_QUBITS", 24))

# ============================================================================
# VERIFICATION CONFIGURATION
# ============================================================================
VERIFY_MAX_QUBITS = int(os.environ.get("MBQC_VERIFY_MAX_QUBITS", 12))
VERIFY_RANDOM_SHAPES = int(os.environ.get("MBQC_VERIFY_RANDOM_SHAPES", 200))
GADGET_RANDOM_INPUTS = int(os.environ.get("MBQC_GADGET_RANDOM_INPUTS", 20))

# ============================================================================
# PERCOLATION CONFIGURATION
# ============================================================================
PERCOLATION_TRIALS = int(os.environ.get("MBQC_PERCOLATION_TRIALS", 200))
BOOTSTRAP_SAMPLES = int(os.environ.get("MBQC_BOOTSTRAP_SAMPLES", 200))
THRESHOLD_SIZES = [
    int(size)
    for size in os.environ.get("MBQC_THRESHOLD_SIZES", "12,16,24").split(",")
    if size.strip()
]
THRESHOLD_BISECTION_STEPS = int(os.environ.get("MBQC_THRESHOLD_BISECTION_STEPS", 30))

if IS_PRODUCTION:
    if MAX_DENSE_QUBITS > 30:
        raise ValueError("MBQC_MAX_DENSE_QUBITS above 30 exceeds available memory")

# ============================================================================
# LOGGING CONFIGURATION
# ============================================================================
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO" if IS_PRODUCTION else "DEBUG")
