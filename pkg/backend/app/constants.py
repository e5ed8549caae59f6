# Fixed numerical conventions (not configurable)
NORM_TOL = 1e-12
PREP_NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
IMPOSSIBLE_OUTCOME_TOL = 1e-12
EIGEN_TOL = 1e-10
FACTOR_TOL = 1e-10
FIDELITY_TOL = 1e-10
DEGENERATE_ANGLE_TOL = 1e-10

# Supported outcome source names (strings only, no circular imports)
OUTCOME_SOURCES = ["sampled", "forced", "exhaustive"]

# Execution strategies understood by the compiler
STRATEGIES = ["once", "staged"]

# Readout bases for compiled circuits
READOUT_BASES = ["Z", "X"]

# Input preparation modes for compiled circuits
INPUT_MODES = ["written", "measured"]
