# Temperature partition (U = [u_min, u_max] in degC)
U_MIN: float = 0.0
U_MAX: float = 900.0
PARTITION_SIZE: int = 12

# Geometry and grid
THICKNESS: float = 0.1          # thermocouple span L [m]
DURATION: float = 50.0          # cooling horizon T [s]
SPACE_NODES: int = 41           # l, odd so that L/2 is a node
DT_SAFETY: float = 0.5          # auto-dt uses this fraction of the stability bound
STABILITY_SCAN_POINTS: int = 2048
CORNER_TOLERANCE: float = 1.0   # degC, initial profile vs boundary at t = 0

# Initial guesses and box bounds
K_INITIAL: float = 45.0
C_INITIAL: float = 4.5e6
K_LOWER: float = 1e-3
K_UPPER: float = 1e4
C_LOWER: float = 1e2
C_UPPER: float = 1e9

# Optimizer
FTOL: float = 1e-10
XTOL: float = 1e-10
GTOL: float = 1e-8
MAX_ITERATIONS: int = 400
UNCONSTRAINED_THRESHOLD: float = 1e-6  # column norm relative to ||J||
LAMBDA_SAMPLES: int = 1001
JOBS: int = 1

# Synthetic twin experiments
EXPERIMENT_COUNT: int = 3
NOISE_HALF_WIDTH: float = 0.5   # degC
STAMP_INTERVAL: float = 0.25    # s between measurements
REFERENCE_FACTOR: int = 2       # reference grid is this many times finer in dz
SEED: int = 42

# Output
OUTPUT_DIR: str = "out"

# Upper limit on time nodes per solve; candidates needing more are rejected
MAX_TIME_STEPS: int = 20000
