LOG_LEVEL = 'INFO'  # DEBUG для пошаговых сообщений решателей
LOG_DIR = 'logs'
INFINITE_POLE_MODE = 'exact-symbolic'  # или 'reject'
SHADOW_SYMBOLIC_BOUND = 64
KRYLOV_BREAKDOWN_TOLERANCE = 0.0
ZERO_TOLERANCE_FACTOR = 32
CONSISTENCY_TOLERANCE = 1e-8
SELECTION_RULE = 'rate'  # или 'min'
DEFAULT_SEED = 2024
