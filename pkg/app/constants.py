"""Общие константы приложения."""

# Именованные члены семейства: (p, q, a, b)
SYSTEM_PRESETS = {
    "ccch": {"p": 1, "q": 1, "a": 2.0, "b": 2.0},
    "dp2": {"p": 1, "q": 1, "a": 3.0, "b": 3.0},
    "novikov2": {"p": 2, "q": 2, "a": 3.0, "b": 3.0},
    "mixed": {"p": 1, "q": 2, "a": 2.0, "b": 3.0},
}

# Правило выбора сетки: N(n) >= GRID_FACTOR * max(p, q, 2) * n
GRID_FACTOR = 16

# Интегратор
DEFAULT_CFL = 0.5
DEFAULT_BLOWUP_THRESHOLD = 1e6
DEFAULT_T = 0.95
SIZE_CHECK_SLACK = 0.05

# Эксперименты
DEFAULT_N_LIST = (64, 128, 256, 512)
DEFAULT_SIGMA = 1.75
RESIDUAL_SIGMAS = (0.5, 1.0, 1.75)
SAMPLE_TIMES = (0.25, 0.5, 0.75, 0.95)
PROBE_TIME = 0.5
SLOPE_TOLERANCE = 0.35
DATA_SLOPE_TOLERANCE = 0.1
LEADING_GAP_THRESHOLD = 0.05
GROWTH_SLACK = 0.25
SEPARATION_STABILITY = 0.20
SEPARATION_FRACTION = 0.5
RECORD_COUNT = 20

# Интерполяционная проверка
INTERPOLATION_TRIPLES = ((0.5, 1.75, 5.0), (1.0, 3.0, 5.0))
INTERPOLATION_COUNT = 1000
INTERPOLATION_MODES = 32
INTERPOLATION_RTOL = 1e-12

# Форматы вывода
CSV_FLOAT_FORMAT = ".17g"
ARTIFACTS_DIR = "__artifacts__"

# Сетка приёмочных прогонов: (p, q, a, b)
ACCEPTANCE_SYSTEMS = ((1, 1, 2.0, 2.0), (2, 2, 3.0, 3.0), (1, 2, 2.0, 3.0))
ACCEPTANCE_S = (3.0, 6.0)
ACCEPTANCE_SIGMAS = (0.5, 1.75)
ACCEPTANCE_DIFF_N = (64, 128, 256)
CLOSED_FORM_MAX_MODE = 512
CLOSED_FORM_SIGMAS = (0.0, 0.5, 1.75, 3.0)
CLOSED_FORM_PHASES = 5
CLOSED_FORM_RTOL = 1e-12

# Коды выхода
EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_USAGE = 2
EXIT_BLOWUP = 3
