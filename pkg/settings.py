from dotenv import load_dotenv
import os

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_DIR = os.getenv("LOG_DIR", "logs")


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name, "")
    try:
        return float(raw) if raw.strip() else default
    except ValueError:
        return default


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    try:
        return int(raw) if raw.strip() else default
    except ValueError:
        return default


def _read_choice(name: str, default: str, choices: tuple) -> str:
    value = os.getenv(name, default).strip().lower()
    return value if value in choices else default


# Режим для кратности бесконечного полюса > 2 в алгоритме обновления
INFINITE_POLE_MODES = ("exact-symbolic", "reject")
INFINITE_POLE_MODE = _read_choice("INFINITE_POLE_MODE", "exact-symbolic", INFINITE_POLE_MODES)

# Крылов: до какого n тень старших коэффициентов может пересчитываться символьно
SHADOW_SYMBOLIC_BOUND = _read_int("SHADOW_SYMBOLIC_BOUND", 64)
KRYLOV_BREAKDOWN_TOLERANCE = _read_float("KRYLOV_BREAKDOWN_TOLERANCE", 0.0)

# Структурное обнуление: порог в eps и граница согласованности
ZERO_TOLERANCE_FACTOR = _read_float("ZERO_TOLERANCE_FACTOR", 32.0)
CONSISTENCY_TOLERANCE = _read_float("CONSISTENCY_TOLERANCE", 1e-8)

# Правило выбора аппроксиманта в задаче sqrt
SELECTION_RULES = ("rate", "min")
SELECTION_RULE = _read_choice("SELECTION_RULE", "rate", SELECTION_RULES)

DEFAULT_SEED = _read_int("DEFAULT_SEED", 2024)
