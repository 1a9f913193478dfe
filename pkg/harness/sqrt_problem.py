import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import DivisionByZeroComponent, EvaluationAtPole, ValidationError
from core.types import PencilSolution, ProblemSpec, ProjectivePole
from evaluation.recurrence import evaluate_basis_many
from evaluation.symbolic import evaluate_approximant
from harness.experiments import ALGORITHMS
from settings import SELECTION_RULE, SELECTION_RULES

logger = logging.getLogger(__name__)

SQRT_TABLE_HEADER = ('N', 'Maxerr', 'fzero')
SQRT_CURVES_HEADER = ('N1', 'N', 'Maxerr')

# Левый конец логарифмической сетки по t
GRID_LOW_EXPONENT = -10


# Класс SqrtConfig
# Параметры задачи приближения sqrt(t) на [0, 1]:
# N1 сгущающихся к нулю полюсов, N2 = ceil(2 sqrt(N1)) суррогатов бесконечности в первой компоненте,
# N3 = oversampling * N суррогатов во второй компоненте.
# Производные величины:
# N2, N, N3, M - количество полюсов по группам и общий размер задачи
@dataclass(frozen=True)
class SqrtConfig:
    N1: int
    C: float = 2.0
    sigma: float = 2 * math.sqrt(2) * math.pi
    oversampling: int = 20
    surrogate_radius: float = 1e16
    grid_points: int = 1000
    selection: str = field(default=SELECTION_RULE)
    algorithm: str = 'updating'

    def __post_init__(self):
        if self.N1 < 1:
            raise ValidationError(f"N1 должно быть положительным, получено {self.N1}")
        if self.selection not in SELECTION_RULES:
            raise ValidationError(f"Неизвестное правило выбора: {self.selection}")
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"Неизвестный алгоритм: {self.algorithm}")

    @property
    def N2(self) -> int:
        return math.ceil(2 * math.sqrt(self.N1))

    @property
    def N(self) -> int:
        return self.N1 + self.N2 + 3

    @property
    def N3(self) -> int:
        return self.oversampling * self.N

    @property
    def M(self) -> int:
        return 3 + self.N1 + self.N2 + self.N3


def tapered_poles(N1: int, C: float, sigma: float) -> np.ndarray:
    """Полюсы -C exp(-sigma (sqrt(N1) - sqrt(j))), j = 1..N1, сгущаются к точке ветвления"""
    j = np.arange(1, N1 + 1)
    return -C * np.exp(-sigma * (math.sqrt(N1) - np.sqrt(j)))


def surrogate_poles(count: int, radius: float) -> np.ndarray:
    k = np.arange(count)
    return radius * np.exp(2j * np.pi * k / count) + 0.5


def sample_points(cfg: SqrtConfig) -> np.ndarray:
    return np.append(np.logspace(GRID_LOW_EXPONENT, 0, cfg.M - 1), 0.0)


def build_sqrt_problem(cfg: SqrtConfig) -> ProblemSpec:
    """
    Задача IEP, у которой функция phi_i дает рациональное приближение r = phi_i1 / phi_i2 к sqrt(t).
    Веса [1, -sqrt(t)] ортогональны вектору [sqrt(t), 1]
    """
    t = sample_points(cfg)
    weights = np.column_stack([np.ones_like(t), -np.sqrt(t)]).astype(np.complex128)

    surrogates = surrogate_poles(cfg.N2 + cfg.N3, cfg.surrogate_radius)
    inf = ProjectivePole.infinite()
    poles = (inf, inf, ProjectivePole.finite(0.0))
    poles += tuple(ProjectivePole.finite(p) for p in tapered_poles(cfg.N1, cfg.C, cfg.sigma))
    poles += tuple(ProjectivePole.finite(p) for p in surrogates)
    index = (1, 2, 2) + (1,) * cfg.N1 + (1,) * cfg.N2 + (2,) * cfg.N3
    logger.debug(f"[Sqrt] Problem N1={cfg.N1}: N={cfg.N}, M={cfg.M}")
    return ProblemSpec(t.astype(np.complex128), weights, poles, index)


def validation_grid(cfg: SqrtConfig) -> np.ndarray:
    """Сетка проверки без нуля; ноль оценивается отдельно через предел"""
    return np.logspace(GRID_LOW_EXPONENT, 0, cfg.grid_points)


def value_at_zero(solution: PencilSolution, index: int) -> complex:
    try:
        return evaluate_approximant(solution, index, 0.0)
    except (DivisionByZeroComponent, EvaluationAtPole) as e:
        logger.warning(f"[Sqrt] r(0) undefined for basis function {index + 1}: {e}")
        return complex(math.inf)


def approximant_errors(solution: PencilSolution, cfg: SqrtConfig, numbers: Sequence[int]) -> np.ndarray:
    """Максимальная ошибка |sqrt(t) - r_i(t)| на сетке проверки и в нуле; numbers нумеруются с единицы"""
    grid = validation_grid(cfg)
    values = evaluate_basis_many(solution, grid, max(numbers))
    target = np.sqrt(grid)
    errors = np.empty(len(numbers))
    with np.errstate(divide='ignore', invalid='ignore'):
        for position, number in enumerate(numbers):
            ratio = values[:, 0, number - 1] / values[:, 1, number - 1]
            deviation = np.abs(target - ratio)
            deviation = np.where(np.isnan(deviation), math.inf, deviation)
            errors[position] = max(deviation.max(), abs(value_at_zero(solution, number - 1)))
    return errors


def stagnation_interval(cfg: SqrtConfig) -> range:
    return range(cfg.N - cfg.N2, cfg.N + 1)


def optimal_rate(N: int) -> float:
    return math.exp(-math.pi * math.sqrt(2 * N))


def select_approximant(solution: PencilSolution, cfg: SqrtConfig) -> Tuple[int, float]:
    """
    Выбор аппроксиманта на интервале стагнации [N - N2, N]
    :return: номер базисной функции (с единицы) и ее максимальная ошибка
    """
    candidates = list(stagnation_interval(cfg))
    errors = approximant_errors(solution, cfg, candidates)
    if cfg.selection == 'min':
        best = int(np.argmin(errors))
    else:
        with np.errstate(divide='ignore'):
            distance = np.abs(np.log10(errors) - math.log10(optimal_rate(cfg.N)))
        best = int(np.argmin(np.where(np.isfinite(distance), distance, math.inf)))
    logger.info(f"[Sqrt] N1={cfg.N1}: selected basis function {candidates[best]} with error {errors[best]:.3e}")
    return candidates[best], float(errors[best])


# Класс SqrtRun
# Результат одного N1: выбранный аппроксимант и ошибки всех базисных функций 3..N.
# Основные методы:
# table_row() - строка (N, Maxerr, fzero)
# curve_rows() - строки (N1, i, Maxerr)
@dataclass
class SqrtRun:
    config: SqrtConfig
    selected: int
    max_error: float
    fzero: float
    curve: Optional[np.ndarray] = None

    def table_row(self) -> Tuple[int, float, float]:
        return self.config.N, self.max_error, self.fzero

    def curve_rows(self) -> List[Tuple[int, int, float]]:
        if self.curve is None:
            return []
        return [(self.config.N1, number, error) for number, error in zip(range(3, self.config.N + 1), self.curve)]


def solve_sqrt(cfg: SqrtConfig, curves: bool = False) -> SqrtRun:
    spec = build_sqrt_problem(cfg)
    logger.info(f"[Sqrt] Solving N1={cfg.N1} with {cfg.algorithm} (M={cfg.M})")
    solution = ALGORITHMS[cfg.algorithm](spec)
    selected, max_error = select_approximant(solution, cfg)
    fzero = abs(value_at_zero(solution, selected - 1))
    curve = approximant_errors(solution, cfg, list(range(3, cfg.N + 1))) if curves else None
    return SqrtRun(cfg, selected, max_error, fzero, curve)


def run_sqrt(N1_list: Sequence[int], selection: Optional[str] = None, curves: bool = False,
             algorithm: str = 'updating') -> List[SqrtRun]:
    runs = []
    for N1 in N1_list:
        cfg = SqrtConfig(N1, selection=selection or SELECTION_RULE, algorithm=algorithm)
        runs.append(solve_sqrt(cfg, curves))
    return runs
