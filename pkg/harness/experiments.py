import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from core.errors import IEPError, LengthMismatch
from core.types import PencilSolution, ProblemSpec, ProjectivePole
from krylov.arnoldi import solve_krylov
from metrics.measures import MetricsRow, compute_metrics
from settings import DEFAULT_SEED
from updating.solver import solve_updating

logger = logging.getLogger(__name__)

ALGORITHMS: Dict[str, Callable[[ProblemSpec], PencilSolution]] = {
    'updating': solve_updating,
    'krylov': solve_krylov,
}

SWEEP_HEADER = (
    'Nvec',
    'err_orth_Q_up', 'err_orth_phi_up',
    'err_orth_Q_kryl', 'err_orth_phi_kryl',
    'err_poles_up', 'err_recc_up',
    'err_poles_kryl', 'err_recc_kryl',
)

# Радиус окружности полюсов и диапазон вещественной и мнимой частей весов
POLE_RADIUS = 1.5
WEIGHT_RANGE = (0.5, 1.5)


@dataclass(frozen=True)
class Exp1Config:
    n_values: Tuple[int, ...]
    runs: int = 5
    seed: int = DEFAULT_SEED


@dataclass(frozen=True)
class Exp2Config(Exp1Config):
    close_index: int = 40
    theta: float = 1e-6


ExperimentConfig = Union[Exp1Config, Exp2Config]


def run_rng(seed: int, n: int, run: int) -> np.random.Generator:
    """Отдельный генератор на каждую пару (n, прогон): результат не зависит от порядка запусков"""
    return np.random.default_rng(np.random.SeedSequence([seed, n, run]))


def _random_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    low, high = WEIGHT_RANGE
    return rng.uniform(low, high, (n, 2)) + 1j * rng.uniform(low, high, (n, 2))


def build_exp1(n: int, rng: np.random.Generator) -> ProblemSpec:
    """Равномерные узлы на единичной окружности, полюсы на окружности радиуса 3/2, случайные веса"""
    if n < 3:
        raise LengthMismatch(f"Эксперименту нужно n >= 3, получено {n}")
    circle = np.exp(2j * np.pi * np.arange(n) / n)
    weights = _random_weights(n, rng)
    poles = (ProjectivePole.infinite(), ProjectivePole.infinite()) + tuple(
        ProjectivePole.finite(POLE_RADIUS * circle[j]) for j in range(2, n)
    )
    index = (1, 2) + tuple(int(c) for c in rng.integers(1, 3, size=n - 2))
    return ProblemSpec(circle, weights, poles, index)


def build_exp2(n: int, rng: np.random.Generator, close_index: int = 40, theta: float = 1e-6) -> ProblemSpec:
    """Как build_exp1, но узлы close_index и close_index + 1 (с единицы) почти совпадают, а веса пропорциональны"""
    spec = build_exp1(n, rng)
    if n <= close_index:
        return spec
    nodes = spec.nodes.copy()
    weights = spec.weights.copy()
    nodes[close_index] = nodes[close_index - 1] * np.exp(1j * theta)
    weights[close_index] = rng.uniform(*WEIGHT_RANGE) * weights[close_index - 1]
    return ProblemSpec(nodes, weights, spec.poles, spec.index)


def build_example1(rng: np.random.Generator) -> ProblemSpec:
    """Задача n = 7 с полюсами (inf, inf, inf, p4, p5, inf, p7) и индексами (1, 2, 1, 1, 2, 1, 1)"""
    n = 7
    nodes = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    finite = 3.0 * np.exp(2j * np.pi * rng.uniform(size=3))
    inf = ProjectivePole.infinite()
    poles = (inf, inf, inf, ProjectivePole.finite(finite[0]), ProjectivePole.finite(finite[1]),
             inf, ProjectivePole.finite(finite[2]))
    return ProblemSpec(nodes, _random_weights(n, rng), poles, (1, 2, 1, 1, 2, 1, 1))


def build_problem(config: ExperimentConfig, n: int, rng: np.random.Generator) -> ProblemSpec:
    if isinstance(config, Exp2Config):
        return build_exp2(n, rng, config.close_index, config.theta)
    return build_exp1(n, rng)


def _metrics_vector(row: MetricsRow) -> np.ndarray:
    err_p = math.nan if row.err_p is None else row.err_p
    return np.array([row.err_Q, row.err_phi, err_p, row.err_r])


def _average(samples: List[np.ndarray]) -> np.ndarray:
    stacked = np.vstack(samples)
    valid = ~np.isnan(stacked)
    counts = valid.sum(axis=0)
    totals = np.where(valid, stacked, 0.0).sum(axis=0)
    return np.divide(totals, counts, out=np.full(stacked.shape[1], math.nan), where=counts > 0)


def run_experiment(config: ExperimentConfig, algorithm: str) -> List[MetricsRow]:
    """Средние по прогонам меры ошибки для каждого n"""
    solver = ALGORITHMS[algorithm]
    rows = []
    for n in config.n_values:
        samples = []
        for run in range(config.runs):
            spec = build_problem(config, n, run_rng(config.seed, n, run))
            try:
                samples.append(_metrics_vector(compute_metrics(solver(spec))))
            except IEPError as e:
                logger.error(f"[Harness] {algorithm} failed for n={n}, run={run}: {e}", exc_info=True)
                samples.append(np.full(4, math.nan))
        err_Q, err_phi, err_p, err_r = _average(samples)
        rows.append(MetricsRow(n, err_Q, err_phi, None if math.isnan(err_p) else err_p, err_r))
        logger.info(f"[Harness] {algorithm} n={n}: err_Q={err_Q:.3e} err_phi={err_phi:.3e} err_r={err_r:.3e}")
    return rows


def sweep(config: ExperimentConfig, algorithms: Sequence[str] = ('updating', 'krylov')) -> np.ndarray:
    """Таблица в порядке столбцов SWEEP_HEADER; отсутствующий алгоритм дает NaN"""
    table = np.full((len(config.n_values), len(SWEEP_HEADER)), math.nan)
    table[:, 0] = config.n_values
    for algorithm in ('updating', 'krylov'):
        if algorithm not in algorithms:
            continue
        orth, poles = ((1, 5) if algorithm == 'updating' else (3, 7))
        for i, row in enumerate(run_experiment(config, algorithm)):
            vector = _metrics_vector(row)
            table[i, orth:orth + 2] = vector[:2]
            table[i, poles:poles + 2] = vector[2:]
    return table


def n_grid(n_min: int, n_max: int, n_step: int) -> Tuple[int, ...]:
    return tuple(range(n_min, n_max + 1, n_step))
