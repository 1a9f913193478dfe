import logging
import math
from dataclasses import dataclass, astuple
from typing import Optional

import numpy as np
import scipy.linalg as la

from core.inner_product import gram_matrix
from core.types import PencilSolution
from evaluation.recurrence import evaluate_basis_many

logger = logging.getLogger(__name__)


# Класс MetricsRow
# Четыре меры ошибки одного решения размера n.
# err_p = None, если среди полюсов p_3..p_n нет конечных.
@dataclass(frozen=True)
class MetricsRow:
    n: int
    err_Q: float
    err_phi: float
    err_p: Optional[float]
    err_r: float

    def as_tuple(self) -> tuple:
        return astuple(self)


def _spectral_norm(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(la.norm(M, 2))


def err_Q(solution: PencilSolution) -> float:
    """||Q^H Q - I||_2"""
    Q = solution.Q
    return _spectral_norm(Q.conj().T @ Q - np.eye(Q.shape[1]))


def err_phi(solution: PencilSolution) -> float:
    """||M - I||_2 для матрицы Грама M_ij = <phi_i, phi_j> по значениям в узлах"""
    values = evaluate_basis_many(solution, solution.spec.nodes)
    M = gram_matrix(values, solution.spec)
    return _spectral_norm(M - np.eye(solution.n))


def err_p(solution: PencilSolution) -> Optional[float]:
    """Максимальная относительная ошибка закодированных конечных полюсов; None без конечных полюсов"""
    worst = None
    for j, pole in enumerate(solution.spec.poles[2:solution.n]):
        if pole.is_infinite:
            continue
        h, k = solution.H[j + 2, j], solution.K[j + 2, j]
        p = pole.value
        error = math.inf if k == 0 else abs(h / k - p) / (abs(p) if p != 0 else 1.0)
        worst = error if worst is None else max(worst, error)
    return worst


def err_r(solution: PencilSolution) -> float:
    """||ZQK - QH||_2 / max(||ZQK||_2, ||QH||_2)"""
    ZQK = solution.spec.nodes[:, None] * solution.Q @ solution.K
    QH = solution.Q @ solution.H
    scale = max(_spectral_norm(ZQK), _spectral_norm(QH))
    if scale == 0.0:
        return 0.0
    return _spectral_norm(ZQK - QH) / scale


def compute_metrics(solution: PencilSolution) -> MetricsRow:
    row = MetricsRow(
        n=solution.n,
        err_Q=err_Q(solution),
        err_phi=err_phi(solution),
        err_p=err_p(solution),
        err_r=err_r(solution),
    )
    logger.debug(f"[Metrics] {solution.algorithm} n={row.n}: {row}")
    return row
