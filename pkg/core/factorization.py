import logging
from typing import Tuple

import numpy as np
import scipy.linalg as la

from core.config import EPS, RANK_FACTOR
from core.errors import LengthMismatch, RankDeficientWeights, SingularR
from core.types import ProblemSpec

logger = logging.getLogger(__name__)


def economical_qr(W) -> Tuple[np.ndarray, np.ndarray]:
    """
    Экономичное QR-разложение n x 2 матрицы с вещественной неотрицательной диагональю R
    :param W: комплексная матрица (n, 2)
    :return: (Q_W, R_W)
    """
    W = np.asarray(W, dtype=np.complex128)
    if W.ndim != 2 or W.shape[1] != 2:
        raise LengthMismatch(f"Ожидалась матрица (n, 2), получено {W.shape}")
    if W.shape[0] < 2:
        raise RankDeficientWeights("Для полного ранга нужно минимум две строки весов")

    Q, R = la.qr(W, mode='economic')
    # Фазовая нормировка: diag(R) >= 0
    diagonal = np.diag(R)
    phases = np.ones(2, dtype=np.complex128)
    nonzero = diagonal != 0
    phases[nonzero] = diagonal[nonzero] / np.abs(diagonal[nonzero])
    Q = Q * phases
    R = phases.conj()[:, None] * R
    R[np.diag_indices(2)] = np.abs(np.diag(R))
    R[1, 0] = 0.0

    scale = np.linalg.norm(W)
    if R[1, 1] <= RANK_FACTOR * EPS * scale:
        raise RankDeficientWeights(f"|r_22| = {R[1, 1]:.3e} при ||W||_F = {scale:.3e}")
    return Q, R


def initial_basis(R_W) -> Tuple[np.ndarray, np.ndarray]:
    """Постоянные векторы phi_1, phi_2 - столбцы R_W^{-1}"""
    R_W = np.asarray(R_W, dtype=np.complex128)
    if R_W.shape != (2, 2):
        raise LengthMismatch(f"R_W должна быть 2x2, получено {R_W.shape}")
    if R_W[0, 0] == 0 or R_W[1, 1] == 0:
        raise SingularR("R_W вырождена")
    inverse = la.solve_triangular(np.triu(R_W), np.eye(2, dtype=np.complex128))
    return inverse[:, 0].copy(), inverse[:, 1].copy()


def weight_factorization(spec: ProblemSpec) -> Tuple[np.ndarray, np.ndarray]:
    """QR сопряженной матрицы весов (строки w_i^H), так что Q_ij = w_i^H phi_j(z_i)"""
    return economical_qr(spec.weights.conj())
