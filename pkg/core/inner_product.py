import numpy as np

from core.errors import LengthMismatch
from core.types import ProblemSpec


def _as_evaluations(values, n: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (n, 2):
        raise LengthMismatch(f"Ожидались значения формы ({n}, 2), получено {values.shape}")
    return values


def inner_product(phi, psi, spec: ProblemSpec) -> complex:
    """
    Дискретное скалярное произведение sum_i psi(z_i)^H w_i w_i^H phi(z_i)
    :param phi: значения phi(z_i), массив (n, 2)
    :param psi: значения psi(z_i), массив (n, 2)
    """
    phi = _as_evaluations(phi, spec.n)
    psi = _as_evaluations(psi, spec.n)
    w_conj = spec.weights.conj()
    projected_phi = np.sum(w_conj * phi, axis=1)
    projected_psi = np.sum(w_conj * psi, axis=1)
    return complex(np.vdot(projected_psi, projected_phi))


def weighted_values(evaluations, spec: ProblemSpec) -> np.ndarray:
    """
    Матрица V_{ij} = w_i^H phi_j(z_i)
    :param evaluations: массив (n, 2, m) значений m функций во всех узлах
    """
    evaluations = np.asarray(evaluations, dtype=np.complex128)
    if evaluations.ndim != 3 or evaluations.shape[:2] != (spec.n, 2):
        raise LengthMismatch(f"Ожидались значения формы ({spec.n}, 2, m), получено {evaluations.shape}")
    return np.einsum('ic,icj->ij', spec.weights.conj(), evaluations)


def gram_matrix(evaluations, spec: ProblemSpec) -> np.ndarray:
    """Матрица Грама M_{ij} = <phi_i, phi_j> по значениям во всех узлах"""
    values = weighted_values(evaluations, spec)
    return (values.conj().T @ values).T
