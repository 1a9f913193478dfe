import logging
from typing import Optional, Tuple

import numpy as np

from core.config import DIVISOR_FACTOR, EPS
from core.errors import EvaluationAtPole, LengthMismatch
from core.factorization import initial_basis
from core.types import PencilSolution, ProjectivePole

logger = logging.getLogger(__name__)

# Порог, после которого значения в проективной подстановке нормируются
RESCALE_LIMIT = 1e100


def _resolve_count(H: np.ndarray, count: Optional[int]) -> int:
    size = H.shape[0]
    if count is None:
        return size
    if not 1 <= count <= size:
        raise LengthMismatch(f"Запрошено {count} функций при размере пучка {size}")
    return count


def _hits(divisor, points, k, h):
    bound = DIVISOR_FACTOR * EPS * (np.abs(points * k) + abs(h))
    return (divisor == 0) | (np.abs(divisor) <= bound)


def basis_values(H, K, r_factor, points, count: Optional[int] = None) -> np.ndarray:
    """
    Значения phi_1..phi_count во всех точках прямой подстановкой в zPhiK = PhiH
    :param points: комплексные точки z (скаляр или массив)
    :return: массив (m, 2, count)
    """
    H = np.asarray(H)
    K = np.asarray(K)
    count = _resolve_count(H, count)
    points = np.atleast_1d(np.asarray(points, dtype=np.complex128))

    values = np.zeros((points.shape[0], 2, count), dtype=np.complex128)
    phi1, phi2 = initial_basis(r_factor)
    values[:, :, 0] = phi1
    if count > 1:
        values[:, :, 1] = phi2

    for j in range(count - 2):
        rows = j + 2
        coefficients = points[:, None] * K[:rows, j] - H[:rows, j]
        numerator = -np.einsum('mi,mci->mc', coefficients, values[:, :, :rows])
        k, h = K[rows, j], H[rows, j]
        divisor = points * k - h
        hits = _hits(divisor, points, k, h)
        if np.any(hits):
            z = points[np.flatnonzero(hits)[0]]
            raise EvaluationAtPole(f"Точка {z} совпадает с полюсом столбца {j} ({h} : {k})")
        values[:, :, rows] = numerator / divisor[:, None]
    return values


def evaluate_basis(solution: PencilSolution, z: complex, count: Optional[int] = None) -> np.ndarray:
    """Матрица Phi(z) размера 2 x count"""
    return basis_values(solution.H, solution.K, solution.r_factor, z, count)[0]


def evaluate_basis_many(solution: PencilSolution, points, count: Optional[int] = None) -> np.ndarray:
    """Значения базиса во многих точках сразу: массив (m, 2, count)"""
    return basis_values(solution.H, solution.K, solution.r_factor, points, count)


def recurrence_divisors(solution: PencilSolution, z: complex) -> np.ndarray:
    """Модули делителей |z k_{j+2,j} - h_{j+2,j}| прямой подстановки: индикатор обусловленности"""
    n = solution.n
    columns = np.arange(max(n - 2, 0))
    divisors = z * solution.K[columns + 2, columns] - solution.H[columns + 2, columns]
    return np.abs(divisors)


def _initial_values(r_factor, count: int) -> np.ndarray:
    values = np.zeros((2, count), dtype=np.complex128)
    phi1, phi2 = initial_basis(r_factor)
    values[:, 0] = phi1
    if count > 1:
        values[:, 1] = phi2
    return values


def _rescale(values: np.ndarray, residues: np.ndarray, column: int) -> None:
    # Общий множитель не меняет направления векторов значений и вычетов
    largest = max(float(np.max(np.abs(values[:, column]))), float(np.max(np.abs(residues[:, column]))))
    if RESCALE_LIMIT < largest < np.inf:
        values /= largest
        residues /= largest


def _propagate(H, K, r_factor, nu: complex, mu: complex, count: Optional[int],
               rescale: bool, allow_pole: bool) -> Tuple[np.ndarray, Optional[int]]:
    """
    Подстановка в проективной точке (nu : mu): значения phi_j до закодированного в точке столбца,
    вычеты после него. Возвращает значения, если точка не закодирована, иначе вычеты, и номер столбца
    """
    H = np.asarray(H)
    K = np.asarray(K)
    count = _resolve_count(H, count)
    values = _initial_values(r_factor, count)
    residues = np.zeros_like(values)

    hit = None
    for j in range(count - 2):
        rows = j + 2
        coefficients = nu * K[:rows, j] - mu * H[:rows, j]
        k, h = K[rows, j], H[rows, j]
        divisor = nu * k - mu * h
        at_pole = bool(_hits(divisor, nu, k, mu * h))
        if hit is None and not at_pole:
            values[:, rows] = -(values[:, :rows] @ coefficients) / divisor
        elif hit is None:
            if not allow_pole:
                raise EvaluationAtPole(f"Точка ({nu} : {mu}) совпадает с полюсом столбца {j} ({h} : {k})")
            if k == 0 or mu == 0:
                raise EvaluationAtPole(f"Столбец {j} кодирует бесконечный полюс, вычет не определен")
            hit = j
            residues[:, rows] = -(values[:, :rows] @ coefficients) / (mu * k)
        elif at_pole:
            raise EvaluationAtPole(f"Точка ({nu} : {mu}) закодирована в столбцах {hit} и {j}")
        else:
            residues[:, rows] = -(residues[:, :rows] @ coefficients) / divisor
        if rescale:
            _rescale(values, residues, rows)
    return (values if hit is None else residues), hit


def pole_residues(H, K, r_factor, z: complex, count: Optional[int] = None) -> np.ndarray:
    """
    Вычеты lim (t - z) phi_j(t) в закодированном конечном полюсе z, массив (2, count).
    До столбца полюса идет обычная подстановка, после него по той же рекуррентности переносятся вычеты
    """
    residues, hit = _propagate(H, K, r_factor, complex(z), 1.0, count, rescale=False, allow_pole=True)
    if hit is None:
        raise EvaluationAtPole(f"Точка {z} не является закодированным полюсом")
    return residues


def scaled_values_at_pole(H, K, r_factor, pole: ProjectivePole,
                          count: Optional[int] = None) -> Tuple[np.ndarray, bool]:
    """
    Направление вектора значений phi_1..phi_count в конечном полюсе pole (общий множитель не определен).
    Вектор нормируется при росте выше RESCALE_LIMIT, поэтому полюсы порядка 1e16 не дают переполнения.
    Если pole уже закодирован в пучке, возвращаются вычеты в нем.
    :return: массив (2, count) и признак того, что это вычеты
    """
    scale = np.hypot(abs(pole.nu), abs(pole.mu))
    result, hit = _propagate(H, K, r_factor, pole.nu / scale, pole.mu / scale, count,
                             rescale=True, allow_pole=True)
    return result, hit is not None
