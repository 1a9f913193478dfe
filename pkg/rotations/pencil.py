import logging
from typing import Callable, NamedTuple, Tuple

import numpy as np

from core.config import CHORDAL_TOLERANCE, EPS
from core.errors import DegenerateRotation, LengthMismatch, SingularPencil, StructureError, OrderLost
from core.types import ProjectivePole, chordal_distance
from rotations.givens import (
    Rotation,
    apply_left,
    apply_right,
    eliminate_first_column,
    givens_eliminate,
    rotate_columns,
)
from settings import CONSISTENCY_TOLERANCE, ZERO_TOLERANCE_FACTOR

logger = logging.getLogger(__name__)

# Порог численного нуля для вектора последнего вращения при размещении полюса
PLACEMENT_ZERO_FACTOR = 64

OffComponentValues = Callable[[np.ndarray, np.ndarray, int], Tuple[complex, complex, float]]


class PencilRotations(NamedTuple):
    left: Rotation
    right: Rotation
    swapped: bool


def structural_zero(M: np.ndarray, row: int, col: int, reference: float, label: str = '') -> None:
    """
    Обнуляет элемент, который должен быть нулем по структуре пучка
    :param reference: норма, относительно которой оценивается остаток
    """
    value = abs(M[row, col])
    if value == 0.0:
        return
    if value <= ZERO_TOLERANCE_FACTOR * EPS * reference:
        M[row, col] = 0.0
        return
    if value <= CONSISTENCY_TOLERANCE * reference:
        logger.warning(
            f"[Rotations] Structural residue {value:.3e} at {label}({row}, {col}), reference {reference:.3e}"
        )
        M[row, col] = 0.0
        return
    raise StructureError(
        f"Элемент {label}({row}, {col}) = {value:.3e} должен быть нулем (норма {reference:.3e})"
    )


def _as_block(M, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.shape != (2, 2):
        raise LengthMismatch(f"{name}: ожидался блок 2x2, получено {M.shape}")
    return M


def _order_lost(A: np.ndarray, B: np.ndarray, A_new: np.ndarray, B_new: np.ndarray) -> bool:
    same = max(
        chordal_distance(A_new[0, 0], B_new[0, 0], A[0, 0], B[0, 0]),
        chordal_distance(A_new[1, 1], B_new[1, 1], A[1, 1], B[1, 1]),
    )
    crossed = max(
        chordal_distance(A_new[0, 0], B_new[0, 0], A[1, 1], B[1, 1]),
        chordal_distance(A_new[1, 1], B_new[1, 1], A[0, 0], B[0, 0]),
    )
    return same > CHORDAL_TOLERANCE and crossed < same


def _compose(outer: Rotation, inner: Rotation) -> Rotation:
    return Rotation.from_block(outer.block() @ inner.block())


def swap_2x2_pencil(S, T) -> Tuple[Rotation, Rotation]:
    """
    Переставляет собственные значения верхнетреугольного пучка (S, T)
    :return: (G_L, G_R), после которых s22/t22 оказывается на первой позиции
    """
    S = _as_block(S, 'S')
    T = _as_block(T, 'T')
    # Ядро M = t22 S - s22 T дает правый собственный вектор второго значения
    m11 = T[1, 1] * S[0, 0] - S[1, 1] * T[0, 0]
    m12 = T[1, 1] * S[0, 1] - S[1, 1] * T[0, 1]
    if m11 == 0 and m12 == 0:
        return Rotation.identity(), Rotation.identity()

    x1, x2 = m12, -m11
    rho = np.hypot(abs(x1), abs(x2))
    right = Rotation(np.conj(x1) / rho, x2 / rho)

    S1 = apply_right(S, right)
    T1 = apply_right(T, right)
    norm_s = np.linalg.norm(S) or 1.0
    norm_t = np.linalg.norm(T) or 1.0
    column = T1[:, 0] if np.linalg.norm(T1[:, 0]) / norm_t >= np.linalg.norm(S1[:, 0]) / norm_s else S1[:, 0]
    if column[0] == 0 and column[1] == 0:
        raise SingularPencil("Перестановка невозможна: пучок сингулярен")
    left, _ = givens_eliminate(column[0], column[1])
    return left, right


def triangularize_2x2_pencil(A, B) -> PencilRotations:
    """
    Приводит нижнетреугольный пучок (A, B) к верхнетреугольному виду G_L (A, B) G_R
    с сохранением собственных значений на своих позициях диагонали
    """
    A = _as_block(A, 'A')
    B = _as_block(B, 'B')
    if (A[0, 0] == 0 and B[0, 0] == 0) or (A[1, 1] == 0 and B[1, 1] == 0):
        raise SingularPencil("Диагональная пара (0, 0): пучок сингулярен")

    # Вторая строка G_L - левый собственный вектор для a22/b22
    x = A[1, 1] * B[0, 0] - A[0, 0] * B[1, 1]
    y = A[1, 1] * B[1, 0] - A[1, 0] * B[1, 1]
    if x == 0 and y == 0:
        left = Rotation.identity()
    else:
        left, _ = givens_eliminate(x, y)

    A1 = apply_left(left, A)
    B1 = apply_left(left, B)
    norm_a = np.linalg.norm(A)
    norm_b = np.linalg.norm(B)
    weight_a = np.linalg.norm(A1[1]) / norm_a if norm_a else 0.0
    weight_b = np.linalg.norm(B1[1]) / norm_b if norm_b else 0.0
    if weight_a == 0 and weight_b == 0:
        raise SingularPencil("Вторые строки обеих матриц нулевые")
    row = A1[1] if weight_a >= weight_b else B1[1]
    right = eliminate_first_column(row[0], row[1])

    A2 = apply_right(A1, right)
    B2 = apply_right(B1, right)
    if not _order_lost(A, B, A2, B2):
        return PencilRotations(left, right, False)

    logger.warning("[Rotations] Eigenvalue order lost in 2x2 triangularization, swapping")
    A2[1, 0] = 0.0
    B2[1, 0] = 0.0
    swap_left, swap_right = swap_2x2_pencil(A2, B2)
    left = _compose(swap_left, left)
    right = _compose(right, swap_right)
    A3 = apply_right(apply_left(left, A), right)
    B3 = apply_right(apply_left(left, B), right)
    if _order_lost(A, B, A3, B3):
        raise OrderLost("Порядок собственных значений не восстановлен перестановкой")
    return PencilRotations(left, right, True)


def place_pole_inplace(H: np.ndarray, K: np.ndarray, pole: ProjectivePole, target_component: int,
                       eval2: OffComponentValues) -> Tuple[Rotation, Rotation, Rotation]:
    """
    Три вращения столбцов (n-2, n-1), (n-3, n-1), (n-3, n-2), записывающие полюс в последнюю строку
    :param eval2: eval2(H, K, off_component) -> (e1, e2, масштаб) - значения внедиагональной компоненты
                  комбинаций phi~_{n-3}, phi~_{n-2} в полюсе
    :return: примененные вращения
    """
    n = H.shape[0]
    if n < 3 or H.shape != K.shape:
        raise LengthMismatch(f"Размещение полюса требует квадратного пучка n >= 3, получено {H.shape}")
    last = n - 1

    scale = np.hypot(abs(pole.nu), abs(pole.mu))
    nu, mu = pole.nu / scale, pole.mu / scale

    d = mu * H[last, last - 2:] - nu * K[last, last - 2:]
    first = eliminate_first_column(d[1], d[2], last - 1, last)
    rotate_columns(H, first)
    rotate_columns(K, first)

    d = mu * H[last, last - 2:] - nu * K[last, last - 2:]
    second = eliminate_first_column(d[0], d[2], last - 2, last)
    rotate_columns(H, second)
    rotate_columns(K, second)
    if pole.is_infinite:
        reference = float(np.linalg.norm(K[last, last - 2:]))
        structural_zero(K, last, last - 1, reference, 'K')
        structural_zero(K, last, last - 2, reference, 'K')

    off_component = 3 - target_component
    e1, e2, magnitude = eval2(H, K, off_component)
    if max(abs(e1), abs(e2)) <= PLACEMENT_ZERO_FACTOR * EPS * magnitude:
        raise DegenerateRotation(
            f"Значения компоненты {off_component} в полюсе {pole} численно равны нулю"
        )
    third = eliminate_first_column(e1, e2, last - 2, last - 1)
    rotate_columns(H, third)
    rotate_columns(K, third)
    logger.debug(f"[Rotations] Pole {pole} placed in component {target_component} at size {n}")
    return first, second, third


def place_pole(H, K, pole: ProjectivePole, target_component: int,
               eval2: OffComponentValues) -> Tuple[np.ndarray, np.ndarray]:
    """Размещение полюса без изменения исходных матриц: (H, K) G_{n-1,n} G_{n-2,n} G_{n-2,n-1}"""
    H_new = np.array(H, dtype=np.complex128)
    K_new = np.array(K, dtype=np.complex128)
    place_pole_inplace(H_new, K_new, pole, target_component, eval2)
    return H_new, K_new
