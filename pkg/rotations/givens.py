import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import IndexOutOfRange, ZeroVector


# Класс Rotation
# Плоское вращение G_{i,j}: в строке i стоят (conj(c), -conj(s)), в строке j - (s, c).
# Основные методы:
# block() - 2x2 блок вращения
# adjoint() - сопряженное (обратное) вращение
# embed(n) - вложение в n x n единичную матрицу
# at(i, j) - то же вращение на других позициях
@dataclass(frozen=True)
class Rotation:
    c: complex
    s: complex
    i: int = 0
    j: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'c', complex(self.c))
        object.__setattr__(self, 's', complex(self.s))
        if not 0 <= self.i < self.j:
            raise IndexOutOfRange(f"Некорректные индексы вращения ({self.i}, {self.j})")

    @classmethod
    def identity(cls, i: int = 0, j: int = 1) -> 'Rotation':
        return cls(1.0, 0.0, i, j)

    @classmethod
    def from_block(cls, block: np.ndarray, i: int = 0, j: int = 1) -> 'Rotation':
        """Вращение из 2x2 блока вида [[conj(c), -conj(s)], [s, c]]"""
        return cls(block[1, 1], block[1, 0], i, j)

    @property
    def is_identity(self) -> bool:
        return self.c == 1 and self.s == 0

    def block(self) -> np.ndarray:
        c, s = self.c, self.s
        return np.array([[c.conjugate(), -s.conjugate()], [s, c]], dtype=np.complex128)

    def adjoint(self) -> 'Rotation':
        return Rotation(self.c.conjugate(), -self.s, self.i, self.j)

    def at(self, i: int, j: int) -> 'Rotation':
        return Rotation(self.c, self.s, i, j)

    def embed(self, n: int) -> np.ndarray:
        if self.j >= n:
            raise IndexOutOfRange(f"Вращение ({self.i}, {self.j}) не помещается в {n}x{n}")
        G = np.eye(n, dtype=np.complex128)
        G[np.ix_([self.i, self.j], [self.i, self.j])] = self.block()
        return G


def _norm2(a: complex, b: complex) -> float:
    return math.hypot(abs(a), abs(b))


def givens_eliminate(a: complex, b: complex, i: int = 0, j: int = 1) -> Tuple[Rotation, float]:
    """
    Вращение строк с G [a; b] = [r; 0], r >= 0
    :return: (вращение, r)
    """
    rho = _norm2(a, b)
    if rho == 0.0:
        raise ZeroVector("Нельзя исключить элемент нулевого вектора")
    if b == 0:
        # Только фазовая нормировка r
        return Rotation(complex(a) / abs(a), 0.0, i, j), rho
    return Rotation(complex(a) / rho, -complex(b) / rho, i, j), rho


def eliminate_first_column(x: complex, y: complex, i: int = 0, j: int = 1) -> Rotation:
    """Вращение столбцов с [x, y] G = [0, rho]; при x = 0 - тождественное"""
    if x == 0:
        return Rotation.identity(i, j)
    rho = _norm2(x, y)
    return Rotation(complex(y).conjugate() / rho, -complex(x) / rho, i, j)


def _check_fits(rot: Rotation, size: int) -> None:
    if rot.j >= size:
        raise IndexOutOfRange(f"Индекс {rot.j} вне диапазона 0..{size - 1}")


def rotate_rows(M: np.ndarray, rot: Rotation) -> None:
    """G M на месте: меняются только строки i и j"""
    _check_fits(rot, M.shape[0])
    if rot.is_identity:
        return
    c, s = rot.c, rot.s
    row_i = M[rot.i].copy()
    row_j = M[rot.j].copy()
    M[rot.i] = c.conjugate() * row_i - s.conjugate() * row_j
    M[rot.j] = s * row_i + c * row_j


def rotate_columns(M: np.ndarray, rot: Rotation) -> None:
    """M G на месте: меняются только столбцы i и j"""
    _check_fits(rot, M.shape[1])
    if rot.is_identity:
        return
    c, s = rot.c, rot.s
    col_i = M[:, rot.i].copy()
    col_j = M[:, rot.j].copy()
    M[:, rot.i] = c.conjugate() * col_i + s * col_j
    M[:, rot.j] = -s.conjugate() * col_i + c * col_j


def apply_left(rot: Rotation, M) -> np.ndarray:
    """Возвращает G M, исходная матрица не меняется"""
    result = np.array(M, dtype=np.complex128)
    rotate_rows(result, rot)
    return result


def apply_right(M, rot: Rotation) -> np.ndarray:
    """Возвращает M G, исходная матрица не меняется"""
    result = np.array(M, dtype=np.complex128)
    rotate_columns(result, rot)
    return result
