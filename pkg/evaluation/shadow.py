from typing import List, Sequence

import numpy as np

from core.errors import EvaluationAtPole, ShadowUnavailable
from core.factorization import initial_basis


# Класс LaurentShadow
# Усеченное разложение Лорана рационального вектора в бесконечности.
# coeffs[c, d] - коэффициент при z^(top - d) компоненты c + 1; достоверны первые valid столбцов.
# Основные методы:
# constant(vector, depth) - постоянный вектор
# combine(factors, shadows) - линейная комбинация с выравниванием по старшей степени
# times_z() - умножение на z
# divide_linear(k, h) - деление на (z k - h)
# coefficient(component, degree) - коэффициент при z^degree
class LaurentShadow:
    __slots__ = ('top', 'coeffs', 'valid')

    def __init__(self, top: int, coeffs: np.ndarray, valid: int):
        self.top = int(top)
        self.coeffs = coeffs
        self.valid = int(min(valid, coeffs.shape[1]))

    @property
    def depth(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def constant(cls, vector, depth: int) -> 'LaurentShadow':
        coeffs = np.zeros((2, depth), dtype=np.complex128)
        coeffs[:, 0] = vector
        return cls(0, coeffs, depth)

    @staticmethod
    def combine(factors: Sequence[complex], shadows: Sequence['LaurentShadow']) -> 'LaurentShadow':
        depth = shadows[0].depth
        top = max(s.top for s in shadows)
        coeffs = np.zeros((2, depth), dtype=np.complex128)
        valid = depth
        for factor, shadow in zip(factors, shadows):
            if factor == 0:
                continue
            shift = top - shadow.top
            if shift >= depth:
                continue
            coeffs[:, shift:] += factor * shadow.coeffs[:, :depth - shift]
            valid = min(valid, shift + shadow.valid)
        return LaurentShadow(top, coeffs, valid)

    def scaled(self, factor: complex) -> 'LaurentShadow':
        return LaurentShadow(self.top, factor * self.coeffs, self.valid)

    def times_z(self) -> 'LaurentShadow':
        return LaurentShadow(self.top + 1, self.coeffs.copy(), self.valid)

    def divide_linear(self, k: complex, h: complex) -> 'LaurentShadow':
        if k == 0:
            if h == 0:
                raise EvaluationAtPole("Деление на тождественный ноль")
            return self.scaled(-1.0 / h)
        result = np.empty_like(self.coeffs)
        result[:, 0] = self.coeffs[:, 0] / k
        for d in range(1, self.depth):
            result[:, d] = (self.coeffs[:, d] + h * result[:, d - 1]) / k
        return LaurentShadow(self.top - 1, result, self.valid)

    def coefficient(self, component: int, degree: int) -> complex:
        if degree > self.top:
            return 0j
        offset = self.top - degree
        if offset >= self.valid:
            raise ShadowUnavailable(
                f"Коэффициент при z^{degree} вне достоверного окна (старшая {self.top}, глубина {self.valid})"
            )
        return complex(self.coeffs[component - 1, offset])


def shadow_depth(infinite_count: int) -> int:
    """Глубина окна, достаточная для коэффициентов степеней >= 0"""
    return infinite_count + 3


def laurent_basis(H, K, r_factor, count: int, depth: int) -> List[LaurentShadow]:
    """Разложения phi_1..phi_count в бесконечности той же рекуррентностью, что и численное вычисление"""
    phi1, phi2 = initial_basis(r_factor)
    shadows = [LaurentShadow.constant(phi1, depth), LaurentShadow.constant(phi2, depth)][:count]
    for j in range(count - 2):
        rows = j + 2
        shifted = LaurentShadow.combine(K[:rows, j], shadows[:rows]).times_z()
        direct = LaurentShadow.combine(H[:rows, j], shadows[:rows])
        rhs = LaurentShadow.combine((1.0, -1.0), (direct, shifted))
        shadows.append(rhs.divide_linear(K[rows, j], H[rows, j]))
    return shadows
