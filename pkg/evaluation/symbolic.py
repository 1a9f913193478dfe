import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import DivisionByZeroComponent, EvaluationAtPole, PoleCollision
from core.factorization import initial_basis
from core.types import PencilSolution, poles_coincide
from evaluation.recurrence import basis_values, pole_residues

logger = logging.getLogger(__name__)

# Относительный порог для вычета делимого в полюсе, который уже есть в компоненте
SHARED_POLE_TOLERANCE = 1e-8


def _trim(poly: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(poly)
    if nonzero.size == 0:
        return np.zeros(0, dtype=np.complex128)
    return poly[:nonzero[-1] + 1]


# Класс SymbolicRationalVector
# Точное представление 2-вектора рациональных функций:
# poly[c] - коэффициенты многочлена по возрастанию степени, fracs[c] - словарь {полюс: вычет}
# для простых дробей a / (z - p). Канонический вид: без старших нулей и нулевых вычетов.
class SymbolicRationalVector:
    def __init__(self, poly: Sequence = None, fracs: Sequence[Dict[complex, complex]] = None):
        poly = poly if poly is not None else ([], [])
        fracs = fracs if fracs is not None else ({}, {})
        self.poly = [_trim(np.asarray(p, dtype=np.complex128).reshape(-1)) for p in poly]
        self.fracs = [{complex(p): complex(a) for p, a in f.items() if a != 0} for f in fracs]

    @classmethod
    def constant(cls, vector) -> 'SymbolicRationalVector':
        return cls(([vector[0]], [vector[1]]))

    @staticmethod
    def combine(factors: Sequence[complex], vectors: Sequence['SymbolicRationalVector']) -> 'SymbolicRationalVector':
        poly = []
        fracs = []
        for c in range(2):
            length = max((v.poly[c].size for v in vectors), default=0)
            total = np.zeros(length, dtype=np.complex128)
            residues: Dict[complex, complex] = {}
            for factor, vector in zip(factors, vectors):
                if factor == 0:
                    continue
                total[:vector.poly[c].size] += factor * vector.poly[c]
                for pole, residue in vector.fracs[c].items():
                    residues[pole] = residues.get(pole, 0j) + factor * residue
            poly.append(total)
            fracs.append(residues)
        return SymbolicRationalVector(poly, fracs)

    def scaled(self, factor: complex) -> 'SymbolicRationalVector':
        return SymbolicRationalVector.combine((factor,), (self,))

    def times_z(self) -> 'SymbolicRationalVector':
        poly = []
        fracs = []
        for c in range(2):
            shifted = np.concatenate(([0j], self.poly[c])) if self.poly[c].size else np.zeros(1, np.complex128)
            residues = {}
            for pole, residue in self.fracs[c].items():
                # z a / (z - p) = a + a p / (z - p)
                shifted[0] += residue
                residues[pole] = residue * pole
            poly.append(shifted)
            fracs.append(residues)
        return SymbolicRationalVector(poly, fracs)

    def divide_linear(self, pole: complex) -> 'SymbolicRationalVector':
        """Деление на (z - pole)"""
        pole = complex(pole)
        poly = []
        fracs = []
        for c in range(2):
            coefficients = self.poly[c]
            quotient = np.zeros(max(coefficients.size - 1, 0), dtype=np.complex128)
            remainder = 0j
            if coefficients.size:
                # Схема Горнера от старшего коэффициента
                carry = 0j
                for d in range(coefficients.size - 1, -1, -1):
                    carry = coefficients[d] + pole * carry
                    if d > 0:
                        quotient[d - 1] = carry
                remainder = carry
            residues = {}
            new_residue = remainder
            scale = max([abs(remainder)] + [abs(a) for a in self.fracs[c].values()] + list(np.abs(coefficients)))
            for q, a in self.fracs[c].items():
                if poles_coincide(q, pole):
                    # Слагаемое a / (z - p)^2 отбрасывается, только если вычет делимого пренебрежимо мал
                    if abs(a) > SHARED_POLE_TOLERANCE * scale:
                        raise PoleCollision(f"Полюс {pole} уже присутствует в компоненте {c + 1}")
                    continue
                share = a / (q - pole)
                residues[q] = share
                new_residue -= share
            residues[pole] = new_residue
            poly.append(quotient)
            fracs.append(residues)
        return SymbolicRationalVector(poly, fracs)

    def __call__(self, z: complex) -> np.ndarray:
        z = complex(z)
        result = np.zeros(2, dtype=np.complex128)
        for c in range(2):
            if self.poly[c].size:
                result[c] = np.polyval(self.poly[c][::-1], z)
            for pole, residue in self.fracs[c].items():
                if pole == z:
                    raise EvaluationAtPole(f"Точка {z} - полюс компоненты {c + 1}")
                result[c] += residue / (z - pole)
        return result

    def residue(self, component: int, pole: complex) -> complex:
        fracs = self.fracs[component - 1]
        if pole in fracs:
            return fracs[pole]
        for q, a in fracs.items():
            if poles_coincide(q, pole):
                return a
        return 0j

    def coefficient(self, component: int, degree: int) -> complex:
        """Коэффициент разложения в бесконечности при z^degree"""
        if degree >= 0:
            poly = self.poly[component - 1]
            return complex(poly[degree]) if degree < poly.size else 0j
        # a / (z - p) = sum_{m >= 1} a p^(m-1) z^(-m)
        power = -degree - 1
        return complex(sum(a * p ** power for p, a in self.fracs[component - 1].items()))

    def degree(self, component: int) -> Optional[int]:
        size = self.poly[component - 1].size
        return size - 1 if size else None

    def poles(self, component: int) -> Tuple[complex, ...]:
        return tuple(self.fracs[component - 1])


def leading_coefficient(vector: SymbolicRationalVector, component: int,
                        tol: float = 0.0) -> Tuple[Optional[int], complex]:
    """
    Старшая степень и коэффициент многочленной части компоненты
    :param tol: коэффициенты с модулем <= tol * max|коэффициент| считаются нулевыми
    """
    poly = vector.poly[component - 1]
    if poly.size == 0:
        return None, 0j
    threshold = tol * np.max(np.abs(poly))
    for degree in range(poly.size - 1, -1, -1):
        if abs(poly[degree]) > threshold:
            return degree, complex(poly[degree])
    return None, 0j


def symbolic_basis_from_pencil(H, K, r_factor, count: int) -> List[SymbolicRationalVector]:
    """Точные представления phi_1..phi_count по рекуррентности пучка"""
    phi1, phi2 = initial_basis(r_factor)
    basis = [SymbolicRationalVector.constant(phi1), SymbolicRationalVector.constant(phi2)][:count]
    for j in range(count - 2):
        rows = j + 2
        shifted = SymbolicRationalVector.combine(K[:rows, j], basis[:rows]).times_z()
        direct = SymbolicRationalVector.combine(H[:rows, j], basis[:rows])
        rhs = SymbolicRationalVector.combine((1.0, -1.0), (direct, shifted))
        k, h = complex(K[rows, j]), complex(H[rows, j])
        if k == 0:
            basis.append(rhs.scaled(-1.0 / h))
        else:
            basis.append(rhs.divide_linear(h / k).scaled(1.0 / k))
    return basis


def symbolic_basis(solution: PencilSolution, count: Optional[int] = None) -> List[SymbolicRationalVector]:
    return symbolic_basis_from_pencil(solution.H, solution.K, solution.r_factor, count or solution.n)


def evaluate_approximant(solution: PencilSolution, index: int, z: complex) -> complex:
    """
    Значение r(z) = phi_{index,1}(z) / phi_{index,2}(z), индекс базисной функции с нуля.
    В закодированном полюсе берется предел (z - p) phi_index1 / ((z - p) phi_index2), то есть отношение вычетов;
    если вычеты нулевые, значение берется из точного представления
    """
    try:
        first, second = basis_values(solution.H, solution.K, solution.r_factor, z, index + 1)[0, :, index]
    except EvaluationAtPole:
        logger.debug(f"[Evaluation] Limit for basis function {index} at encoded pole {z}")
        first, second = pole_residues(solution.H, solution.K, solution.r_factor, z, index + 1)[:, index]
        if first == 0 and second == 0:
            vector = symbolic_basis(solution, index + 1)[index]
            first, second = vector(z)
    if second == 0:
        raise DivisionByZeroComponent(f"Вторая компонента phi_{index} равна нулю в точке {z}")
    return complex(first / second)
