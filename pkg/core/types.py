import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from core.config import COMPONENTS, POLE_COLLISION_TOLERANCE
from core.errors import ValidationError


# Класс ProjectivePole
# Полюс в проективной записи p = nu / mu:
#     infinite() - каноническая бесконечность (-1, 0)
#     finite(p) - конечный полюс (p, 1)
#     from_value(p) - из комплексного числа или inf
#     normalized() - приведение к (p, 1) или (-1, 0)
#     chordal_distance(other) - хордальное расстояние между полюсами
@dataclass(frozen=True)
class ProjectivePole:
    nu: complex
    mu: complex

    def __post_init__(self):
        object.__setattr__(self, 'nu', complex(self.nu))
        object.__setattr__(self, 'mu', complex(self.mu))
        if self.nu == 0 and self.mu == 0:
            raise ValidationError("Полюс (0, 0) не определен")
        if not (np.isfinite(self.nu) and np.isfinite(self.mu)):
            raise ValidationError(f"Нечисловые координаты полюса: ({self.nu}, {self.mu})")

    @classmethod
    def infinite(cls) -> 'ProjectivePole':
        return cls(-1.0, 0.0)

    @classmethod
    def finite(cls, value: complex) -> 'ProjectivePole':
        return cls(value, 1.0)

    @classmethod
    def from_value(cls, value: complex) -> 'ProjectivePole':
        """Полюс из числа; inf (в любой компоненте) дает бесконечный полюс"""
        value = complex(value)
        if math.isinf(value.real) or math.isinf(value.imag):
            return cls.infinite()
        return cls.finite(value)

    @property
    def is_infinite(self) -> bool:
        return self.mu == 0

    @property
    def value(self) -> complex:
        if self.is_infinite:
            return complex(math.inf, 0.0)
        return self.nu / self.mu

    def normalized(self) -> 'ProjectivePole':
        if self.is_infinite:
            return ProjectivePole.infinite()
        return ProjectivePole.finite(self.nu / self.mu)

    def chordal_distance(self, other: 'ProjectivePole') -> float:
        return chordal_distance(self.nu, self.mu, other.nu, other.mu)

    def __repr__(self) -> str:
        if self.is_infinite:
            return "ProjectivePole(inf)"
        return f"ProjectivePole({self.value:.6g})"


def chordal_distance(nu1: complex, mu1: complex, nu2: complex, mu2: complex) -> float:
    """Хордальное расстояние между отношениями nu1/mu1 и nu2/mu2"""
    norm = math.sqrt((abs(nu1) ** 2 + abs(mu1) ** 2) * (abs(nu2) ** 2 + abs(mu2) ** 2))
    if norm == 0.0:
        return 0.0
    return abs(nu1 * mu2 - nu2 * mu1) / norm


def poles_coincide(p: complex, q: complex) -> bool:
    """Совпадение конечных полюсов с относительным допуском (полюсы порядка 1e16 различимы)"""
    return abs(p - q) <= POLE_COLLISION_TOLERANCE * max(abs(p), abs(q), 1.0)


# Класс ProblemSpec
# Полная постановка IEP: узлы z_i, матрица весов W (строки w_i^T),
# вектор полюсов и индексный вектор (компонента 1 или 2 для каждого полюса).
# Проверка инвариантов вынесена в core.validate.
@dataclass(frozen=True, eq=False)
class ProblemSpec:
    nodes: np.ndarray
    weights: np.ndarray
    poles: Tuple[ProjectivePole, ...]
    index: Tuple[int, ...]

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=np.complex128).reshape(-1)
        weights = np.array(self.weights, dtype=np.complex128)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'poles', tuple(self.poles))
        object.__setattr__(self, 'index', tuple(int(c) for c in self.index))

    @property
    def n(self) -> int:
        return self.nodes.shape[0]

    def prefix(self, k: int) -> 'ProblemSpec':
        """Подзадача из первых k узлов, весов, полюсов и индексов"""
        return ProblemSpec(self.nodes[:k], self.weights[:k], self.poles[:k], self.index[:k])

    def reordered_nodes(self, order: Sequence[int]) -> 'ProblemSpec':
        """Та же задача с другим порядком поступления пар (узел, вес)"""
        order = np.asarray(order)
        return ProblemSpec(self.nodes[order], self.weights[order], self.poles, self.index)


class ComponentDegrees(NamedTuple):
    degree: Optional[int]
    poles: Tuple[complex, ...]


DegreesRow = Tuple[ComponentDegrees, ComponentDegrees]


def extend_degrees(previous: Optional[DegreesRow], pole: ProjectivePole, component: int) -> DegreesRow:
    """
    Степень и конечные полюсы компонент следующей базисной функции
    :param previous: строка предыдущей функции или None для phi_1
    """
    row = list(previous) if previous is not None else [ComponentDegrees(None, ()) for _ in COMPONENTS]
    current = row[component - 1]
    if pole.is_infinite:
        row[component - 1] = ComponentDegrees(0 if current.degree is None else current.degree + 1, current.poles)
    else:
        row[component - 1] = ComponentDegrees(current.degree, current.poles + (pole.value,))
    return tuple(row)


# Класс PencilSolution
# Результат решателя: унитарная Q, 2-хессенбергов пучок (H, K),
# исходная задача, множитель R_W (phi_1, phi_2 = столбцы R_W^{-1})
# и учет степеней базисных функций.
@dataclass(frozen=True, eq=False)
class PencilSolution:
    Q: np.ndarray
    H: np.ndarray
    K: np.ndarray
    spec: ProblemSpec
    r_factor: np.ndarray
    degrees: Tuple[DegreesRow, ...]
    algorithm: str = 'updating'
    swap_count: int = 0

    @property
    def n(self) -> int:
        return self.Q.shape[1]

    def encoded_poles(self) -> Tuple[ProjectivePole, ...]:
        """Полюсы, записанные во второй поддиагонали пучка: (h_{j+2,j} : k_{j+2,j})"""
        poles = []
        for j in range(self.n - 2):
            h, k = self.H[j + 2, j], self.K[j + 2, j]
            if h == 0 and k == 0:
                raise ValidationError(f"Пустая вторая поддиагональ в столбце {j}")
            poles.append(ProjectivePole(h, k))
        return tuple(poles)
