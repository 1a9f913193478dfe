import logging
from typing import List, Optional, Tuple

import numpy as np

from core.errors import (
    BadPrefix,
    Breakdown,
    DegenerateRotation,
    EvaluationAtPole,
    LengthMismatch,
    PoleCollision,
    RepeatedFinitePoleInComponent,
    SingularPencil,
    UnsupportedInfiniteMultiplicity,
)
from core.factorization import economical_qr
from core.types import (
    DegreesRow,
    PencilSolution,
    ProblemSpec,
    ProjectivePole,
    extend_degrees,
    poles_coincide,
)
from core.validate import validate
from evaluation.recurrence import scaled_values_at_pole
from evaluation.shadow import laurent_basis, shadow_depth
from evaluation.symbolic import symbolic_basis_from_pencil
from rotations.givens import givens_eliminate, rotate_columns, rotate_rows
from rotations.pencil import place_pole_inplace, structural_zero, triangularize_2x2_pencil
from settings import INFINITE_POLE_MODE

logger = logging.getLogger(__name__)

# Кратность бесконечного полюса, до которой хватает рекуррентного разложения в бесконечности
LAURENT_MULTIPLICITY_LIMIT = 2


# Класс UpdatingState
# Текущее решение размера k: унитарная Q, 2-хессенбергов пучок (H, K),
# множитель R_W (Q^H conj(W) = [R_W; 0]), уже добавленные узлы, веса, полюсы, индексы
# и степени с полюсами компонент phi_1..phi_k, которые пополняются на каждом шаге.
# Матрицы лежат в буферах с удвоением емкости, наружу отдаются срезы k x k.
class UpdatingState:
    def __init__(self, capacity: int = 8):
        self._Q = np.zeros((capacity, capacity), dtype=np.complex128)
        self._H = np.zeros((capacity, capacity), dtype=np.complex128)
        self._K = np.zeros((capacity, capacity), dtype=np.complex128)
        self.k = 0
        self.r_factor: Optional[np.ndarray] = None
        self.nodes: List[complex] = []
        self.weights: List[np.ndarray] = []
        self.poles: List[ProjectivePole] = []
        self.index: List[int] = []
        self.degrees: List[DegreesRow] = []
        self.swap_count = 0

    @property
    def Q(self) -> np.ndarray:
        return self._Q[:self.k, :self.k]

    @property
    def H(self) -> np.ndarray:
        return self._H[:self.k, :self.k]

    @property
    def K(self) -> np.ndarray:
        return self._K[:self.k, :self.k]

    @property
    def spec(self) -> ProblemSpec:
        return ProblemSpec(np.array(self.nodes), np.array(self.weights).reshape(-1, 2), self.poles, self.index)

    def _grow(self, size: int) -> None:
        capacity = self._Q.shape[0]
        if size <= capacity:
            return
        capacity = max(2 * capacity, size)
        for name in ('_Q', '_H', '_K'):
            buffer = np.zeros((capacity, capacity), dtype=np.complex128)
            buffer[:self.k, :self.k] = getattr(self, name)[:self.k, :self.k]
            setattr(self, name, buffer)

    def _record(self, z: complex, w: np.ndarray, pole: ProjectivePole, component: int) -> None:
        self.nodes.append(complex(z))
        self.weights.append(np.asarray(w, dtype=np.complex128))
        self.poles.append(pole)
        self.index.append(int(component))
        self.degrees.append(extend_degrees(self.degrees[-1] if self.degrees else None, pole, component))

    def to_solution(self, spec: Optional[ProblemSpec] = None) -> PencilSolution:
        spec = spec if spec is not None else self.spec
        return PencilSolution(
            Q=self.Q.copy(), H=self.H.copy(), K=self.K.copy(), spec=spec,
            r_factor=self.r_factor.copy(), degrees=tuple(self.degrees),
            algorithm='updating', swap_count=self.swap_count,
        )


def _weight_row(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.shape != (2,):
        raise LengthMismatch(f"Строка весов должна иметь длину 2, получено {w.shape}")
    return w


def init_single(z1: complex, w1, capacity: int = 8) -> UpdatingState:
    """Вырожденное решение n = 1: (H, K) = (z1, 1), Q = 1"""
    state = UpdatingState(capacity)
    state.k = 1
    state._Q[0, 0] = 1.0
    state._H[0, 0] = z1
    state._K[0, 0] = 1.0
    state._record(z1, _weight_row(w1), ProjectivePole.infinite(), 1)
    return state


def init_base(z1: complex, z2: complex, w1, w2, capacity: int = 8) -> UpdatingState:
    """
    Базовый случай n = 2: Q = Q_1 из QR матрицы [w1^H; w2^H], H = Q_1^H diag(z1, z2), K = Q_1^H
    """
    w1, w2 = _weight_row(w1), _weight_row(w2)
    Q1, R = economical_qr(np.conj(np.vstack([w1, w2])))
    state = UpdatingState(max(capacity, 2))
    state.k = 2
    state._Q[:2, :2] = Q1
    state._H[:2, :2] = Q1.conj().T @ np.diag([z1, z2])
    state._K[:2, :2] = Q1.conj().T
    state.r_factor = R
    state._record(z1, w1, ProjectivePole.infinite(), 1)
    state._record(z2, w2, ProjectivePole.infinite(), 2)
    return state


def _infinite_multiplicity(state: UpdatingState, component: int) -> int:
    degree = state.degrees[-1][component - 1].degree
    return 0 if degree is None else degree + 1


def _check_new_pole(state: UpdatingState, pole: ProjectivePole, component: int, mode: str) -> None:
    if pole.is_infinite:
        multiplicity = _infinite_multiplicity(state, component) + 1
        if multiplicity > LAURENT_MULTIPLICITY_LIMIT and mode != 'exact-symbolic':
            raise UnsupportedInfiniteMultiplicity(
                f"Бесконечный полюс кратности {multiplicity} в компоненте {component} (режим {mode})"
            )
        return
    # Совпадение с полюсом другой компоненты допустимо: его учитывает вычет в eval2
    value = pole.value
    for earlier in state.degrees[-1][component - 1].poles:
        if poles_coincide(value, earlier):
            raise RepeatedFinitePoleInComponent(f"Полюс {pole} уже использован в компоненте {component}")


def _append_node(state: UpdatingState, z: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    k = state.k
    state._grow(k + 1)
    for buffer, diagonal in ((state._Q, 1.0), (state._H, z), (state._K, 1.0)):
        buffer[k, :k + 1] = 0.0
        buffer[:k + 1, k] = 0.0
        buffer[k, k] = diagonal
    size = k + 1
    return state._Q[:size, :size], state._H[:size, :size], state._K[:size, :size]


def _absorb_weight(state: UpdatingState, w_bar: np.ndarray, Q, H, K) -> np.ndarray:
    """Два вращения G_{1,k+1}, G_{2,k+1}, исключающие добавленную строку весов; возвращает новый R_W"""
    k = state.k
    stacked = np.vstack([state.r_factor, w_bar])
    for position in (0, 1):
        rot, r = givens_eliminate(stacked[position, position], stacked[2, position])
        pair = stacked[[position, 2]]
        rotate_rows(pair, rot)
        stacked[[position, 2]] = pair
        stacked[position, position] = r
        stacked[2, position] = 0.0

        embedded = rot.at(position, k)
        rotate_rows(H, embedded)
        rotate_rows(K, embedded)
        rotate_columns(Q, embedded.adjoint())
    R = stacked[:2].copy()
    R[1, 0] = 0.0
    return R


def _restore_structure(state: UpdatingState, Q, H, K) -> None:
    """Убирает элементы (k, 0..k-3) последней строки парами вращений леммы о 2x2 пучке"""
    k = state.k
    for i in range(k - 2):
        rows, cols = [i + 2, k], [i, k]
        A = H[np.ix_(rows, cols)]
        B = K[np.ix_(rows, cols)]
        try:
            rotations = triangularize_2x2_pencil(A, B)
        except SingularPencil as e:
            raise Breakdown(f"Сингулярный 2x2 пучок при восстановлении столбца {i}") from e
        left = rotations.left.at(i + 2, k)
        right = rotations.right.at(i, k)
        rotate_rows(H[:, i:], left)
        rotate_rows(K[:, i:], left)
        rotate_columns(Q, left.adjoint())
        rotate_columns(H, right)
        rotate_columns(K, right)

        norm_a, norm_b = float(np.linalg.norm(A)), float(np.linalg.norm(B))
        structural_zero(H, k, i, norm_a, 'H')
        structural_zero(K, k, i, norm_b, 'K')
        if state.poles[i + 2].is_infinite:
            structural_zero(K, i + 2, i, norm_b, 'K')
        if rotations.swapped:
            state.swap_count += 1


def _leading_coefficients(state: UpdatingState, H, K, R, component: int, mode: str) -> Tuple[int, np.ndarray]:
    """Коэффициенты при старшей степени компоненты у phi_1..phi_k текущего пучка"""
    k = state.k
    degree = _infinite_multiplicity(state, component) - 1
    target = 3 - component
    multiplicity = _infinite_multiplicity(state, target) + 1
    if multiplicity <= LAURENT_MULTIPLICITY_LIMIT:
        depth = shadow_depth(sum(1 for p in state.poles if p.is_infinite))
        shadows = laurent_basis(H, K, R, k, depth)
        return degree, np.array([s.coefficient(component, degree) for s in shadows])
    if mode != 'exact-symbolic':
        raise UnsupportedInfiniteMultiplicity(f"Кратность {multiplicity} в режиме {mode}")
    try:
        basis = symbolic_basis_from_pencil(H, K, R, k)
    except PoleCollision as e:
        raise Breakdown("Точное представление базиса недоступно") from e
    return degree, np.array([v.coefficient(component, degree) for v in basis])


def _off_component_values(state: UpdatingState, R: np.ndarray, pole: ProjectivePole, mode: str):
    k = state.k

    def eval2(H, K, off_component: int):
        columns = (k - 2, k - 1)
        if pole.is_infinite:
            _, coefficients = _leading_coefficients(state, H, K, R, off_component, mode)
            terms = [-K[:k, j] * coefficients for j in columns]
        else:
            try:
                values, shared = scaled_values_at_pole(H, K, R, pole, k)
            except EvaluationAtPole as e:
                raise Breakdown(f"Базис не вычисляется в полюсе {pole}") from e
            if shared:
                logger.debug(f"[Updating] Pole {pole} is already encoded in component {off_component}")
            scale = np.hypot(abs(pole.nu), abs(pole.mu))
            nu, mu = pole.nu / scale, pole.mu / scale
            values = values[off_component - 1]
            terms = [-(nu * K[:k, j] - mu * H[:k, j]) * values for j in columns]
        magnitude = float(sum(np.sum(np.abs(t)) for t in terms))
        return complex(np.sum(terms[0])), complex(np.sum(terms[1])), magnitude

    return eval2


def update_step(state: UpdatingState, z_new: complex, w_new, p_new: ProjectivePole, pi_new: int,
                mode: Optional[str] = None) -> UpdatingState:
    """
    Добавляет узел, вес, полюс и компоненту: решение размера k -> k+1
    """
    mode = mode or INFINITE_POLE_MODE
    w_new = _weight_row(w_new)
    if not np.any(w_new):
        raise Breakdown(f"Нулевой вес в узле {z_new}")
    if state.k == 1:
        if not (p_new.is_infinite and pi_new == 2):
            raise BadPrefix("Второй полюс должен быть бесконечным во второй компоненте")
        return init_base(state.nodes[0], z_new, state.weights[0], w_new)

    pole = p_new.normalized()
    _check_new_pole(state, pole, pi_new, mode)

    Q, H, K = _append_node(state, z_new)
    R = _absorb_weight(state, np.conj(w_new), Q, H, K)
    _restore_structure(state, Q, H, K)

    try:
        place_pole_inplace(H, K, pole, pi_new, _off_component_values(state, R, pole, mode))
    except DegenerateRotation as e:
        raise Breakdown(f"Вырождение скалярного произведения при добавлении узла {z_new}") from e

    state.r_factor = R
    state.k += 1
    state._record(z_new, w_new, pole, pi_new)
    logger.debug(f"[Updating] Size {state.k}: pole {pole} placed in component {pi_new}")
    return state


def solve_updating(spec: ProblemSpec, mode: Optional[str] = None) -> PencilSolution:
    """Решение обратной задачи последовательным добавлением узлов"""
    spec = validate(spec)
    if spec.n < 2:
        raise LengthMismatch("Алгоритму обновления нужно минимум два узла")
    logger.info(f"[Updating] Solving problem of size {spec.n}")
    state = init_base(spec.nodes[0], spec.nodes[1], spec.weights[0], spec.weights[1], capacity=spec.n)
    for m in range(2, spec.n):
        update_step(state, spec.nodes[m], spec.weights[m], spec.poles[m], spec.index[m], mode)
    if state.swap_count:
        logger.warning(f"[Updating] Swap fallback activated {state.swap_count} times")
    logger.info(f"[Updating] Done, size {state.k}")
    return state.to_solution(spec)
