import logging
from typing import Dict, Optional, Tuple

import numpy as np

from core.config import EPS
from core.errors import (
    DegenerateCombination,
    IncompleteIteration,
    KrylovBreakdown,
    PoleCollision,
    PoleHitsNode,
    ShadowUnavailable,
)
from core.factorization import initial_basis, weight_factorization
from core.types import PencilSolution, ProblemSpec, ProjectivePole, extend_degrees
from core.validate import validate
from evaluation.shadow import LaurentShadow, shadow_depth
from evaluation.symbolic import symbolic_basis_from_pencil
from settings import KRYLOV_BREAKDOWN_TOLERANCE, SHADOW_SYMBOLIC_BOUND

logger = logging.getLogger(__name__)

# Порог численного нуля для коэффициентов продолжения и значений в совпавшем узле
NEGLIGIBLE_FACTOR = 64

# Проход Грама - Шмидта повторяется, пока норма остатка падает ниже 0.7 от предыдущей, не более четырех раз
REORTHOGONALIZATION_PASSES = 4
REORTHOGONALIZATION_RATIO = 0.7


# Класс KrylovState
# Состояние рациональной векторной итерации Арнольди на n узлах:
# basis - ортонормированные векторы q_1..q_k (столбцы), h - коэффициенты ортогонализации,
# rho, eta - параметры продолжения, nu, mu - проективные полюсы столбцов,
# r_factor - переход от (omega_1, omega_2) к (q_1, q_2), shadows - разложения в бесконечности.
class KrylovState:
    def __init__(self, spec: ProblemSpec, basis: np.ndarray, r_factor: np.ndarray, depth: int):
        n = spec.n
        self.spec = spec
        self.k = 2
        self.basis = np.zeros((n, n), dtype=np.complex128)
        self.basis[:, :2] = basis
        self.h = np.zeros((n, n), dtype=np.complex128)
        self.rho = np.zeros((n, n), dtype=np.complex128)
        self.eta = np.zeros((n, n), dtype=np.complex128)
        self.nu = np.zeros(n, dtype=np.complex128)
        self.mu = np.zeros(n, dtype=np.complex128)
        self.r_factor = r_factor
        self.degrees = [extend_degrees(None, spec.poles[0], 1)]
        self.degrees.append(extend_degrees(self.degrees[0], spec.poles[1], 2))
        phi1, phi2 = initial_basis(r_factor)
        self.shadows = [LaurentShadow.constant(phi1, depth), LaurentShadow.constant(phi2, depth)]
        self.last_infinite: Dict[int, Optional[int]] = {1: None, 2: None}
        self.closed = False

    @property
    def Q(self) -> np.ndarray:
        return self.basis[:, :self.k]

    def base_direction(self, component: int) -> np.ndarray:
        """Коэффициенты вектора, пропорционального omega_component, в базисе q_1, q_2"""
        direction = np.zeros(self.k, dtype=np.complex128)
        if component == 1:
            direction[0] = 1.0
        else:
            column = self.r_factor[:, 1]
            direction[:2] = column / np.linalg.norm(column)
        return direction


def krylov_init(spec: ProblemSpec) -> KrylovState:
    """q_1, q_2 - ортонормированные столбцы conj(W); R_W хранит замену базиса"""
    Q_W, R_W = weight_factorization(spec)
    infinite_count = sum(1 for p in spec.poles if p.is_infinite)
    return KrylovState(spec, Q_W, R_W, shadow_depth(infinite_count))


def _pencil_columns(state: KrylovState, columns: int) -> Tuple[np.ndarray, np.ndarray]:
    size = state.spec.n
    H = np.zeros((size, size), dtype=np.complex128)
    K = np.zeros((size, size), dtype=np.complex128)
    for s in range(columns):
        rows = min(s + 3, size)
        K[:rows, s] = state.mu[s] * state.h[:rows, s] - state.rho[:rows, s]
        H[:rows, s] = state.nu[s] * state.h[:rows, s] + state.eta[:rows, s]
    return H, K


def _coefficient(state: KrylovState, index: int, component: int, degree: int) -> complex:
    try:
        return state.shadows[index].coefficient(component, degree)
    except ShadowUnavailable:
        if state.spec.n > SHADOW_SYMBOLIC_BOUND:
            raise
    logger.debug(f"[Krylov] Shadow of vector {index} exhausted, using symbolic form")
    H, K = _pencil_columns(state, state.k - 2)
    try:
        basis = symbolic_basis_from_pencil(H, K, state.r_factor, index + 1)
    except PoleCollision as e:
        raise ShadowUnavailable(f"Символьное представление q_{index} недоступно") from e
    return basis[index].coefficient(component, degree)


def _cancellation(state: KrylovState, previous: int, component: int) -> np.ndarray:
    """Комбинация q_{l-1}, q_l, у которой старший коэффициент другой компоненты сокращается"""
    k = state.k
    rho = np.zeros(k, dtype=np.complex128)
    off = 3 - component
    degree = state.degrees[k - 1][off - 1].degree
    if degree is None or degree != state.degrees[previous][off - 1].degree:
        rho[previous] = 1.0
        return rho

    b = _coefficient(state, previous, off, degree)
    partners = np.array([_coefficient(state, j, off, degree) for j in range(previous)])
    scale = max(abs(b), float(np.max(np.abs(partners), initial=0.0)))
    threshold = NEGLIGIBLE_FACTOR * EPS * scale
    if abs(b) <= threshold:
        rho[previous] = 1.0
        return rho

    partner = previous - 1
    if abs(partners[partner]) <= threshold:
        partner = int(np.argmax(np.abs(partners)))
    a = partners[partner]
    if abs(a) <= threshold:
        raise DegenerateCombination(
            f"Нет вектора для сокращения степени {degree} компоненты {off} (q_{previous})"
        )
    norm = np.hypot(abs(a), abs(b))
    rho[partner] = b / norm
    rho[previous] = -a / norm
    return rho


def continuation_vector(state: KrylovState, pole: ProjectivePole,
                        component: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Вектор продолжения и его параметры
    :return: (r, rho, eta); для конечного полюса r = sum eta_i q_i, для бесконечного r = sum rho_i q_i
    """
    k = state.k
    rho = np.zeros(k, dtype=np.complex128)
    eta = np.zeros(k, dtype=np.complex128)
    if not pole.is_infinite:
        eta = state.base_direction(component)
        return state.Q @ eta, rho, eta

    previous = state.last_infinite[component]
    if previous is None:
        rho = state.base_direction(component)
    else:
        rho = _cancellation(state, previous, component)
    return state.Q @ rho, rho, eta


def expand(state: KrylovState, pole: ProjectivePole, r: np.ndarray) -> np.ndarray:
    """Сдвиг-обращение (Z - pI)^{-1} r для конечного полюса или умножение Z r для бесконечного"""
    nodes = state.spec.nodes
    if pole.is_infinite:
        return nodes * r
    shifted = nodes - pole.value
    hits = shifted == 0
    expanded = np.zeros_like(r)
    expanded[~hits] = r[~hits] / shifted[~hits]
    if np.any(hits):
        if np.any(np.abs(r[hits]) > NEGLIGIBLE_FACTOR * EPS * np.linalg.norm(r)):
            raise PoleHitsNode(f"Полюс {pole} совпадает с узлом при ненулевом векторе продолжения")
        expanded[hits] = 0.0
    return expanded


def _project(basis: np.ndarray, vector: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # Классический Грам - Шмидт: повторные проходы, пока остаток заметно уменьшается
    coefficients = basis.conj().T @ vector
    residual = vector - basis @ coefficients
    norm = np.linalg.norm(residual)
    for _ in range(REORTHOGONALIZATION_PASSES - 1):
        correction = basis.conj().T @ residual
        residual = residual - basis @ correction
        coefficients = coefficients + correction
        previous, norm = norm, np.linalg.norm(residual)
        if norm > REORTHOGONALIZATION_RATIO * previous:
            break
    return coefficients, residual


def orthonormalize(state: KrylovState, expanded: np.ndarray,
                   tolerance: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ортонормирует q^ против q_1..q_k. Обрыв фиксируется, только если остаток не больше
    tolerance * ||q^|| (по умолчанию KRYLOV_BREAKDOWN_TOLERANCE = 0: остаток точно нулевой)
    :return: (q_{k+1}, h_{1..k+1}) с вещественным положительным h_{k+1}
    """
    tolerance = KRYLOV_BREAKDOWN_TOLERANCE if tolerance is None else tolerance
    coefficients, residual = _project(state.Q, expanded)
    beta = np.linalg.norm(residual)
    if beta <= tolerance * np.linalg.norm(expanded):
        raise KrylovBreakdown(f"Пространство не расширилось на шаге {state.k}: остаток {beta:.3e}")
    return residual / beta, np.concatenate((coefficients, [beta]))


def _expanded_shadow(state: KrylovState, pole: ProjectivePole, rho, eta) -> LaurentShadow:
    shadows = state.shadows[:state.k]
    if pole.is_infinite:
        return LaurentShadow.combine(rho, shadows).times_z()
    return LaurentShadow.combine(eta, shadows).divide_linear(pole.mu, pole.nu)


def arnoldi_step(state: KrylovState, pole: ProjectivePole, component: int,
                 tolerance: Optional[float] = None) -> None:
    """Добавляет q_{k+1} для полюса pole в компоненте component"""
    k = state.k
    s = k - 2
    pole = pole.normalized()
    r, rho, eta = continuation_vector(state, pole, component)
    expanded = expand(state, pole, r)
    q, h = orthonormalize(state, expanded, tolerance)

    state.basis[:, k] = q
    state.h[:k + 1, s] = h
    state.rho[:k, s] = rho
    state.eta[:k, s] = eta
    state.nu[s], state.mu[s] = pole.nu, pole.mu
    state.degrees.append(extend_degrees(state.degrees[-1], pole, component))

    expanded_shadow = _expanded_shadow(state, pole, rho, eta)
    factors = np.concatenate(([1.0], -h[:k]))
    new_shadow = LaurentShadow.combine(factors, [expanded_shadow] + state.shadows[:k]).scaled(1.0 / h[k])
    state.shadows.append(new_shadow)
    if pole.is_infinite:
        state.last_infinite[component] = k
    state.k += 1
    logger.debug(f"[Krylov] Vector {k} added for pole {pole} in component {component}")


def close_iteration(state: KrylovState) -> None:
    """
    Два замыкающих шага с бесконечными полюсами в компонентах 1 и 2:
    остаток ортогонализации исчезает, коэффициенты заполняют последние столбцы пучка
    """
    n = state.spec.n
    if state.k != n:
        raise IncompleteIteration(f"Построено {state.k} векторов из {n}")
    pole = ProjectivePole.infinite()
    for s, component in ((n - 2, 1), (n - 1, 2)):
        rho = state.base_direction(component)
        r = state.Q[:, :2] @ rho[:2]
        expanded = expand(state, pole, r)
        coefficients, residual = _project(state.Q, expanded)
        residual_norm = np.linalg.norm(residual)
        if residual_norm > 1e-8 * np.linalg.norm(expanded):
            logger.warning(f"[Krylov] Closure column {s} leaves residual {residual_norm:.3e}")
        state.h[:n, s] = coefficients
        state.rho[:2, s] = rho[:2]
        state.nu[s], state.mu[s] = pole.nu, pole.mu
    state.closed = True


def assemble_pencil(state: KrylovState) -> Tuple[np.ndarray, np.ndarray]:
    """Квадратный 2-хессенбергов пучок (H_n, K_n) из коэффициентов ортогонализации и продолжения"""
    if state.k != state.spec.n or not state.closed:
        raise IncompleteIteration("Итерация не завершена: пучок собрать нельзя")
    return _pencil_columns(state, state.spec.n)


def solve_krylov(spec: ProblemSpec, tolerance: Optional[float] = None) -> PencilSolution:
    """Решение обратной задачи рациональной векторной итерацией Арнольди"""
    spec = validate(spec)
    logger.info(f"[Krylov] Solving problem of size {spec.n}")
    state = krylov_init(spec)
    for m in range(2, spec.n):
        arnoldi_step(state, spec.poles[m], spec.index[m], tolerance)
    close_iteration(state)
    H, K = assemble_pencil(state)
    logger.info(f"[Krylov] Done, size {spec.n}")
    return PencilSolution(
        Q=state.basis.copy(), H=H, K=K, spec=spec, r_factor=state.r_factor.copy(),
        degrees=tuple(state.degrees), algorithm='krylov',
    )
