import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.config import EPS
from core.errors import (
    BadPrefix,
    Breakdown,
    LengthMismatch,
    RepeatedFinitePoleInComponent,
    UnsupportedInfiniteMultiplicity,
)
from core.types import ProblemSpec, ProjectivePole
from harness.experiments import build_example1
from krylov.arnoldi import solve_krylov
from metrics.measures import compute_metrics, err_Q, err_r
from problems import (
    assert_degree_structure,
    assert_two_hessenberg,
    expected_degrees,
    far_pole_spec,
    mutual_singular_values,
    random_spec,
    shared_pole_spec,
    spec_from_seed,
)
from updating.solver import init_base, init_single, solve_updating, update_step

INF = ProjectivePole.infinite()


def test_init_single():
    state = init_single(0.5, [1.0, 2.0])
    assert state.k == 1
    assert state.H[0, 0] == 0.5 and state.K[0, 0] == 1.0 and state.Q[0, 0] == 1.0


def test_base_case_is_exact(rng):
    w = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    state = init_base(0.3, -0.4j, w[0], w[1])
    solution = state.to_solution()
    assert err_Q(solution) <= 10 * EPS
    assert err_r(solution) <= 10 * EPS
    np.testing.assert_allclose(state.Q.conj().T @ np.conj(w), state.r_factor, atol=1e-14)


def test_second_pole_must_be_infinite_in_component_two():
    state = init_single(0.5, [1.0, 2.0])
    with pytest.raises(BadPrefix):
        update_step(state, 0.7, [1.0, 0.5], ProjectivePole.finite(3.0), 2)
    state = update_step(state, 0.7, [1.0, 0.5], INF, 2)
    assert state.k == 2


def test_single_step_from_base(rng):
    spec = random_spec(rng, 3)
    state = init_base(spec.nodes[0], spec.nodes[1], spec.weights[0], spec.weights[1])
    update_step(state, spec.nodes[2], spec.weights[2], spec.poles[2], spec.index[2])
    solution = state.to_solution(spec)
    assert solution.n == 3
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-13
    assert metrics.err_r <= 1e-13


@settings(max_examples=200)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(3, 40))
def test_random_problems(seed, n):
    solution = solve_updating(spec_from_seed(seed, n))
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-12
    assert metrics.err_r <= 1e-12
    assert metrics.err_p is None or metrics.err_p <= 1e-11
    assert metrics.err_phi <= 1e-8
    assert_two_hessenberg(solution)


@pytest.mark.parametrize('n', range(3, 41))
def test_degree_structure(n):
    solution = solve_updating(spec_from_seed(n, n, infinite_share=0.4))
    assert solution.degrees == expected_degrees(solution.spec)
    assert_degree_structure(solution)


def test_higher_infinite_multiplicity_exact_mode(rng):
    spec = build_example1(rng)
    solution = solve_updating(spec, mode='exact-symbolic')
    assert compute_metrics(solution).err_Q <= 1e-12
    assert_two_hessenberg(solution)
    assert_degree_structure(solution)


def test_higher_infinite_multiplicity_reject_mode(rng):
    with pytest.raises(UnsupportedInfiniteMultiplicity):
        solve_updating(build_example1(rng), mode='reject')


def test_zero_weight_breaks_down(rng):
    spec = random_spec(rng, 3)
    state = init_base(spec.nodes[0], spec.nodes[1], spec.weights[0], spec.weights[1])
    with pytest.raises(Breakdown):
        update_step(state, 0.9, [0.0, 0.0], ProjectivePole.finite(2.0), 1)


def test_shared_pole_across_components(rng):
    spec = shared_pole_spec(rng)
    solution = solve_updating(spec)
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-12
    assert metrics.err_r <= 1e-12
    assert metrics.err_p <= 1e-11
    assert_degree_structure(solution)
    Q_kry = solve_krylov(spec).Q
    np.testing.assert_allclose(np.abs(solution.Q.conj().T @ Q_kry), np.eye(spec.n), atol=1e-8)


def test_repeated_pole_in_component_rejected(rng):
    spec = random_spec(rng, 4, infinite_share=0.0)
    state = init_base(spec.nodes[0], spec.nodes[1], spec.weights[0], spec.weights[1])
    p = ProjectivePole.finite(2.0 + 1.0j)
    update_step(state, spec.nodes[2], spec.weights[2], p, 1)
    with pytest.raises(RepeatedFinitePoleInComponent):
        update_step(state, spec.nodes[3], spec.weights[3], ProjectivePole.finite((2.0 + 1.0j) * (1 + 1e-14)), 1)
    update_step(state, spec.nodes[3], spec.weights[3], p, 2)
    assert state.k == 4


def test_far_finite_poles(rng):
    spec = far_pole_spec(rng)
    solution = solve_updating(spec)
    assert np.all(np.isfinite(solution.H)) and np.all(np.isfinite(solution.K))
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-12
    assert metrics.err_r <= 1e-11
    assert_two_hessenberg(solution)


def test_node_order_does_not_change_spaces(rng):
    for n in (6, 12, 20):
        spec = random_spec(rng, n)
        reordered = spec.reordered_nodes(rng.permutation(n))
        first, second = solve_updating(spec), solve_updating(reordered)
        for count in range(3, n + 1):
            np.testing.assert_allclose(mutual_singular_values(first, second, count), 1.0, atol=1e-8)


def test_needs_two_nodes():
    spec = ProblemSpec(np.array([0.5]), np.array([[1.0, 1.0]]), (INF,), (1,))
    with pytest.raises(LengthMismatch):
        solve_updating(spec)


def test_capacity_growth(rng):
    spec = random_spec(rng, 20)
    state = init_base(spec.nodes[0], spec.nodes[1], spec.weights[0], spec.weights[1], capacity=2)
    for m in range(2, spec.n):
        update_step(state, spec.nodes[m], spec.weights[m], spec.poles[m], spec.index[m])
    solution = state.to_solution(spec)
    reference = solve_updating(spec)
    np.testing.assert_allclose(solution.H, reference.H, atol=1e-12)
    np.testing.assert_allclose(solution.Q, reference.Q, atol=1e-12)
