import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import IncompleteIteration, KrylovBreakdown, PoleHitsNode
from core.inner_product import inner_product, weighted_values
from core.types import ProjectivePole
from evaluation.symbolic import symbolic_basis, symbolic_basis_from_pencil
from harness.experiments import build_example1, build_exp1, run_rng
from krylov.arnoldi import (
    arnoldi_step,
    assemble_pencil,
    close_iteration,
    expand,
    krylov_init,
    orthonormalize,
    solve_krylov,
)
from metrics.measures import compute_metrics
from problems import (
    assert_degree_structure,
    assert_two_hessenberg,
    expected_degrees,
    random_spec,
    shared_pole_spec,
    spec_from_seed,
)
from updating.solver import solve_updating


def test_init_is_orthonormal(rng):
    spec = random_spec(rng, 6)
    state = krylov_init(spec)
    assert state.k == 2
    np.testing.assert_allclose(state.Q.conj().T @ state.Q, np.eye(2), atol=1e-14)
    assert np.linalg.norm(state.base_direction(2)) == pytest.approx(1.0)


def test_single_step(rng):
    spec = random_spec(rng, 6, infinite_share=0.0)
    state = krylov_init(spec)
    arnoldi_step(state, spec.poles[2], spec.index[2])
    assert state.k == 3
    np.testing.assert_allclose(state.Q.conj().T @ state.Q, np.eye(3), atol=1e-14)
    assert state.h[2, 0].real > 0 and state.h[2, 0].imag == 0
    assert len(state.shadows) == 3


def test_incomplete_iteration(rng):
    spec = random_spec(rng, 5)
    state = krylov_init(spec)
    with pytest.raises(IncompleteIteration):
        close_iteration(state)
    with pytest.raises(IncompleteIteration):
        assemble_pencil(state)


def test_pole_hits_node(rng):
    spec = random_spec(rng, 5)
    state = krylov_init(spec)
    pole = ProjectivePole.finite(spec.nodes[3])
    with pytest.raises(PoleHitsNode):
        expand(state, pole, np.ones(5, dtype=complex))
    r = np.ones(5, dtype=complex)
    r[3] = 0
    assert expand(state, pole, r)[3] == 0


def test_breakdown_on_dependent_vector(rng):
    state = krylov_init(random_spec(rng, 5))
    with pytest.raises(KrylovBreakdown):
        orthonormalize(state, 2.0 * state.Q[:, 0] - 1j * state.Q[:, 1], tolerance=1e-12)


def test_default_tolerance_breaks_down_only_on_zero(rng):
    state = krylov_init(random_spec(rng, 6))
    with pytest.raises(KrylovBreakdown):
        orthonormalize(state, np.zeros(6, dtype=complex))
    direction = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    vector = state.Q[:, 0] + 1e-9 * direction
    q, h = orthonormalize(state, vector)
    np.testing.assert_allclose(state.Q.conj().T @ q, 0, atol=1e-12)
    assert np.linalg.norm(q) == pytest.approx(1.0)
    assert h[-1] > 0


@settings(max_examples=200)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(3, 40))
def test_random_problems(seed, n):
    solution = solve_krylov(spec_from_seed(seed, n))
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-12
    assert metrics.err_r <= 1e-12
    assert metrics.err_p is None or metrics.err_p <= 1e-11
    assert_two_hessenberg(solution)


def test_agrees_with_updating(rng):
    specs = [spec_from_seed(seed, 3 + seed % 10) for seed in range(50)]
    specs += [shared_pole_spec(rng, n) for n in (5, 8, 12)]
    for spec in specs:
        Q_upd = solve_updating(spec).Q
        Q_kry = solve_krylov(spec).Q
        # Одинаковые вложенные пространства: базисы совпадают с точностью до унимодулярных множителей
        np.testing.assert_allclose(np.abs(Q_upd.conj().T @ Q_kry), np.eye(spec.n), atol=1e-8)


@pytest.mark.parametrize('n', range(3, 41))
def test_degree_structure(n):
    solution = solve_krylov(spec_from_seed(n, n, infinite_share=0.4))
    assert solution.degrees == expected_degrees(solution.spec)
    assert_degree_structure(solution)


def test_shadows_match_symbolic_basis(rng):
    for n in (5, 8, 12):
        spec = random_spec(rng, n, infinite_share=0.4)
        state = krylov_init(spec)
        for m in range(2, n):
            arnoldi_step(state, spec.poles[m], spec.index[m])
        close_iteration(state)
        H, K = assemble_pencil(state)
        basis = symbolic_basis_from_pencil(H, K, state.r_factor, n)
        for j in range(n):
            for component in (1, 2):
                degree = state.degrees[j][component - 1].degree
                if degree is None:
                    continue
                expected = basis[j].coefficient(component, degree)
                assert state.shadows[j].coefficient(component, degree) == pytest.approx(expected, rel=1e-8, abs=1e-10)


def test_isometry_with_symbolic_basis(rng):
    for n in (4, 8, 12):
        spec = random_spec(rng, n)
        solution = solve_krylov(spec)
        basis = symbolic_basis(solution)
        values = np.stack([np.column_stack([v(z) for v in basis]) for z in spec.nodes])
        np.testing.assert_allclose(weighted_values(values, spec), solution.Q, atol=1e-10)

        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        expected = np.vdot(solution.Q @ b, solution.Q @ a)
        assert inner_product(values @ a, values @ b, spec) == pytest.approx(expected, rel=1e-10)


def test_repeated_infinite_poles(rng):
    solution = solve_krylov(build_example1(rng))
    metrics = compute_metrics(solution)
    assert metrics.err_Q <= 1e-12
    assert metrics.err_r <= 1e-11
    assert_two_hessenberg(solution)
    assert_degree_structure(solution)


def test_encoded_poles_are_exact(rng):
    spec = random_spec(rng, 10)
    solution = solve_krylov(spec)
    for pole, encoded in zip(spec.poles[2:], solution.encoded_poles()):
        assert pole.chordal_distance(encoded) <= 1e-14


@pytest.mark.slow
def test_large_problem_completes():
    spec = build_exp1(200, run_rng(1, 200, 0))
    solution = solve_krylov(spec)
    assert compute_metrics(solution).err_Q <= 1e-12
    assert_two_hessenberg(solution)
