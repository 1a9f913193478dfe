import logging

import numpy as np
import pytest
import scipy.linalg as la
from hypothesis import given, strategies as st

from core.errors import DegenerateRotation, IndexOutOfRange, SingularPencil, StructureError, ZeroVector
from core.types import ProjectivePole, chordal_distance
from rotations.givens import (
    Rotation,
    apply_left,
    apply_right,
    eliminate_first_column,
    givens_eliminate,
    rotate_columns,
    rotate_rows,
)
from rotations.pencil import place_pole, structural_zero, swap_2x2_pencil, triangularize_2x2_pencil

parts = st.floats(min_value=-1e3, max_value=1e3, allow_subnormal=False)
complexes = st.builds(complex, parts, parts)


def _random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@given(a=complexes, b=complexes)
def test_givens_eliminate(a, b):
    if a == 0 and b == 0:
        with pytest.raises(ZeroVector):
            givens_eliminate(a, b)
        return
    rot, r = givens_eliminate(a, b)
    result = rot.block() @ np.array([a, b])
    assert r >= 0
    assert abs(result[0] - r) <= 1e-12 * r
    assert abs(result[1]) <= 1e-12 * r
    np.testing.assert_allclose(rot.block() @ rot.block().conj().T, np.eye(2), atol=1e-14)


def test_column_elimination(rng):
    x, y = _random_complex(rng, 2)
    row = np.array([[x, y]])
    first = apply_right(row, eliminate_first_column(x, y))
    assert abs(first[0, 0]) < 1e-14
    assert first[0, 1] == pytest.approx(np.hypot(abs(x), abs(y)))
    assert eliminate_first_column(0, y).is_identity


def test_rotation_embedding(rng):
    rot = Rotation(*(_random_complex(rng, 2) / 2), i=1, j=3)
    rot = Rotation(rot.c / np.hypot(abs(rot.c), abs(rot.s)), rot.s / np.hypot(abs(rot.c), abs(rot.s)), 1, 3)
    M = _random_complex(rng, (5, 5))
    G = rot.embed(5)
    np.testing.assert_allclose(apply_left(rot, M), G @ M, atol=1e-14)
    np.testing.assert_allclose(apply_right(M, rot), M @ G, atol=1e-14)
    np.testing.assert_allclose(rot.adjoint().embed(5), G.conj().T, atol=1e-15)
    np.testing.assert_allclose(Rotation.from_block(rot.block(), 1, 3).embed(5), G)


def test_rotation_indices():
    with pytest.raises(IndexOutOfRange):
        Rotation(1.0, 0.0, 2, 1)
    with pytest.raises(IndexOutOfRange):
        rotate_rows(np.eye(3, dtype=complex), Rotation(0.0, 1.0, 0, 3))
    with pytest.raises(IndexOutOfRange):
        rotate_columns(np.eye(3, dtype=complex), Rotation(0.0, 1.0, 1, 4))


def test_triangularize_against_eigenvalue_oracle(rng):
    for _ in range(1000):
        A = np.tril(_random_complex(rng, (2, 2)))
        B = np.tril(_random_complex(rng, (2, 2)))
        left, right, _ = triangularize_2x2_pencil(A, B)
        A2 = apply_right(apply_left(left, A), right)
        B2 = apply_right(apply_left(left, B), right)
        assert abs(A2[1, 0]) <= 1e-10 * np.linalg.norm(A)
        assert abs(B2[1, 0]) <= 1e-10 * np.linalg.norm(B)
        # Собственные значения нижнетреугольного пучка стоят на диагонали и не меняют позиций
        assert chordal_distance(A2[0, 0], B2[0, 0], A[0, 0], B[0, 0]) <= 1e-12
        assert chordal_distance(A2[1, 1], B2[1, 1], A[1, 1], B[1, 1]) <= 1e-12
        eigenvalues = la.eigvals(A2, B2, homogeneous_eigvals=True)
        distances = [chordal_distance(eigenvalues[0, m], eigenvalues[1, m], A[0, 0], B[0, 0]) for m in range(2)]
        assert min(distances) <= 1e-10


def test_triangularize_diagonal_pencil_keeps_order():
    A = np.diag([2.0, 3.0]).astype(complex)
    B = np.eye(2, dtype=complex)
    left, right, swapped = triangularize_2x2_pencil(A, B)
    A2 = apply_right(apply_left(left, A), right)
    B2 = apply_right(apply_left(left, B), right)
    assert not swapped
    assert A2[0, 0] / B2[0, 0] == pytest.approx(2.0)
    assert A2[1, 1] / B2[1, 1] == pytest.approx(3.0)


def test_triangularize_rejects_singular_pencil():
    A = np.array([[0.0, 0.0], [1.0, 2.0]], dtype=complex)
    B = np.array([[0.0, 0.0], [3.0, 1.0]], dtype=complex)
    with pytest.raises(SingularPencil):
        triangularize_2x2_pencil(A, B)


def test_swap_reorders_eigenvalues(rng):
    for _ in range(200):
        S = np.triu(_random_complex(rng, (2, 2)))
        T = np.triu(_random_complex(rng, (2, 2)))
        left, right = swap_2x2_pencil(S, T)
        S2 = apply_right(apply_left(left, S), right)
        T2 = apply_right(apply_left(left, T), right)
        assert abs(S2[1, 0]) <= 1e-10 * np.linalg.norm(S)
        assert abs(T2[1, 0]) <= 1e-10 * np.linalg.norm(T)
        assert chordal_distance(S2[0, 0], T2[0, 0], S[1, 1], T[1, 1]) <= 1e-10
        assert chordal_distance(S2[1, 1], T2[1, 1], S[0, 0], T[0, 0]) <= 1e-10


def test_structural_zero(caplog):
    M = np.array([[1e-17, 1e-10, 1e-3]], dtype=complex)
    structural_zero(M, 0, 0, 1.0)
    assert M[0, 0] == 0
    with caplog.at_level(logging.WARNING):
        structural_zero(M, 0, 1, 1.0, 'H')
    assert M[0, 1] == 0
    assert 'Structural residue' in caplog.text
    with pytest.raises(StructureError):
        structural_zero(M, 0, 2, 1.0)


@pytest.mark.parametrize('pole', [ProjectivePole.finite(1.5 + 0.5j), ProjectivePole.infinite()])
def test_place_pole_encodes_pole(rng, pole):
    H = _random_complex(rng, (4, 4))
    K = _random_complex(rng, (4, 4))
    if pole.is_infinite:
        # Нули, которые размещение бесконечного полюса ожидает в K
        K[3, :] = 0
        K[3, 3] = 1.0

    def eval2(H_now, K_now, off_component):
        return 1.0, 2.0 - 1j, 3.0

    H2, K2 = place_pole(H, K, pole, 1, eval2)
    pole = pole.normalized()
    d = pole.mu * H2[3, :] - pole.nu * K2[3, :]
    scale = np.linalg.norm(H) + np.linalg.norm(K)
    assert np.all(np.abs(d[1:3]) <= 1e-13 * scale)
    assert np.linalg.norm(H2) == pytest.approx(np.linalg.norm(H))
    assert np.linalg.norm(K2) == pytest.approx(np.linalg.norm(K))
    np.testing.assert_allclose(H2[:, 0], H[:, 0])


def test_place_pole_degenerate_rotation(rng):
    H = _random_complex(rng, (3, 3))
    K = _random_complex(rng, (3, 3))
    with pytest.raises(DegenerateRotation):
        place_pole(H, K, ProjectivePole.finite(2.0), 2, lambda *_: (0.0, 0.0, 1.0))
