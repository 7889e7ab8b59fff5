import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncscatter import linalg
from ncscatter.linalg import (
    DimensionError,
    NotHermitian,
    NotPSD,
    hermitian_sqrt,
    operator_norm,
    principal_angles,
    pseudo_inverse,
    random_isometry,
    range_onb,
)

PROJ = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


class TestHermitianSqrt:
    def test_identity(self):
        assert np.allclose(hermitian_sqrt(np.eye(3)), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        s = hermitian_sqrt(np.diag([4.0, 9.0]).astype(complex))
        assert np.allclose(s, np.diag([2.0, 3.0]), atol=1e-14)

    def test_projection_is_own_root(self):
        # oracle: PROJ is idempotent, so it equals its own square root
        assert np.allclose(PROJ @ PROJ, PROJ, atol=1e-15)
        assert np.allclose(hermitian_sqrt(PROJ), PROJ, atol=1e-12)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            hermitian_sqrt(np.diag([1.0, -1.0]))

    def test_small_negative_eigenvalues_clamped(self):
        m = np.diag([1.0, -1e-14]).astype(complex)
        s = hermitian_sqrt(m, tol=1e-10)
        assert np.allclose(s, np.diag([1.0, 0.0]), atol=1e-7)

    def test_floor_scale_zeroes_noise(self):
        noise = np.array([[1e-16, 2e-17], [2e-17, -1e-16]], dtype=complex)
        s = hermitian_sqrt(noise, floor_scale=1.0)
        assert np.all(s == 0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_square_recovers_psd_input(self, seed, n):
        rng = np.random.default_rng(seed)
        a = random_matrix(rng, n, n)
        m = a.conj().T @ a
        s = hermitian_sqrt(m)
        assert operator_norm(s - s.conj().T) < 1e-12 * max(1.0, operator_norm(m))
        assert operator_norm(s @ s - m) < 1e-10 * max(1.0, operator_norm(m))

    def test_empty(self):
        assert hermitian_sqrt(np.zeros((0, 0))).shape == (0, 0)


class TestRangeOnb:
    def test_zero_matrix(self):
        assert range_onb(np.zeros((3, 3))).shape == (3, 0)

    def test_projection_column(self):
        q = range_onb(PROJ)
        expected = np.array([[1.0], [-1.0]]) / np.sqrt(2.0)
        assert q.shape == (2, 1)
        assert np.allclose(q, expected, atol=1e-12)

    def test_identity_full_rank(self):
        q = range_onb(np.eye(2))
        assert q.shape == (2, 2)
        assert np.allclose(q.conj().T @ q, np.eye(2), atol=1e-12)

    def test_phase_convention(self):
        rng = np.random.default_rng(5)
        m = random_matrix(rng, 5, 3)
        q = range_onb(m)
        for k in range(q.shape[1]):
            col = q[:, k]
            first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
            assert abs(first.imag) < 1e-12 and first.real > 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
    def test_spans_column_space(self, seed, rows, cols):
        rng = np.random.default_rng(seed)
        m = random_matrix(rng, rows, cols)
        q = range_onb(m)
        assert operator_norm(q.conj().T @ q - np.eye(q.shape[1])) < 1e-12
        assert operator_norm(q @ (q.conj().T @ m) - m) < 1e-10 * operator_norm(m)


class TestComplementOnb:
    def test_full_frame_has_empty_complement(self):
        q = random_isometry(4, 4, 3)
        assert linalg.complement_onb(q).shape == (4, 0)

    def test_partial_frame(self):
        q = random_isometry(5, 2, 9)
        comp = linalg.complement_onb(q)
        assert comp.shape == (5, 3)
        assert operator_norm(comp.conj().T @ comp - np.eye(3)) < 1e-12
        assert operator_norm(q.conj().T @ comp) < 1e-12

    def test_empty_frame_gives_identity_sized_basis(self):
        comp = linalg.complement_onb(np.zeros((3, 0), dtype=complex))
        assert comp.shape == (3, 3)
        assert operator_norm(comp.conj().T @ comp - np.eye(3)) < 1e-12

    def test_noise_perturbed_full_frame_stays_empty(self):
        # a relative singular-value cutoff on I - q q* would keep noise
        # directions here; the eigenvalue threshold must not
        rng = np.random.default_rng(12)
        q = random_isometry(4, 4, rng)
        q = q + 1e-15 * random_matrix(rng, 4, 4)
        assert linalg.complement_onb(q).shape == (4, 0)


class TestRandomIsometry:
    def test_isometry_property(self):
        v = random_isometry(4, 2, 7)
        assert operator_norm(v.conj().T @ v - np.eye(2)) < 1e-12

    def test_square_is_unitary(self):
        u = random_isometry(3, 3, 11)
        assert abs(abs(np.linalg.det(u)) - 1.0) < 1e-10

    def test_deterministic(self):
        assert np.array_equal(random_isometry(5, 3, 42), random_isometry(5, 3, 42))
        assert not np.allclose(random_isometry(5, 3, 42), random_isometry(5, 3, 43))

    def test_too_many_columns(self):
        with pytest.raises(DimensionError):
            random_isometry(1, 2, 0)

    def test_zero_columns(self):
        assert random_isometry(3, 0, 0).shape == (3, 0)


class TestOperatorNorm:
    def test_values(self):
        assert operator_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-12)
        assert operator_norm(np.diag([2.0, 3.0])) == pytest.approx(3.0, abs=1e-12)
        assert operator_norm(PROJ) == pytest.approx(1.0, abs=1e-10)
        assert operator_norm(np.zeros((0, 3))) == 0.0

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        m = random_matrix(rng, 4, 4)
        u = random_isometry(4, 4, 1)
        v = random_isometry(4, 4, 2)
        assert operator_norm(u @ m @ v) == pytest.approx(operator_norm(m), rel=1e-9)


class TestPseudoInverse:
    def test_identity(self):
        assert np.allclose(pseudo_inverse(np.eye(3)), np.eye(3), atol=1e-12)

    def test_singular_diagonal(self):
        p = pseudo_inverse(np.diag([2.0, 0.0]).astype(complex))
        assert np.allclose(p, np.diag([0.5, 0.0]), atol=1e-12)

    def test_projection(self):
        assert np.allclose(pseudo_inverse(PROJ), PROJ, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
    def test_penrose_identities(self, seed, rows, cols):
        rng = np.random.default_rng(seed)
        m = random_matrix(rng, rows, cols)
        p = pseudo_inverse(m)
        scale = 1e-10 * max(1.0, operator_norm(m) * operator_norm(p))
        assert operator_norm(m @ p @ m - m) < scale
        assert operator_norm(p @ m @ p - p) < scale
        assert operator_norm((m @ p).conj().T - m @ p) < scale
        assert operator_norm((p @ m).conj().T - p @ m) < scale


class TestPrincipalAngles:
    def test_same_space(self):
        q = random_isometry(6, 2, 9)
        assert np.max(principal_angles(q, q)) < 1e-12

    def test_orthogonal_spaces(self):
        q1 = np.eye(4)[:, :2].astype(complex)
        q2 = np.eye(4)[:, 2:].astype(complex)
        assert np.min(principal_angles(q1, q2)) > np.pi / 2 - 1e-12

    def test_rotated_basis_same_span(self):
        q = random_isometry(6, 3, 4)
        u = random_isometry(3, 3, 5)
        assert np.max(principal_angles(q, q @ u)) < 1e-12
