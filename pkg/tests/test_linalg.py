import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nck.exceptions import NonFinite, NonHermitian, NonPositiveC, NonSquare
from nck.linalg import (
    clip_remainder,
    hard_clip,
    herm_eig,
    mat_func,
    op_norm,
    psd_ge,
    trace_norm,
    truncate_offdiag,
)

RNG = np.random.default_rng(20240901)


def random_hermitian(n, rng=RNG):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def random_complex(shape, rng=RNG):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestHermEig:
    def test_identity(self):
        eig = herm_eig(np.eye(2))
        assert np.allclose(eig.eigenvalues, [1.0, 1.0])
        u = eig.eigenvectors
        assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12

    def test_diagonal_sorted_ascending(self):
        eig = herm_eig(np.diag([3.0, -1.0]))
        assert np.allclose(eig.eigenvalues, [-1.0, 3.0])

    def test_reconstruction_random(self):
        for n in (2, 5, 8):
            h = random_hermitian(n)
            eig = herm_eig(h)
            scale = 1.0 + op_norm(h)
            assert op_norm(eig.reconstruct() - h) <= 1e-10 * scale
            assert op_norm(eig.eigenvectors.conj().T @ eig.eigenvectors - np.eye(n)) <= 1e-10

    def test_non_square_rejected(self):
        with pytest.raises(NonSquare):
            herm_eig(np.zeros((2, 3)))

    def test_non_finite_rejected(self):
        with pytest.raises(NonFinite):
            herm_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestMatFunc:
    def test_identity_map_fixes_input(self):
        for n in (2, 16, 64):
            h = random_hermitian(n)
            out = mat_func(h, lambda t: t)
            assert op_norm(out - h) <= 1e-10 * (1.0 + op_norm(h))

    def test_sqrt_of_diagonal(self):
        out = mat_func(np.diag([4.0, 9.0]), np.sqrt)
        assert np.allclose(out, np.diag([2.0, 3.0]))

    def test_clip_profile_on_diagonal(self):
        out = mat_func(np.diag([3.0, -0.5]), lambda t: hard_clip(t, 1.0))
        assert np.allclose(out, np.diag([1.0, -0.5]))

    def test_scalar_callable_accepted(self):
        out = mat_func(np.diag([1.0, 4.0]), lambda t: float(t) ** 2)
        assert np.allclose(out, np.diag([1.0, 16.0]))


class TestClip:
    def test_inside_band(self):
        assert hard_clip(0.3, 1.0) == pytest.approx(0.3)
        assert clip_remainder(0.3, 1.0) == pytest.approx(0.0)

    def test_clamped(self):
        assert hard_clip(5.0, 1.0) == pytest.approx(1.0)
        assert clip_remainder(5.0, 1.0) == pytest.approx(4.0)

    def test_remainder_quadratic_bound_on_grid(self):
        t = np.linspace(-100.0, 100.0, 20001)
        for c in (0.5, 1.0 / np.sqrt(2.0), 1.0, np.sqrt(3.0) / 2.0):
            assert (np.abs(clip_remainder(t, c)) <= t**2 / (4.0 * c) + 1e-12).all()

    @given(st.floats(-1e6, 1e6), st.floats(1e-3, 1e3))
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_remainder_quadratic_bound_hypothesis(self, t, c):
        assert abs(clip_remainder(t, c)) <= t * t / (4.0 * c) + 1e-9

    def test_nonpositive_level_rejected(self):
        with pytest.raises(NonPositiveC):
            hard_clip(1.0, 0.0)
        with pytest.raises(NonPositiveC):
            truncate_offdiag(np.eye(2), -1.0)


def dilation(y):
    p, q = y.shape
    d = np.zeros((p + q, p + q), dtype=complex)
    d[:q, q:] = y.conj().T
    d[q:, :q] = y
    return d


class TestTruncateOffdiag:
    def test_zero(self):
        assert np.abs(truncate_offdiag(np.zeros((3, 3)), 1.0)).max() == 0.0

    def test_scalar_inside_band(self):
        # dilation of the scalar 0.5 has eigenvalues +-0.5: nothing clipped
        z = truncate_offdiag(np.array([[0.5 + 0j]]), 1.0)
        assert z == pytest.approx(0.5)

    def test_scalar_clamped(self):
        # dilation eigenvalues +-3 clamp to +-1
        z = truncate_offdiag(np.array([[3.0 + 0j]]), 1.0)
        assert z == pytest.approx(1.0)

    def test_dilation_spectrum_symmetric(self):
        for n in (2, 4, 7):
            y = random_complex((n, n))
            lam = np.linalg.eigvalsh(dilation(y))
            assert np.abs(lam + lam[::-1]).max() <= 1e-9 * (1.0 + np.abs(lam).max())

    def test_norm_contract(self):
        for _ in range(20):
            n = int(RNG.integers(1, 6))
            y = 3.0 * random_complex((n, n))
            for c in (0.3, 1.0 / np.sqrt(2.0), 2.0):
                assert op_norm(truncate_offdiag(y, c)) <= c + 1e-9

    def test_rectangular_blocks(self):
        y = random_complex((2, 5))
        z = truncate_offdiag(y, 0.7)
        assert z.shape == (2, 5)
        assert op_norm(z) <= 0.7 + 1e-9

    def test_batch_matches_loop(self):
        ys = random_complex((6, 3, 3))
        batch = truncate_offdiag(ys, 0.9)
        for k in range(6):
            assert np.abs(batch[k] - truncate_offdiag(ys[k], 0.9)).max() < 1e-12

    def test_quadratic_residual_psd_bounds(self):
        # (Y-Z)*(Y-Z) is dominated by (Y*Y)^2 / (16 C^2), and likewise for
        # the row Gram; this is the corrector's whole engine.
        for _ in range(25):
            n = int(RNG.integers(1, 5))
            y = 2.0 * random_complex((n, n))
            c = float(RNG.uniform(0.3, 1.5))
            z = truncate_offdiag(y, c)
            r = y - z
            gram_col = y.conj().T @ y
            gram_row = y @ y.conj().T
            assert psd_ge(gram_col @ gram_col / (16 * c * c), r.conj().T @ r)
            assert psd_ge(gram_row @ gram_row / (16 * c * c), r @ r.conj().T)


class TestNorms:
    def test_trace_norm_diagonal(self):
        assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)

    def test_op_norm_matrix_unit(self):
        e12 = np.zeros((2, 2))
        e12[0, 1] = 1.0
        assert op_norm(e12) == pytest.approx(1.0)

    def test_psd_ge(self):
        assert psd_ge(2 * np.eye(3), np.eye(3))
        assert not psd_ge(np.eye(3), 2 * np.eye(3))

    def test_psd_ge_rejects_non_hermitian(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(NonHermitian):
            psd_ge(bad, np.zeros((2, 2)))

    def test_non_finite_rejected(self):
        with pytest.raises(NonFinite):
            op_norm(np.array([[np.inf]]))
