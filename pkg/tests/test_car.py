import itertools

import numpy as np
import pytest

from nck import caps
from nck.car import (
    SubspaceModel,
    anticommutation_check,
    car_system,
    coefficient_functional,
    embed_tuple,
    extract_coefficients,
    fourth_moment_check,
    generator_monomial,
    jordan_wigner,
    npoint_function,
    orthogonality_check,
    second_moment_check,
    state_eval,
    state_weight_check,
    subspace_to_weights,
)
from nck.exceptions import DTooLarge, IdentityViolation, NotOrthonormal, SizeMismatch
from nck.norms import weighted_triple_norm

RNG = np.random.default_rng(2718)


def random_tuple(d, n, rng=RNG):
    return rng.standard_normal((d, n, n)) + 1j * rng.standard_normal((d, n, n))


def random_system(d, rng=RNG):
    return car_system(rng.uniform(0.05, 0.95, d))


class TestSubspaceToWeights:
    def test_pure_row_basis_gives_zero_weights(self):
        model = SubspaceModel(
            basis_row=np.eye(3, 5, dtype=complex), basis_col=np.zeros((3, 5), dtype=complex)
        )
        nu, _rot = subspace_to_weights(model)
        assert np.abs(nu).max() < 1e-12

    def test_balanced_basis_gives_half_weights(self):
        d = 3
        model = SubspaceModel(
            basis_row=np.eye(d, d, dtype=complex) / np.sqrt(2),
            basis_col=np.eye(d, d, dtype=complex) / np.sqrt(2),
        )
        nu, _rot = subspace_to_weights(model)
        assert np.abs(nu - 0.5).max() < 1e-12

    def test_random_subspace_matches_gram_oracle(self):
        # orthonormal 2-frame in C^8, split into halves of size 4
        z = RNG.standard_normal((8, 2)) + 1j * RNG.standard_normal((8, 2))
        q, _ = np.linalg.qr(z)
        model = SubspaceModel(basis_row=q[:4].T.copy(), basis_col=q[4:].T.copy())
        nu, rot = subspace_to_weights(model)
        gram_col = model.basis_col @ model.basis_col.conj().T
        oracle = np.linalg.eigvalsh(gram_col)
        assert np.abs(nu - oracle).max() < 1e-10
        assert nu.min() >= -1e-12 and nu.max() <= 1.0 + 1e-12
        # the rotation actually diagonalizes the Gram
        diag = rot.conj().T @ gram_col @ rot
        assert np.abs(diag - np.diag(nu)).max() < 1e-10

    def test_not_orthonormal_rejected(self):
        model = SubspaceModel(
            basis_row=np.eye(2, 3, dtype=complex), basis_col=np.eye(2, 3, dtype=complex)
        )
        with pytest.raises(NotOrthonormal):
            subspace_to_weights(model)


class TestJordanWigner:
    def test_d1_generator(self):
        (a,) = jordan_wigner(1)
        assert np.array_equal(a, np.array([[0, 1], [0, 0]], dtype=complex))
        assert np.array_equal(a @ a.conj().T + a.conj().T @ a, np.eye(2))

    def test_d2_anticommutator_vanishes(self):
        a1, a2 = jordan_wigner(2)
        assert np.abs(a1 @ a2 + a2 @ a1).max() == 0.0

    def test_d2_occupation_form(self):
        a1, _ = jordan_wigner(2)
        assert np.array_equal(a1 @ a1.conj().T, np.diag([1.0, 1.0, 0.0, 0.0]))

    @pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
    def test_relations_exact(self, d):
        # every entry of the generators is 0 or +-1, so the relations hold
        # with zero floating-point error (spot checked up to the d = 10 cap;
        # the dense d = 10 sweep takes ~40 s and is left to `nck verify`)
        report = anticommutation_check(car_system(np.full(d, 0.5)))
        assert report.max_deviation == 0.0

    def test_cap(self):
        with pytest.raises(DTooLarge):
            jordan_wigner(caps.car_dim_cap() + 1)

    def test_env_override_bounded(self, monkeypatch):
        monkeypatch.setenv("NCK_MAX_DIM", "11")
        assert caps.car_dim_cap() == 11
        monkeypatch.setenv("NCK_MAX_DIM", "40")
        assert caps.car_dim_cap() == 12
        monkeypatch.delenv("NCK_MAX_DIM")
        assert caps.car_dim_cap() == 10


class TestState:
    def test_density_is_a_state(self):
        sys = random_system(3)
        rho = sys.density
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert np.linalg.eigvalsh(rho).min() >= -1e-15
        assert state_eval(sys, np.eye(sys.dim)) == pytest.approx(1.0)

    def test_two_point_values(self):
        sys = random_system(3)
        for i, gi in enumerate(sys.generators):
            for j, gj in enumerate(sys.generators):
                v = state_eval(sys, gi.conj().T @ gj)
                assert v == pytest.approx(sys.nu[i] if i == j else 0.0, abs=1e-13)
                v = state_eval(sys, gi @ gj.conj().T)
                assert v == pytest.approx((1 - sys.nu[i]) if i == j else 0.0, abs=1e-13)

    def test_second_moment_check_passes(self):
        assert second_moment_check(random_system(4)).passed

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            state_eval(random_system(2), np.eye(3))


class TestNPointFunction:
    def test_one_point(self):
        sys = random_system(3)
        for i in range(3):
            assert npoint_function(sys, [i], [i]) == pytest.approx(sys.nu[i])

    def test_particle_number_mismatch(self):
        sys = random_system(2)
        assert npoint_function(sys, [0], [0, 1]) == 0.0

    def test_two_point_cross_check_against_trace(self):
        sys = car_system([0.35, 0.65])
        det = npoint_function(sys, [1, 0], [0, 1])
        direct = state_eval(sys, generator_monomial(sys, [1, 0], [0, 1]))
        assert det == pytest.approx(sys.nu[0] * sys.nu[1], abs=1e-13)
        assert det == pytest.approx(direct, abs=1e-13)

    def test_random_monomials_match_trace(self):
        sys = random_system(4)
        for _ in range(40):
            k = int(RNG.integers(0, 3))
            m = int(RNG.integers(0, 3))
            create = list(RNG.integers(0, 4, size=k))
            annihilate = list(RNG.integers(0, 4, size=m))
            det = npoint_function(sys, create, annihilate)
            direct = state_eval(sys, generator_monomial(sys, create, annihilate))
            assert det == pytest.approx(direct, abs=1e-12)


class TestCoefficientFunctional:
    def test_delta_on_generators(self):
        sys = random_system(3)
        for i in range(3):
            for j, gj in enumerate(sys.generators):
                assert coefficient_functional(sys, i, gj) == pytest.approx(
                    1.0 if i == j else 0.0, abs=1e-13
                )

    def test_identity_and_adjoint_vanish(self):
        sys = random_system(2)
        assert coefficient_functional(sys, 0, np.eye(sys.dim)) == pytest.approx(0.0, abs=1e-14)
        a0 = sys.generators[0]
        assert coefficient_functional(sys, 0, a0.conj().T) == pytest.approx(0.0, abs=1e-14)

    def test_vanishes_on_even_monomials(self):
        sys = random_system(3)
        gens = sys.generators
        letters = [g for g in gens] + [g.conj().T for g in gens]
        for length in (0, 2, 4):
            for combo in itertools.product(range(len(letters)), repeat=length):
                word = np.eye(sys.dim, dtype=complex)
                for idx in combo:
                    word = word @ letters[idx]
                for i in range(sys.d):
                    assert abs(coefficient_functional(sys, i, word)) < 1e-12


class TestExtractCoefficients:
    def test_inverts_embedding(self):
        sys = random_system(3)
        y = random_tuple(3, 2)
        assert np.abs(extract_coefficients(sys, embed_tuple(sys, y)) - y).max() < 1e-13

    def test_identity_maps_to_zero(self):
        sys = random_system(2)
        x = np.kron(np.eye(2), np.eye(sys.dim))
        assert np.abs(extract_coefficients(sys, x)).max() < 1e-14

    def test_even_monomial_maps_to_zero(self):
        sys = random_system(2)
        y = random_tuple(1, 2)[0]
        x = np.kron(y, sys.generators[0] @ sys.generators[1])
        assert np.abs(extract_coefficients(sys, x)).max() < 1e-14

    def test_norm_dominates_weighted_readout(self):
        for _ in range(10):
            d, n = int(RNG.integers(1, 5)), int(RNG.integers(1, 4))
            sys = random_system(d)
            x = RNG.standard_normal((n * sys.dim, n * sys.dim)) + 1j * RNG.standard_normal(
                (n * sys.dim, n * sys.dim)
            )
            readout = extract_coefficients(sys, x)
            assert np.linalg.norm(x, 2) >= weighted_triple_norm(readout, sys.nu) - 1e-9

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            extract_coefficients(random_system(2), np.eye(6))


class TestStateWeightCheck:
    def test_hand_case_d1(self):
        sys = car_system([0.5])
        report = state_weight_check(sys)
        assert report.max_deviation == 0.0
        # hand check with b = the generator: state(a* a) = nu = nu * phi(a)
        a = sys.generators[0]
        assert state_eval(sys, a.conj().T @ a) == pytest.approx(
            sys.nu[0] * coefficient_functional(sys, 0, a)
        )

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_random_weights(self, d):
        report = state_weight_check(random_system(d))
        assert report.passed and report.max_deviation <= 1e-12

    def test_all_matrix_units_d2(self):
        # exhaustive sweep over the 16 matrix units, both identities
        sys = car_system([0.3, 0.8])
        q = sys.dim
        for i, gi in enumerate(sys.generators):
            for p in range(q):
                for r in range(q):
                    b = np.zeros((q, q), dtype=complex)
                    b[p, r] = 1.0
                    phi = coefficient_functional(sys, i, b)
                    left = state_eval(sys, gi.conj().T @ b)
                    right = state_eval(sys, b @ gi.conj().T)
                    assert left == pytest.approx(sys.nu[i] * phi, abs=1e-13)
                    assert right == pytest.approx((1 - sys.nu[i]) * phi, abs=1e-13)


class TestOrthogonality:
    def test_norm_value_d2(self):
        sys = car_system([0.3, 0.7])
        a1, a2 = sys.generators
        f12 = a1.conj().T @ a2
        norm2 = state_eval(sys, f12.conj().T @ f12)
        assert norm2 == pytest.approx(0.7 * 0.7, abs=1e-13)

    def test_cross_terms_vanish(self):
        sys = car_system([0.3, 0.7])
        a1, a2 = sys.generators
        f11 = a1.conj().T @ a1 - sys.nu[0] * np.eye(sys.dim)
        f22 = a2.conj().T @ a2 - sys.nu[1] * np.eye(sys.dim)
        assert abs(state_eval(sys, f22.conj().T @ f11)) < 1e-13

    def test_centered_means_vanish(self):
        sys = random_system(3)
        for i, gi in enumerate(sys.generators):
            for j, gj in enumerate(sys.generators):
                f = gi.conj().T @ gj - (sys.nu[i] if i == j else 0.0) * np.eye(sys.dim)
                assert abs(state_eval(sys, f)) < 1e-13

    @pytest.mark.parametrize("d", [1, 2, 4])
    def test_full_report(self, d):
        report = orthogonality_check(random_system(d))
        assert report.passed and report.max_deviation <= 1e-12


class TestFourthMoment:
    def test_scalar_half_weight(self):
        sys = car_system([0.5])
        y = np.ones((1, 1, 1), dtype=complex)
        big = embed_tuple(sys, y)
        cc = big.conj().T @ big
        value = np.trace(sys.density @ cc @ cc)
        assert value == pytest.approx(0.5)  # nu(1-nu) + nu^2 at nu = 1/2
        assert fourth_moment_check(sys, y).passed

    @pytest.mark.parametrize("d,n", [(1, 1), (2, 2), (3, 2), (4, 3)])
    def test_random(self, d, n):
        report = fourth_moment_check(random_system(d), random_tuple(d, n))
        assert report.passed and report.max_deviation <= 1e-11

    def test_corrupted_generator_detected(self):
        sys = random_system(2)
        bad = car_system(sys.nu)
        gens = list(bad.generators)
        gens[0] = gens[0] + 1e-3 * np.eye(bad.dim)
        corrupted = type(bad)(nu=bad.nu, generators=tuple(gens), density=bad.density)
        with pytest.raises(IdentityViolation):
            anticommutation_check(corrupted)


class TestIndependenceAtHalfWeights:
    def test_joint_moments_factor(self):
        d = 4
        sys = car_system(np.full(d, 0.5))
        occ = [g @ g.conj().T for g in sys.generators]
        for r in range(1, d + 1):
            for subset in itertools.combinations(range(d), r):
                word = np.eye(sys.dim, dtype=complex)
                for i in subset:
                    word = word @ occ[i]
                joint = state_eval(sys, word)
                product = np.prod([state_eval(sys, occ[i]) for i in subset])
                assert joint == pytest.approx(product, abs=1e-13)
                assert joint == pytest.approx(0.5 ** len(subset), abs=1e-13)
