import numpy as np
import pytest

from blocklab.block_encoding import extract_block, trivial_encoding
from blocklab.centering import centering_encoding
from blocklab.data_encoding import hermitian_extension, matrix_encoding
from blocklab.matrix_core import is_unitary
from blocklab.spectral import (
    EstimationMethod,
    exact_evolution,
    hermitianize_encoding,
    phase_estimation,
    walk_operator,
)


def hermitian_test_encoding(rng, n=4):
    """Encoding of a random Hermitian matrix through the dilation route."""
    x = rng.standard_normal((n, n))
    return matrix_encoding(hermitian_extension(x)), hermitian_extension(x)


class TestHermitianize:
    def test_preserves_block_and_is_hermitian(self):
        rng = np.random.default_rng(0)
        be, target = hermitian_test_encoding(rng)
        herm = hermitianize_encoding(be)
        u = herm.unitary
        assert np.max(np.abs(u - u.conj().T)) <= 1e-10
        assert is_unitary(u, 1e-10)
        np.testing.assert_allclose(extract_block(herm), extract_block(be),
                                   atol=1e-12)

    def test_already_hermitian_passthrough(self):
        be = trivial_encoding(np.diag([1.0, -1.0]))
        assert hermitianize_encoding(be) is be


class TestWalkOperator:
    def test_identity_encoding_phases_zero(self):
        w = walk_operator(trivial_encoding(np.eye(2)))
        phases = np.angle(np.linalg.eigvals(w))
        assert np.max(np.abs(phases)) <= 1e-12

    def test_centering_eigenphases(self):
        w = walk_operator(centering_encoding(4))
        assert is_unitary(w, 1e-10)
        cosines = np.cos(np.angle(np.linalg.eigvals(w)))
        for lam in (0.0, 1.0):
            assert np.min(np.abs(cosines - lam)) <= 1e-8

    def test_random_hermitian_eigenphases(self):
        rng = np.random.default_rng(1)
        be, target = hermitian_test_encoding(rng)
        w = walk_operator(be)
        cosines = np.cos(np.angle(np.linalg.eigvals(w)))
        for lam in np.linalg.eigvalsh(target):
            assert np.min(np.abs(cosines - lam / be.alpha)) <= 1e-8

    def test_quadratic_identity(self):
        rng = np.random.default_rng(2)
        be, target = hermitian_test_encoding(rng)
        w = walk_operator(be)
        lam, vec = np.linalg.eigh(target)
        dim = w.shape[0]
        sys_dim = target.shape[0]
        for j in range(sys_dim):
            psi = np.zeros(dim, dtype=complex)
            psi[:sys_dim] = vec[:, j]
            resid = w @ (w @ psi) - 2 * (lam[j] / be.alpha) * (w @ psi) + psi
            assert np.linalg.norm(resid) <= 1e-10

    def test_non_hermitian_block_rejected(self):
        rng = np.random.default_rng(3)
        with pytest.raises(ValueError, match="Hermitian"):
            walk_operator(matrix_encoding(rng.standard_normal((4, 4))))


class TestExactEvolution:
    def test_zero_time_is_identity(self):
        be = trivial_encoding(np.diag([1.0, -1.0]))
        np.testing.assert_allclose(exact_evolution(be, 0.0), np.eye(2), atol=1e-14)

    def test_diagonal_half_turn(self):
        be = trivial_encoding(np.diag([1.0, -1.0]))
        np.testing.assert_allclose(exact_evolution(be, np.pi), -np.eye(2),
                                   atol=1e-12)

    def test_eigenvalue_phases(self):
        rng = np.random.default_rng(4)
        be, target = hermitian_test_encoding(rng)
        t = 0.37
        u = exact_evolution(be, t)
        expected = np.sort(t * np.linalg.eigvalsh(target))
        observed = np.sort(np.angle(np.linalg.eigvals(u)))
        np.testing.assert_allclose(observed, expected, atol=1e-9)

    def test_group_law(self):
        rng = np.random.default_rng(5)
        be, _ = hermitian_test_encoding(rng)
        u = exact_evolution(be, 0.3) @ exact_evolution(be, 0.5)
        np.testing.assert_allclose(u, exact_evolution(be, 0.8), atol=1e-9)

    def test_output_unitary(self):
        rng = np.random.default_rng(6)
        be, _ = hermitian_test_encoding(rng)
        assert is_unitary(exact_evolution(be, 1.7), 1e-10)

    def test_non_hermitian_rejected(self):
        rng = np.random.default_rng(7)
        with pytest.raises(ValueError, match="Hermitian"):
            exact_evolution(matrix_encoding(rng.standard_normal((4, 4))), 1.0)


class TestPhaseEstimation:
    def test_identity_gives_zero_phase(self):
        est = phase_estimation(np.eye(2), np.array([1.0, 0.0]), 6)
        assert est.phase == 0.0

    def test_exact_dyadic_phase(self):
        u = np.diag([1.0, np.exp(1j * np.pi / 2)])
        est = phase_estimation(u, np.array([0.0, 1.0]), 8)
        assert est.phase == 0.25
        assert np.isclose(est.distribution.max(), 1.0)
        assert np.isclose(est.distribution.sum(), 1.0)

    def test_nondyadic_rounds_to_nearest_grid_point(self):
        phi = 0.3037
        u = np.diag([np.exp(2j * np.pi * phi)])
        # pad to a 2-dim unitary to keep a nontrivial register
        u2 = np.diag([np.exp(2j * np.pi * phi), 1.0])
        est = phase_estimation(u2, np.array([1.0, 0.0]), 8)
        assert abs(est.phase - phi) <= 2.0 ** -9 + 1e-12

    def test_distribution_is_normalized(self):
        rng = np.random.default_rng(8)
        be, _ = hermitian_test_encoding(rng)
        u = exact_evolution(be, 0.2)
        state = np.zeros(u.shape[0], dtype=complex)
        state[0] = 1.0
        est = phase_estimation(u, state, 7)
        assert np.isclose(est.distribution.sum(), 1.0)

    def test_walk_method_eigenvalue(self):
        rng = np.random.default_rng(9)
        be, target = hermitian_test_encoding(rng)
        w = walk_operator(be)
        lam, vec = np.linalg.eigh(target)
        psi = np.zeros(w.shape[0], dtype=complex)
        psi[: target.shape[0]] = vec[:, -1]
        est = phase_estimation(w, psi, 9, method=EstimationMethod.QUBITIZATION_WALK,
                               alpha=be.alpha)
        resolution = be.alpha * 2 * np.pi * 2.0 ** -10
        assert abs(est.eigenvalue - lam[-1]) <= resolution
        assert abs(est.eigenvalue) <= be.alpha

    def test_evolution_method_signed_eigenvalue(self):
        be = trivial_encoding(np.diag([1.0, -1.0]))
        u = exact_evolution(be, 1.0)
        est = phase_estimation(u, np.array([0.0, 1.0]), 10, alpha=1.0,
                               evolution_time=1.0)
        assert abs(est.eigenvalue - (-1.0)) <= 2 * np.pi * 2.0 ** -10

    def test_sampled_mode_seeded(self):
        u = np.diag([1.0, np.exp(1j * np.pi / 2)])
        a = phase_estimation(u, np.array([0.0, 1.0]), 6, shots=64, seed=5)
        b = phase_estimation(u, np.array([0.0, 1.0]), 6, shots=64, seed=5)
        assert a.phase == b.phase == 0.25

    def test_eigenvalue_within_alpha(self):
        rng = np.random.default_rng(10)
        be, target = hermitian_test_encoding(rng)
        t_evo = 1.0 / be.alpha
        u = exact_evolution(be, t_evo)
        lam, vec = np.linalg.eigh(target)
        for j in (0, target.shape[0] - 1):
            psi = np.zeros(u.shape[0], dtype=complex)
            psi[: target.shape[0]] = vec[:, j]
            est = phase_estimation(u, psi, 8, alpha=be.alpha,
                                   evolution_time=t_evo)
            assert abs(est.eigenvalue) <= be.alpha

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            phase_estimation(np.diag([1.0, 2.0]), np.array([1.0, 0.0]), 4)

    def test_unnormalized_state_rejected(self):
        with pytest.raises(ValueError):
            phase_estimation(np.eye(2), np.array([1.0, 1.0]), 4)
