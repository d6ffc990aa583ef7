import numpy as np
import pytest

from psf_matfunc.errors import NumericalError, PrecondError
from psf_matfunc.instances import (random_diagonalizable, random_hermitian,
                                   random_normal_matrix, random_psd,
                                   random_state, random_unitary)
from psf_matfunc.linalg import (eig, evolution_matrix, exact_evolution,
                                is_hermitian, is_normal, matfun,
                                resolvent_apply, resolvent_sup_on_circle)


def test_eig_hermitian_unitary_basis():
    H = random_hermitian(np.random.default_rng(0), 8)
    dec = eig(H)
    assert dec.hermitian
    assert dec.kappa_s == pytest.approx(1.0, abs=1e-8)
    assert np.abs(dec.eigenvalues.imag).max() < 1e-12
    recon = (dec.basis * dec.eigenvalues) @ dec.basis.conj().T
    assert np.linalg.norm(recon - H, 2) < 1e-12


def test_eig_defective_matrix_refused():
    J = np.array([[0.5, 1.0], [0.0, 0.5]], dtype=complex)
    with pytest.raises(NumericalError):
        eig(J)


def test_matfun_ring_homomorphism():
    """f(M) g(M) = (f g)(M) for commuting (same-M) evaluations."""
    f = np.exp
    g = lambda z: 1.0 / (z + 3.0)
    for seed in range(6):
        M = random_diagonalizable(np.random.default_rng(seed), 8)
        lhs = matfun(M, f) @ matfun(M, g)
        rhs = matfun(M, lambda z: f(z) * g(z))
        scale = np.linalg.norm(lhs, 2)
        assert np.linalg.norm(lhs - rhs, 2) <= 1e-10 * max(scale, 1.0)


def test_matfun_polynomial_against_horner():
    A = random_normal_matrix(np.random.default_rng(3), 6, spectral_radius=0.8)
    F = matfun(A, lambda z: 1.0 + 2.0 * z + 3.0 * z**3)
    direct = np.eye(6) + 2.0 * A + 3.0 * np.linalg.matrix_power(A, 3)
    assert np.linalg.norm(F - direct, 2) < 1e-12


def test_resolvent_matches_matfun():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        A = random_normal_matrix(rng, n, spectral_radius=float(rng.uniform(0.3, 0.9)))
        b = random_state(rng, n)
        z = complex(rng.uniform(1.2, 3.0), rng.uniform(-1.0, 1.0))
        x = resolvent_apply(A, z, b)
        ref = matfun(A, lambda lam: 1.0 / (z - lam)) @ b
        assert np.linalg.norm(x - ref) <= 1e-10


def test_resolvent_shift_on_spectrum_refused():
    A = np.diag([0.5, -0.2]).astype(complex)
    b = np.array([1.0, 1.0], dtype=complex)
    with pytest.raises(PrecondError):
        resolvent_apply(A, 0.5, b)


def test_resolvent_shape_check():
    A = np.eye(3, dtype=complex)
    with pytest.raises(PrecondError):
        resolvent_apply(A, 2.0, np.ones(4, dtype=complex))


def test_evolution_norm_non_increasing():
    H = random_psd(np.random.default_rng(1), 8)
    u0 = random_state(np.random.default_rng(2), 8)
    norms = [np.linalg.norm(exact_evolution(H, 0.75, T, u0))
             for T in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_evolution_t0_identity():
    H = random_psd(np.random.default_rng(5), 5)
    u0 = random_state(np.random.default_rng(6), 5)
    np.testing.assert_array_equal(exact_evolution(H, 1.0, 0.0, u0), u0)


def test_evolution_matrix_diagonal_oracle():
    H = np.diag([0.0, 0.25, 1.0]).astype(complex)
    E = evolution_matrix(H, 0.5, 2.0)
    np.testing.assert_allclose(np.diag(E).real,
                               np.exp(-2.0 * np.array([0.0, 0.5, 1.0])),
                               rtol=1e-13)


def test_evolution_psd_clamp_window():
    """Tiny negative eigenvalues (symmetrization noise) are clamped; genuinely
    indefinite input is refused."""
    U = random_unitary(np.random.default_rng(8), 4)
    lam = np.array([-5e-13, 0.1, 0.5, 1.0])
    H = (U * lam) @ U.conj().T
    evolution_matrix(H, 1.0, 1.0)  # inside the clamp window
    lam_bad = np.array([-1e-6, 0.1, 0.5, 1.0])
    Hbad = (U * lam_bad) @ U.conj().T
    with pytest.raises(PrecondError):
        evolution_matrix(Hbad, 1.0, 1.0)


def test_evolution_rejects_non_hermitian():
    A = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(PrecondError):
        evolution_matrix(A, 1.0, 1.0)


def test_resolvent_sup_normal_exact():
    A = np.diag([0.5, -0.3, 0.1j]).astype(complex)
    sup = resolvent_sup_on_circle(A, 1.2)
    assert not sup.is_bound
    assert sup.value == pytest.approx(1.0 / 0.7, rel=1e-12)


def test_resolvent_sup_nonnormal_flagged():
    A = random_diagonalizable(np.random.default_rng(11), 6,
                              spectral_radius=0.5, basis_spread=0.4)
    if is_normal(A):  # pragma: no cover - spread 0.4 is plenty
        pytest.skip("instance happened to be normal")
    sup = resolvent_sup_on_circle(A, 1.5)
    assert sup.is_bound
    # the reported value must dominate a dense sampling of the true sup
    zs = 1.5 * np.exp(2j * np.pi * np.arange(64) / 64)
    true = max(np.linalg.norm(np.linalg.inv(z * np.eye(6) - A), 2) for z in zs)
    assert sup.value >= true * (1.0 - 1e-10)


def test_hermitian_and_normal_predicates():
    H = random_hermitian(np.random.default_rng(1), 5)
    assert is_hermitian(H)
    assert is_normal(H)
    A = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert not is_hermitian(A)
    assert not is_normal(A)
