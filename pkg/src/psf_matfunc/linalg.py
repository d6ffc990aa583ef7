"""Dense spectral primitives: eigendecomposition, matrix functions, resolvents.

Everything downstream (Fourier lattice assembly, contour sums, application
drivers) is verified against these routines, so they are deliberately plain:
dense numpy eigendecompositions and direct solves, with explicit residual
checks instead of silent trust in the factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import NumericalError, PrecondError

# Scaled tolerances used by the contracts below.
_HERM_TOL = 1e-12        # relative Hermiticity / normality test
_RECON_TOL = 1e-10       # eigendecomposition must reconstruct M to this
_RESOLVENT_DIST = 1e-13  # z must keep this relative distance from spectrum
_PSD_CLAMP = 1e-12       # eigenvalues in [-tol*||H||, 0) are clamped to 0


def as_matrix(M: np.ndarray) -> np.ndarray:
    """Validate and return M as a square complex matrix."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PrecondError(f"matrix must be square, got shape {M.shape}")
    if M.size == 0:
        raise PrecondError("matrix must be non-empty")
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(np.asarray(M, dtype=complex).imag)):
        raise PrecondError("matrix entries must be finite")
    return np.asarray(M, dtype=complex)


def is_hermitian(M: np.ndarray, tol: float = _HERM_TOL) -> bool:
    M = np.asarray(M, dtype=complex)
    scale = max(1.0, float(np.abs(M).max()))
    return float(np.abs(M - M.conj().T).max()) <= tol * scale


def is_normal(M: np.ndarray, tol: float = _HERM_TOL) -> bool:
    M = np.asarray(M, dtype=complex)
    scale = max(1.0, float(np.abs(M).max()) ** 2)
    comm = M @ M.conj().T - M.conj().T @ M
    return float(np.abs(comm).max()) <= tol * scale


@dataclass
class SpectralDecomposition:
    """Eigenvalues/eigenbasis of a matrix plus the basis condition number."""

    eigenvalues: np.ndarray      # shape (n,), complex
    basis: np.ndarray            # columns are eigenvectors
    kappa_s: float               # 2-norm condition number of the basis
    hermitian: bool

    @property
    def spectral_radius(self) -> float:
        return float(np.abs(self.eigenvalues).max())


def eig(M: np.ndarray) -> SpectralDecomposition:
    """Diagonalize M, verifying that the factors reconstruct it.

    Hermitian input is detected and routed to the unitary (eigh) path, in
    which case kappa_s is exactly 1. A reconstruction residual above
    1e-10*||M|| (defective or badly conditioned eigenbasis) raises
    NumericalError rather than returning unusable factors.
    """
    M = as_matrix(M)
    herm = is_hermitian(M)
    if herm:
        lam, V = np.linalg.eigh(M)
        lam = lam.astype(complex)
        kappa = 1.0
        recon = (V * lam) @ V.conj().T
    else:
        try:
            lam, V = np.linalg.eig(M)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
            raise NumericalError(f"eigendecomposition failed to converge: {exc}")
        kappa = float(np.linalg.cond(V, 2))
        recon = (V * lam) @ np.linalg.inv(V)
    nrm = float(np.linalg.norm(M, 2))
    resid = float(np.linalg.norm(recon - M, 2))
    if resid > _RECON_TOL * max(nrm, 1e-300):
        raise NumericalError(
            f"eigendecomposition does not reconstruct the matrix: "
            f"residual {resid:.3e} > {_RECON_TOL:.0e}*||M|| (matrix may be defective)")
    return SpectralDecomposition(eigenvalues=lam, basis=V, kappa_s=kappa, hermitian=herm)


def matfun(M: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to M through its eigendecomposition.

    fn receives the eigenvalue vector and must return finite values; any
    non-finite f(lambda) aborts with the offending eigenvalue named.
    """
    dec = eig(M)
    flam = np.asarray(fn(dec.eigenvalues), dtype=complex)
    if flam.shape != dec.eigenvalues.shape:
        raise PrecondError("fn must map the eigenvalue vector elementwise")
    bad = ~np.isfinite(flam)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NumericalError(
            f"fn returned a non-finite value at eigenvalue {dec.eigenvalues[k]}")
    V = dec.basis
    if dec.hermitian:
        out = (V * flam) @ V.conj().T
    else:
        out = np.linalg.solve(V.conj().T, ((V * flam).conj().T)).conj().T
    return out


def resolvent_apply(A: np.ndarray, z: complex, b: np.ndarray,
                    spectrum: np.ndarray | None = None,
                    a_norm: float | None = None) -> np.ndarray:
    """Solve (zI - A) x = b directly, guarding the distance of z to spec(A).

    `spectrum`/`a_norm` may be passed to amortize the eigenvalue computation
    across many shifts (contour sums); they must describe the same A.
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=complex)
    if b.shape != (A.shape[0],):
        raise PrecondError(f"vector shape {b.shape} does not match matrix {A.shape}")
    if spectrum is None:
        spectrum = np.linalg.eigvals(A)
    if a_norm is None:
        a_norm = float(np.linalg.norm(A, 2))
    dist = float(np.abs(np.asarray(spectrum) - z).min())
    if dist <= _RESOLVENT_DIST * a_norm or dist == 0.0:
        raise PrecondError(
            f"shift z={z} is within {_RESOLVENT_DIST:.0e}*||A|| of the spectrum "
            f"(distance {dist:.3e}); resolvent solve refused")
    n = A.shape[0]
    x = np.linalg.solve(z * np.eye(n) - A, b)
    resid = float(np.linalg.norm((z * np.eye(n) - A) @ x - b))
    bnorm = float(np.linalg.norm(b))
    if resid > 1e-10 * max(bnorm, 1e-300):
        raise NumericalError(
            f"resolvent solve residual {resid:.3e} exceeds 1e-10*||b||")
    return x


def evolution_matrix(H: np.ndarray, alpha: float, T: float) -> np.ndarray:
    """Reference dense e^{-T H^alpha} for Hermitian PSD H.

    Eigenvalues in [-1e-12*||H||, 0) are clamped to zero; anything more
    negative is a genuine precondition failure.
    """
    H = as_matrix(H)
    if not is_hermitian(H):
        raise PrecondError("evolution requires a Hermitian matrix")
    if alpha <= 0:
        raise PrecondError(f"alpha must be positive, got {alpha}")
    if T < 0:
        raise PrecondError(f"T must be non-negative, got {T}")
    lam, V = np.linalg.eigh(H)
    nrm = float(np.abs(lam).max()) if lam.size else 0.0
    low = lam < -_PSD_CLAMP * max(nrm, 1.0)
    if np.any(low):
        raise PrecondError(
            f"matrix is not PSD: eigenvalue {lam.min():.6e} below the clamp window")
    lam = np.clip(lam, 0.0, None)
    return (V * np.exp(-T * lam ** alpha)) @ V.conj().T


def exact_evolution(H: np.ndarray, alpha: float, T: float,
                    u0: np.ndarray) -> np.ndarray:
    """Reference evolution e^{-T H^alpha} u0 (see evolution_matrix).

    T = 0 returns u0 unchanged.
    """
    H = as_matrix(H)
    u0 = np.asarray(u0, dtype=complex)
    if u0.shape != (H.shape[0],):
        raise PrecondError("state dimension does not match H")
    if T == 0:
        if not is_hermitian(H):
            raise PrecondError("evolution requires a Hermitian matrix")
        if alpha <= 0:
            raise PrecondError(f"alpha must be positive, got {alpha}")
        return u0.copy()
    return evolution_matrix(H, alpha, T) @ u0


class ResolventSup(NamedTuple):
    """sup of ||(zI-A)^{-1}|| on a circle; `is_bound` marks a non-normal bound."""

    value: float
    is_bound: bool


def resolvent_sup_on_circle(A: np.ndarray, radius: float) -> ResolventSup:
    """Resolvent supremum on |z| = radius.

    Exact for normal A (reciprocal of the spectrum's distance to the circle);
    for non-normal A the kappa_s-weighted value is returned flagged as an
    upper bound rather than a value.
    """
    A = as_matrix(A)
    if radius <= 0:
        raise PrecondError(f"radius must be positive, got {radius}")
    dec = eig(A)
    dists = np.abs(np.abs(dec.eigenvalues) - radius)
    dmin = float(dists.min())
    if dmin <= _RESOLVENT_DIST * max(1.0, radius):
        raise PrecondError(
            f"an eigenvalue lies on the circle |z|={radius} (distance {dmin:.3e})")
    if is_normal(A):
        return ResolventSup(1.0 / dmin, False)
    return ResolventSup(dec.kappa_s / dmin, True)
