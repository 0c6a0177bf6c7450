"""Complex L1-norm PCA and the classical SVD baseline.

The L1 principal subspace of ``X`` (D x N) maximises ``||P^H X||_1`` over
semi-unitary ``P`` (D x K).  :func:`l1pca` runs the sign/polar fixed-point
iteration

    B <- csgn(X^H P),    P <- unt(X B)

which never decreases ``||P^H X||_1`` and stops once the nuclear norm
``||X B||_*`` settles.
"""
from typing import NamedTuple

import numpy as np
from scipy.linalg import get_lapack_funcs

DEFAULT_DELTA = 1e-6
DEFAULT_MAX_ITERS = 500
RANK_TOL = 1e-12

_GESDD, _GEQRF, _UNGQR = get_lapack_funcs(("gesdd", "geqrf", "ungqr"), dtype=np.complex128)


def csgn(A):
    """Entrywise complex sign ``A / |A|``; zero entries map to 1."""
    A = np.asarray(A, dtype=np.complex128)
    mag = np.abs(A)
    # real division per part: complex / real overflows for subnormal entries
    out = np.empty_like(A)
    if mag.all():
        out.real = A.real / mag
        out.imag = A.imag / mag
        return out
    nz = mag > 0
    out.real = np.divide(A.real, mag, out=np.ones_like(mag), where=nz)
    out.imag = np.divide(A.imag, mag, out=np.zeros_like(mag), where=nz)
    return out


def l1_norm(A):
    return float(np.abs(A).sum())


def frob_norm(A):
    return float(np.linalg.norm(A))


def nuclear_norm(A):
    return float(np.linalg.svd(np.asarray(A), compute_uv=False).sum())


def _complete_basis(Q, n):
    """Extend the orthonormal columns of ``Q`` to `n` columns.

    New directions come from orthogonalising the standard basis vectors
    e_0, e_1, ... against the existing columns in order (Householder QR of
    ``[Q | I]``), so the completion is deterministic.
    """
    m, r = Q.shape
    qr, tau, _, _ = _GEQRF(np.hstack([Q, np.eye(m, dtype=np.complex128)]))
    full, _, _ = _UNGQR(qr[:, :n], tau[:n])
    return np.hstack([Q, full[:, r:n]])


def _gesdd(A):
    return _GESDD(A, compute_uv=1, full_matrices=0)


def _polar(A, tol=RANK_TOL):
    """Return ``(unt(A), ||A||_*)`` from one thin SVD."""
    U, s, Vh, info = _gesdd(A)
    if info != 0:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    nuc = float(s.sum())
    r = int(np.count_nonzero(s > tol * s[0])) if s[0] > 0 else 0
    if r == 0:
        raise ValueError("unt is undefined for an all-zero matrix")
    if r < len(s):
        n = len(s)
        U = _complete_basis(U[:, :r], n)
        V = _complete_basis(Vh[:r].conj().T, n)
        Vh = V.conj().T
    return U @ Vh, nuc


def unt(A):
    """Closest semi-unitary matrix ``U V^H`` from the thin SVD ``A = U S V^H``.

    When ``A`` is numerically rank deficient the missing singular directions
    are filled in deterministically so the result still has orthonormal
    columns (for tall or square ``A``).
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError("unt expects a matrix")
    return _polar(A)[0]


def svd_pca(X, K):
    """First `K` left singular vectors of `X` (singular values descending)."""
    X = np.asarray(X, dtype=np.complex128)
    D = X.shape[0]
    if not 1 <= K <= D:
        raise ValueError(f"rank K={K} must lie in [1, {D}]")
    U, _, _ = np.linalg.svd(X, full_matrices=K > X.shape[1])
    return U[:, :K]


class L1PcaResult(NamedTuple):
    P: np.ndarray
    objective: float
    iters: int
    nuclear_trace: list


def l1pca(X, K, P0=None, delta=DEFAULT_DELTA, max_iters=DEFAULT_MAX_ITERS):
    """L1-norm principal subspace of a complex data matrix.

    Parameters
    ----------
    X : array_like, shape (D, N)
        Data matrix, one sample per column.
    K : int
        Number of components.
    P0 : array_like, shape (D, K), optional
        Semi-unitary starting point. Defaults to :func:`svd_pca`.
    delta : float
        Stop when successive nuclear norms ``||X B||_*`` differ by at most this.
    max_iters : int
        Cap on the number of sign/polar updates after the initial one.

    Returns
    -------
    L1PcaResult
        ``P`` (D x K, orthonormal columns), ``objective = ||P^H X||_1``,
        the number of iterations and the nondecreasing sequence of
        ``||X B||_*`` values.
    """
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim != 2:
        raise ValueError("X must be a matrix")
    if not np.any(X):
        raise ValueError("L1-PCA of an all-zero matrix is undefined")
    if delta <= 0 or max_iters < 1:
        raise ValueError("need delta > 0 and max_iters >= 1")
    D = X.shape[0]
    if not 1 <= K <= D:
        raise ValueError(f"rank K={K} must lie in [1, {D}]")
    P = svd_pca(X, K) if P0 is None else np.asarray(P0, dtype=np.complex128)
    if P.shape != (D, K):
        raise ValueError(f"initial basis has shape {P.shape}, expected {(D, K)}")

    Xh = X.conj().T
    P, nuc = _polar(X @ csgn(Xh @ P))
    trace = [nuc]
    it = 0
    while True:
        P, nuc = _polar(X @ csgn(Xh @ P))
        trace.append(nuc)
        it += 1
        if abs(trace[-1] - trace[-2]) <= delta or it >= max_iters:
            break
    return L1PcaResult(P, l1_norm(P.conj().T @ X), it, trace)
