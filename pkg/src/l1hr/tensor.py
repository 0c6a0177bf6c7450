"""Dense third-order complex tensors: unfoldings, mode products, Hankel stacking.

Tensors are plain ``numpy`` arrays of shape ``(I1, I2, I3)`` and dtype
``complex128``.  Modes are numbered 1, 2, 3 as in the usual tensor notation;
array indices are 0-based.

Mode-k unfolding places the mode-k fibers as columns, ordered
lexicographically over the remaining indices with the earlier index varying
slowest.  For mode 1 the fiber ``(i2, i3)`` therefore lands in column
``i2 * I3 + i3``.  With this order

    unfold(A x_2 U2 x_3 U3, 1) == unfold(A, 1) @ kron(U2, U3).T

which is what :func:`kron_others` builds for the orthogonal-iteration engines.
"""
import numpy as np


def as_tensor3(A):
    """Validate and convert to a complex128 third-order array."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 3:
        raise ValueError(f"expected a third-order tensor, got ndim={A.ndim}")
    if 0 in A.shape:
        raise ValueError(f"tensor dimensions must be positive, got {A.shape}")
    return A


def _check_mode(k):
    if k not in (1, 2, 3):
        raise ValueError(f"mode index must be 1, 2 or 3, got {k!r}")
    return k - 1


def unfold(A, k):
    """Mode-`k` unfolding of a third-order tensor.

    Parameters
    ----------
    A : array_like, shape (I1, I2, I3)
    k : {1, 2, 3}

    Returns
    -------
    ndarray, shape (I_k, prod of the other two dims)
    """
    A = as_tensor3(A)
    ax = _check_mode(k)
    return np.moveaxis(A, ax, 0).reshape(A.shape[ax], -1)


def fold(M, k, dims):
    """Inverse of :func:`unfold` for a tensor of shape `dims`."""
    ax = _check_mode(k)
    dims = tuple(int(d) for d in dims)
    M = np.asarray(M, dtype=np.complex128)
    rest = [d for i, d in enumerate(dims) if i != ax]
    if M.shape != (dims[ax], rest[0] * rest[1]):
        raise ValueError(f"matrix of shape {M.shape} cannot fold into {dims} along mode {k}")
    return np.moveaxis(M.reshape(dims[ax], *rest), 0, ax)


def mode_product(A, k, M):
    """Mode-`k` product ``A x_k M`` with ``M`` of shape (R_k, I_k)."""
    A = as_tensor3(A)
    ax = _check_mode(k)
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[1] != A.shape[ax]:
        raise ValueError(
            f"mode-{k} product needs a matrix with {A.shape[ax]} columns, got shape {M.shape}")
    dims = list(A.shape)
    dims[ax] = M.shape[0]
    return fold(M @ unfold(A, k), k, dims)


def kronecker(A, B):
    """Kronecker product of two matrices (block (i, j) is ``A[i, j] * B``)."""
    return np.kron(np.atleast_2d(A), np.atleast_2d(B))


def kron_others(factors, k):
    """Kronecker product of the two factors other than mode `k`.

    The operand order matches the unfolding column order, so that
    ``unfold(A, k) @ kron_others(Us, k).T`` equals the mode-k unfolding of
    ``A`` multiplied by the other two factors along their modes.
    """
    ax = _check_mode(k)
    a, b = (U for i, U in enumerate(factors) if i != ax)
    return kronecker(a, b)


def reconstruct(C, U1, U2, U3):
    """Tucker reconstruction ``C x_1 U1 x_2 U2 x_3 U3``."""
    out = as_tensor3(C)
    for k, U in enumerate((U1, U2, U3), start=1):
        out = mode_product(out, k, U)
    return out


def core(A, U1, U2, U3):
    """Core tensor ``A x_1 U1^H x_2 U2^H x_3 U3^H``."""
    out = as_tensor3(A)
    for k, U in enumerate((U1, U2, U3), start=1):
        out = mode_product(out, k, np.conj(np.asarray(U)).T)
    return out


def build_fs_hankel(samples, I1, I2):
    """Stack Q sample vectors of length N into an I1 x I2 x Q fs-Hankel tensor.

    Entry ``[i1, i2, q]`` (0-based) is ``samples[q, i1 + i2]``, so every frontal
    slice is the Hankel matrix generated by one sample vector.

    Parameters
    ----------
    samples : array_like, shape (Q, N)
    I1, I2 : int
        Slice dimensions with ``I1 + I2 - 1 == N``.
    """
    X = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
    Q, N = X.shape
    if I1 < 1 or I2 < 1 or I1 + I2 - 1 != N:
        raise ValueError(f"need I1 + I2 - 1 == N with I1, I2 >= 1; got I1={I1}, I2={I2}, N={N}")
    idx = np.arange(I1)[:, None] + np.arange(I2)[None, :]
    return np.moveaxis(X[:, idx], 0, 2).copy()
