"""Tensor algebra walkthrough: unfoldings, mode products and fs-Hankel tensors."""
import numpy as np

from l1hr import build_fs_hankel, fold, kron_others, mode_product, reconstruct, unfold

# a 2 x 2 x 2 tensor with entries 1..8 laid out so that A[i, j, k] = 1 + i + 2j + 4k
A = np.arange(1, 9).reshape(2, 2, 2, order="F").astype(complex)

# mode-1 unfolding: rows follow the first index, columns run over (i2, i3)
# with the second index varying slowest
print("unfold(A, 1) =\n", unfold(A, 1).real)
print("unfold(A, 2) =\n", unfold(A, 2).real)
assert np.array_equal(fold(unfold(A, 3), 3, A.shape), A)

# a mode product acts on one unfolding: unfold(A x_k M, k) = M @ unfold(A, k)
M = np.array([[1.0, 1.0], [0.0, 1.0], [2.0, -1.0]])
B = mode_product(A, 2, M)
print("A x_2 M has shape", B.shape)
print("identity error:", np.abs(unfold(B, 2) - M @ unfold(A, 2)).max())

# Tucker model: one unfolding of C x1 U1 x2 U2 x3 U3 factors through a Kronecker product
rng = np.random.default_rng(0)
C = rng.standard_normal((2, 3, 2)) + 1j * rng.standard_normal((2, 3, 2))
Us = [rng.standard_normal((d, r)) for d, r in ((4, 2), (5, 3), (3, 2))]
T = reconstruct(C, *Us)
lhs = unfold(T, 1)
rhs = Us[0] @ unfold(C, 1) @ kron_others(Us, 1).T
print("Kronecker pattern error:", np.abs(lhs - rhs).max())

# fs-Hankel tensor: each frontal slice is the Hankel matrix of one symbol's samples
x = np.array([[1, 2, 3, 4, 5], [10, 20, 30, 40, 50]], dtype=complex)
H = build_fs_hankel(x, 3, 3)
print("frontal slice 0:\n", H[:, :, 0].real)
print("frontal slice 1:\n", H[:, :, 1].real)
