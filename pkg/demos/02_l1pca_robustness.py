"""L1-norm PCA versus SVD on data with a few gross outliers.

Inliers live in a 2-D subspace of C^8; a handful of columns are replaced by
large random vectors.  The SVD subspace tilts toward the outliers, the L1
subspace mostly ignores them.
"""
import numpy as np

from l1hr import l1pca, svd_pca


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def subspace_error(P, Q):
    return np.linalg.norm(P @ P.conj().T - Q @ Q.conj().T)


rng = np.random.default_rng(1)
D, N, K = 8, 60, 2
truth = np.linalg.qr(crandn(rng, D, K))[0]
X = truth @ crandn(rng, K, N) + 0.05 * crandn(rng, D, N)

for n_out in (0, 2, 4, 8):
    Y = X.copy()
    cols = rng.choice(N, size=n_out, replace=False)
    Y[:, cols] = 6.0 * crandn(rng, D, n_out)
    res = l1pca(Y, K)
    print(f"{n_out} outlier columns: svd error {subspace_error(svd_pca(Y, K), truth):.3f}, "
          f"l1 error {subspace_error(res.P, truth):.3f} ({res.iters} iterations)")

# the nuclear norm of X B never decreases along the iteration
res = l1pca(Y, K, delta=1e-10)
print("nuclear norm trace:", np.round(res.nuclear_trace[:6], 4), "...")
print("final L1 objective ||P^H X||_1 =", round(res.objective, 4))
