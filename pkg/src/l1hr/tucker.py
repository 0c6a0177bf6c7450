"""Tucker decompositions of third-order complex tensors.

Frobenius baselines (HOSVD, HOOI) and their L1-norm counterparts:
L1-TOTD runs L1-PCA once per mode unfolding, L1-TOOI alternates L1-PCA
updates over the projected unfoldings until the L1 norm of the core stops
growing.
"""
from dataclasses import dataclass, field

import numpy as np

from .robust_pca import DEFAULT_DELTA, DEFAULT_MAX_ITERS, l1_norm, l1pca, svd_pca
from .tensor import as_tensor3, core, kron_others, unfold


@dataclass(frozen=True)
class TuckerConfig:
    ranks: tuple
    delta: float = DEFAULT_DELTA
    outer_tol: float = 1e-4
    max_outer_iters: int = 100
    max_inner_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if len(ranks) != 3 or min(ranks) < 1:
            raise ValueError(f"need three positive ranks, got {self.ranks!r}")
        if self.delta <= 0 or self.outer_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise ValueError("iteration caps must be >= 1")
        object.__setattr__(self, "ranks", ranks)


@dataclass
class TuckerFactors:
    """Factor matrices of a Tucker decomposition.

    ``objective_trace`` holds, for the L1 engines, ``||U_i^H H_i||_1`` after
    every mode update (L1-TOOI prepends the value at its starting point);
    for HOOI it holds the Frobenius objective in the same layout.
    """
    U1: np.ndarray
    U2: np.ndarray
    U3: np.ndarray
    method: str
    objective_trace: list = field(default_factory=list)
    sweeps: int = 0

    @property
    def factors(self):
        return (self.U1, self.U2, self.U3)

    def core(self, H):
        return core(H, *self.factors)


def _check_ranks(H, ranks):
    for k, (r, dim) in enumerate(zip(ranks, H.shape), start=1):
        if r > dim:
            raise ValueError(f"mode-{k} rank {r} exceeds dimension {dim}")


def _config(H, cfg):
    if not isinstance(cfg, TuckerConfig):
        cfg = TuckerConfig(ranks=cfg)
    _check_ranks(H, cfg.ranks)
    return cfg


def projected_unfolding(H, factors, k):
    """Mode-k unfolding of H projected onto the other two factors.

    Equals ``unfold(H x_j U_j^H for j != k, k)``, so that
    ``U_k^H @ projected_unfolding(...)`` is the mode-k unfolding of the core.
    """
    return unfold(H, k) @ kron_others(factors, k).conj()


def l1_objective(H, factors):
    """L1 norm of the core tensor ``H x_1 U1^H x_2 U2^H x_3 U3^H``."""
    return l1_norm(core(H, *factors))


def frob_objective(H, factors):
    return float(np.linalg.norm(core(H, *factors)))


def hosvd(H, ranks):
    """Truncated higher-order SVD: leading left singular vectors per mode."""
    H = as_tensor3(H)
    ranks = _config(H, ranks).ranks
    Us = [svd_pca(unfold(H, k), r) for k, r in enumerate(ranks, start=1)]
    return TuckerFactors(*Us, method="hosvd")


def hooi(H, cfg):
    """Higher-order orthogonal iteration, initialised by :func:`hosvd`."""
    H = as_tensor3(H)
    cfg = _config(H, cfg)
    Us = list(hosvd(H, cfg.ranks).factors)
    prev = frob_objective(H, Us)
    trace = [prev]
    sweeps = 0
    for sweeps in range(1, cfg.max_outer_iters + 1):
        for k in (1, 2, 3):
            Hk = projected_unfolding(H, Us, k)
            Us[k - 1] = svd_pca(Hk, cfg.ranks[k - 1])
            trace.append(float(np.linalg.norm(Us[k - 1].conj().T @ Hk)))
        cur = trace[-1]
        if cur - prev <= cfg.outer_tol * max(prev, np.finfo(float).tiny):
            break
        prev = cur
    return TuckerFactors(*Us, method="hooi", objective_trace=trace, sweeps=sweeps)


def l1totd(H, cfg, inits=None):
    """L1-norm third-order Tucker decomposition (one L1-PCA per mode).

    Parameters
    ----------
    H : array_like, shape (I1, I2, I3)
    cfg : TuckerConfig or tuple of ranks
    inits : sequence of three matrices, optional
        Starting bases for the per-mode L1-PCA runs. Defaults to the
        truncated SVD of each unfolding.
    """
    H = as_tensor3(H)
    cfg = _config(H, cfg)
    Us, trace = [], []
    for k, r in enumerate(cfg.ranks, start=1):
        X = unfold(H, k)
        P0 = svd_pca(X, r) if inits is None else inits[k - 1]
        res = l1pca(X, r, P0, delta=cfg.delta, max_iters=cfg.max_inner_iters)
        Us.append(res.P)
        trace.append(res.objective)
    return TuckerFactors(*Us, method="l1totd", objective_trace=trace, sweeps=1)


def l1tooi(H, cfg):
    """L1-norm third-order orthogonal iteration.

    Starts from :func:`l1totd` and sweeps modes 1, 2, 3, each time running
    L1-PCA on the unfolding projected onto the current other two factors,
    warm-started at the current factor.  Stops when one sweep raises the L1
    core norm by less than ``cfg.outer_tol`` (relative) or after
    ``cfg.max_outer_iters`` sweeps.
    """
    H = as_tensor3(H)
    cfg = _config(H, cfg)
    Us = list(l1totd(H, cfg).factors)
    prev = l1_objective(H, Us)
    trace = [prev]
    sweeps = 0
    for sweeps in range(1, cfg.max_outer_iters + 1):
        for k in (1, 2, 3):
            Hk = projected_unfolding(H, Us, k)
            res = l1pca(Hk, cfg.ranks[k - 1], Us[k - 1],
                        delta=cfg.delta, max_iters=cfg.max_inner_iters)
            Us[k - 1] = res.P
            trace.append(res.objective)
        cur = trace[-1]
        if cur - prev <= cfg.outer_tol * max(prev, np.finfo(float).tiny):
            break
        prev = cur
    return TuckerFactors(*Us, method="l1tooi", objective_trace=trace, sweeps=sweeps)


ENGINES = {"hosvd": hosvd, "hooi": hooi, "l1totd": l1totd, "l1tooi": l1tooi}


def decompose(H, method, cfg):
    """Dispatch to one of the engines in :data:`ENGINES` by name."""
    try:
        engine = ENGINES[method]
    except KeyError:
        raise ValueError(f"unknown decomposition {method!r}; choose from {sorted(ENGINES)}") from None
    if method == "hosvd":
        return engine(H, cfg.ranks if isinstance(cfg, TuckerConfig) else cfg)
    return engine(H, cfg)
