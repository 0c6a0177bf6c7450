"""Random-access harmonic retrieval on a discrete subcarrier grid.

Ka transmitters each pick a distinct subcarrier ``k`` out of ``1..K-1``
(pole ``z_k = exp(2j*pi*k/K)``) and send Q QPSK symbols.  The receiver sees,
for every symbol ``q``, N composite samples

    x[q, n] = sum_k c[k, q] * z_k**n + noise + sparse outliers.

Recovery stacks the samples into an fs-Hankel tensor, estimates the mode-1
signal subspace with a Tucker decomposition, detects the active subcarriers
(ESPRIT or SCSM) and finally solves for the symbols by least squares.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .tensor import build_fs_hankel
from .tucker import TuckerConfig, decompose

QPSK = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2)
METHODS = ("hosvd", "hooi", "l1totd", "l1tooi")
DETECTORS = ("esprit", "scsm")


@dataclass(frozen=True)
class HrScenario:
    """One experiment: grid, frame sizes, Hankel shape, noise and outliers.

    ``snr_db`` is the ratio of the mean noiseless sample power (``Ka`` for
    unit-power symbols) to the AWGN variance; ``math.inf`` means no noise.
    """
    K: int = 50
    Ka: int = 6
    Q: int = 12
    N: int = 32
    I1: int = 17
    I2: int = 16
    snr_db: float = math.inf
    outlier_fraction: float = 0.0
    outlier_variance: float = 20.0
    seed: int = 0
    delta_t: float = 1.0

    def __post_init__(self):
        if self.K < 2 or not 1 <= self.Ka <= self.K - 1:
            raise ValueError(f"need 1 <= Ka <= K-1, got K={self.K}, Ka={self.Ka}")
        if self.Q < 1 or self.N < 1:
            raise ValueError("Q and N must be positive")
        if self.I1 + self.I2 - 1 != self.N:
            raise ValueError(f"I1 + I2 - 1 must equal N ({self.I1} + {self.I2} - 1 != {self.N})")
        if self.I1 <= self.Ka or self.I2 <= self.Ka:
            raise ValueError("Hankel dimensions I1, I2 must exceed Ka")
        if not 0.0 <= self.outlier_fraction < 1.0:
            raise ValueError("outlier_fraction must lie in [0, 1)")
        if self.outlier_variance < 0 or self.delta_t <= 0:
            raise ValueError("outlier_variance must be >= 0 and delta_t > 0")

    @property
    def noise_variance(self):
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return self.Ka * 10.0 ** (-self.snr_db / 10.0)

    @property
    def n_outliers(self):
        return int(math.floor(self.outlier_fraction * self.N * self.Q))

    @property
    def ranks(self):
        return (self.Ka, self.Ka, self.Q)


@dataclass(frozen=True)
class GroundTruth:
    active_indices: np.ndarray
    symbols: np.ndarray
    K: int

    @property
    def poles(self):
        return grid_poles(self.active_indices, self.K)

    @property
    def pulsations(self):
        return 2 * np.pi * np.asarray(self.active_indices) / self.K


@dataclass
class RecoveryResult:
    """Detected subcarriers and symbols.

    ``poles`` are grid points of ``indices``; ``raw_poles`` are the detector's
    continuous estimates (ESPRIT eigenvalues, or the grid poles for SCSM).
    Row ``r`` of ``symbols`` belongs to ``indices[r]``.
    """
    indices: np.ndarray
    poles: np.ndarray
    raw_poles: np.ndarray
    symbols: np.ndarray
    method: str
    detector: str
    extra: dict = field(default_factory=dict, repr=False)


def grid_poles(indices, K):
    return np.exp(2j * np.pi * np.asarray(indices, dtype=float) / K)


def synthesize(scenario, rng=None):
    """Draw one frame of samples.

    Returns ``(truth, samples, clean)`` where ``samples`` and ``clean`` have
    shape (Q, N); ``clean`` holds the noiseless, outlier-free signal.
    """
    s = scenario
    rng = np.random.default_rng(s.seed) if rng is None else rng
    active = np.sort(rng.choice(np.arange(1, s.K), size=s.Ka, replace=False))
    symbols = QPSK[rng.integers(0, 4, size=(s.Ka, s.Q))]
    V = grid_poles(active, s.K)[None, :] ** np.arange(s.N)[:, None]
    clean = (V @ symbols).T

    samples = clean.copy()
    var = s.noise_variance
    if var > 0:
        samples += np.sqrt(var / 2) * (rng.standard_normal((s.Q, s.N))
                                       + 1j * rng.standard_normal((s.Q, s.N)))
    m = s.n_outliers
    if m > 0:
        pos = rng.choice(s.Q * s.N, size=m, replace=False)
        out = np.sqrt(s.outlier_variance / 2) * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        samples.reshape(-1)[pos] += out
    return GroundTruth(active, symbols, s.K), samples, clean


def vandermonde(K, I, unit=True):
    """Candidate subcarrier vectors for a length-`I` Hankel mode.

    Column ``i - 1`` is ``(1, z_i, ..., z_i**(I-1)) / I`` for ``i = 1..K-1``,
    or its unit-norm rescaling when ``unit`` is true (each column then has
    norm 1 because every entry has modulus ``1/sqrt(I)``).
    """
    z = grid_poles(np.arange(1, K), K)
    W = z[None, :] ** np.arange(I)[:, None]
    return W / (np.sqrt(I) if unit else I)


def hard_decision(eigenvalues, K):
    """Map estimated poles to distinct grid indices in ``1..K-1``.

    Pairs (estimate, grid index) are taken greedily in order of increasing
    distance, skipping estimates or indices already used.  The result is
    aligned with ``eigenvalues``.
    """
    eig = np.asarray(eigenvalues, dtype=np.complex128)
    if len(eig) > K - 1:
        raise ValueError("more estimates than available subcarriers")
    grid = grid_poles(np.arange(1, K), K)
    dist = np.abs(eig[:, None] - grid[None, :])
    order = np.argsort(dist, axis=None, kind="stable")
    out = np.full(len(eig), -1)
    used = np.zeros(K - 1, dtype=bool)
    left = len(eig)
    for flat in order:
        e, g = divmod(int(flat), K - 1)
        if out[e] >= 0 or used[g]:
            continue
        out[e] = g + 1
        used[g] = True
        left -= 1
        if left == 0:
            break
    return out


def esprit_recover(U1, K, rcond=1e-10):
    """Shift-invariance (ESPRIT) pole estimation from a mode-1 signal basis.

    Solves ``U1[1:] = U1[:-1] @ Z`` in the least-squares sense and returns
    ``(eigenvalues of Z, hard-decided grid indices)``.
    """
    U1 = np.asarray(U1, dtype=np.complex128)
    top, bottom = U1[:-1], U1[1:]
    if top.shape[0] < top.shape[1]:
        raise ValueError("need more rows than signal components for ESPRIT")
    Z, _, rank, sv = np.linalg.lstsq(top, bottom, rcond=None)
    if rank < top.shape[1] or sv[-1] <= rcond * sv[0]:
        raise np.linalg.LinAlgError("ESPRIT top block is rank deficient")
    eig = np.linalg.eigvals(Z)
    return eig, hard_decision(eig, K)


def scsm_scores(U, dictionary):
    """``||w_i^H U||_F`` for every column ``w_i`` of the (unit-norm) dictionary."""
    return np.linalg.norm(np.asarray(dictionary).conj().T @ np.asarray(U), axis=1)


def scsm_recover(U1, dictionary, Ka, U2=None, dictionary2=None):
    """Subcarrier sorting: keep the Ka dictionary atoms best captured by U1.

    With ``U2`` and ``dictionary2`` given, mode-1 and mode-2 scores are
    averaged before sorting.  Returns 1-based subcarrier indices in
    ascending order; equal scores favour the smaller index.
    """
    scores = scsm_scores(U1, dictionary)
    if U2 is not None:
        scores = 0.5 * (scores + scsm_scores(U2, dictionary2))
    top = np.argsort(-scores, kind="stable")[:Ka]
    return np.sort(top) + 1


def recover_symbols(samples, poles):
    """Least-squares symbols for known poles.

    Parameters
    ----------
    samples : array_like, shape (Q, N)
    poles : array_like, shape (Ka,)

    Returns
    -------
    ndarray, shape (Ka, Q)
    """
    X = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
    z = np.asarray(poles, dtype=np.complex128)
    V = z[None, :] ** np.arange(X.shape[1])[:, None]
    c, _, rank, sv = np.linalg.lstsq(V, X.T, rcond=None)
    if rank < len(z) or sv[-1] <= 1e-10 * sv[0]:
        raise np.linalg.LinAlgError("pole matrix is singular or ill-conditioned (duplicate poles?)")
    return c


def detect(U1, K, Ka, detector, U2=None, fuse_modes=False):
    """Run a detector on mode-1 factors; returns ``(indices, raw_poles)``."""
    U1 = np.asarray(U1)
    if detector == "esprit":
        eig, idx = esprit_recover(U1, K)
        return idx, eig
    if detector == "scsm":
        D1 = vandermonde(K, U1.shape[0])
        if fuse_modes:
            idx = scsm_recover(U1, D1, Ka, U2, vandermonde(K, np.asarray(U2).shape[0]))
        else:
            idx = scsm_recover(U1, D1, Ka)
        return idx, grid_poles(idx, K)
    raise ValueError(f"unknown detector {detector!r}; choose from {DETECTORS}")


def recover(samples, scenario, method="l1tooi", detector="scsm", fuse_modes=False, factors=None, **cfg):
    """Recover subcarriers and symbols from a (Q, N) block of samples.

    Pass precomputed ``factors`` to reuse one decomposition for several
    detectors. Extra keyword arguments go to :class:`TuckerConfig`.
    """
    s = scenario
    if factors is None:
        H = build_fs_hankel(samples, s.I1, s.I2)
        factors = decompose(H, method, TuckerConfig(ranks=s.ranks, **cfg))
    idx, raw = detect(factors.U1, s.K, s.Ka, detector, factors.U2, fuse_modes)
    poles = grid_poles(idx, s.K)
    symbols = recover_symbols(samples, poles)
    return RecoveryResult(idx, poles, raw, symbols, method, detector,
                          extra={"sweeps": factors.sweeps})


def run_pipeline(scenario, method="l1tooi", detector="scsm", fuse_modes=False, **cfg):
    """Synthesize a frame from ``scenario.seed`` and recover it."""
    truth, samples, _ = synthesize(scenario)
    result = recover(samples, scenario, method, detector, fuse_modes, **cfg)
    return result, truth


def hard_symbols(symbols):
    """Nearest QPSK constellation point for every entry."""
    c = np.asarray(symbols)
    return QPSK[np.argmin(np.abs(c[..., None] - QPSK), axis=-1)]
