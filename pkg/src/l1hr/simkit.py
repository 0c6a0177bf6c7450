"""Monte-Carlo experiments: error metrics, Cramer-Rao bounds and SNR sweeps.

Sweep CSV columns (one row per SNR point, method and detector)::

    snr_db, method, detector, rmse_z_hard, rmse_z_raw, rmse_c, det_err,
    crlb_c, crlb_z, trials, failures

RMSE columns are root-mean over successful trials of the per-trial mean
squared error; ``det_err`` is the mean fraction of active subcarriers missed;
``failures`` counts trials that raised a numerical error (excluded from the
other columns). Floats are written with 17 significant digits so the file
parses back to the exact same values.
"""
import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .harmonic import (DETECTORS, METHODS, HrScenario, RecoveryResult, detect, grid_poles,
                       recover_symbols, synthesize)
from .tensor import build_fs_hankel, fold, unfold
from .tucker import TuckerConfig, decompose

CSV_HEADER = ("snr_db", "method", "detector", "rmse_z_hard", "rmse_z_raw", "rmse_c",
              "det_err", "crlb_c", "crlb_z", "trials", "failures")
OUTPUT_DIR_ENV = "L1HR_OUTPUT_DIR"
DEFAULT_SNR_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)


def _match(est, true):
    """Minimum-cost assignment of estimated to true poles on |z_hat - z|^2."""
    est = np.asarray(est, dtype=np.complex128)
    true = np.asarray(true, dtype=np.complex128)
    if est.shape != true.shape:
        raise ValueError(f"expected {len(true)} estimates, got {len(est)}")
    cost = np.abs(est[:, None] - true[None, :]) ** 2
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(len(true), dtype=int)
    perm[cols] = rows
    return perm, cost[rows, cols].mean()


def squared_errors(truth, result):
    """Per-trial mean squared errors ``(mse_z_hard, mse_z_raw, mse_c)``.

    Estimates are matched to the true subcarriers by optimal assignment;
    symbol rows follow the assignment of the hard-decided poles.
    """
    z = truth.poles
    perm, mse_hard = _match(result.poles, z)
    _, mse_raw = _match(result.raw_poles, z)
    c_hat = np.asarray(result.symbols)[perm]
    mse_c = float(np.mean(np.abs(c_hat - truth.symbols) ** 2))
    return float(mse_hard), float(mse_raw), mse_c


def rmse(truth, result):
    """``(rmse_z_hard, rmse_z_raw, rmse_c)`` for a single recovery."""
    return tuple(math.sqrt(v) for v in squared_errors(truth, result))


def detection_error(truth, result):
    """Fraction of active subcarriers that were not detected."""
    missed = set(np.asarray(truth.active_indices).tolist()) - set(np.asarray(result.indices).tolist())
    return len(missed) / len(truth.active_indices)


def crlb(scenario, symbol_power=1.0):
    """Cramer-Rao bounds ``(crlb_c, crlb_z)`` for one symbol and one pole.

    ``crlb_c = s2 / N`` and ``crlb_z = s2 / (E|c|^2 dt^2 N Q)`` with ``s2`` the
    AWGN variance implied by ``scenario.snr_db``.
    """
    s2 = scenario.noise_variance
    return s2 / scenario.N, s2 / (symbol_power * scenario.delta_t ** 2 * scenario.N * scenario.Q)


@dataclass(frozen=True)
class SweepConfig:
    scenario: HrScenario = HrScenario(outlier_fraction=0.05)
    snr_grid_db: tuple = DEFAULT_SNR_GRID
    trials: int = 200
    methods: tuple = METHODS
    detectors: tuple = DETECTORS
    master_seed: int = 0
    output_path: str = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if len(self.snr_grid_db) == 0:
            raise ValueError("snr grid must be nonempty")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        for d in self.detectors:
            if d not in DETECTORS:
                raise ValueError(f"unknown detector {d!r}")


@dataclass
class TrialRecord:
    snr_db: float
    method: str
    detector: str
    trial: int
    mse_z_hard: float = math.nan
    mse_z_raw: float = math.nan
    mse_c: float = math.nan
    det_err: float = math.nan
    failed: bool = False


@dataclass
class RmseRow:
    snr_db: float
    method: str
    detector: str
    rmse_z_hard: float
    rmse_z_raw: float
    rmse_c: float
    det_err: float
    crlb_c: float
    crlb_z: float
    trials: int
    failures: int

    def as_csv(self):
        return [_fmt(getattr(self, name)) for name in CSV_HEADER]


@dataclass
class RmseReport:
    rows: list
    records: list = field(default_factory=list, repr=False)

    def row(self, snr_db, method, detector):
        for r in self.rows:
            if r.snr_db == snr_db and r.method == method and r.detector == detector:
                return r
        raise KeyError((snr_db, method, detector))

    def per_trial(self, snr_db, method, detector, metric="mse_c", include_failed=False):
        """Per-trial values of `metric`, ordered by trial index."""
        recs = [r for r in self.records
                if r.snr_db == snr_db and r.method == method and r.detector == detector
                and (include_failed or not r.failed)]
        return np.array([getattr(r, metric) for r in sorted(recs, key=lambda r: r.trial)])

    def median_rmse_c(self, snr_db, method, detector):
        return float(np.median(np.sqrt(self.per_trial(snr_db, method, detector, "mse_c"))))


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def trial_seed(master_seed, snr_index, trial):
    """Seed for one trial, keyed by (master seed, SNR index, trial index).

    Every method and detector sees the same realisation of a trial.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(snr_index), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(scenario, methods, detectors, tucker_kwargs=None):
    """One realisation of `scenario` recovered by every method/detector pair.

    Returns one :class:`TrialRecord` per pair; the caller sets ``trial``.
    Numerical failures are recorded, not raised.
    """
    truth, samples, _ = synthesize(scenario)
    H = build_fs_hankel(samples, scenario.I1, scenario.I2)
    cfg = TuckerConfig(ranks=scenario.ranks, **(tucker_kwargs or {}))
    out = []
    for method in methods:
        try:
            factors = decompose(H, method, cfg)
        except (np.linalg.LinAlgError, ValueError):
            factors = None
        for detector in detectors:
            rec = TrialRecord(scenario.snr_db, method, detector, -1)
            if factors is None:
                rec.failed = True
                out.append(rec)
                continue
            try:
                idx, raw = detect(factors.U1, scenario.K, scenario.Ka, detector)
                poles = grid_poles(idx, scenario.K)
                symbols = recover_symbols(samples, poles)
                res = RecoveryResult(idx, poles, raw, symbols, method, detector)
                rec.mse_z_hard, rec.mse_z_raw, rec.mse_c = squared_errors(truth, res)
                rec.det_err = detection_error(truth, res)
            except (np.linalg.LinAlgError, ValueError):
                rec.failed = True
            out.append(rec)
    return out


def _run_task(args):
    cfg, i_snr, trial, tucker_kwargs = args
    snr = cfg.snr_grid_db[i_snr]
    scenario = replace(cfg.scenario, snr_db=float(snr), seed=trial_seed(cfg.master_seed, i_snr, trial))
    recs = run_trial(scenario, cfg.methods, cfg.detectors, tucker_kwargs)
    for r in recs:
        r.snr_db = float(snr)
        r.trial = trial
    return recs


def aggregate(cfg, records):
    rows = []
    for snr in cfg.snr_grid_db:
        snr = float(snr)
        crlb_c, crlb_z = crlb(replace(cfg.scenario, snr_db=snr))
        for method in cfg.methods:
            for detector in cfg.detectors:
                recs = sorted((r for r in records
                               if r.snr_db == snr and r.method == method and r.detector == detector),
                              key=lambda r: r.trial)
                ok = [r for r in recs if not r.failed]

                def root_mean(name):
                    return math.sqrt(math.fsum(getattr(r, name) for r in ok) / len(ok)) if ok else math.nan

                det = math.fsum(r.det_err for r in ok) / len(ok) if ok else math.nan
                rows.append(RmseRow(snr, method, detector, root_mean("mse_z_hard"),
                                    root_mean("mse_z_raw"), root_mean("mse_c"), det,
                                    crlb_c, crlb_z, len(recs), len(recs) - len(ok)))
    return rows


def write_csv(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(r.as_csv())
    return path


def read_csv(path):
    """Parse a sweep CSV back into :class:`RmseRow` objects."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = []
        for d in reader:
            rows.append(RmseRow(
                float(d["snr_db"]), d["method"], d["detector"],
                *(float(d[k]) for k in CSV_HEADER[3:9]),
                int(d["trials"]), int(d["failures"])))
    return rows


def default_output_path(name="sweep.csv"):
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / name


def run_sweep(cfg, tucker_kwargs=None, progress=None):
    """Run the full Monte-Carlo sweep described by `cfg`.

    Trials are independent and may run in worker processes
    (``cfg.workers > 1``); results do not depend on execution order.
    Writes the CSV when ``cfg.output_path`` is set.
    """
    tasks = [(cfg, i, t, tucker_kwargs)
             for i in range(len(cfg.snr_grid_db)) for t in range(cfg.trials)]
    records = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for recs in pool.map(_run_task, tasks, chunksize=4):
                records.extend(recs)
                if progress:
                    progress()
    else:
        for task in tasks:
            records.extend(_run_task(task))
            if progress:
                progress()
    report = RmseReport(aggregate(cfg, records), records)
    if cfg.output_path is not None:
        write_csv(report.rows, cfg.output_path)
    return report


# tensor text format: "I1 I2 I3" header, then one "re im" line per entry in
# mode-1 unfolding column order (rows fastest)

def write_tensor(A, path):
    A = np.asarray(A, dtype=np.complex128)
    flat = unfold(A, 1).ravel(order="F")
    with open(path, "w") as fh:
        fh.write("{} {} {}\n".format(*A.shape))
        for v in flat:
            fh.write(f"{v.real:.17g} {v.imag:.17g}\n")


def read_tensor(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError("tensor file header must be 'I1 I2 I3'")
        dims = tuple(int(x) for x in header)
        vals = np.loadtxt(fh, ndmin=2)
    if vals.shape != (dims[0] * dims[1] * dims[2], 2):
        raise ValueError(f"expected {np.prod(dims)} lines of 're im', got array of shape {vals.shape}")
    flat = vals[:, 0] + 1j * vals[:, 1]
    M = flat.reshape(dims[0], -1, order="F")
    return fold(M, 1, dims)


def write_matrix(M, path):
    """Matrix text file: "rows cols" header, then "re im" lines column by column."""
    M = np.asarray(M, dtype=np.complex128)
    with open(path, "w") as fh:
        fh.write(f"{M.shape[0]} {M.shape[1]}\n")
        for v in M.ravel(order="F"):
            fh.write(f"{v.real:.17g} {v.imag:.17g}\n")


def read_matrix(path):
    with open(path) as fh:
        rows, cols = (int(x) for x in fh.readline().split())
        vals = np.loadtxt(fh, ndmin=2)
    return (vals[:, 0] + 1j * vals[:, 1]).reshape(rows, cols, order="F")
