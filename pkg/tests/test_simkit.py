import math

import numpy as np
import pytest

from l1hr import simkit
from l1hr.harmonic import GroundTruth, HrScenario, RecoveryResult, grid_poles
from l1hr.simkit import (CSV_HEADER, SweepConfig, crlb, read_csv, read_matrix, read_tensor, rmse,
                         run_sweep, trial_seed, write_csv, write_matrix, write_tensor)

from conftest import crandn


def perfect(truth):
    return RecoveryResult(truth.active_indices.copy(), truth.poles, truth.poles,
                          truth.symbols.copy(), "x", "y")


@pytest.fixture
def truth(rng):
    idx = np.array([3, 11, 20, 41])
    return GroundTruth(idx, crandn(rng, 4, 5), 50)


def test_rmse_perfect(truth):
    assert rmse(truth, perfect(truth)) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("theta", [0.01, 0.3, 2.0, np.pi])
def test_rmse_chord(theta):
    t = GroundTruth(np.array([5]), np.ones((1, 2), dtype=complex), 50)
    z_hat = t.poles * np.exp(1j * theta)
    res = RecoveryResult(np.array([5]), z_hat, z_hat, t.symbols, "x", "y")
    rz, rz_raw, rc = rmse(t, res)
    assert rz == pytest.approx(2 * abs(math.sin(theta / 2)), rel=1e-12)
    assert rc == 0.0


def test_rmse_permutation_invariant(truth, rng):
    for _ in range(20):
        p = rng.permutation(4)
        res = perfect(truth)
        res = RecoveryResult(res.indices[p], res.poles[p], res.raw_poles[p], res.symbols[p], "x", "y")
        assert rmse(truth, res) == (0.0, 0.0, 0.0)


def test_rmse_cardinality(truth):
    res = perfect(truth)
    res.poles = res.poles[:3]
    with pytest.raises(ValueError):
        rmse(truth, res)


def test_rmse_symbol_alignment_follows_poles(truth):
    res = perfect(truth)
    res.symbols[0] += 1.0
    _, _, rc = rmse(truth, res)
    assert rc == pytest.approx(math.sqrt(5 / 20))


def test_crlb_values():
    s = HrScenario(Ka=1, snr_db=0.0, N=32, Q=12, I1=17, I2=16)
    assert s.noise_variance == 1.0
    c, z = crlb(s)
    assert c == pytest.approx(0.03125, rel=1e-15)
    assert z == pytest.approx(1 / 384, rel=1e-15)
    c2, z2 = crlb(HrScenario(Ka=1, snr_db=0.0, Q=24))
    assert c2 == c and z2 == pytest.approx(z / 2, rel=1e-15)


def test_trial_seeds_distinct():
    seeds = {trial_seed(0, i, t) for i in range(5) for t in range(50)}
    assert len(seeds) == 250
    assert trial_seed(1, 0, 0) != trial_seed(0, 0, 0)
    assert trial_seed(3, 2, 1) == trial_seed(3, 2, 1)


def test_sweep_noise_free_zero(tmp_path):
    cfg = SweepConfig(scenario=HrScenario(), snr_grid_db=(math.inf,), trials=1,
                      output_path=str(tmp_path / "s.csv"))
    report = run_sweep(cfg)
    assert len(report.rows) == 8
    for r in report.rows:
        assert r.rmse_z_hard == 0 and r.rmse_c < 1e-8 and r.det_err == 0 and r.failures == 0
        assert r.crlb_c == 0 and r.crlb_z == 0
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_sweep_csv_deterministic_and_roundtrip(tmp_path):
    base = dict(scenario=HrScenario(outlier_fraction=0.05), snr_grid_db=(5.0, 20.0), trials=2,
                methods=("hosvd", "l1totd"), master_seed=42)
    a = run_sweep(SweepConfig(output_path=str(tmp_path / "a.csv"), **base))
    run_sweep(SweepConfig(output_path=str(tmp_path / "b.csv"), **base))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    parsed = read_csv(tmp_path / "a.csv")
    assert parsed == a.rows


def test_sweep_parallel_matches_serial(tmp_path):
    base = dict(scenario=HrScenario(outlier_fraction=0.05), snr_grid_db=(10.0,), trials=3,
                methods=("hosvd", "hooi"), master_seed=7)
    serial = run_sweep(SweepConfig(**base))
    parallel = run_sweep(SweepConfig(workers=2, **base))
    assert serial.rows == parallel.rows


def test_sweep_counts_failures(monkeypatch):
    real = simkit.decompose

    def flaky(H, method, cfg):
        if method == "hooi":
            raise np.linalg.LinAlgError("boom")
        return real(H, method, cfg)

    monkeypatch.setattr(simkit, "decompose", flaky)
    rep = run_sweep(SweepConfig(scenario=HrScenario(), snr_grid_db=(20.0,), trials=2,
                                methods=("hosvd", "hooi")))
    bad = rep.row(20.0, "hooi", "scsm")
    assert bad.failures == 2 and math.isnan(bad.rmse_c)
    assert rep.row(20.0, "hosvd", "scsm").failures == 0


def test_sweep_respects_crlb():
    trials = 20
    rep = run_sweep(SweepConfig(scenario=HrScenario(), snr_grid_db=(20.0, 30.0), trials=trials,
                                methods=("hosvd",), detectors=("scsm",)))
    for r in rep.rows:
        assert r.det_err == 0
        assert r.rmse_c >= math.sqrt(r.crlb_c) * (1 - 3 / math.sqrt(trials))


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(trials=0)
    with pytest.raises(ValueError):
        SweepConfig(snr_grid_db=())
    with pytest.raises(ValueError):
        SweepConfig(methods=("svd",))


def test_default_output_path(monkeypatch, tmp_path):
    monkeypatch.setenv(simkit.OUTPUT_DIR_ENV, str(tmp_path))
    assert simkit.default_output_path() == tmp_path / "sweep.csv"


def test_tensor_file_roundtrip(tmp_path, rng):
    A = crandn(rng, 3, 4, 2)
    write_tensor(A, tmp_path / "t.txt")
    lines = (tmp_path / "t.txt").read_text().splitlines()
    assert lines[0] == "3 4 2"
    assert len(lines) == 1 + 24
    re, im = (float(v) for v in lines[1 + 3].split())  # column (i2=0, i3=1), row 0
    assert complex(re, im) == A[0, 0, 1]
    np.testing.assert_array_equal(read_tensor(tmp_path / "t.txt"), A)


def test_tensor_file_errors(tmp_path):
    (tmp_path / "bad.txt").write_text("2 2\n1 0\n")
    with pytest.raises(ValueError):
        read_tensor(tmp_path / "bad.txt")
    (tmp_path / "short.txt").write_text("1 1 2\n1 0\n")
    with pytest.raises(ValueError):
        read_tensor(tmp_path / "short.txt")


def test_matrix_file_roundtrip(tmp_path, rng):
    M = crandn(rng, 5, 2)
    write_matrix(M, tmp_path / "m.txt")
    np.testing.assert_array_equal(read_matrix(tmp_path / "m.txt"), M)


def test_write_csv_nan(tmp_path):
    row = simkit.RmseRow(1.0, "a", "b", math.nan, 0.1, 0.2, 0.0, 1 / 3, 0.5, 3, 3)
    write_csv([row], tmp_path / "x.csv")
    back = read_csv(tmp_path / "x.csv")[0]
    assert math.isnan(back.rmse_z_hard) and back.crlb_c == 1 / 3


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="L1-TOOI and HOOI detect identically in all 200 trials at "
                   "20 dB (seed 0), so their aggregate symbol RMSEs tie exactly")
def test_l1tooi_symbol_rmse_beats_frobenius_at_20db(outlier_sweep):
    rep, _ = outlier_sweep
    ours = rep.row(20.0, "l1tooi", "scsm").rmse_c
    assert ours < rep.row(20.0, "hosvd", "scsm").rmse_c
    assert ours < rep.row(20.0, "hooi", "scsm").rmse_c
