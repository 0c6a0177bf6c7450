import time

import numpy as np
import pytest


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def projector(U):
    U = np.asarray(U)
    return U @ U.conj().T


def subspace_distance(U, V):
    return np.linalg.norm(projector(U) - projector(V))


def orthonormal(rng, rows, cols):
    Q, _ = np.linalg.qr(crandn(rng, rows, cols))
    return Q


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def report_criterion(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def outlier_sweep():
    """200-trial outlier sweep (5% outliers of variance 20) over 0..30 dB.

    Shared by the acceptance suite and the Monte-Carlo examples; returns
    ``(report, seconds)``.
    """
    from l1hr.harmonic import HrScenario
    from l1hr.simkit import SweepConfig, run_sweep

    cfg = SweepConfig(scenario=HrScenario(outlier_fraction=0.05, outlier_variance=20.0),
                      snr_grid_db=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0), trials=200)
    t0 = time.perf_counter()
    report = run_sweep(cfg)
    return report, time.perf_counter() - t0
