"""A small Monte-Carlo SNR sweep with CSV output.

This is a reduced version of the full study (200 trials, seven SNR points),
which the ``l1hr sweep`` command runs with its defaults.
"""
import sys
from pathlib import Path

from l1hr import HrScenario, SweepConfig, run_sweep

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 10
out = Path("demo_sweep.csv")
cfg = SweepConfig(scenario=HrScenario(outlier_fraction=0.05), snr_grid_db=(0.0, 10.0, 20.0, 30.0),
                  trials=trials, detectors=("scsm",), master_seed=1, output_path=str(out))
report = run_sweep(cfg)

print(f"{'snr':>4} {'method':7} {'rmse_c':>8} {'median':>8} {'crlb_c^.5':>9} {'det_err':>7}")
for row in report.rows:
    med = report.median_rmse_c(row.snr_db, row.method, row.detector)
    print(f"{row.snr_db:4.0f} {row.method:7} {row.rmse_c:8.4f} {med:8.4f} {row.crlb_c ** 0.5:9.4f} {row.det_err:7.3f}")
print("wrote", out.resolve())
