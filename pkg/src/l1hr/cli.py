"""Command-line entry point: ``l1hr {simulate,sweep,crlb,decompose}``."""
import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .harmonic import DETECTORS, METHODS, HrScenario, run_pipeline
from .simkit import (DEFAULT_SNR_GRID, SweepConfig, crlb, default_output_path, read_tensor,
                     rmse, run_sweep, write_matrix)
from .tucker import TuckerConfig, decompose


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _name_list(choices):
    def parse(text):
        names = tuple(x.strip() for x in text.split(",") if x.strip())
        bad = [n for n in names if n not in choices]
        if bad or not names:
            raise argparse.ArgumentTypeError(f"choose from {','.join(choices)}; got {text!r}")
        return names
    return parse


def _add_scenario_args(p, snr=True):
    g = p.add_argument_group("scenario")
    g.add_argument("--grid-size", type=int, default=50, help="K: grid size, K-1 subcarriers")
    g.add_argument("--active", type=int, default=6, help="Ka: active transmitters")
    g.add_argument("--symbols", type=int, default=12, help="Q: symbols per frame")
    g.add_argument("--samples", type=int, default=32, help="N: samples per symbol")
    g.add_argument("--i1", type=int, default=None, help="Hankel rows (default N//2 + 1); I2 = N + 1 - I1")
    if snr:
        g.add_argument("--snr-db", type=float, default=20.0, help="use 'inf' for noise-free")
    g.add_argument("--outlier-frac", type=float, default=0.05)
    g.add_argument("--outlier-var", type=float, default=20.0)
    g.add_argument("--delta-t", type=float, default=1.0)


def _scenario(args, **over):
    i1 = args.i1 if args.i1 is not None else args.samples // 2 + 1
    kw = dict(K=args.grid_size, Ka=args.active, Q=args.symbols, N=args.samples,
              I1=i1, I2=args.samples + 1 - i1, outlier_fraction=args.outlier_frac,
              outlier_variance=args.outlier_var, delta_t=args.delta_t)
    if hasattr(args, "snr_db"):
        kw["snr_db"] = args.snr_db
    kw.update(over)
    return HrScenario(**kw)


def cmd_simulate(args):
    s = _scenario(args, seed=args.seed)
    result, truth = run_pipeline(s, args.method, args.detector)
    rz, rz_raw, rc = rmse(truth, result)
    print(f"method={result.method} detector={result.detector} seed={s.seed} snr_db={s.snr_db:g}")
    print("true_indices=" + ",".join(str(i) for i in truth.active_indices))
    print("estimated_indices=" + ",".join(str(i) for i in np.sort(result.indices)))
    print(f"rmse_z_hard={rz:.12g} rmse_z_raw={rz_raw:.12g} rmse_c={rc:.12g}")
    return 0


def cmd_crlb(args):
    s = _scenario(args)
    if s.noise_variance <= 0:
        print("error: CRLB needs a finite SNR", file=sys.stderr)
        return 2
    c, z = crlb(s)
    print(f"sigma2={s.noise_variance:.12g}")
    print(f"crlb_c={c:.12g}")
    print(f"crlb_z={z:.12g}")
    return 0


def cmd_sweep(args):
    out = args.output if args.output is not None else default_output_path()
    cfg = SweepConfig(scenario=_scenario(args), snr_grid_db=args.snr_grid, trials=args.trials,
                      methods=args.methods, detectors=args.detectors,
                      master_seed=args.master_seed, output_path=str(out), workers=args.workers)
    report = run_sweep(cfg)
    failures = sum(r.failures for r in report.rows)
    print(f"wrote {len(report.rows)} rows to {out} ({failures} failed trial runs)")
    return 0


def cmd_decompose(args):
    H = read_tensor(args.input)
    ranks = tuple(args.ranks)
    cfg = TuckerConfig(ranks=ranks, delta=args.delta, outer_tol=args.outer_tol,
                       max_outer_iters=args.max_outer_iters)
    factors = decompose(H, args.method, cfg)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for k, U in enumerate(factors.factors, start=1):
        write_matrix(U, outdir / f"U{k}.txt")
    print(f"{args.method}: wrote U1.txt, U2.txt, U3.txt to {outdir}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="l1hr", description="Robust harmonic retrieval with L1-Tucker decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one recovery and print a summary")
    _add_scenario_args(p)
    p.add_argument("--method", choices=METHODS, default="l1tooi")
    p.add_argument("--detector", choices=DETECTORS, default="scsm")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="Monte-Carlo SNR sweep, writes CSV")
    _add_scenario_args(p, snr=False)
    p.add_argument("--snr-grid", type=_float_list, default=DEFAULT_SNR_GRID,
                   help="comma-separated SNR values in dB")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--methods", type=_name_list(METHODS), default=METHODS)
    p.add_argument("--detectors", type=_name_list(DETECTORS), default=DETECTORS)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None, help="CSV path (default $L1HR_OUTPUT_DIR/sweep.csv)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crlb", help="print Cramer-Rao bounds for a scenario")
    _add_scenario_args(p)
    p.set_defaults(func=cmd_crlb)

    p = sub.add_parser("decompose", help="decompose a tensor text file")
    p.add_argument("input")
    p.add_argument("--method", choices=METHODS, default="l1tooi")
    p.add_argument("--ranks", type=int, nargs=3, required=True, metavar=("K1", "K2", "K3"))
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--outer-tol", type=float, default=1e-4)
    p.add_argument("--max-outer-iters", type=int, default=100)
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
