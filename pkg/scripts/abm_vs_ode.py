#!/usr/bin/env python3
"""Finite-size check: seeded agent-based ensembles against the planar ODE.

Runs an ensemble of exact stochastic simulations on the complete influence
graph for several population sizes and reports the sup-norm gap between the
ensemble mean and the mean-field trajectory, writing the per-size CSVs.

Usage: python scripts/abm_vs_ode.py [--sizes 100 1000 10000] [--runs 20]
"""
import argparse
from pathlib import Path

import numpy as np

from epigame import (
    AbmConfig,
    InfluenceGraph,
    MacroState,
    ModelParams,
    ensemble,
    integrate_planar,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 1000, 10000])
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--zeta", type=float, default=5.0)
    ap.add_argument("--horizon", type=float, default=30.0)
    ap.add_argument("--seed", type=int, default=1000)
    ap.add_argument("--outdir", default="out/abm_vs_ode")
    args = ap.parse_args()

    p = ModelParams(alpha=3.0, lam=0.5, mu=1.0, c=3.0, zeta=args.zeta)
    x0, y0 = 0.3, 0.2
    ode = integrate_planar(MacroState(x0, y0), p, horizon=args.horizon, sample_dt=0.1)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ode.to_csv(outdir / "ode.csv")

    print(f"zeta={args.zeta:g}, {args.runs} runs per size, horizon {args.horizon:g}")
    for n in args.sizes:
        cfg = AbmConfig(
            params=p,
            graph=InfluenceGraph.complete(n),
            activities=np.full(n, p.alpha),
            horizon=args.horizon,
            sample_dt=0.1,
            seed=args.seed,
            x0=x0,
            y0=y0,
            record_events=False,
        )
        ens = ensemble(cfg, n_runs=args.runs)
        ens.to_csv(outdir / f"ensemble_n{n}.csv")
        gap = float(
            np.maximum(np.abs(ens.x_mean - ode.xs), np.abs(ens.y_mean - ode.ys)).max()
        )
        print(f"  n={n:<7d} sup-norm gap to ODE: {gap:.4f}")


if __name__ == "__main__":
    main()
