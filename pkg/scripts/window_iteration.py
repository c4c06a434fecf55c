#!/usr/bin/env python3
"""One optimally placed measurement per fixed-length window: print the prior
variance at each window start and the chosen relative instant until the
schedule settles into measuring at the window edge."""

import argparse

from bmsched.cli import parse_real
from bmsched.experiments import SweepSpec, windows_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--window", type=parse_real, default=7.0 / 6.0, help="window length")
    ap.add_argument("--v1", type=parse_real, default=1.0, help="sensor noise variance")
    ap.add_argument("--v0", type=parse_real, default=0.5, help="initial prior variance")
    ap.add_argument("--windows", type=int, default=20)
    args = ap.parse_args()

    result = windows_experiment(
        SweepSpec(
            kind="windows",
            fixed={"T": args.window, "v1": args.v1, "v0": args.v0,
                   "max_windows": args.windows},
        )
    )
    print(f"{'window':>6} {'v0 at start':>12} {'instant':>10}")
    for k, v0, instant in result.rows:
        print(f"{k:6.0f} {v0:12.6f} {instant:10.6f}")
    settled = result.summary["settled_at"]
    print(
        f"\nsettles to edge measurements at window {settled:.0f}; "
        f"threshold prior {result.summary['v0_crit']:.6f}, "
        f"stationary prior {result.summary['v0_stationary']:.6f}"
    )


if __name__ == "__main__":
    main()
