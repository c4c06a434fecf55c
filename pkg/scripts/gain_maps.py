#!/usr/bin/env python3
"""Gain of the optimal schedule over naive regular schedules, as CSV maps.

One-measure map: optimal instant vs measuring at T/2, over a (v0, v1) grid.
Two-measure map: optimal pair vs (T/3, 2T/3), over (v1, v2) grids for three
prior-variance panels.
"""

import argparse
import pathlib

from bmsched.cli import render_csv
from bmsched.experiments import SweepSpec, gain_one_measure, gain_two_measures


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--resolution", type=int, default=101, help="grid points per axis")
    ap.add_argument("--out-dir", default="results", help="directory for CSV output")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = args.resolution

    one = gain_one_measure(
        SweepSpec(kind="gain1", swept={"v0": (0.0, 5.0, n), "v1": (0.0, 5.0, n)})
    )
    (out / "gain_one_measure.csv").write_text(render_csv(one.columns, one.rows))
    print(f"one measure: max gain {one.summary['max_gain']:.4f} at "
          f"v0={one.summary['argmax_v0']:g}, v1={one.summary['argmax_v1']:g}")

    two = gain_two_measures(
        SweepSpec(kind="gain2", swept={"v1": (0.0, 5.0, n), "v2": (0.0, 5.0, n)})
    )
    (out / "gain_two_measures.csv").write_text(render_csv(two.columns, two.rows))
    print(f"two measures: max gain {two.summary['max_gain']:.4f} at "
          f"v0={two.summary['argmax_v0']:g}, v1={two.summary['argmax_v1']:g}, "
          f"v2={two.summary['argmax_v2']:g}")
    print(f"wrote {out / 'gain_one_measure.csv'} and {out / 'gain_two_measures.csv'}")


if __name__ == "__main__":
    main()
