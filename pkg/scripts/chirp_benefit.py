#!/usr/bin/env python3
"""Closed-system gate error vs gate time, chirped vs unchirped accelerated
pulses, written as sweep-style CSVs for the figure renderer.

Usage: python scripts/chirp_benefit.py --out DIR [--t-g 100 150 200 ...]
"""

import argparse
import dataclasses
import json
from pathlib import Path

from fluxtripod.scenario import load_scenario, prepare_system, simulate_point

COLUMNS = ["index", "axis", "axis_value", "protocol", "t_g_ns", "fbar", "error",
           "leakage", "v_rms", "omega_rms_scaled", "n_cav", "failure"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="scenarios/paper_x_gate.json")
    parser.add_argument("--out", default="out")
    parser.add_argument("--t-g", nargs="+", type=float, default=[100.0, 150.0, 200.0])
    args = parser.parse_args()

    scn = load_scenario(args.scenario)
    system = prepare_system(scn)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for protocol in ("satd", "satd_chirped"):
        run = dataclasses.replace(scn, protocol=protocol, noise=None,
                                  sweep_axis=None, sweep_values=())
        rows = []
        for i, t_g in enumerate(args.t_g):
            rec = simulate_point(run, system, t_g=t_g)
            rec.update(index=i, axis="t_g_ns", axis_value=t_g, failure="")
            rows.append(rec)
            print(f"{protocol} t_g={t_g}: error={rec['error']:.3e}")
        path = out / f"chirp_benefit_{protocol}.csv"
        with open(path, "w") as fh:
            fh.write("# config: " + json.dumps(run.resolved_dict(), sort_keys=True) + "\n")
            fh.write(",".join(COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join(repr(row[c]) if isinstance(row.get(c), float)
                                  else str(row.get(c, "")) for c in COLUMNS) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
