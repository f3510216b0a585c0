#!/usr/bin/env python3
"""Run the shipped full-noise X-gate point and print the error budget.

Usage: python scripts/reproduce_headline.py [--scenario PATH] [--workers N]
"""

import argparse
import dataclasses
import json
import time

from fluxtripod.scenario import load_scenario, prepare_system, simulate_point


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="scenarios/paper_x_gate.json")
    parser.add_argument("--workers", type=int, default=0)
    args = parser.parse_args()

    scn = load_scenario(args.scenario)
    system = prepare_system(scn)

    t0 = time.perf_counter()
    full = simulate_point(scn, system, workers=args.workers)
    full["runtime_s"] = round(time.perf_counter() - t0, 1)

    closed = simulate_point(
        dataclasses.replace(scn, noise=None), system, workers=args.workers
    )
    deph_only = simulate_point(
        dataclasses.replace(scn, noise=dataclasses.replace(scn.noise, q_diel=None)),
        system,
        workers=args.workers,
    )

    budget = {
        "coherent": closed["error"],
        "dephasing_increment": deph_only["error"] - closed["error"],
        "relaxation_increment": full["error"] - deph_only["error"],
        "total": full["error"],
    }
    print(json.dumps({"point": {k: v for k, v in full.items() if k != "per_state"},
                      "budget": budget}, indent=2))


if __name__ == "__main__":
    main()
