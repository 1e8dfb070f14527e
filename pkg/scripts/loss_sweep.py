"""Lossy success probability of fully boosted analysers over a transmission grid.

Writes one CSV with a column per device and prints the exact polynomials.
"""

import argparse
import csv
from dataclasses import dataclass

import numpy as np

from fockforge.devices import bell_analyser, boosted, ghz_analyser
from fockforge.kraus import kraus_table, pattern_table
from fockforge.loss import lossy_success_probability


@dataclass
class SweepConfig:
    etas: int = 21
    rule: str = "idle-unit"
    out: str = "loss_sweep.csv"


DEVICES = {
    "bell": lambda: bell_analyser(),
    "ghz3": lambda: ghz_analyser(3),
    "ghz4": lambda: ghz_analyser(4),
}


def main(cfg: SweepConfig):
    polys = {}
    for name, make in DEVICES.items():
        base = make()
        d = boosted(base, tuple(range(base.n)))
        table = pattern_table(d)
        polys[name] = lossy_success_probability(d, cfg.rule, kraus_table(d, table=table), table)
        print(f"{name}: P_S(eta) = {polys[name]}")
    etas = np.linspace(0, 1, cfg.etas)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eta", *polys])
        for e in etas:
            w.writerow([f"{e:.6g}", *(f"{p(float(e)):.10g}" for p in polys.values())])
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--etas", type=int, default=SweepConfig.etas)
    ap.add_argument("--rule", choices=["idle-unit", "unambiguous"], default=SweepConfig.rule)
    ap.add_argument("--out", default=SweepConfig.out)
    main(SweepConfig(**vars(ap.parse_args())))
