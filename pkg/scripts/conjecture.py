"""Compare the conjectured closed form for fully boosted n-GHZ analysers with exact simulation."""

import argparse
import time
from dataclasses import dataclass

from fockforge.checks import conjecture_formula
from fockforge.factorised import boosted_analyser_stats


@dataclass
class ConjectureConfig:
    n_max: int = 4


def main(cfg: ConjectureConfig):
    print(f"{'n':>2}  {'simulated':>10}  {'formula':>10}  {'PNR':>3}  match  seconds")
    for n in range(2, cfg.n_max + 1):
        t = time.perf_counter()
        p, level = boosted_analyser_stats(n, tuple(range(n)))
        f = conjecture_formula(n)
        print(f"{n:>2}  {str(p):>10}  {str(f):>10}  {level:>3}  {str(p == f):>5}  {time.perf_counter() - t:7.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=ConjectureConfig.n_max, help="5 takes about a minute")
    main(ConjectureConfig(**vars(ap.parse_args())))
