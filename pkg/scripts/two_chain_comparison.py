"""Two ways to grow a pair of 4-qubit chains into one state, with and without boosting.

One fuses through two 5-GHZ analysers, the other through Bell analysers only.
Boosting both 5-GHZ analysers fully is compared with boosting the single Bell
analyser that joins the chains.
"""

import argparse
from dataclasses import dataclass, field

from fockforge.zx.extract import extract_scheme, scheme_metrics
from fockforge.zx.fixtures import FIXTURES


@dataclass
class Variant:
    fixture: str
    boosting: dict = field(default_factory=dict)


@dataclass
class ComparisonConfig:
    variants: dict = field(
        default_factory=lambda: {
            "5-GHZ plain": Variant("two_chain_ghz5"),
            "Bell plain": Variant("two_chain_bells"),
            "5-GHZ boosted": Variant("two_chain_ghz5", {"FA": range(5), "FB": range(5)}),
            "Bell boosted": Variant("two_chain_bells", {"X": (0, 1)}),
        }
    )


def main(cfg: ComparisonConfig):
    print(f"{'variant':<14} {'P_S':>22} {'float':>11} {'photons':>7} {'PNR':>3}")
    for name, v in cfg.variants.items():
        m = scheme_metrics(extract_scheme(FIXTURES[v.fixture]()), v.boosting)
        p = m.success_probability
        print(f"{name:<14} {str(p):>22} {float(p):11.4e} {m.photon_count:>7} {m.max_pnr:>3}")


if __name__ == "__main__":
    argparse.ArgumentParser(description=__doc__).parse_args()
    main(ComparisonConfig())
