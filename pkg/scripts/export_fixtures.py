"""Write every built-in diagram and its compiled scheme (with metrics) as JSON."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from fockforge.zx.extract import ConversionError, extract_scheme, scheme_metrics
from fockforge.zx.fixtures import FIXTURES


@dataclass
class ExportConfig:
    out_dir: str = "fixtures_out"


def main(cfg: ExportConfig):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in FIXTURES.items():
        d = make()
        (out / f"{name}.diagram.json").write_text(d.dumps() + "\n")
        try:
            s = extract_scheme(d)
        except ConversionError as exc:
            print(f"{name}: not convertible ({'; '.join(exc.violations)})")
            continue
        m = scheme_metrics(s)
        (out / f"{name}.scheme.json").write_text(s.dumps(m) + "\n")
        print(f"{name:<16} P_S {str(m.success_probability):>10}  photons {m.photon_count:>3}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=ExportConfig.out_dir)
    main(ExportConfig(**vars(ap.parse_args())))
