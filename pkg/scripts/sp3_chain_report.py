"""Print the sp(3) chain, its deformed bases and the full check suite.

    python scripts/sp3_chain_report.py --eta 1,1/2,-2/3 --out results/sp3.json
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from sptwist.cli import RunConfig, run_verify
from sptwist.spalgebra import E, F
from sptwist.twistchain import ChainSpec, build_chain, describe_chain


@dataclass
class ReportConfig:
    eta: list[str] = field(default_factory=lambda: ["1", "1", "1"])
    kappa: list[int] = field(default_factory=lambda: [1, 1])
    out: str | None = None


def main(cfg: ReportConfig) -> int:
    eta = [Fraction(e) for e in cfg.eta]
    spec = ChainSpec.full(3, eta, cfg.kappa)
    fact = build_chain(spec)
    print("twist, leftmost factor first:")
    print(describe_chain(fact))
    for level in (1, 2):
        basis = fact.bases[level]
        print(f"\nlevel {level} generators:")
        for g in (E(2), E(2, 3), E(3), F(2), F(2, 3), F(3)):
            if min(g.i, g.j) > level:
                print(f"  {g} -> {basis[g]}")
    summary = run_verify(RunConfig(N=3, kappa=list(cfg.kappa), eta=eta))
    print()
    for r in summary.reports:
        print(f"{r.line():<72} {summary.seconds[r.name]:6.2f}s")
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps({"config": asdict(cfg), **summary.to_json()}, indent=1))
    return 0 if summary.ok else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--eta", default="1,1,1")
    ap.add_argument("--kappa", default="1,1")
    ap.add_argument("--out", default=None)
    a = ap.parse_args()
    raise SystemExit(main(ReportConfig(a.eta.split(","), [int(k) for k in a.kappa.split(",")], a.out)))
