"""Wall-clock of the central checks against N, written as CSV.

    python scripts/timing_sweep.py --max-n 5 --out results/timing.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from sptwist.spalgebra import fundamental_rep
from sptwist.twistchain import ChainSpec, build_chain
from sptwist.verify import check_classical_limit, check_qybe, check_twist_equation, primitivity_reports, r_matrix

SAMPLES = [Fraction(1), Fraction(1, 2), Fraction(-2, 3), Fraction(2), Fraction(-3)]


@dataclass
class SweepConfig:
    max_n: int = 5
    out: str | None = None


def sweep(cfg: SweepConfig) -> list[dict]:
    rows = []
    for N in range(1, cfg.max_n + 1):
        spec = ChainSpec.full(N, SAMPLES[:N])
        rep = fundamental_rep(N)
        fact = build_chain(spec)
        row = {"N": N, "rep_dim": rep.dim, "factors": len(fact)}
        for name, fn in (
            ("twist", lambda: check_twist_equation(fact, rep)),
            ("qybe", lambda: check_qybe(r_matrix(fact, rep))),
            ("classical", lambda: check_classical_limit(spec, rep)),
            ("primitive", lambda: primitivity_reports(spec, rep)),
        ):
            t = time.perf_counter()
            row[name] = fn().passed
            row[f"{name}_s"] = round(time.perf_counter() - t, 3)
        print(row, flush=True)
        rows.append(row)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--out", default=None)
    a = ap.parse_args()
    rows = sweep(SweepConfig(a.max_n, a.out))
    fh = open(a.out, "w", newline="") if a.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
