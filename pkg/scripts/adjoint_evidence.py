"""Repeat identity checks in Sym^2 V (the adjoint of sp(N)).

The defining representation kills squares of root vectors, so some
formulas cannot be told apart there.  Sym^2 V is larger and does not.
"""

import argparse
import time
from dataclasses import dataclass

from sptwist.spalgebra import fundamental_rep, structure_table, symmetric_square_rep, verify_rep
from sptwist.twistchain import ChainSpec, build_chain
from sptwist.verify import check_costr, check_qybe, check_twist_equation, r_matrix


@dataclass
class AdjointConfig:
    twist_n: int = 2


def main(cfg: AdjointConfig) -> int:
    ok = True
    for N in (1, 2, 3):
        r = verify_rep(symmetric_square_rep(fundamental_rep(N)), structure_table(N))
        print(r.line())
        ok &= r.passed
    rep3 = symmetric_square_rep(fundamental_rep(3))
    for square in ("lowering", "raising"):
        r = check_costr(rep3, square)
        print(f"{r.line()}  ({square} square in F-sector; failed: {r.witness and r.witness['failed']})")
        ok &= r.passed == (square == "lowering")
    for N in range(1, cfg.twist_n + 1):
        rep = symmetric_square_rep(fundamental_rep(N))
        fact = build_chain(ChainSpec.full(N))
        t = time.perf_counter()
        tw = check_twist_equation(fact, rep)
        qy = check_qybe(r_matrix(fact, rep))
        print(f"sp({N}) in Sym2 V (dim {rep.dim}): twist {tw.status}, qybe {qy.status}, "
              f"{time.perf_counter() - t:.1f}s")
        ok &= tw.passed and qy.passed
    return 0 if ok else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--twist-n", type=int, default=2)
    raise SystemExit(main(AdjointConfig(ap.parse_args().twist_n)))
