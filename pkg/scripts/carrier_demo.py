"""The extended jordanian twist on its 4-dimensional carrier for several beta.

Checks the twist equation, the jordanian coproducts of E and A, and the
first-order r-matrix H^E + A^B.
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from sptwist.exactkernel import exp_nilpotent, identity, kron, log_one_plus, tensor_flip, xi, xi_coefficient
from sptwist.twistchain import carrier_representation, chain_matrix, extended_jordanian_twist
from sptwist.uexpr import Gen, Param
from sptwist.verify import TwistedCoproduct, check_twist_equation


@dataclass
class CarrierConfig:
    betas: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 3), Fraction(-2, 5), Fraction(3))
    eta: Fraction = Fraction(1)


def run(cfg: CarrierConfig) -> bool:
    ok = True
    for beta in cfg.betas:
        rep = carrier_representation(beta)
        one = identity(rep.dim)
        sigma = log_one_plus(rep["E"].scale(cfg.eta))
        tw_ext = check_twist_equation(extended_jordanian_twist(beta, cfg.eta), rep).passed
        tc = TwistedCoproduct(extended_jordanian_twist(beta, cfg.eta, extended=False), rep)
        da = tc(Gen("A")) == kron(rep["A"], exp_nilpotent(sigma.scale(1 - beta))) + kron(one, rep["A"])
        twist = chain_matrix(extended_jordanian_twist(beta, Param("eta")), rep, {"eta": xi()})
        f1 = xi_coefficient(twist, 1)
        w = lambda a, b: kron(rep[a], rep[b]) - kron(rep[b], rep[a])  # noqa: E731
        r_ok = f1 - tensor_flip(f1, rep.dim) == w("H", "E") + w("A", "B")
        print(f"beta={beta}: twist equation {tw_ext}, Delta_J(A) {da}, r = H^E + A^B {r_ok}")
        ok &= tw_ext and da and r_ok
    return ok


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--eta", default="1")
    a = ap.parse_args()
    raise SystemExit(0 if run(CarrierConfig(eta=Fraction(a.eta))) else 1)
