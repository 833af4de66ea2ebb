"""Command line driver.

    sptwist verify     [--N 3] [--kappa 1,1] [--eta 1,1,1] [--checks twist,qybe] [--out report.json]
    sptwist rmatrix    [--N 3] ... --out R.json [--format json|csv]
    sptwist classical  [--N 3] ... --out r.json
    sptwist demo-costr

``--kappa`` holds the extension switches of steps 1..p-1 where p = len(eta);
the last step of a full chain has no constituent roots.  ``--spec file.json``
takes a chain in the ``{"N": .., "steps": [{"k", "eta", "kappa"}]}`` form
instead.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exactkernel import ExactMatrix, format_scalar, parse_scalar
from .report import CheckReport
from .spalgebra import fundamental_rep, structure_table, symmetric_square_rep, verify_rep
from .twistchain import ChainSpec, ChainStep, build_chain, describe_chain
from .uexpr import to_str
from . import verify as V

ALL_CHECKS = (
    "structure",
    "twist",
    "counit",
    "costr",
    "primitive",
    "triangularity",
    "qybe",
    "classical",
    "cybe",
    "rescaling",
)

RESCALE_FACTOR = Fraction(2)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    N: int = 3
    kappa: list[int] = field(default_factory=lambda: [1, 1])
    eta: list[Fraction] = field(default_factory=lambda: [Fraction(1)] * 3)
    out: str | None = None
    format: str = "json"
    checks: tuple[str, ...] = ALL_CHECKS
    jobs: int = 1
    spec_json: dict | None = None

    def chain_spec(self) -> ChainSpec:
        if self.spec_json is not None:
            return ChainSpec.from_json(self.spec_json)
        p = len(self.eta)
        steps = [ChainStep(k, self.eta[k - 1], self.kappa[k - 1] if k < p else 1) for k in range(1, p + 1)]
        return ChainSpec(self.N, tuple(steps))


@dataclass
class VerificationSummary:
    reports: list[CheckReport]
    seconds: dict[str, float]

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def failed(self) -> int:
        return len(self.reports) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "total": len(self.reports),
            "passed": self.passed,
            "failed": self.failed,
            "checks": [dict(r.to_json(), seconds=round(self.seconds[r.name], 3)) for r in self.reports],
        }


# --------------------------------------------------------------------------
# config parsing


def _max_n() -> int:
    return int(os.environ.get("TWIST_MAX_N", "5"))


def _int_list(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sptwist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "rmatrix", "classical", "demo-costr"):
        p = sub.add_parser(name)
        p.add_argument("--N", type=int, default=3)
        p.add_argument("--kappa", type=str, default=None, help="comma list of 0/1 for steps 1..p-1")
        p.add_argument("--eta", type=str, default=None, help="comma list of p/q, one per step")
        p.add_argument("--spec", type=str, default=None, help="chain spec JSON file")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--checks", type=str, default=None, help=f"subset of {','.join(ALL_CHECKS)}")
        p.add_argument("--jobs", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    N = args.N
    if N < 1 or N > _max_n():
        raise UsageError(f"N must be in 1..{_max_n()} (TWIST_MAX_N)")
    try:
        eta = [Fraction(x.strip()) for x in args.eta.split(",")] if args.eta else [Fraction(1)] * N
        kappa = _int_list(args.kappa) if args.kappa is not None else [1] * (N - 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number: {exc}") from None
    spec_json = None
    if args.spec:
        try:
            spec_json = json.loads(Path(args.spec).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.spec}: {exc}") from None
        N = int(spec_json["N"])
    else:
        if not 1 <= len(eta) <= N:
            raise UsageError(f"--eta needs between 1 and {N} entries")
        if len(kappa) != len(eta) - 1:
            raise UsageError(
                f"--kappa has {len(kappa)} entries but --eta has {len(eta)}; "
                "kappa covers steps 1..p-1"
            )
        if any(k not in (0, 1) for k in kappa):
            raise UsageError("kappa entries are 0 or 1")
    checks = tuple(ALL_CHECKS)
    if args.checks:
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        unknown = set(checks) - set(ALL_CHECKS)
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    cfg = RunConfig(args.command, N, kappa, eta, args.out, args.format, checks, args.jobs, spec_json)
    try:
        cfg.chain_spec()
    except (ValueError, KeyError) as exc:
        raise UsageError(f"invalid chain: {exc}") from None
    return cfg


# --------------------------------------------------------------------------
# checks


def _check_thunks(name: str, cfg: RunConfig) -> list:
    spec = cfg.chain_spec()
    rep = fundamental_rep(spec.N)
    fact = build_chain(spec)
    tag = f"sp({spec.N})"

    def renamed(report: CheckReport, label: str) -> CheckReport:
        report.name = f"{label} {tag}"
        return report

    if name == "structure":
        return [lambda: verify_rep(rep, structure_table(spec.N))]
    if name == "twist":
        return [lambda: renamed(V.check_cocycle(fact, rep), "twist equation")]
    if name == "counit":
        return [lambda: renamed(V.check_counit(fact, rep), "counit")]
    if name == "costr":
        if spec.N != 3:
            return []
        return [lambda: V.check_costr(rep), lambda: V.check_costr(symmetric_square_rep(rep))]
    if name == "primitive":
        return [lambda: V.primitivity_reports(spec, rep)] if spec.N > 1 else []
    if name == "triangularity":
        return [lambda: renamed(V.check_triangularity(V.r_matrix(fact, rep)), name)]
    if name == "qybe":
        return [lambda: renamed(V.check_qybe(V.r_matrix(fact, rep)), name)]
    if name == "classical":
        return [lambda: V.check_classical_limit(spec, rep)]
    if name == "cybe":
        return [lambda: renamed(V.check_cybe(V.classical_r(spec, rep), rep), name)]
    if name == "rescaling":
        return [lambda s=s: V.check_eta_rescaling(spec, s.k, RESCALE_FACTOR, rep) for s in spec.steps]
    raise ValueError(name)


def _timed(name: str, cfg: RunConfig) -> list[tuple[CheckReport, float]]:
    out = []
    for thunk in _check_thunks(name, cfg):
        t = time.perf_counter()
        report = thunk()
        out.append((report, time.perf_counter() - t))
    return out


def run_verify(cfg: RunConfig) -> VerificationSummary:
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_timed, cfg.checks, [cfg] * len(cfg.checks)))
    else:
        results = [_timed(name, cfg) for name in cfg.checks]
    reports, seconds = [], {}
    for timed in results:
        for r, dt in timed:
            reports.append(r)
            seconds[r.name] = dt
    reports.sort(key=lambda r: r.name)
    return VerificationSummary(reports, seconds)


# --------------------------------------------------------------------------
# exports


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        Path(cfg.out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.out}: {exc}") from None


def _grid_csv(m: ExactMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in m.rows():
        w.writerow([format_scalar(x) for x in row])
    return buf.getvalue()


def _header(spec: ChainSpec) -> dict:
    return {
        "N": spec.N,
        "eta": [format_scalar(e) for e in spec.eta],
        "kappa": list(spec.kappa),
    }


def rmatrix_text(cfg: RunConfig) -> str:
    spec = cfg.chain_spec()
    R = V.r_matrix(build_chain(spec), fundamental_rep(spec.N)).matrix
    if cfg.format == "csv":
        return _grid_csv(R)
    return json.dumps({**_header(spec), **R.to_json()}, indent=1) + "\n"


def export_rmatrix(cfg: RunConfig) -> None:
    _write(cfg, rmatrix_text(cfg))


def load_rmatrix(path: str | Path) -> V.RMatrixResult:
    obj = json.loads(Path(path).read_text())
    spec = ChainSpec.full(
        int(obj["N"]),
        [parse_scalar(e) for e in obj["eta"]],
        [int(k) for k in obj["kappa"]],
    )
    return V.RMatrixResult(ExactMatrix.from_json(obj), 2 * spec.N, spec, spec.params())


def classical_text(cfg: RunConfig) -> str:
    spec = cfg.chain_spec()
    rep = fundamental_rep(spec.N)
    extracted = V.classical_r(spec, rep).matrix
    formula = V.classical_r_formula(spec, rep)
    blocks = {"extracted": extracted, "formula": formula, "difference": extracted - formula}
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["matrix", "row", "col", "value"])
        for name, m in blocks.items():
            for i, row in enumerate(m.rows()):
                for j, x in enumerate(row):
                    w.writerow([name, i, j, format_scalar(x)])
        return buf.getvalue()
    out = {**_header(spec), "dim": extracted.dim}
    out.update({name: m.to_json()["entries"] for name, m in blocks.items()})
    return json.dumps(out, indent=1) + "\n"


def export_classical(cfg: RunConfig) -> None:
    _write(cfg, classical_text(cfg))


def demo_costr() -> str:
    lines = ["The sp(3) chain:"]
    spec = ChainSpec.full(3)
    lines += ["  " + s for s in describe_chain(build_chain(spec)).splitlines()]
    lines.append("")
    lines.append("Twisted coproducts of the sp(2) generators after step 1:")
    for label, _, rhs in V.costr_identities():
        lines.append(f"  Δ({label}) = {to_str(rhs)}")
    lines.append("")
    rep = fundamental_rep(3)
    for r in (V.check_costr(rep), V.check_costr(symmetric_square_rep(rep))):
        lines.append(r.line())
        lines += [f"    {d.line()}" for d in r.details]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "verify":
            summary = run_verify(cfg)
            for r in summary.reports:
                print(f"{r.line():<70} {summary.seconds[r.name]:8.2f}s")
                if not r.passed:
                    print(f"    witness: {json.dumps(r.witness)}")
            print(f"{summary.passed}/{len(summary.reports)} checks passed")
            if cfg.out:
                _write(cfg, json.dumps(summary.to_json(), indent=1) + "\n")
            return 0 if summary.ok else 1
        if cfg.command == "rmatrix":
            export_rmatrix(cfg)
        elif cfg.command == "classical":
            export_classical(cfg)
        elif cfg.command == "demo-costr":
            text = demo_costr()
            _write(cfg, text)
            return 0 if "[FAIL]" not in text else 1
        return 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sptwist: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
