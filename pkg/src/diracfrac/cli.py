"""Command-line entry point: ``diracfrac {verify,enumerate,frac,evolve,heat,levy}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from diracfrac import evolution, families, fractional, levy
from diracfrac.errors import DomainError, InvalidOrderError, ResolutionError
from diracfrac.serialize import csv_text, dumps, fmt, matrix_to_json
from diracfrac.spectral import parse_init

DEFAULT_SEED = 42
TOL_FLOOR = 1e-15


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    out: Path | None = None
    tol: float | None = None

    def tolerance(self, default: float) -> float:
        return default if self.tol is None else max(self.tol, TOL_FLOOR)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _seed(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--tol", type=float, default=None, help="override default tolerances (floor 1e-15)")

    parser = argparse.ArgumentParser(prog="diracfrac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a factor family's identities")
    p.add_argument("--family", required=True, choices=families.FAMILY_NAMES)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("enumerate", parents=[common], help="exhaustive cubic triple catalog")
    p.add_argument("--n", type=int, default=3)

    p = sub.add_parser("frac", parents=[common], help="fractional operator matrices")
    p.add_argument("--kind", required=True, choices=("half", "third"))
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--check-power", action="store_true")
    p.add_argument("--exponents", default="1/2,1,2,37/10")

    for name in ("evolve", "heat"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--t", type=float, required=True)
        p.add_argument("--grid", type=int, default=256)
        p.add_argument("--length", type=float, default=20.0)
        p.add_argument("--init", default="gaussian:sigma=1")
    evolve_p, heat_p = sub.choices["evolve"], sub.choices["heat"]
    evolve_p.help = "evolve the linearized system"
    evolve_p.add_argument("--a", type=float, required=True)
    evolve_p.add_argument("--method", choices=evolution.METHODS, default="exact")
    evolve_p.add_argument("--bch-scan", action="store_true")
    evolve_p.add_argument("--p", type=float, default=1.0, help="wavenumber for --bch-scan")
    evolve_p.add_argument("--tmin", type=float, default=1e-4)
    evolve_p.add_argument("--tmax", type=float, default=1e-2)
    evolve_p.add_argument("--points", type=int, default=9)
    heat_p.add_argument("--k", type=float, required=True)
    heat_p.add_argument("--solver", choices=("levy", "fourier", "both"), default="both")

    p = sub.add_parser("levy", parents=[common], help="one-sided stable densities")
    p.add_argument("--nu", type=_fraction, required=True)
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--pmin", type=float, default=0.1)
    p.add_argument("--pmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=25)
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    seed, out, tol = ns.pop("seed"), ns.pop("out"), ns.pop("tol")
    return RunConfig(command, ns, seed, out, tol)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _verify(cfg: RunConfig) -> int:
    o = cfg.options
    if o["family"] == "tau" and o["n"] is None:
        raise UsageError("--family tau requires --n")
    report = families.verify_family(o["family"], o["n"], o["trials"], cfg.seed, cfg.tolerance(1e-10))
    _emit(dumps(report), cfg.out)
    return 0 if report["passed"] else 1


def _enumerate(cfg: RunConfig) -> int:
    n = cfg.options["n"]
    if n != 3:
        raise UsageError(f"only --n 3 is supported, got {n}")
    certs = families.enumerate_triples(n)
    counts = families.triple_counts(certs)
    found = {
        "lambda": families.contains_triple(certs, families.lambda_matrices()),
        "phi": families.contains_triple(certs, families.phi_matrices()),
    }
    catalog = {
        "order": n,
        "candidates": len(families.cubic_candidates()),
        "counts": counts,
        "contains": found,
        "triples": [
            {
                "matrices": [matrix_to_json(m) for m in c.matrices],
                "order": c.order,
                "checks": [{"name": name, "residual": res} for name, res in c.checks],
                "passed": c.passed,
            }
            for c in certs
        ],
    }
    _emit(dumps(catalog), cfg.out)
    summary = ", ".join(f"{k}={v}" for k, v in counts.items())
    print(f"cubic triples: {summary}", file=sys.stderr)
    ok = all(c.passed for c in certs) and all(found.values())
    return 0 if ok else 1


def _frac(cfg: RunConfig) -> int:
    o = cfg.options
    kind = "O_half" if o["kind"] == "half" else "O_third"
    if o["x"] <= 0:
        raise UsageError("--x must be positive")
    op = fractional.assemble_operator(kind, o["a"], o["j"], o["k"])
    report = {"kind": kind, "a": o["a"], "x": o["x"], "matrix": matrix_to_json(op.evaluate(o["x"]))}
    ok = True
    if o["check_power"]:
        exps = [Fraction(e) for e in o["exponents"].split(",")]
        check = fractional.operator_power_check_report(kind, o["a"], exps, j=o["j"], k=o["k"])
        tol = cfg.tolerance(1e-12)
        ok = check.max_error <= tol
        report["power_check"] = {
            "exponents": [str(e) for e in exps],
            "per_exponent": {str(k): v for k, v in check.per_exponent.items()},
            "max_error": check.max_error,
            "tolerance": tol,
            "pole_convention_triggered": check.pole_convention_triggered,
            "passed": ok,
        }
    _emit(dumps(report), cfg.out)
    return 0 if ok else 1


def _evolve(cfg: RunConfig) -> int:
    o = cfg.options
    if o["bch_scan"]:
        ts = np.geomspace(o["tmin"], o["tmax"], o["points"])
        rows, slope = evolution.bch_error_scan(o["n"], o["a"], o["p"], ts)
        _emit(csv_text(["t", "residual", "slope"], [(t, r, slope) for t, r in rows]), cfg.out)
        ok = o["a"] == 0 or o["p"] == 0 or 2.9 <= slope <= 3.1
        return 0 if ok else 1
    f = parse_init(o["init"], o["grid"], o["length"])
    phi0 = evolution.VectorSpectralField.replicate(f, o["n"])
    spec = evolution.PropagatorSpec(o["n"], o["a"], o["t"], o["method"])
    phi = evolution.evolve(phi0, spec)
    print("note: initial vector has every component equal to the --init field", file=sys.stderr)
    x = f.x
    rows = []
    for c, comp in enumerate(phi.components):
        vals = comp.samples()
        rows.extend((xi, c, v.real, v.imag) for xi, v in zip(x, vals))
    _emit(csv_text(["x", "component", "re", "im"], rows), cfg.out)
    return 0


def _heat(cfg: RunConfig) -> int:
    o = cfg.options
    f = parse_init(o["init"], o["grid"], o["length"])
    problem = levy.HeatProblem(o["n"], o["k"], f, o["t"])
    ok = True
    if o["solver"] == "fourier":
        field_ = levy.heat_solve_fourier(problem)
    else:
        field_ = levy.heat_solve_levy(problem)
    if o["solver"] == "both":
        err = levy.relative_l2(field_, levy.heat_solve_fourier(problem))
        ok = err <= cfg.tolerance(1e-4)
        print(f"relative_l2={fmt(err)} passed={str(ok).lower()}", file=sys.stderr)
    vals = field_.samples()
    _emit(csv_text(["x", "re", "im"], [(xi, v.real, v.imag) for xi, v in zip(f.x, vals)]), cfg.out)
    return 0 if ok else 1


def _levy(cfg: RunConfig) -> int:
    o = cfg.options
    spec = levy.StableDensitySpec.default(o["nu"])
    report = {"nu": str(spec.nu), "method": spec.method, "mass": levy.stable_mass(spec.nu)}
    ok = abs(report["mass"] - 1) <= 1e-6
    if o["check_identity"]:
        if not 0 < o["pmin"] <= o["pmax"]:
            raise UsageError("need 0 < --pmin <= --pmax")
        grid = np.geomspace(o["pmin"], o["pmax"], o["points"])
        err = levy.levy_identity_check(spec.nu, o["c"], grid, spec)
        tol = cfg.tolerance(1e-6)
        report.update({"c": o["c"], "pmin": o["pmin"], "pmax": o["pmax"], "points": o["points"],
                       "max_error": err, "tolerance": tol})
        ok &= err <= tol
    report["passed"] = bool(ok)
    _emit(dumps(report), cfg.out)
    return 0 if ok else 1


COMMANDS = {
    "verify": _verify,
    "enumerate": _enumerate,
    "frac": _frac,
    "evolve": _evolve,
    "heat": _heat,
    "levy": _levy,
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError, InvalidOrderError, ResolutionError, ValueError, IndexError) as exc:
        print(f"diracfrac {cfg.command}: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
