"""Command-line front end.

Output is comma (or tab) separated with one ``#`` header line.  Floats are
written with 12 significant digits so files are stable byte for byte.

Exit codes: 0 success, 1 bad input, 2 a computed result broke an identity.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import audits, classical, quantum
from .errors import InvariantError, ValidationError
from .pauli import Axis

AGREEMENT_TOL = 1e-12
NORMALIZATION_TOL = 1e-12


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == 0.0:
            x = 0.0  # drop the sign of -0.0
        return f"{x:.12g}"
    return str(x)


class _Writer:
    def __init__(self, fmt_name: str):
        self.sep = "\t" if fmt_name == "tsv" else ","
        self.buf = io.StringIO()

    def header(self, cols: Sequence[str]) -> None:
        self.buf.write("# " + self.sep.join(cols) + "\n")

    def row(self, values: Iterable) -> None:
        self.buf.write(self.sep.join(fmt(v) for v in values) + "\n")

    def emit(self, out: str | None) -> None:
        text = self.buf.getvalue()
        if out:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# argument helpers


def _degrees(value: float, photon: bool) -> float:
    if not math.isfinite(value):
        raise ValidationError(f"angle must be finite, got {value!r}")
    # photon polarizer angles act as twice the spin angle
    return math.radians(2.0 * value if photon else value)


def _quadruple(args) -> quantum.AxisQuadruple:
    if args.axes and args.coplanar_theta is not None:
        raise ValidationError("give either --axes or --coplanar-theta, not both")
    if args.axes:
        axes = [Axis.parse(t) for t in args.axes]
        if len(axes) != 4:
            raise ValidationError(f"--axes needs 4 triples, got {len(axes)}")
        return quantum.AxisQuadruple(*axes)
    if args.coplanar_theta is None:
        raise ValidationError("need --axes or --coplanar-theta")
    return quantum.coplanar_axes(_degrees(args.coplanar_theta, args.photon))


def _strategy(spec: str) -> classical.LhvStrategy:
    spec = spec.strip()
    path = Path(spec)
    if path.is_file():
        text = path.read_text(encoding="utf-8").strip()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = None
        if isinstance(data, list):
            return classical.LhvStrategy.from_unnormalized(data)
        if isinstance(data, dict):
            raw = [float(data.get(x.label(), 0.0)) for x in classical.ASSIGNMENTS]
            unknown = set(data) - {x.label() for x in classical.ASSIGNMENTS}
            if unknown:
                raise ValidationError(f"unknown assignment labels in strategy file: {sorted(unknown)}")
            return classical.LhvStrategy.from_unnormalized(raw)
        spec = text.replace("\n", ",")
    if spec == "uniform":
        return classical.LhvStrategy.uniform()
    if spec.startswith("point:"):
        return classical.LhvStrategy.point_mass(classical.ClassicalAssignment.of(spec[6:]))
    try:
        raw = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse strategy {spec!r}") from None
    if len(raw) != 16:
        raise ValidationError(f"strategy needs 16 weights, got {len(raw)}")
    if min(raw) < 0:
        raise ValidationError("strategy weights must be nonnegative")
    return classical.LhvStrategy.from_unnormalized(raw)


# --------------------------------------------------------------------------
# subcommands


def cmd_table(args) -> int:
    q = _quadruple(args)
    t = quantum.table2(q, args.symmetry)
    total = t.total()
    w = _Writer(args.format)
    w.header(["signs", "probability"])
    for signs, value in t.items():
        w.row([quantum.format_signs(signs), value])
    w.row(["delta", quantum.delta(q)])
    w.row(["sum", total])
    w.emit(args.out)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise InvariantError(f"table sums to {total!r}, not 1")
    return 0


def _sweep_thetas(args) -> np.ndarray:
    lo, hi, steps = args.theta_min, args.theta_max, args.steps
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValidationError("theta range must be finite")
    if steps < 2:
        raise ValidationError("--steps must be at least 2")
    if hi <= lo:
        raise ValidationError("--theta-max must exceed --theta-min")
    return np.linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    w = _Writer(args.format)
    labels = [quantum.format_signs(s) for s in quantum.SIGN_QUADRUPLES]
    w.header(
        ["theta_deg", "spin_theta_deg"] + [f"P{lab}" for lab in labels]
        + ["delta", "chsh_closed", "chsh_dot", "chsh_master"]
    )
    worst = 0.0
    for deg in _sweep_thetas(args):
        theta = _degrees(float(deg), args.photon)
        q = quantum.coplanar_axes(theta)
        t = quantum.table2(q, args.symmetry)
        closed = quantum.chsh_closed_form(theta)
        dot = quantum.chsh_dot_form(q)
        sym = t if t.symmetry is quantum.Symmetry.SYMMETRIC else t.flipped_b()
        master = quantum.chsh_master_form(sym)
        worst = max(worst, abs(closed - dot), abs(closed - master), abs(dot - master))
        w.row([float(deg), math.degrees(theta)] + t.values() + [quantum.delta(q), closed, dot, master])
    w.emit(args.out)
    if worst > AGREEMENT_TOL:
        raise InvariantError(f"CHSH forms disagree by {worst!r}")
    return 0


def cmd_chsh(args) -> int:
    q = _quadruple(args)
    sym = quantum.table2(q, quantum.Symmetry.SYMMETRIC)
    anti = quantum.table2(q, quantum.Symmetry.ANTISYMMETRIC)
    dot = quantum.chsh_dot_form(q)
    master = quantum.chsh_master_form(sym, anti)
    w = _Writer(args.format)
    w.header(["quantity", "value"])
    values = [dot, master]
    if args.coplanar_theta is not None and not args.axes:
        closed = quantum.chsh_closed_form(_degrees(args.coplanar_theta, args.photon))
        w.row(["chsh_closed", closed])
        values.append(closed)
    w.row(["chsh_dot", dot])
    w.row(["chsh_master", master])
    w.row(["exceeds_classical_bound", abs(dot) > 2.0 + AGREEMENT_TOL])
    w.emit(args.out)
    if max(values) - min(values) > AGREEMENT_TOL:
        raise InvariantError("CHSH forms disagree")
    return 0


def cmd_lhv(args) -> int:
    strategy = _strategy(args.strategy)
    res = classical.simulate_lhv(strategy, args.trials, args.seed, workers=args.workers)
    exact = classical.correlations_from_strategy(strategy)
    est, se = res.estimates, res.stderr
    sigma = res.chsh_stderr
    limit = 2.0 + 5.0 * sigma
    w = _Writer(args.format)
    w.header(["quantity", "value"])
    w.row(["trials", res.trials])
    w.row(["seed", res.seed])
    for name, n, e, s, x in zip(("C11", "C12", "C21", "C22"), res.counts, est, se, exact):
        w.row([f"{name}_n", n])
        w.row([name, e])
        w.row([f"{name}_se", s])
        w.row([f"{name}_exact", x])
    w.row(["chsh", res.chsh])
    w.row(["chsh_se", sigma])
    w.row(["chsh_exact", exact.chsh])
    w.row(["bound", limit])
    w.row(["verdict", "PASS" if abs(res.chsh) <= limit else "FAIL"])
    w.emit(args.out)
    return 0


def cmd_audit(args) -> int:
    w = _Writer(args.format)
    w.header(["audit", "case", "key", "value"])
    name = args.name
    if name == "stapp85":
        counts = audits.stapp85_value_counts()
        for value in audits.STAPP85_VALUES:
            w.row([name, "enumeration", "summand_value", value])
            w.row([name, "enumeration", "multiplicity", counts[value]])
    for case, rep in audits.default_instances(name):
        w.row([name, case, "lhs", rep.lhs])
        w.row([name, case, "rhs", rep.rhs])
        w.row([name, case, "bound_respected", rep.bound_respected])
        w.row([name, case, "verdict", "PASS" if rep.bound_respected else "VIOLATION"])
        for key, value in rep.details.items():
            w.row([name, case, key, _flat(value)])
        if rep.witness is not None:
            w.row([name, case, "witness", _flat(rep.witness)])
    if name == "bell71":
        rep = audits.default_instances(name)[0][1]
        w.row([name, "grid", "max_abs_gamma", rep.lhs])
    w.emit(args.out)
    return 0


def _flat(value) -> str:
    if isinstance(value, audits.SignedDensity):
        parts = ["rho=" + " ".join(fmt(v) for v in value.weights)]
        parts += [f"A({k})=" + " ".join(fmt(v) for v in row) for k, row in value.outcomes.items()]
        return "; ".join(parts)
    if isinstance(value, dict):
        return "; ".join(f"{k}={fmt(v)}" for k, v in value.items())
    if isinstance(value, tuple):
        return " ".join(fmt(v) for v in value)
    return fmt(value)


def cmd_bell(args) -> int:
    if args.axes and args.angles:
        raise ValidationError("give either --axes or --angles, not both")
    if args.axes:
        axes = [Axis.parse(t) for t in args.axes]
        if len(axes) != 3:
            raise ValidationError(f"--axes needs 3 triples for bell, got {len(axes)}")
    else:
        try:
            degs = [float(v) for v in (args.angles or "0,120,60").split(",")]
        except ValueError:
            raise ValidationError(f"cannot parse --angles {args.angles!r}") from None
        if len(degs) != 3:
            raise ValidationError("--angles needs three values a,b,c")
        axes = list(quantum.bell_axes(_degrees(d, args.photon) for d in degs))
    a, b, c = axes
    res = quantum.bell_inequality_check(a, b, c)
    w = _Writer(args.format)
    w.header(["quantity", "value"])
    w.row(["P(a+,b+)", res.lhs])
    w.row(["P(a+,c+)", quantum.pair_prob(a, 1, c, 1, "antisymmetric")])
    w.row(["P(c+,b+)", quantum.pair_prob(c, 1, b, 1, "antisymmetric")])
    w.row(["lhs", res.lhs])
    w.row(["rhs", res.rhs])
    w.row(["violated", res.violated])
    w.emit(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chshprob", description="Quantum four-probabilities, CHSH and Bell audits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "tsv"), default="csv")
        sp.add_argument("--photon", action="store_true", help="treat angles as polarizer angles (doubled)")

    def axes_opts(sp):
        sp.add_argument("--coplanar-theta", type=float, metavar="DEG")
        sp.add_argument("--axes", nargs="+", metavar="X,Y,Z")
        sp.add_argument(
            "--symmetry", choices=[s.value for s in quantum.Symmetry], default="symmetric"
        )

    sp = sub.add_parser("table", help="16 four-probabilities with delta and sum")
    axes_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sweep", help="coplanar theta sweep of all four-probabilities and CHSH")
    sp.add_argument("--theta-min", type=float, default=0.0)
    sp.add_argument("--theta-max", type=float, default=180.0)
    sp.add_argument("--steps", type=int, default=181)
    sp.add_argument(
        "--symmetry", choices=[s.value for s in quantum.Symmetry], default="symmetric"
    )
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("chsh", help="CHSH value three ways")
    axes_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_chsh)

    sp = sub.add_parser("lhv", help="Monte-Carlo local hidden-variable run")
    sp.add_argument("--strategy", default="uniform", help="uniform | point:+-+- | 16 weights | file")
    sp.add_argument("--trials", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_lhv)

    sp = sub.add_parser("audit", help="positive-weight audits of published proofs")
    sp.add_argument("name", choices=audits.AUDIT_NAMES)
    common(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("bell", help="three-axis Bell inequality with singlet probabilities")
    sp.add_argument("--angles", metavar="A,B,C", help="in-plane angles of a, b, c in degrees (default 0,120,60)")
    sp.add_argument("--axes", nargs="+", metavar="X,Y,Z")
    common(sp)
    sp.set_defaults(func=cmd_bell)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"chshprob: error: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"chshprob: invariant breach: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
