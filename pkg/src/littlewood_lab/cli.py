"""``littlewood-lab`` command line front end.

Exit codes: 0 when every requested verification passes, 1 for a
verification gap or failure, 2 for usage, input and capacity errors.
Reports go to stdout (UTF-8), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds, extremal, khinchine, nested, norms
from .dyadic import dyadic_form
from .tensor import TensorError, deserialize, serialize

EXIT_OK, EXIT_GAP, EXIT_USAGE = 0, 1, 2

GAMMA_PREFACTOR_NOTE = (
    "gamma branch uses the prefactor sqrt(2), not 1/sqrt(2): "
    "only sqrt(2) gives A_2 = 1 and continuity with the power branch at p0"
)

CSV_HEADER = ["m", "alpha", "q", "ratio", "exact_form", "lower", "upper", "method", "verdict"]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _budget(args) -> int:
    return max(args.budget_bits, norms.DEEP_BUDGET_BITS) if args.deep else args.budget_bits


def _read_tensor(path: str):
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return deserialize(data)


def _float_list(text: str) -> list[float]:
    return list(nested.ExponentTuple.parse(text).q)


def _p_value(text: str) -> float:
    if text.strip().lower() == "p0":
        return khinchine.p0()
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}") from None


def cmd_construct(args, out) -> int:
    T = extremal.construct_extremal(args.m)
    data = serialize(T)
    if args.out in (None, "-"):
        out.write(data.decode("utf-8"))
    else:
        Path(args.out).write_bytes(data)
        print(f"wrote T_{args.m}: dims {list(T.dims)}, {T.nnz} entries -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_norm(args, out) -> int:
    T = _read_tensor(args.tensor)
    res = norms.sup_norm(
        T,
        args.method,
        upper=args.upper,
        restarts=args.restarts,
        seed=args.seed,
        budget_bits=_budget(args),
        workers=args.workers,
    )
    doc = res.to_dict()
    doc["stats"].setdefault("seed", args.seed)
    out.write(_dump(doc) + "\n")
    return EXIT_GAP if args.method == "certified" and res.method != "certified" else EXIT_OK


def cmd_mixed_norm(args, out) -> int:
    T = _read_tensor(args.tensor)
    q = nested.ExponentTuple.parse(args.exponents)
    value = nested.nested_norm(T, q)
    doc = {
        "q": list(q.q),
        "admissible": nested.is_admissible(q),
        "value": value,
        "exact_form": dyadic_form(value),
    }
    if args.ratio:
        r = nested.ratio(T, q, "exact", budget_bits=_budget(args))
        doc.update(norm=r.norm.value, norm_method=r.method, ratio=r.value, ratio_exact_form=r.exact_form)
    out.write(_dump(doc) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    reports = bounds.verify_table(
        args.m_max,
        _float_list(args.alphas),
        args.mode,
        restarts=args.restarts,
        seed=args.seed,
        budget_bits=_budget(args),
    )
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in reports:
            w.writerow([
                r.m, repr(r.alpha), ";".join(repr(x) for x in r.q), repr(r.empirical_ratio),
                r.exact_form or "", repr(r.analytic_lower), repr(r.analytic_upper), r.norm_method, r.verdict,
            ])
        out.write(buf.getvalue())
    else:
        out.write(_dump({"seed": args.seed, "reports": [r.to_dict() for r in reports]}) + "\n")
    return EXIT_OK if all(r.verdict == "pass" for r in reports) else EXIT_GAP


def cmd_khinchine(args, out) -> int:
    if args.p0:
        p0 = khinchine.solve_p0(args.tol)
        residual = khinchine.gamma((p0 + 1) / 2) - khinchine.SQRT_PI / 2
        power = 2.0 ** (0.5 - 1.0 / p0)
        gamma_branch = np.sqrt(2.0) * (khinchine.gamma((p0 + 1) / 2) / khinchine.SQRT_PI) ** (1.0 / p0)
        doc = {
            "p0": p0,
            "tol": args.tol,
            "residual": residual,
            "A_power_branch": power,
            "A_gamma_branch": float(gamma_branch),
            "branch_difference": abs(power - float(gamma_branch)),
        }
        out.write(_dump(doc) + "\n")
        return EXIT_OK if abs(residual) < 1e-12 else EXIT_GAP
    if args.p is None:
        raise TensorError("khinchine needs --p, --p0 or --sandwich with --p")
    if args.sandwich:
        rng = np.random.default_rng(args.seed)
        min_lo = min_up = float("inf")
        failures = 0
        for _ in range(args.trials):
            a = rng.standard_normal(args.n)
            rep = khinchine.verify_khinchine(a, args.p)
            min_lo, min_up = min(min_lo, rep.lower_margin), min(min_up, rep.upper_margin)
            failures += not rep.holds
        doc = {
            "p": args.p,
            "A": khinchine.haagerup_A(args.p).A,
            "n": args.n,
            "trials": args.trials,
            "seed": args.seed,
            "min_lower_margin": min_lo,
            "min_upper_margin": min_up,
            "failures": failures,
            "all_hold": failures == 0,
        }
        out.write(_dump(doc) + "\n")
        return EXIT_OK if failures == 0 else EXIT_GAP
    c = khinchine.haagerup_A(args.p)
    doc = {"p": c.p, "A": c.A, "B": c.B, "branch": c.branch, "p0": khinchine.p0()}
    if c.branch == "gamma":
        doc["note"] = GAMMA_PREFACTOR_NOTE
    out.write(_dump(doc) + "\n")
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    m, a = args.m, args.alpha
    b = bounds.beta_m(a, m)
    q = [a] + [b] * (m - 1)
    doc = {
        "m": m,
        "alpha": a,
        "beta": b,
        "q": q,
        "admissible": nested.is_admissible(q),
        "lower": bounds.lower_bound(a, m),
        "lower_exact_form": dyadic_form(bounds.lower_bound(a, m)),
        "upper": bounds.upper_bound_mixed(m),
        "growth": bounds.growth_classification(a),
    }
    out.write(_dump(doc) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--budget-bits", type=int, default=norms.DEFAULT_BUDGET_BITS)
    common.add_argument("--deep", action="store_true", help=f"raise the exact-search budget to 2^{norms.DEEP_BUDGET_BITS}")

    p = argparse.ArgumentParser(prog="littlewood-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="write the extremal form T_m as a JSON tensor")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--out", "-o", default="-")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("norm", parents=[common], help="operator norm of a tensor file")
    s.add_argument("tensor")
    s.add_argument("--method", choices=("exact", "alternating", "certified", "auto"), default="exact")
    s.add_argument("--restarts", type=int, default=100)
    s.add_argument("--upper", type=float, default=None, help="analytic upper bound for --method certified")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("mixed-norm", parents=[common], help="nested mixed l_q norm of a tensor file")
    s.add_argument("tensor")
    s.add_argument("exponents", help="comma separated, e.g. 1,2,2 or 2,4/3,4/3")
    s.add_argument("--ratio", action="store_true", help="also divide by the exact operator norm")
    s.set_defaults(func=cmd_mixed_norm)

    s = sub.add_parser("verify", parents=[common], help="reproduce the constants for T_2..T_m-max")
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--alphas", default="1")
    s.add_argument("--mode", choices=("exact", "certified", "auto"), default="auto")
    s.add_argument("--restarts", type=int, default=100)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("khinchine", parents=[common], help="Khinchine constants, p0, sandwich checks")
    s.add_argument("--p", type=_p_value, default=None, help="exponent in (0, 2], or 'p0'")
    s.add_argument("--p0", action="store_true")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--sandwich", action="store_true")
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_khinchine)

    s = sub.add_parser("bounds", parents=[common], help="analytic beta_m, lower/upper bounds, growth label")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--alpha", type=float, default=1.0)
    s.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (TensorError, khinchine.KhinchineError, OSError) as exc:
        print(f"littlewood-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
