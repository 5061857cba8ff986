"""bentforge command line.

Exit codes: 0 success, 1 domain-negative (not bent, check or golden count
failed), 2 usage or parse error, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

from sympy import divisors

from . import search as S
from .charsum import kloosterman_table, walsh_spectrum
from .checks import CHECK_IDS, run_check
from .cyclo import CycInt
from .dillon import DillonFunction, criterion_general, function_from_json
from .gf import FieldSpec, build_field, field_from_spec, o_of_d

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _field(args, n_attr: str = "n"):
    """Exactly one of --field-file or --p/--n."""
    file = getattr(args, "field_file", None)
    p, n = getattr(args, "p", None), getattr(args, n_attr, None)
    if file and (p is not None or n is not None):
        raise UsageError("give either --field-file or --p/--" + n_attr + ", not both")
    if file:
        try:
            spec = FieldSpec.from_json(Path(file).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {file}: {exc.strerror}") from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"malformed field file {file}: {exc}") from exc
        return field_from_spec(spec)
    if p is None or n is None:
        raise UsageError(f"--p and --{n_attr} are required (or --field-file)")
    return build_field(p, n)


def _cyc(v: CycInt, approx: bool):
    if approx:
        z = v.to_complex()
        return round(z.real, 12) + 0.0
    return int(v) if v.is_integer() else list(v.coeffs)


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in row.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_field_info(args) -> int:
    ctx = _field(args)
    info = {
        "p": ctx.p,
        "n": ctx.n,
        "modulus": list(ctx.spec.modulus),
        "alpha": list(ctx.alpha.coeffs),
    }
    if ctx.m is not None:
        pm1 = ctx.p**ctx.m + 1
        info["xi"] = list(ctx.xi.coeffs)
        info["xi_log"] = ctx.p**ctx.m - 1
        info["U_order"] = pm1
        info["o_of_d"] = {str(d): o_of_d(ctx.p, ctx.n, d) for d in divisors(pm1)}
    if args.format == "json":
        _emit(json.dumps(info, indent=1) + "\n", args.out)
    else:
        lines = [f"{k}: {v}" for k, v in info.items() if k != "o_of_d"]
        for d, o in info.get("o_of_d", {}).items():
            lines.append(f"o({d}) = {o}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_kloosterman(args) -> int:
    ctx = _field(args, "m")
    xs, values = kloosterman_table(ctx)
    rows = []
    for x, v in zip(xs, values):
        x = int(x)
        if v.conj() != v:
            raise AssertionError(f"Kloosterman sum at {x} is not real")
        rows.append({
            "alpha": list(ctx.coeffs(x)),
            "log": None if x == 0 else ctx.log_of(x),
            "value": _cyc(v, args.approx),
        })
    _emit(_table(rows, args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        obj = json.loads(Path(args.function).read_text())
        f = function_from_json(obj)
    except OSError as exc:
        raise UsageError(f"cannot read {args.function}: {exc.strerror}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed function file {args.function}: {exc}") from exc
    if args.p is not None or args.n is not None or args.field_file:
        want = _field(args)
        if want.spec != f.ctx.spec:
            raise UsageError(f"function field {f.ctx.spec} does not match requested field {want.spec}")
    spec = walsh_spectrum(f.ctx, f)
    report = {
        "bent": spec.is_bent,
        "regular": spec.is_regular,
        "verdict": "regular bent" if spec.is_regular else ("bent" if spec.is_bent else "not bent"),
        "parseval": _cyc(spec.parseval(), args.approx),
        "magnitude_profile": spec.magnitude_profile(),
    }
    if isinstance(f, DillonFunction):
        rep = criterion_general(f)
        report["unit_circle_sum"] = _cyc(rep.lhs, args.approx)
        report["unit_circle_criterion"] = rep.verdict
    if args.format == "json":
        _emit(json.dumps(report, indent=1) + "\n", args.out)
    else:
        _emit("".join(f"{k}: {v}\n" for k, v in report.items()), args.out)
    return EXIT_OK if spec.is_bent else EXIT_NEGATIVE


_DEFAULT_SLOTS = {
    "B1": lambda ctx: {"a0": S.Domain(ctx.m), "a1": S.Domain(ctx.m)},
    "B2": lambda ctx: {"a": S.Domain(ctx.n)},
    "P1": lambda ctx: {"a": S.Domain(ctx.n), "b": S.Domain(2)},
    "P2": lambda ctx: {"a": S.Domain(ctx.n), "b": S.Domain(1, nonzero=False)},
}


def _parse_slot(text: str) -> tuple[str, S.Domain]:
    """NAME=DEGREE[*][@SHIFT]: '*' drops zero, SHIFT multiplies by alpha^SHIFT."""
    try:
        name, rest = text.split("=", 1)
        shift = 0
        if "@" in rest:
            rest, sh = rest.split("@", 1)
            shift = int(sh)
        nonzero = rest.endswith("*")
        return name, S.Domain(int(rest.rstrip("*")), nonzero, shift)
    except ValueError as exc:
        raise UsageError(f"bad --slot {text!r}; expected NAME=DEGREE[*][@SHIFT]") from exc


def _parse_fix(text: str) -> tuple[str, int]:
    try:
        name, val = text.split("=", 1)
        return name, int(val)
    except ValueError as exc:
        raise UsageError(f"bad --fix {text!r}; expected NAME=INT") from exc


def _job_from_flags(args) -> S.SearchJob:
    if not args.family:
        raise UsageError("give --golden NAME or --family")
    fam = args.family.upper()
    if fam not in S.FAMILY_SLOTS:
        raise UsageError(f"unknown family {args.family!r}")
    ctx = _field(args)
    if ctx.m is None:
        raise UsageError("searches need an even extension degree")
    fixed = {k: getattr(args, k) for k in ("d", "l", "r", "s") if getattr(args, k) is not None}
    fixed.update(_parse_fix(t) for t in args.fix)
    slots = _DEFAULT_SLOTS[fam](ctx)
    slots.update(_parse_slot(t) for t in args.slot)
    for name in fixed:
        slots.pop(name, None)
    slots = {k: v for k, v in slots.items() if k in S.FAMILY_SLOTS[fam]}
    if fam == "B1" and "b" not in slots and "b" not in fixed:
        fixed["b"] = 0
    distinct = tuple(tuple(t.split(",", 1)) for t in args.distinct)
    return S.SearchJob(ctx.spec, fam, tuple(sorted(fixed.items())), tuple(slots.items()),
                       distinct=distinct, dedupe=args.dedupe, alt_exponent=args.alt_exponent,
                       name=f"{fam.lower()}-search", tol=args.tol or S.DEFAULT_TOL)


def cmd_search(args) -> int:
    if args.golden:
        if args.family:
            raise UsageError("--golden and --family are exclusive")
        g = S.golden(args.golden)
        job = g.job if args.tol is None else replace(g.job, tol=args.tol)
    else:
        g = None
        job = _job_from_flags(args)
    records, summary = S.run(job, args.threads, args.cap)
    if args.out:
        if args.out == "-":
            text = S.records_to_csv(records, job) if args.format == "csv" else json.dumps(
                {"job": job.to_json(), "records": [r.to_json() for r in records], "summary": summary.to_json()}, indent=1) + "\n"
            sys.stdout.write(text)
        else:
            S.persist(records, summary, args.format, args.out, job)
    line = f"total={summary.total} bent={summary.bent} regular={summary.regular} disagreements={summary.disagreements}"
    if summary.alt_bent is not None:
        line += f" alt_bent={summary.alt_bent} alt_regular={summary.alt_regular}"
    out = sys.stderr if args.out == "-" else sys.stdout
    print(line, file=out)
    for idx in summary.disagreement_indices:
        rec = records[idx] if records[idx].index == idx else next(r for r in records if r.index == idx)
        print(f"disagreement at {idx}: params={rec.params} criteria={rec.criteria} bent={rec.bent} regular={rec.regular}", file=out)
    if g is None:
        return EXIT_OK
    ok, lines = S.golden_verdict(g, records, summary)
    if job.family == "B1" and "a0" in job.slot_names and "a1" in job.slot_names:
        lines.append(f"unordered {{a0,a1}} bent pairs={S.unordered_pairs(records, 'a0', 'a1')}")
    for ln in lines:
        print(ln, file=out)
    print(f"golden {args.golden}: {'PASS' if ok else 'FAIL'}", file=out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check(args) -> int:
    if args.field_file:
        ctx = _field(args)
        p, n, m = ctx.p, ctx.n, None
    else:
        p, n, m = args.p, args.n, args.m
        if args.id != "dickson" and (p is None or (n is None) == (m is None)):
            raise UsageError("give --p with exactly one of --n / --m (or --field-file)")
    res = run_check(args.id, p if p is not None else 2, n, m, args.tol or 1e-9, args.threads)
    if args.format == "json":
        _emit(json.dumps(res.to_json(), indent=1) + "\n", args.out)
    else:
        text = f"{res.id}: {'pass' if res.passed else 'FAIL'} ({res.cases} cases, {len(res.failures)} failures)"
        text += f" {res.note}\n" if res.note else "\n"
        text += "".join(f"  {f}\n" for f in res.failures)
        _emit(text, args.out)
    return EXIT_OK if res.passed else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def _threads(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--field-file", help="JSON field spec {p, n, modulus}")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--threads", type=_threads, default=None, help="worker processes (default $BENTFORGE_THREADS or 1)")
    common.add_argument("--tol", type=_positive_float, default=None, help="numeric tolerance (default 1e-6 for criteria, 1e-9 for checks)")
    common.add_argument("--approx", action="store_true", help="print cyclotomic values as floats")

    parser = _Parser(prog="bentforge", description="Exact toolkit for Dillon-exponent bent functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fi = sub.add_parser("field-info", parents=[common], help="field tables and the o(d) table")
    fi.add_argument("--n", type=int)
    fi.set_defaults(func=cmd_field_info)

    kl = sub.add_parser("kloosterman", parents=[common], help="table of K_m over F_{p^m}")
    kl.add_argument("--m", type=int)
    kl.set_defaults(func=cmd_kloosterman)

    ve = sub.add_parser("verify", parents=[common], help="bentness of a function given as JSON")
    ve.add_argument("function", help="function JSON file")
    ve.add_argument("--n", type=int)
    ve.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", parents=[common], help="exhaustive family search")
    se.add_argument("--golden", choices=S.GOLDEN_NAMES)
    se.add_argument("--family", help="b1, b2, p1 or p2")
    se.add_argument("--n", type=int)
    for k in ("d", "l", "r", "s"):
        se.add_argument(f"--{k}", type=int)
    se.add_argument("--slot", action="append", default=[], help="NAME=DEGREE[*][@SHIFT]")
    se.add_argument("--fix", action="append", default=[], help="NAME=INT (field element encoding)")
    se.add_argument("--distinct", action="append", default=[], help="X,Y slots that must differ")
    se.add_argument("--dedupe", action="store_true")
    se.add_argument("--alt-exponent", type=int)
    se.add_argument("--cap", type=int, default=S.DEFAULT_CAP)
    se.set_defaults(func=cmd_search)

    ch = sub.add_parser("check", parents=[common], help="run a property suite")
    ch.add_argument("--id", required=True, choices=CHECK_IDS)
    ch.add_argument("--n", type=int)
    ch.add_argument("--m", type=int)
    ch.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"bentforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"bentforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as exc:
        print(f"bentforge: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
