"""Exhaustive property suites, runnable one at a time by id.

Each suite takes a field context and returns a :class:`CheckResult` listing
every failing case rather than stopping at the first.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy import divisors

from .charsum import (
    dickson_closed,
    dickson_recurrence,
    e_md,
    kloosterman,
    partial_sum,
    partial_sum_closed_d2,
    partial_sum_closed_d4,
    unit_sum,
    walsh_spectrum,
)
from .cyclo import CycInt
from .gf import FieldCtx, FieldError, build_field, coset_reps
from .search import SearchJob, Domain, run


@dataclass
class CheckResult:
    id: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def record(self, ok: bool, what: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(what)

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed, "cases": self.cases, "failures": self.failures, "note": self.note}


def check_s0_identity(ctx: FieldCtx) -> CheckResult:
    """d S_0(abar xi^k) = 1 + 2 E_{m,d}(abar) - K_m(abar) for d | 2^m+1, d | k."""
    res = CheckResult("lemma-s0")
    if ctx.p != 2:
        raise FieldError("this identity is stated for p = 2")
    m = ctx._require_even()
    xi = ctx.xi
    for d in divisors(2**m + 1):
        if d < 2:
            continue
        for abar in ctx.subfield(m, nonzero=True):
            abar = int(abar)
            rhs = 1 + 2 * e_md(ctx, abar, d, m) - int(kloosterman(ctx, abar, m))
            for k in range(0, 2**m + 1, d):
                lhs = d * int(partial_sum(ctx, ctx.mul(abar, xi**k), 0, d))
                res.record(lhs == rhs, f"d={d} log(abar)={ctx.log_of(abar)} k={k}: {lhs} != {rhs}")
    return res


def check_d2_closed_form(ctx: FieldCtx, tol: float = 1e-9) -> CheckResult:
    """Direct S_0, S_1 (d = 2) against their closed forms for every a in F_{p^m}^*."""
    res = CheckResult("lemma-d2")
    m = ctx._require_even()
    for a in ctx.subfield(m, nonzero=True):
        a = int(a)
        closed = partial_sum_closed_d2(ctx, a)
        for i, key in enumerate(("S0", "S1")):
            direct = partial_sum(ctx, a, i, 2).to_complex()
            err = abs(direct - closed.values[key])
            res.record(err < tol, f"log(a)={ctx.log_of(a)} {key}: |direct - closed| = {err:.3g}")
    return res


def check_s1_s3(ctx: FieldCtx, tol: float = 1e-9) -> CheckResult:
    """d = 4: S_1 = S_3 exactly, and both match the closed form."""
    res = CheckResult("cor-s1s3")
    m = ctx._require_even()
    for a in ctx.subfield(m, nonzero=True):
        a = int(a)
        closed = partial_sum_closed_d4(ctx, a)
        res.record(bool(closed.exact_check), f"log(a)={ctx.log_of(a)}: S_1 != S_3 exactly")
        err = abs(partial_sum(ctx, a, 1, 4).to_complex() - closed.values["S1"])
        res.record(err < tol, f"log(a)={ctx.log_of(a)}: |S_1 - closed| = {err:.3g}")
    return res


def check_unique_rep(ctx: FieldCtx) -> CheckResult:
    """Every lambda != 0 has exactly one coset representative u with Tr_m^n(lambda u) = 0."""
    res = CheckResult("prop-unique-u")
    m = ctx._require_even()
    reps = coset_reps(ctx)
    lams = ctx.elements()[1:]
    zeros = ctx.vtrace(ctx.vmul(lams[:, None], reps[None, :]), ctx.n, m) == 0
    counts = zeros.sum(axis=1)
    for lam, c in zip(lams, counts):
        res.record(c == 1, f"log(lambda)={ctx.log_of(int(lam))}: {c} representatives")
    return res


def check_unit_sum(ctx: FieldCtx) -> CheckResult:
    """sum_i S_i(a) over any d equals the unit-circle sum, which equals 1 - K_m(a^(p^m+1))."""
    res = CheckResult("unit-sum")
    m = ctx._require_even()
    pm1 = ctx.p**m + 1
    ds = [d for d in divisors(pm1) if d > 1][:2] or [1]
    res.record(kloosterman(ctx, 0, m) == 0, "K_m(0) != 0")
    for a in ctx.elements()[1:]:
        a = int(a)
        u = unit_sum(ctx, a)
        k = kloosterman(ctx, ctx.pow(a, pm1), m)
        res.record(u == 1 - k, f"log(a)={ctx.log_of(a)}: unit sum != 1 - K")
        for d in ds:
            parts = sum((partial_sum(ctx, a, i, d) for i in range(d)), CycInt.zero(ctx.p))
            res.record(parts == u, f"log(a)={ctx.log_of(a)} d={d}: sum of S_i != unit sum")
    return res


def check_dickson(limit: int = 64) -> CheckResult:
    res = CheckResult("dickson")
    for r in range(2, limit + 1):
        res.record(dickson_closed(r) == dickson_recurrence(r), f"r={r}: closed form != recurrence")
    return res


def check_parseval(ctx: FieldCtx, samples: int = 32, seed: int = 0) -> CheckResult:
    """sum |W_f|^2 = p^(2n) on random functions (seeded)."""
    res = CheckResult("parseval")
    rng = np.random.default_rng(seed)
    target = CycInt.const(ctx.p, ctx.q**2)
    for t in range(samples):
        table = rng.integers(0, ctx.p, ctx.q)
        res.record(walsh_spectrum(ctx, table).parseval() == target, f"sample {t}")
    return res


def default_family_job(ctx: FieldCtx, family: str) -> SearchJob:
    """A representative full grid for ``family`` in this field."""
    m = ctx._require_even()
    p, pm1 = ctx.p, ctx.p**m + 1
    if family == "B1":
        d = next(d for d in divisors(pm1) if d > 1)
        return SearchJob(ctx.spec, "B1", (("d", d), ("l", 1), ("b", 0)),
                         (("a0", Domain(m)), ("a1", Domain(m))), name="b1")
    if family == "B2":
        r = 3 if pm1 % 3 == 0 else 1
        return SearchJob(ctx.spec, "B2", (("r", r), ("s", 1)), (("a", Domain(ctx.n)),), name="b2")
    if family == "P1":
        return SearchJob(ctx.spec, "P1", (("l", 4),),
                         (("a", Domain(m, shift=p**m - 1)), ("b", Domain(2))), name="p1")
    if family == "P2":
        return SearchJob(ctx.spec, "P2", (("r", 2), ("s", 1)),
                         (("a", Domain(ctx.n)), ("b", Domain(1, nonzero=False))), name="p2")
    raise ValueError(f"unknown family {family!r}")


def check_family(ctx: FieldCtx, family: str, workers: int | None = None) -> CheckResult:
    """Every applicable criterion agrees with the exact Walsh ground truth on a full grid."""
    res = CheckResult(f"family-{family.lower()}")
    records, summary = run(default_family_job(ctx, family), workers)
    for r in records:
        res.record(r.agreement, f"point {r.index} {r.params}: criteria {r.criteria} vs bent={r.bent} regular={r.regular}")
    res.note = f"bent={summary.bent} regular={summary.regular} points={summary.total}"
    return res


CHECK_IDS = ("lemma-s0", "lemma-d2", "cor-s1s3", "prop-unique-u", "unit-sum", "dickson", "parseval",
             "family-b1", "family-b2", "family-p1", "family-p2")


def run_check(check_id: str, p: int, n: int | None = None, m: int | None = None,
              tol: float = 1e-9, workers: int | None = None) -> CheckResult:
    """Dispatch by id; the field is F_{p^n} with n = 2m when only m is given."""
    if check_id not in CHECK_IDS:
        raise ValueError(f"unsupported check id {check_id!r}; choose from {', '.join(CHECK_IDS)}")
    if check_id == "dickson":
        return check_dickson()
    if n is None:
        if m is None:
            raise ValueError("give n or m")
        n = 2 * m
    ctx = build_field(p, n)
    if check_id == "lemma-s0":
        return check_s0_identity(ctx)
    if check_id == "lemma-d2":
        return check_d2_closed_form(ctx, tol)
    if check_id == "cor-s1s3":
        return check_s1_s3(ctx, tol)
    if check_id == "prop-unique-u":
        return check_unique_rep(ctx)
    if check_id == "unit-sum":
        return check_unit_sum(ctx)
    if check_id == "parseval":
        return check_parseval(ctx)
    return check_family(ctx, check_id.split("-")[1].upper(), workers)
