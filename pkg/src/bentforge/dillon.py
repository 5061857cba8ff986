"""Dillon-exponent functions, the four families built from them, an exact
bentness test, and each family's bentness criterion as a predicate.

A criterion returns a :class:`CriterionReport` whose ``verdict`` is ``True``,
``False`` or ``None``; ``None`` means the parameters fall outside the
criterion's hypotheses, which is not the same as "not bent".
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Iterable

import numpy as np

from .charsum import (
    WalshSpectrum,
    cubic_sum,
    dillon_sum,
    e_md,
    in_c0,
    kloosterman,
    i_constant,
    partial_sum,
    q_value,
    walsh_spectrum,
)
from .cyclo import CycInt
from .gf import FieldCtx, FieldError, FieldSpec, dillon_decompose, field_from_spec, o_of_d, unit_circle, v_partition

DEFAULT_TOL = 1e-6


# ---------------------------------------------------------------------------
# functions


@dataclass(frozen=True)
class DillonFunction:
    """f(x) = sum_i Tr(a_i x^(i (p^m-1))) + Tr_1^o(d)(b x^((p^n-1)/d)), f(0) = 0.

    ``a`` holds (index, coefficient) pairs with the index reduced mod p^m + 1
    (the exponent i(p^m-1) reduced mod p^n - 1), merged and sorted, zero
    coefficients dropped.  Build with :meth:`make`.
    """

    ctx: FieldCtx
    a: tuple[tuple[int, int], ...]
    b: int
    d: int

    @classmethod
    def make(cls, ctx: FieldCtx, a, b=0, d: int = 1) -> "DillonFunction":
        m = ctx._require_even()
        mod = ctx.p**m + 1
        if d < 1 or mod % d:
            raise FieldError(f"d={d} does not divide p^m+1={mod}")
        items = a.items() if isinstance(a, dict) else a
        merged: dict[int, int] = {}
        for i, coef in items:
            i = int(i) % mod
            merged[i] = ctx.add(merged.get(i, 0), int(coef))
        b = int(b)
        o = o_of_d(ctx.p, ctx.n, d)
        if not ctx.in_subfield(b, o):
            raise FieldError(f"b must lie in F_(p^{o}) for d={d}")
        return cls(ctx, tuple(sorted((i, c) for i, c in merged.items() if c)), b, d)

    @property
    def o(self) -> int:
        return o_of_d(self.ctx.p, self.ctx.n, self.d)

    @property
    def coeff_map(self) -> dict[int, int]:
        return dict(self.a)

    def exponents(self) -> list[int]:
        pm = self.ctx.p**self.ctx.m
        exps = [i * (pm - 1) for i, _ in self.a]
        if self.b:
            exps.append((self.ctx.q - 1) // self.d)
        return exps

    def table(self) -> np.ndarray:
        ctx = self.ctx
        xs = ctx.elements()[1:]
        pm = ctx.p**ctx.m
        acc = np.zeros(len(xs), dtype=np.int64)
        for i, coef in self.a:
            acc += ctx.tr[ctx.vmul(coef, ctx.vpow(xs, i * (pm - 1)))]
        if self.b:
            y = ctx.vmul(self.b, ctx.vpow(xs, (ctx.q - 1) // self.d))
            acc += ctx.vtrace(y, self.o, 1)
        return np.concatenate(([0], acc % ctx.p))

    def key(self) -> tuple:
        return (self.ctx.spec, self.a, self.b if self.b else 0, self.d if self.b else 1)

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "field": ctx.spec.to_json(),
            "d": self.d,
            "a": [[i, list(ctx.coeffs(c))] for i, c in self.a],
            "b": list(ctx.coeffs(self.b)),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DillonFunction":
        ctx = field_from_spec(FieldSpec.from_json(obj["field"]))
        a = [(int(i), _elem_from_coeffs(ctx, c)) for i, c in obj.get("a", [])]
        b = _elem_from_coeffs(ctx, obj.get("b", [0]))
        return cls.make(ctx, a, b, int(obj.get("d", 1)))


@dataclass(frozen=True)
class TraceSum:
    """f(x) = sum Tr_1^k(c x^e) over (e, c, k) terms, for exponents that are not
    of Dillon type.  0^0 is taken as 1."""

    ctx: FieldCtx
    terms: tuple[tuple[int, int, int], ...]

    def table(self) -> np.ndarray:
        ctx = self.ctx
        xs = ctx.elements()
        acc = np.zeros(ctx.q, dtype=np.int64)
        for e, c, k in self.terms:
            acc += ctx.vtrace(ctx.vmul(c, ctx.vpow(xs, e)), k, 1)
        return acc % ctx.p

    def key(self) -> tuple:
        return (self.ctx.spec, self.terms)

    def to_json(self) -> dict:
        return {
            "field": self.ctx.spec.to_json(),
            "terms": [[e, list(self.ctx.coeffs(c)), k] for e, c, k in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TraceSum":
        ctx = field_from_spec(FieldSpec.from_json(obj["field"]))
        terms = tuple((int(e), _elem_from_coeffs(ctx, c), int(k)) for e, c, k in obj["terms"])
        for e, c, k in terms:
            if not ctx.in_subfield(c, k) or e < 0:
                raise FieldError(f"bad term ({e}, {c}, {k})")
        return cls(ctx, terms)


def _elem_from_coeffs(ctx: FieldCtx, coeffs) -> int:
    if isinstance(coeffs, int):
        raise FieldError("elements are given as coefficient lists")
    if len(coeffs) > ctx.n or any(not 0 <= int(c) < ctx.p for c in coeffs):
        raise FieldError(f"element coefficients do not fit F_({ctx.p}^{ctx.n}): {coeffs}")
    return int(ctx.elem(coeffs))


def function_from_json(obj: dict) -> DillonFunction | TraceSum:
    if "terms" in obj:
        return TraceSum.from_json(obj)
    return DillonFunction.from_json(obj)


def is_bent(f, method: str = "fast") -> tuple[bool, bool, WalshSpectrum]:
    """Ground truth from the exact Walsh spectrum: (bent, regular, spectrum)."""
    spec = walsh_spectrum(f.ctx, f, method)
    return spec.is_bent, spec.is_regular, spec


# ---------------------------------------------------------------------------
# families


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class B1Params:
    """sum_{i<d} Tr(a_i x^((l + i(2^m+1)/d)(2^m-1))) + Tr_1^o(d)(b x^((2^n-1)/d))."""

    ctx: FieldCtx
    d: int
    l: int
    a: tuple[int, ...]
    b: int = 0
    family = "B1"

    def __post_init__(self):
        ctx = self.ctx
        _check(ctx.p == 2 and ctx.m is not None, "B1 needs p = 2 and even n")
        pm1 = 2**ctx.m + 1
        _check(self.d >= 1 and pm1 % self.d == 0, f"B1 needs d | 2^m+1 = {pm1}")
        _check(gcd(self.l, pm1 // self.d) == 1, "B1 needs gcd(l, (2^m+1)/d) = 1")
        _check(len(self.a) == self.d, f"B1 needs exactly d = {self.d} coefficients a_0..a_(d-1)")
        _check(ctx.in_subfield(self.b, o_of_d(2, ctx.n, self.d)), "B1 needs b in F_(2^o(d))")

    def to_dillon(self) -> DillonFunction:
        step = (2**self.ctx.m + 1) // self.d
        terms = [(self.l + i * step, c) for i, c in enumerate(self.a)]
        return DillonFunction.make(self.ctx, terms, self.b, self.d)


@dataclass(frozen=True)
class B2Params:
    """sum_{i=1}^{(2^m+1)/r - 1} Tr(a x^((r i + s)(2^m-1)))."""

    ctx: FieldCtx
    r: int
    s: int
    a: int
    family = "B2"

    def __post_init__(self):
        ctx = self.ctx
        _check(ctx.p == 2 and ctx.m is not None, "B2 needs p = 2 and even n")
        _check(self.r >= 1 and (2**ctx.m + 1) % self.r == 0, "B2 needs r | 2^m+1")
        _check(self.a != 0, "B2 needs a != 0")

    def to_dillon(self) -> DillonFunction:
        top = (2**self.ctx.m + 1) // self.r
        return DillonFunction.make(self.ctx, [(self.r * i + self.s, self.a) for i in range(1, top)])


@dataclass(frozen=True)
class P1Params:
    """Tr(a x^(l(p^m-1))) + Tr_1^2(b x^((p^n-1)/4)), p^m = 3 (mod 4)."""

    ctx: FieldCtx
    l: int
    a: int
    b: int
    family = "P1"

    def __post_init__(self):
        ctx = self.ctx
        _check(ctx.p != 2 and ctx.m is not None, "P1 needs odd p and even n")
        pm = ctx.p**ctx.m
        _check(pm % 4 == 3, f"P1 needs p^m = 3 (mod 4), got p^m = {pm}")
        _check(gcd(self.l, (pm + 1) // 4) == 1, "P1 needs gcd(l, (p^m+1)/4) = 1")
        _check(self.a != 0, "P1 needs a != 0")
        _check(self.b != 0 and ctx.in_subfield(self.b, 2), "P1 needs b in F_(p^2)^*")

    def to_dillon(self) -> DillonFunction:
        return DillonFunction.make(self.ctx, [(self.l, self.a)], self.b, 4)


@dataclass(frozen=True)
class P2Params:
    """sum_{i=1}^{(p^m+1)/r - 1} Tr(a x^((r i + s)(p^m-1))) + b x^((p^n-1)/2).

    b = 0 is accepted so the b = 0 special cases can be searched.
    """

    ctx: FieldCtx
    r: int
    s: int
    a: int
    b: int
    family = "P2"

    def __post_init__(self):
        ctx = self.ctx
        _check(ctx.p != 2 and ctx.m is not None, "P2 needs odd p and even n")
        pm1 = ctx.p**ctx.m + 1
        _check(self.r >= 1 and pm1 % self.r == 0, "P2 needs r | p^m+1")
        _check(gcd(self.s, pm1) == 1, "P2 needs gcd(s, p^m+1) = 1")
        _check(self.a != 0, "P2 needs a != 0")
        _check(0 <= self.b < ctx.p, "P2 needs b in F_p")

    def to_dillon(self) -> DillonFunction:
        top = (self.ctx.p**self.ctx.m + 1) // self.r
        return DillonFunction.make(self.ctx, [(self.r * i + self.s, self.a) for i in range(1, top)], self.b, 2)


def to_dillon(params) -> DillonFunction:
    return params.to_dillon()


# ---------------------------------------------------------------------------
# criteria


@dataclass
class CriterionReport:
    name: str
    verdict: bool | None
    lhs: Any = None
    rhs: Any = None
    branch: str = ""
    exact: bool = True
    tol: float | None = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.verdict is not None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "branch": self.branch,
            "exactness": "exact" if self.exact else f"numeric+-{self.tol}",
            "note": self.note,
            "extra": {k: _jsonable(v) for k, v in self.extra.items()},
        }


def _jsonable(v):
    if isinstance(v, CycInt):
        return v.to_json()
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def inapplicable(name: str, why: str) -> CriterionReport:
    return CriterionReport(name, None, note=why)


def _numeric(name, lhs: complex, rhs: complex, tol: float, branch: str = "", **extra) -> CriterionReport:
    return CriterionReport(name, abs(lhs - rhs) < tol, lhs, rhs, branch, False, tol, extra=extra)


def _bin(ctx: FieldCtx, vals) -> int:
    """sum (-1)^v for F_2 values."""
    return int(np.sum(1 - 2 * np.asarray(vals)))


def _roots_of_unity_in_u(ctx: FieldCtx, r: int) -> np.ndarray:
    """{x in U : x^r = 1} = xi^(j (p^m+1)/r)."""
    _, u = unit_circle(ctx)
    return u[:: (ctx.p**ctx.m + 1) // r]


def criterion_general(f: DillonFunction) -> CriterionReport:
    """S(a_1, ..., b) = 1, the unit-circle characterisation of (regular) bentness."""
    if not isinstance(f, DillonFunction):
        return inapplicable("general", "not a Dillon-exponent function")
    s = dillon_sum(f.ctx, f.coeff_map, f.b, f.d)
    return CriterionReport("general", s == 1, s, 1, note="bent" if f.ctx.p == 2 else "regular bent")


def criterion_b1_general(params: B1Params) -> CriterionReport:
    ctx = params.ctx
    d, l = params.d, params.l
    step = (2**ctx.m + 1) // d
    o = o_of_d(2, ctx.n, d)
    xi = ctx.xi
    v0 = v_partition(ctx, d)[0]
    total = 0
    for j in range(d):
        outer = ctx.trace(ctx.mul(params.b, xi ** (j * step)), o, 1) if params.b else 0
        c = 0
        for i, ai in enumerate(params.a):
            c = ctx.add(c, ctx.mul(ai, xi ** (j * (i * step + l))))
        total += (-1) ** outer * _bin(ctx, ctx.tr[ctx.vmul(c, v0)])
    return CriterionReport("b1-direct", total == 1, total, 1)


def _b1_pattern(params: B1Params) -> str | None:
    """Why the a_0, a_1 = ... = a_(d-1) pattern fails, or None if it holds."""
    ctx, a = params.ctx, params.a
    if params.d < 2:
        return "needs d >= 2"
    if a[0] == 0 or not ctx.in_subfield(a[0], ctx.m):
        return "needs a_0 in F_(2^m)^*"
    if any(x != a[1] for x in a[1:]):
        return "needs a_1 = ... = a_(d-1)"
    if not ctx.in_subfield(a[1], ctx.m):
        return "needs a_1 in F_(2^m)"
    if a[0] == a[1]:
        return "needs a_0 != a_1"
    return None


def _b1_sums(params: B1Params, use_cubic: bool = False):
    ctx, m, d = params.ctx, params.ctx.m, params.d
    a0, s = params.a[0], ctx.add(params.a[0], params.a[1])
    k0, ks = int(kloosterman(ctx, a0, m)), int(kloosterman(ctx, s, m))
    if use_cubic:
        e0, es = cubic_sum(ctx, a0, m), cubic_sum(ctx, s, m)
    else:
        e0, es = e_md(ctx, a0, d, m), e_md(ctx, s, d, m)
    return k0, ks, e0, es


def criterion_b1_klm(params: B1Params, name: str = "b1-kloosterman", use_cubic: bool = False) -> CriterionReport:
    """K_m(a_0) + (d-1) K_m(a_0+a_1) against the E_{m,d} side, b = 0."""
    why = _b1_pattern(params)
    if why:
        return inapplicable(name, why)
    if params.b:
        return inapplicable(name, "needs b = 0")
    d, l = params.d, params.l
    if l % d == 0:
        branch = "d|l"
    elif gcd(d, l) == 1:
        branch = "gcd(d,l)=1"
    else:
        return inapplicable(name, "needs d | l or gcd(d, l) = 1")
    k0, ks, e0, es = _b1_sums(params, use_cubic)
    lhs = k0 + (d - 1) * ks
    rhs = 2 * (e0 + (d - 1) * es) if branch == "d|l" else 2 * (e0 - es)
    return CriterionReport(name, lhs == rhs, lhs, rhs, branch, extra={"K0": k0, "Ks": ks, "E0": e0, "Es": es})


def criterion_b1_cubic(params: B1Params) -> CriterionReport:
    """The d = 3 case of :func:`criterion_b1_klm` with E_{m,3} written as C_m."""
    if params.d != 3:
        return inapplicable("b1-cubic", "needs d = 3")
    return criterion_b1_klm(params, name="b1-cubic", use_cubic=True)


def _rho_sigma(params: B1Params) -> tuple[int, int]:
    ctx, d = params.ctx, params.d
    step = (2**ctx.m + 1) // d
    o = o_of_d(2, ctx.n, d)
    signs = [(-1) ** ctx.trace(ctx.mul(params.b, ctx.xi ** (j * step)), o, 1) for j in range(d)]
    return signs[0], sum(signs[1:])


def criterion_b1_b_nonzero(params: B1Params) -> CriterionReport:
    """rho K(a_0) + sigma K(a_0+a_1) = 2(rho E(a_0) + sigma E(a_0+a_1)) + rho + sigma - d."""
    name = "b1-twisted"
    why = _b1_pattern(params)
    if why:
        return inapplicable(name, why)
    if not params.b:
        return inapplicable(name, "needs b != 0")
    if params.l % params.d:
        return inapplicable(name, "needs d | l")
    rho, sigma = _rho_sigma(params)
    k0, ks, e0, es = _b1_sums(params)
    lhs = rho * k0 + sigma * ks
    rhs = 2 * (rho * e0 + sigma * es) + rho + sigma - params.d
    return CriterionReport(name, lhs == rhs, lhs, rhs, "d|l", extra={"rho": rho, "sigma": sigma})


def criterion_b1_lone(params: B1Params) -> CriterionReport:
    """a_1 = ... = 0: (rho + sigma)(1 + 2E(a_0) - K(a_0)) = d, cross-multiplied."""
    name = "b1-lone"
    ctx, a = params.ctx, params.a
    if params.d < 2 or any(a[1:]):
        return inapplicable(name, "needs d >= 2 and a_1 = ... = a_(d-1) = 0")
    if a[0] == 0 or not ctx.in_subfield(a[0], ctx.m):
        return inapplicable(name, "needs a_0 in F_(2^m)^*")
    if params.l % params.d:
        return inapplicable(name, "needs d | l")
    rho, sigma = _rho_sigma(params)
    k0 = int(kloosterman(ctx, a[0], ctx.m))
    e0 = e_md(ctx, a[0], params.d, ctx.m)
    lhs = (rho + sigma) * (1 + 2 * e0 - k0)
    return CriterionReport(name, lhs == params.d, lhs, params.d)


def criterion_b2(params: B2Params) -> CriterionReport:
    ctx, r, s, a = params.ctx, params.r, params.s, params.a
    m = ctx.m
    g = gcd(s, 2**m + 1)
    abar, k = dillon_decompose(ctx, a)
    roots = _roots_of_unity_in_u(ctx, r)
    if g == 1:
        kval = int(kloosterman(ctx, abar, m))
        rhs = r - _bin(ctx, ctx.tr[ctx.vmul(a, roots)])
        branch = "gcd(s,2^m+1)=1" + (" [r=1]" if r == 1 else "")
        return CriterionReport("b2-kloosterman", kval == rhs, kval, rhs, branch, extra={"abar": int(abar), "k": k})
    if k % g:
        return inapplicable("b2-kloosterman", f"gcd(s,2^m+1)={g} needs a = abar xi^(k d) with d | k")
    lhs = g * int(partial_sum(ctx, abar, 0, g))
    rhs = _bin(ctx, ctx.tr[ctx.vmul(a, ctx.vpow(roots, s))]) + 1 - r
    return CriterionReport("b2-kloosterman", lhs == rhs, lhs, rhs, f"gcd(s,2^m+1)={g}", extra={"abar": int(abar), "k": k})


def b2_trace_prediction(params: B2Params) -> dict | None:
    """For r = 3, gcd(s, 2^m+1) = 1: K_m(abar) and the value {0, 4} a bent f forces."""
    ctx = params.ctx
    if params.r != 3 or gcd(params.s, 2**ctx.m + 1) != 1:
        return None
    abar, _ = dillon_decompose(ctx, params.a)
    traces = [int(t) for t in ctx.tr[ctx.vmul(params.a, _roots_of_unity_in_u(ctx, 3))]]
    return {"K": int(kloosterman(ctx, abar, ctx.m)), "traces": traces, "predicted": 0 if not any(traces) else 4}


def _b_outer(ctx: FieldCtx, b: int) -> list[int]:
    """Tr_1^2(b xi^(j (p^m+1)/4)) for j = 0..3."""
    step = (ctx.p**ctx.m + 1) // 4
    return [ctx.trace(ctx.mul(b, ctx.xi ** (j * step)), 2, 1) for j in range(4)]


def criterion_p1_general(params: P1Params) -> CriterionReport:
    ctx, p = params.ctx, params.ctx.p
    v0 = v_partition(ctx, 4)[0]
    total = CycInt.zero(p)
    for j, t in enumerate(_b_outer(ctx, params.b)):
        inner = CycInt.from_exponents(p, ctx.tr[ctx.vmul(ctx.mul(params.a, ctx.xi ** (j * params.l)), v0)])
        total = total + CycInt.from_exponents(p, [t]) * inner
    return CriterionReport("p1-direct", total == 1, total, 1)


def criterion_p1_klm(params: P1Params, tol: float = DEFAULT_TOL) -> CriterionReport:
    """K_m(abar^2) = 1 - 4 I i sin(2 pi Q(abar)/p) - 2 / (cos + cos)."""
    name = "p1-kloosterman"
    ctx, p = params.ctx, params.ctx.p
    if params.l % 4:
        return inapplicable(name, "needs 4 | l")
    try:
        abar, k = dillon_decompose(ctx, params.a)
    except FieldError:
        return inapplicable(name, "a is not of the form abar xi^k")
    if k % 4 not in (1, 3):
        return inapplicable(name, f"needs k = 1 or 3 (mod 4), got k = {k}")
    outer = _b_outer(ctx, params.b)
    cos_sum = math.cos(2 * math.pi * outer[0] / p) + math.cos(2 * math.pi * outer[1] / p)
    if abs(cos_sum) < tol:
        return inapplicable(name, "cosine sum vanishes")
    kval = kloosterman(ctx, ctx.mul(abar, abar), ctx.m).to_complex()
    q = q_value(ctx, abar)
    i_const = i_constant(p, ctx.m)
    sin_term = 4 * i_const * 1j * math.sin(2 * math.pi * (q or 0) / p)
    rhs = 1 - sin_term - 2 / cos_sum
    # undivided form: (sum_j w^Tr(b xi^(j(p^m+1)/4))) (1 - K - 4 I i sin) = 4
    b_sum = sum(cmath.exp(2j * math.pi * t / p) for t in outer)
    undivided = abs(b_sum * (1 - kval - sin_term) - 4) < tol
    return _numeric(name, kval, rhs, tol, f"k={k % 4} mod 4", Q=q, cos_sum=cos_sum, undivided=undivided)


def _epsilon(params: P2Params) -> CycInt:
    ctx, p = params.ctx, params.ctx.p
    pm1 = p**ctx.m + 1
    roots = _roots_of_unity_in_u(ctx, params.r)
    xs = ctx.vpow(roots, params.s)
    sign = np.where(ctx.vpow(roots, pm1 // 2) == 1, 1, -1)
    bterm = params.b * sign
    neg = ctx.tr[ctx.vmul(ctx.neg(params.a), xs)] + bterm
    rep = (pm1 // params.r - 1) * ctx.tr[ctx.vmul(params.a, xs)] + bterm
    return CycInt.from_exponents(p, neg) - CycInt.from_exponents(p, rep) + 1


def criterion_p2(params: P2Params, tol: float = DEFAULT_TOL) -> CriterionReport:
    """(1 - K_m(a^(p^m+1))) cos(2 pi b/p) against eps (+ the C_0^+ correction)."""
    ctx, p, b = params.ctx, params.ctx.p, params.b
    pm1 = p**ctx.m + 1
    kval = kloosterman(ctx, ctx.pow(params.a, pm1), ctx.m)
    eps = _epsilon(params)
    lhs = (1 - kval.to_complex()) * math.cos(2 * math.pi * b / p)
    neg_a = ctx.neg(params.a)
    q = q_value(ctx, neg_a)
    if q:
        branch = "-a in C0+"
        i_const = i_constant(p, ctx.m)
        rhs = 4 * i_const * math.sin(2 * math.pi * b / p) * math.sin(2 * math.pi * q / p) + eps.to_complex()
    else:
        branch = "otherwise"
        rhs = eps.to_complex()
    return _numeric("p2-direct", lhs, rhs, tol, branch, epsilon=eps, K=kval, Q=q)


def criterion_p2_r1(params: P2Params, tol: float = DEFAULT_TOL) -> CriterionReport:
    """r = 1: b = 0 gives the exact K_m(a^(p^m+1)) = 1 - w^Tr(-a); b != 0 uses the
    short form of eps."""
    name = "p2-r1"
    if params.r != 1:
        return inapplicable(name, "needs r = 1")
    ctx, p, b = params.ctx, params.ctx.p, params.b
    kval = kloosterman(ctx, ctx.pow(params.a, p**ctx.m + 1), ctx.m)
    t = int(ctx.tr[ctx.neg(params.a)])
    if b == 0:
        rhs = 1 - CycInt.from_exponents(p, [t])
        return CriterionReport(name, kval == rhs, kval, rhs, "b=0")
    eps = CycInt.from_exponents(p, [t + b]) - CycInt.from_exponents(p, [b]) + 1
    report = criterion_p2(params, tol)
    report.name = name
    report.extra["short_epsilon_matches"] = eps == report.extra["epsilon"]
    return report


_COS_P3 = {0: Fraction(1), 1: Fraction(-1, 2), 2: Fraction(-1, 2)}


def criterion_p2_zero_b(params: P2Params) -> CriterionReport:
    """p = 3, r = 2, b = 0: regular bent iff K_m(a^(3^m+1)) = 0."""
    ctx = params.ctx
    if ctx.p != 3 or params.r != 2 or params.b != 0:
        return inapplicable("p2-zero-b", "needs p = 3, r = 2, b = 0")
    kval = kloosterman(ctx, ctx.pow(params.a, 3**ctx.m + 1), ctx.m)
    return CriterionReport("p2-zero-b", kval == 0, kval, 0)


def criterion_p2_unit_b(params: P2Params) -> CriterionReport:
    """p = 3, 3^m = 3 (mod 4), r = 2, b != 0: regular bent iff K = 1 - 1/cos(2 pi b/3)."""
    ctx = params.ctx
    if ctx.p != 3 or params.r != 2 or params.b == 0 or 3**ctx.m % 4 != 3:
        return inapplicable("p2-unit-b", "needs p = 3, 3^m = 3 (mod 4), r = 2, b != 0")
    kval = kloosterman(ctx, ctx.pow(params.a, 3**ctx.m + 1), ctx.m)
    rhs = 1 - 1 / _COS_P3[params.b % 3]
    exact = rhs.denominator == 1 and kval == int(rhs)
    return CriterionReport("p2-unit-b", exact, kval, rhs)


# ---------------------------------------------------------------------------
# dispatch used by the search


FAMILY_CRITERIA = {
    "B1": ("general", "b1-direct", "b1-kloosterman", "b1-cubic", "b1-twisted", "b1-lone"),
    "B2": ("general", "b2-kloosterman"),
    "P1": ("general", "p1-direct", "p1-kloosterman"),
    "P2": ("general", "p2-direct", "p2-r1", "p2-zero-b", "p2-unit-b"),
}


def family_criteria(params, f=None, tol: float = DEFAULT_TOL) -> list[CriterionReport]:
    """Every criterion defined for ``params``' family, in :data:`FAMILY_CRITERIA` order."""
    f = params.to_dillon() if f is None else f
    fam = params.family
    if fam == "B1":
        return [
            criterion_general(f),
            criterion_b1_general(params),
            criterion_b1_klm(params),
            criterion_b1_cubic(params),
            criterion_b1_b_nonzero(params),
            criterion_b1_lone(params),
        ]
    if fam == "B2":
        return [criterion_general(f), criterion_b2(params)]
    if fam == "P1":
        return [criterion_general(f), criterion_p1_general(params), criterion_p1_klm(params, tol)]
    if fam == "P2":
        return [
            criterion_general(f),
            criterion_p2(params, tol),
            criterion_p2_r1(params, tol),
            criterion_p2_zero_b(params),
            criterion_p2_unit_b(params),
        ]
    raise ValueError(f"unknown family {fam!r}")


def agreement(reports: Iterable[CriterionReport], truth: bool) -> bool:
    return all(r.verdict == truth for r in reports if r.verdict is not None)
