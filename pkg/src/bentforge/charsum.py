"""Character sums over the field tower: Walsh spectra, Kloosterman sums,
Dickson polynomials, the partial sums S_i over cosets of the unit circle, and
the unit-circle sum that decides bentness of Dillon-type functions.

Exact values are :class:`~bentforge.cyclo.CycInt`; the closed forms for the
d = 2 and d = 4 partial sums are float-valued cross-checks only.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .cyclo import CycInt, counts_norm_sq, counts_to_coeffs
from .gf import FieldCtx, FieldError, o_of_d, unit_circle, v_partition


def as_table(ctx: FieldCtx, f) -> np.ndarray:
    """Truth table (values in 0..p-1 indexed by element encoding) of ``f``.

    ``f`` may be an array, an object with a ``table()`` method, or a callable
    mapping element encodings to F_p values.
    """
    if hasattr(f, "table"):
        t = f.table()
    elif callable(f):
        t = np.array([int(f(x)) for x in range(ctx.q)], dtype=np.int64)
    else:
        t = np.asarray(f, dtype=np.int64)
    if t.shape != (ctx.q,):
        raise ValueError(f"truth table must have {ctx.q} entries, got shape {t.shape}")
    return t % ctx.p


# ---------------------------------------------------------------------------
# Walsh transform


def walsh(ctx: FieldCtx, f, lam) -> CycInt:
    """W_f(lam) = sum_x w^(f(x) - Tr(lam x)), summed directly."""
    t = as_table(ctx, f)
    lin = ctx.tr[ctx.vmul(ctx.elements(), int(lam))]
    return CycInt.from_exponents(ctx.p, t - lin)


def walsh_counts_naive(ctx: FieldCtx, table: np.ndarray) -> np.ndarray:
    """Exponent histograms of W_f(lam) for every lam, O(q^2)."""
    p, q = ctx.p, ctx.q
    xs = ctx.elements()
    out = np.zeros((q, p), dtype=np.int64)
    for lam in range(q):
        e = (table - ctx.tr[ctx.vmul(xs, lam)]) % p
        out[lam] = np.bincount(e, minlength=p)
    return out


def walsh_counts_fast(ctx: FieldCtx, table: np.ndarray) -> np.ndarray:
    """Same histograms via a butterfly over the additive group (Z/p)^n.

    Tr(lam x) is the dot product of x's coefficient vector with the
    functional ``ctx.trace_dual_index[lam]``, so the transform runs over plain
    coordinate vectors and is re-indexed by lam at the end.  Each stage maps
    the group-ring value at coordinate c to sum_c shift(value_c, -u*c).
    """
    p, n, q = ctx.p, ctx.n, ctx.q
    g = np.zeros((q, p), dtype=np.int64)
    g[np.arange(q), table] = 1
    g = g.reshape((p,) * n + (p,))
    shifts = [(np.arange(p) + s) % p for s in range(p)]
    for axis in range(n):
        moved = np.moveaxis(g, axis, 0)
        out = np.zeros_like(moved)
        for u in range(p):
            for c in range(p):
                out[u] += moved[c][..., shifts[(u * c) % p]]
        g = np.moveaxis(out, 0, axis)
    by_functional = g.reshape(q, p)
    return by_functional[ctx.trace_dual_index]


@dataclass
class WalshSpectrum:
    p: int
    n: int
    counts: np.ndarray  # (q, p) exponent histograms, row = lambda
    is_bent: bool = field(init=False)
    is_regular: bool = field(init=False)
    dual: np.ndarray | None = field(init=False)

    def __post_init__(self):
        q = self.p**self.n
        ns = counts_to_coeffs(counts_norm_sq(self.counts))
        target = np.zeros(self.p - 1, dtype=np.int64)
        target[0] = q
        self.is_bent = bool((ns == target).all())
        self.dual = None
        self.is_regular = False
        if self.is_bent and self.n % 2 == 0:
            dual = _scaled_roots(counts_to_coeffs(self.counts), self.p ** (self.n // 2))
            if (dual >= 0).all():
                self.is_regular = True
                self.dual = dual

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, lam) -> CycInt:
        return CycInt.from_counts(self.p, self.counts[int(lam)])

    @property
    def values(self) -> list[CycInt]:
        return [self[i] for i in range(len(self))]

    def parseval(self) -> CycInt:
        """sum_lam |W_f(lam)|^2 as an exact value (p^(2n) for any f)."""
        total = counts_norm_sq(self.counts).sum(axis=0)
        return CycInt.from_counts(self.p, [int(x) for x in total])

    def magnitude_profile(self) -> dict[str, int]:
        """Histogram of exact |W|^2 values (keyed by their coefficient vectors)."""
        ns = counts_to_coeffs(counts_norm_sq(self.counts))
        keys, freq = np.unique(ns, axis=0, return_counts=True)
        return {str([int(v) for v in k]): int(c) for k, c in zip(keys, freq)}


def _scaled_roots(coeffs: np.ndarray, c: int) -> np.ndarray:
    """Row-wise k with row == c*w^k, or -1."""
    p = coeffs.shape[1] + 1
    out = np.full(len(coeffs), -1, dtype=np.int64)
    out[(coeffs == -c).all(axis=1)] = p - 1
    for k in range(p - 1):
        target = np.zeros(p - 1, dtype=np.int64)
        target[k] = c
        out[(coeffs == target).all(axis=1)] = k
    return out


def walsh_spectrum(ctx: FieldCtx, f, method: str = "fast") -> WalshSpectrum:
    table = as_table(ctx, f)
    if method == "fast":
        counts = walsh_counts_fast(ctx, table)
    elif method == "naive":
        counts = walsh_counts_naive(ctx, table)
    else:
        raise ValueError(f"unknown method {method!r}")
    return WalshSpectrum(ctx.p, ctx.n, counts)


# ---------------------------------------------------------------------------
# Kloosterman sums and Dickson polynomials


def _degree(ctx: FieldCtx, degree: int | None) -> int:
    return ctx.n if degree is None else degree


def kloosterman(ctx: FieldCtx, a, degree: int | None = None) -> CycInt:
    """K(a) = sum_{x in F_{p^k}} w^(Tr_1^k(a x + x^(p^k - 2))), k = ``degree``.

    ``degree`` defaults to the full field; pass ``ctx.m`` for the subfield
    sum K_m of the tower.  The x = 0 term contributes 1.
    """
    k = _degree(ctx, degree)
    a = int(a)
    if not ctx.in_subfield(a, k):
        raise FieldError(f"Kloosterman argument is not in F_(p^{k})")
    xs = ctx.subfield(k)
    arg = ctx.vadd(ctx.vmul(a, xs), ctx.vpow(xs, ctx.p**k - 2))
    return CycInt.from_exponents(ctx.p, ctx.vtrace(arg, k, 1))


def kloosterman_table(ctx: FieldCtx, degree: int | None = None) -> tuple[np.ndarray, list[CycInt]]:
    """(alphas, values) over all of F_{p^k}, zero first then by discrete log."""
    k = _degree(ctx, degree)
    xs = ctx.subfield(k)
    tr_lin = ctx.vtrace(ctx.vmul(xs[:, None], xs[None, :]), k, 1)
    tr_inv = ctx.vtrace(ctx.vpow(xs, ctx.p**k - 2), k, 1)
    e = (tr_lin + tr_inv[None, :]) % ctx.p
    values = [CycInt.from_counts(ctx.p, np.bincount(row, minlength=ctx.p)) for row in e]
    return xs, values


def dickson_closed(r: int) -> list[int]:
    """D_r over F_2 from the binomial closed form; coefficients low degree first."""
    if r < 2:
        raise ValueError("Dickson index must be >= 2")
    coeffs = [0] * (r + 1)
    for i in range(r // 2 + 1):
        num = r * comb(r - i, i)
        assert num % (r - i) == 0
        coeffs[r - 2 * i] = (num // (r - i)) % 2
    return coeffs


def dickson_recurrence(r: int) -> list[int]:
    """D_r over F_2 from D_r = x D_{r-1} + D_{r-2}, D_0 = 0, D_1 = x."""
    if r < 2:
        raise ValueError("Dickson index must be >= 2")
    prev, cur = [0], [0, 1]
    for _ in range(2, r + 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] ^= c
        prev, cur = cur, nxt
    return cur


def dickson(r: int) -> list[int]:
    closed = dickson_closed(r)
    if closed != dickson_recurrence(r):
        raise RuntimeError(f"Dickson closed form and recurrence disagree at r={r}")
    return closed


def poly_eval(ctx: FieldCtx, coeffs: list[int], xs: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial with small integer coefficients at field elements."""
    acc = np.zeros_like(xs)
    for j, c in enumerate(coeffs):
        if c % ctx.p:
            term = ctx.vpow(xs, j)
            acc = ctx.vadd(acc, ctx.vmul(c % ctx.p, term))
    return acc


def _binary_sum(ctx: FieldCtx, trace_vals: np.ndarray) -> int:
    return int(np.sum(1 - 2 * trace_vals))


def e_md(ctx: FieldCtx, abar, d: int, degree: int | None = None) -> int:
    """E_{m,d}(abar) = sum_{x in F_{2^m}} (-1)^Tr(abar D_d(x))."""
    if ctx.p != 2:
        raise FieldError("E_{m,d} is defined for characteristic 2 only")
    k = _degree(ctx, degree)
    xs = ctx.subfield(k)
    vals = ctx.vmul(int(abar), poly_eval(ctx, dickson(d), xs))
    return _binary_sum(ctx, ctx.vtrace(vals, k, 1))


def cubic_sum(ctx: FieldCtx, a, degree: int | None = None) -> int:
    """C_m(a) = sum_{x in F_{2^m}} (-1)^Tr(a x^3 + a x)."""
    if ctx.p != 2:
        raise FieldError("C_m is defined for characteristic 2 only")
    k = _degree(ctx, degree)
    xs = ctx.subfield(k)
    vals = ctx.vmul(int(a), ctx.vadd(ctx.vpow(xs, 3), xs))
    return _binary_sum(ctx, ctx.vtrace(vals, k, 1))


# ---------------------------------------------------------------------------
# sums over the unit circle


def unit_sum(ctx: FieldCtx, a) -> CycInt:
    """sum_{x in U} w^Tr(a x)."""
    _, u = unit_circle(ctx)
    return CycInt.from_exponents(ctx.p, ctx.tr[ctx.vmul(int(a), u)])


def partial_sum(ctx: FieldCtx, a, i: int, d: int) -> CycInt:
    """S_i(a) = sum_{x in V_0} w^Tr(a xi^i x) for the index-d subgroup V_0."""
    if not 0 <= i < d:
        raise ValueError(f"coset index {i} out of range for d={d}")
    v0 = v_partition(ctx, d)[0]
    shift = ctx.mul(int(a), ctx.xi ** i)
    return CycInt.from_exponents(ctx.p, ctx.tr[ctx.vmul(shift, v0)])


def i_constant(p: int, m: int) -> complex:
    """The constant I of the d = 2 closed form; (-1)^x is read as exp(i pi x)."""
    if p % 4 == 3:
        return cmath.exp(1j * math.pi * 1.5 * m) * p ** (m / 2) / 2
    return (-1) ** m * p ** (m / 2) / 2


def in_c0(ctx: FieldCtx, a) -> bool:
    """a is a nonzero square (even discrete log)."""
    a = int(a)
    return a != 0 and int(ctx.log[a]) % 2 == 0


def q_value(ctx: FieldCtx, a) -> int | None:
    """Q(a) = 2 Tr_1^m(a^((p^m+1)/2)) lifted to 0..p-1; None unless a is a square."""
    if not in_c0(ctx, a):
        return None
    m = ctx.m
    y = ctx.pow(int(a), (ctx.p**m + 1) // 2)
    return (2 * ctx.trace(y, m, 1)) % ctx.p


def r_value(ctx: FieldCtx, a) -> complex:
    """R(a) = (1 - K_m(a^(p^m+1))) / 2."""
    k = kloosterman(ctx, ctx.pow(int(a), ctx.p**ctx.m + 1), ctx.m)
    return (1 - k.to_complex()) / 2


@dataclass(frozen=True)
class ClosedForm:
    values: dict[str, complex]
    branch: str  # "C0+" or "otherwise"
    q: int | None
    r: complex
    i_const: complex
    exact_check: bool | None = None


def partial_sum_closed_d2(ctx: FieldCtx, a) -> ClosedForm:
    """Closed forms of S_0(a), S_1(a) for d = 2 and odd p."""
    if ctx.p == 2:
        raise FieldError("the d = 2 closed form needs odd p")
    a = int(a)
    i_const = i_constant(ctx.p, ctx.m)
    r = r_value(ctx, a)
    q = q_value(ctx, a)
    if q:
        delta = i_const * (2j * math.sin(2 * math.pi * q / ctx.p))
        return ClosedForm({"S0": r + delta, "S1": r - delta}, "C0+", q, r, i_const)
    return ClosedForm({"S0": r, "S1": r}, "otherwise", q, r, i_const)


def partial_sum_closed_d4(ctx: FieldCtx, a) -> ClosedForm:
    """Closed form of S_1(a) = S_3(a) for d = 4, p^m = 3 mod 4, a in F_{p^m}^*."""
    pm = ctx.p ** ctx._require_even()
    if ctx.p == 2 or pm % 4 != 3:
        raise FieldError(f"the d = 4 closed form needs p^m = 3 (mod 4), got p^m = {pm}")
    a = int(a)
    if a == 0 or not ctx.in_subfield(a, ctx.m):
        raise FieldError("argument must lie in F_{p^m}^*")
    half = partial_sum_closed_d2(ctx, a)
    s1 = half.values["S1"] / 2
    exact = partial_sum(ctx, a, 1, 4) == partial_sum(ctx, a, 3, 4)
    return ClosedForm({"S1": s1, "S3": s1}, half.branch, half.q, half.r, half.i_const, exact)


def dillon_sum(ctx: FieldCtx, a_coeffs: dict[int, int], b, d: int) -> CycInt:
    """S(a_1, ..., b) = sum_{x in U} w^(sum_i Tr(a_i x^i) + Tr_1^o(b x^((p^m+1)/d)))."""
    m = ctx._require_even()
    pm1 = ctx.p**m + 1
    if d < 1 or pm1 % d:
        raise FieldError(f"d={d} does not divide p^m+1={pm1}")
    o = o_of_d(ctx.p, ctx.n, d)
    b = int(b)
    if not ctx.in_subfield(b, o):
        raise FieldError(f"b is not in F_(p^{o})")
    _, u = unit_circle(ctx)
    e = np.zeros(len(u), dtype=np.int64)
    for i, coef in a_coeffs.items():
        if int(coef):
            e += ctx.tr[ctx.vmul(int(coef), ctx.vpow(u, i))]
    if b:
        e += ctx.vtrace(ctx.vmul(b, ctx.vpow(u, pm1 // d)), o, 1)
    return CycInt.from_exponents(ctx.p, e)

