"""Finite field tower F_p < F_{p^m} < F_{p^n} (n = 2m) with log/exp tables.

Elements are encoded as integers ``v = sum(c_i * p**i)`` where ``c_i`` are the
polynomial-basis coefficients (constant term first).  Every field operation
accepts either a plain ``int`` encoding or a :class:`GFElem`; vectorised
helpers (``v*`` methods) take and return numpy arrays of encodings.
"""
from __future__ import annotations

import json
import operator
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from sympy import divisors, isprime, primefactors

MAX_ORDER = 1 << 20


class FieldError(ValueError):
    """Invalid field parameters or an operand outside the expected subfield."""


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]  # length n+1, constant term first, monic

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict | str) -> "FieldSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(int(obj["p"]), int(obj["n"]), tuple(int(c) for c in obj["modulus"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FieldError(f"malformed field spec: {obj!r}") from exc


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def _matpow_mod(mat: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = mat.copy()
    while e:
        if e & 1:
            result = _matmul_mod(result, base, p)
        base = _matmul_mod(base, base, p)
        e >>= 1
    return result


def _mulx_matrix(low: tuple[int, ...], p: int) -> np.ndarray:
    """Matrix of multiplication by x acting on coefficient row vectors."""
    n = len(low)
    mat = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        mat[i, i + 1] = 1
    mat[n - 1] = [(-c) % p for c in low]
    return mat


def is_primitive(p: int, modulus: tuple[int, ...]) -> bool:
    """True iff the monic ``modulus`` (constant first) is primitive over F_p."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] != 1 or modulus[0] % p == 0:
        return False
    mx = _mulx_matrix(tuple(modulus[:-1]), p)
    order = p**n - 1
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1

    def x_pow_is_one(e: int) -> bool:
        return bool(np.array_equal(_matpow_mod(mx, e, p)[0], one))

    if not x_pow_is_one(order):
        return False
    return all(not x_pow_is_one(order // r) for r in primefactors(order)) if order > 1 else True


def find_primitive_modulus(p: int, n: int, skip: int = 0) -> tuple[int, ...]:
    """Smallest primitive polynomial of degree n by the encoding sum(c_i p^i).

    ``skip`` selects the (skip+1)-th one in that order; used to obtain an
    alternative representation of the same field.
    """
    for code in range(p**n):
        low = tuple((code // p**i) % p for i in range(n))
        if low[0] == 0:
            continue
        modulus = low + (1,)
        if is_primitive(p, modulus):
            if skip == 0:
                return modulus
            skip -= 1
    raise FieldError(f"no primitive polynomial of degree {n} over F_{p} (skip too large)")


class GFElem:
    """A field element bound to its context; supports the usual operators."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: "FieldCtx", value: int):
        self.ctx = ctx
        self.value = int(value)

    def __index__(self) -> int:
        return self.value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.value)

    def _wrap(self, v: int) -> "GFElem":
        return GFElem(self.ctx, v)

    def __add__(self, other):
        return self._wrap(self.ctx.add(self.value, other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.ctx.sub(self.value, other))

    def __rsub__(self, other):
        return self._wrap(self.ctx.sub(other, self.value))

    def __mul__(self, other):
        return self._wrap(self.ctx.mul(self.value, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.ctx.mul(self.value, self.ctx.inv(other)))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.value, e))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, GFElem):
            return self.ctx.spec == other.ctx.spec and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.spec, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        if self.value == 0:
            return "GFElem(0)"
        return f"GFElem(alpha^{self.ctx.log_of(self.value)})"


_idx = operator.index


class FieldCtx:
    """Immutable field context with discrete-log tables.

    Construct through :func:`build_field`.  ``m`` is ``n // 2`` for even ``n``
    and ``None`` otherwise; the unit-circle helpers require even ``n``.
    """

    def __init__(self, spec: FieldSpec):
        p, n = spec.p, spec.n
        if not isprime(p):
            raise FieldError(f"p not prime: {p}")
        if n < 1 or p**n > MAX_ORDER:
            raise FieldError(f"degree out of supported range: p^n must be <= 2^20 (p={p}, n={n})")
        if len(spec.modulus) != n + 1 or any(not 0 <= c < p for c in spec.modulus):
            raise FieldError(f"modulus must have n+1 coefficients in [0, p): {spec.modulus}")
        if not is_primitive(p, spec.modulus):
            raise FieldError(f"modulus is not a primitive polynomial over F_{p}: {spec.modulus}")
        self.spec = spec
        self.p, self.n = p, n
        self.q = p**n
        self.m = n // 2 if n % 2 == 0 else None
        self.modulus = spec.modulus
        self.pw = p ** np.arange(n, dtype=np.int64)
        self._build_tables()

    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.q
        mx = _mulx_matrix(self.modulus[:-1], p)
        rows = np.zeros((q - 1, n), dtype=np.int64)
        rows[0, 0] = 1
        filled, step = 1, mx
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            rows[filled:filled + take] = _matmul_mod(rows[:take], step, p)
            filled += take
            step = _matmul_mod(step, step, p)
        self.exp = rows @ self.pw
        log = np.full(q, -1, dtype=np.int64)
        log[self.exp] = np.arange(q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise FieldError("internal: log table is not a bijection")
        self.log = log
        self.digits = (np.arange(q, dtype=np.int64)[:, None] // self.pw) % p
        # absolute trace via linearity on the polynomial basis
        basis_tr = np.array([self._slow_trace(int(self.pw[j])) for j in range(n)], dtype=np.int64)
        self.tr = (self.digits @ basis_tr) % p
        self.tr.setflags(write=False)
        self.exp.setflags(write=False)
        self.log.setflags(write=False)
        self.digits.setflags(write=False)

    def _slow_trace(self, x: int) -> int:
        acc, y = 0, x
        for _ in range(self.n):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        if acc >= self.p:
            raise FieldError("internal: absolute trace left the prime field")
        return acc

    # ------------------------------------------------------------------ basics
    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={self.modulus})"

    def __reduce__(self):
        return (build_field, (self.p, self.n, self.modulus))

    def __call__(self, value) -> GFElem:
        return GFElem(self, _idx(value))

    def elem(self, coeffs) -> GFElem:
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.n:
            raise FieldError(f"too many coefficients for degree {self.n}: {coeffs}")
        return GFElem(self, sum(c * self.p**i for i, c in enumerate(coeffs)))

    def coeffs(self, x) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits[_idx(x)])

    def from_log(self, k: int) -> GFElem:
        return GFElem(self, int(self.exp[k % (self.q - 1)]))

    def log_of(self, x) -> int:
        x = _idx(x)
        if x == 0:
            raise FieldError("discrete log of zero")
        return int(self.log[x])

    @property
    def alpha(self) -> GFElem:
        return self.from_log(1)

    @property
    def one(self) -> GFElem:
        return GFElem(self, 1)

    @property
    def zero(self) -> GFElem:
        return GFElem(self, 0)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # ------------------------------------------------------------- arithmetic
    def add(self, x, y) -> int:
        x, y = _idx(x), _idx(y)
        if self.p == 2:
            return x ^ y
        return int(((self.digits[x] + self.digits[y]) % self.p) @ self.pw)

    def neg(self, x) -> int:
        x = _idx(x)
        if self.p == 2:
            return x
        return int(((-self.digits[x]) % self.p) @ self.pw)

    def sub(self, x, y) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x, y) -> int:
        x, y = _idx(x), _idx(y)
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(self.log[x] + self.log[y]) % (self.q - 1)])

    def inv(self, x) -> int:
        x = _idx(x)
        if x == 0:
            raise ZeroDivisionError("inversion of zero in finite field")
        return int(self.exp[(-self.log[x]) % (self.q - 1)])

    def pow(self, x, e: int) -> int:
        x, e = _idx(x), int(e)
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])

    def scalar(self, c: int, x) -> int:
        """c * x for an integer c (repeated addition)."""
        return self.mul(int(c) % self.p, x)

    # vectorised forms
    def vadd(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        return ((self.digits[x] + self.digits[y]) % self.p) @ self.pw

    def vneg(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x
        return ((-self.digits[x]) % self.p) @ self.pw

    def vmul(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        x, y = np.broadcast_arrays(x, y)
        out = self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, out)

    def vpow(self, x, e: int) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        e = int(e)
        if e < 0 and (x == 0).any():
            raise ZeroDivisionError("negative power of zero")
        out = self.exp[(self.log[x] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(x == 0, 1 if e == 0 else 0, out)

    # ---------------------------------------------------------------- subfields
    def _check_degree(self, k: int) -> None:
        if k < 1 or self.n % k:
            raise FieldError(f"{k} does not divide the field degree {self.n}")

    def subfield_step(self, k: int) -> int:
        """Log stride of F_{p^k}^*: its elements are alpha^(j * step)."""
        self._check_degree(k)
        return (self.q - 1) // (self.p**k - 1)

    def in_subfield(self, x, k: int) -> bool:
        x = _idx(x)
        return x == 0 or int(self.log[x]) % self.subfield_step(k) == 0

    def subfield(self, k: int, nonzero: bool = False) -> np.ndarray:
        """Elements of F_{p^k}: zero first (unless ``nonzero``), then by discrete log."""
        step = self.subfield_step(k)
        units = self.exp[::step][: self.p**k - 1]
        return units.copy() if nonzero else np.concatenate(([0], units))

    def trace(self, x, frm: int | None = None, to: int = 1) -> int:
        """Tr_to^frm(x) = sum_{i < frm/to} x^(p^(to*i))."""
        frm = self.n if frm is None else frm
        self._check_degree(frm)
        if to < 1 or frm % to:
            raise FieldError(f"trace degrees must satisfy to | from: to={to}, from={frm}")
        if not self.in_subfield(x, frm):
            raise FieldError(f"element is not in the degree-{frm} subfield")
        if frm == self.n and to == 1:
            return int(self.tr[_idx(x)])
        acc, y = 0, _idx(x)
        for _ in range(frm // to):
            acc = self.add(acc, y)
            y = self.pow(y, self.p**to)
        return acc

    def vtrace(self, x, frm: int | None = None, to: int = 1) -> np.ndarray:
        frm = self.n if frm is None else frm
        self._check_degree(frm)
        if to < 1 or frm % to:
            raise FieldError(f"trace degrees must satisfy to | from: to={to}, from={frm}")
        x = np.asarray(x, dtype=np.int64)
        if frm == self.n and to == 1:
            return self.tr[x]
        step = self.subfield_step(frm)
        if ((x != 0) & (self.log[x] % step != 0)).any():
            raise FieldError(f"elements are not in the degree-{frm} subfield")
        acc, y = np.zeros_like(x), x
        for _ in range(frm // to):
            acc = self.vadd(acc, y)
            y = self.vpow(y, self.p**to)
        return acc

    # ------------------------------------------------------------- unit circle
    def _require_even(self) -> int:
        if self.m is None:
            raise FieldError(f"operation needs an even extension degree, got n={self.n}")
        return self.m

    @property
    def xi(self) -> GFElem:
        m = self._require_even()
        return self.from_log(self.p**m - 1)

    @cached_property
    def _unit_circle(self) -> np.ndarray:
        m = self._require_even()
        pm = self.p**m
        arr = self.exp[(np.arange(pm + 1, dtype=np.int64) * (pm - 1)) % (self.q - 1)]
        arr.setflags(write=False)
        return arr

    @cached_property
    def trace_dual_index(self) -> np.ndarray:
        """For each lambda, the integer encoding of the functional x -> Tr(lambda x).

        Entry i of the functional is Tr(lambda * x^i), so Tr(lambda x) equals the
        dot product with the coefficient vector of x (mod p).
        """
        lam = self.elements()
        cols = [self.tr[self.vmul(lam, int(self.pw[i]))] for i in range(self.n)]
        return np.stack(cols, axis=1) @ self.pw


@lru_cache(maxsize=64)
def _build_cached(p: int, n: int, modulus: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(FieldSpec(p, n, modulus))


def build_field(p: int, n: int, modulus=None) -> FieldCtx:
    """Field of order p^n, by default modulo the smallest primitive polynomial.

    Polynomials are ordered by the integer ``sum(c_i * p**i)``; for (2, 4) this
    yields x^4 + x + 1.  Contexts are cached, so equal arguments share tables.
    """
    p, n = int(p), int(n)
    if not isprime(p):
        raise FieldError(f"p not prime: {p}")
    if n < 1 or p**n > MAX_ORDER:
        raise FieldError(f"degree out of supported range: p^n must be <= 2^20 (p={p}, n={n})")
    if modulus is None:
        modulus = find_primitive_modulus(p, n)
    return _build_cached(p, n, tuple(int(c) for c in modulus))


def field_from_spec(spec: FieldSpec) -> FieldCtx:
    return build_field(spec.p, spec.n, spec.modulus)


# ---------------------------------------------------------------------------
# tower structure used throughout the Dillon-exponent machinery


def unit_circle(ctx: FieldCtx) -> tuple[GFElem, np.ndarray]:
    """(xi, members) with members[j] = xi^j for j = 0..p^m."""
    return ctx.xi, ctx._unit_circle


def v_partition(ctx: FieldCtx, d: int) -> list[np.ndarray]:
    """Cosets V_0..V_{d-1} of the index-d subgroup of U; V_k = xi^k V_0."""
    m = ctx._require_even()
    size = ctx.p**m + 1
    if d < 1 or size % d:
        raise FieldError(f"d={d} does not divide p^m+1={size}")
    u = ctx._unit_circle
    return [u[k::d].copy() for k in range(d)]


def coset_reps(ctx: FieldCtx) -> np.ndarray:
    """Transversal {alpha^0, ..., alpha^(p^m)} of F_{p^m}^* in F_{p^n}^*."""
    m = ctx._require_even()
    return ctx.exp[: ctx.p**m + 1].copy()


def tr_zero_rep(ctx: FieldCtx, lam) -> GFElem:
    """The unique u among :func:`coset_reps` with Tr_m^n(lam * u) = 0."""
    m = ctx._require_even()
    lam = _idx(lam)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    reps = coset_reps(ctx)
    hits = reps[ctx.vtrace(ctx.vmul(lam, reps), ctx.n, m) == 0]
    if len(hits) != 1:
        raise RuntimeError(f"invariant breach: {len(hits)} representatives with Tr_m^n(lambda u) = 0")
    return ctx(int(hits[0]))


def o_of_d(p: int, n: int, d: int) -> int:
    """Smallest o with o | n and d | p^o - 1."""
    for o in divisors(n):
        if (p**o - 1) % d == 0:
            return o
    raise FieldError(f"no o | {n} with {d} | {p}^o - 1")


def dillon_decompose(ctx: FieldCtx, a) -> tuple[GFElem, int]:
    """Write a = abar * xi^k with abar in F_{p^m}^*, smallest k >= 0.

    For odd p only squares admit such a factorisation (F_{p^m}^* U has index 2);
    other inputs raise :class:`FieldError`.
    """
    m = ctx._require_even()
    a = _idx(a)
    if a == 0:
        raise FieldError("cannot decompose zero")
    pm = ctx.p**m
    la = int(ctx.log[a])
    for k in range(pm + 1):
        if (la - k * (pm - 1)) % (pm + 1) == 0:
            return ctx.from_log(la - k * (pm - 1)), k
    raise FieldError("element is not of the form abar * xi^k (non-square for odd p)")
