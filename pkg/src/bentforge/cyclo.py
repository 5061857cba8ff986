"""Exact arithmetic in Z[w], w = exp(2*pi*i/p).

Values are stored in the basis 1, w, ..., w^(p-2); the relation
1 + w + ... + w^(p-1) = 0 makes this representation unique, so equality of
character sums is decided coefficient-wise.  Coefficients are Python ints.
"""
from __future__ import annotations

import cmath
from typing import Iterable, Sequence

import numpy as np


class CycInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) == p:
            coeffs = _reduce(coeffs)
        elif len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} (or {p}) coefficients for p={p}, got {len(coeffs)}")
        self.p = p
        self.coeffs = coeffs

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, p: int, c: int) -> "CycInt":
        return cls(p, (int(c),) + (0,) * (p - 2))

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls.const(p, 0)

    @classmethod
    def from_counts(cls, p: int, counts: Iterable[int]) -> "CycInt":
        """sum_k counts[k] * w^k, for a length-p histogram of exponents."""
        counts = [int(c) for c in counts]
        if len(counts) != p:
            raise ValueError(f"need {p} counts, got {len(counts)}")
        return cls(p, _reduce(counts))

    @classmethod
    def from_exponents(cls, p: int, exps) -> "CycInt":
        """sum_x w^exps[x] for an iterable/array of integer exponents."""
        arr = np.asarray(exps, dtype=np.int64) % p
        return cls.from_counts(p, np.bincount(arr.ravel(), minlength=p))

    # helpers ----------------------------------------------------------------
    def _lift(self) -> list[int]:
        return list(self.coeffs) + [0]

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"mismatched p: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.const(self.p, int(other))
        return NotImplemented

    # ring operations -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        a, b = self._lift(), other._lift()
        prod = [0] * p
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[(i + j) % p] += ai * bj
        return CycInt(p, _reduce(prod))

    __rmul__ = __mul__

    def scale(self, c: int) -> "CycInt":
        return CycInt(self.p, [c * x for x in self.coeffs])

    def conj(self) -> "CycInt":
        """Complex conjugation, w^j -> w^(p-j)."""
        p, lifted = self.p, self._lift()
        return CycInt(p, _reduce([lifted[(-k) % p] for k in range(p)]))

    def norm_sq(self) -> "CycInt":
        return self * self.conj()

    # queries ------------------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def as_scaled_root(self, c: int) -> int | None:
        """k such that self == c * w^k, else None."""
        if c <= 0:
            raise ValueError("scale must be positive")
        p, cs = self.p, self.coeffs
        if all(x == -c for x in cs):
            return p - 1
        nz = [i for i, x in enumerate(cs) if x]
        if len(nz) == 1 and cs[nz[0]] == c:
            return nz[0]
        return None

    def to_complex(self) -> complex:
        p = self.p
        if p == 2:
            return complex(self.coeffs[0], 0.0)
        return sum(c * cmath.exp(2j * cmath.pi * k / p) for k, c in enumerate(self.coeffs) if c) + 0j

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "CycInt":
        return cls(int(obj["p"]), [int(c) for c in obj["coeffs"]])

    def __repr__(self):
        return f"CycInt(p={self.p}, {list(self.coeffs)})"


def _reduce(v: Sequence[int]) -> tuple[int, ...]:
    # w^(p-1) = -(1 + w + ... + w^(p-2))
    top = v[-1]
    return tuple(int(x) - top for x in v[:-1])


def root_power(p: int, k: int) -> CycInt:
    counts = [0] * p
    counts[k % p] = 1
    return CycInt.from_counts(p, counts)


def counts_to_coeffs(counts: np.ndarray) -> np.ndarray:
    """Vectorised canonical reduction of histograms of shape (..., p)."""
    return counts[..., :-1] - counts[..., -1:]


def counts_norm_sq(counts: np.ndarray) -> np.ndarray:
    """z * conj(z) as histograms, for z given by exponent histograms (..., p).

    Histogram entries must be bounded by 2^20 so products fit in int64.
    """
    p = counts.shape[-1]
    out = np.empty_like(counts)
    for k in range(p):
        out[..., k] = np.sum(counts * np.roll(counts, k, axis=-1), axis=-1)
    return out
