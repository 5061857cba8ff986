"""Slow reference implementations built from first principles.

Polynomial arithmetic over F_p on coefficient lists, with the same integer
encoding as the library (sum c_i p^i), so results compare directly.
"""
from __future__ import annotations

import cmath
import math


class PolyField:
    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.modulus = list(modulus)
        self.n = len(modulus) - 1
        self.q = p**self.n

    def decode(self, v: int) -> list[int]:
        out = []
        for _ in range(self.n):
            v, c = divmod(v, self.p)
            out.append(c)
        return out

    def encode(self, cs: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(cs))

    def add(self, x: int, y: int) -> int:
        return self.encode([(a + b) % self.p for a, b in zip(self.decode(x), self.decode(y))])

    def mul(self, x: int, y: int) -> int:
        a, b = self.decode(x), self.decode(y)
        prod = [0] * (2 * self.n - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % self.p
        for k in range(len(prod) - 1, self.n - 1, -1):
            c = prod[k]
            if c:
                for j, mj in enumerate(self.modulus):
                    prod[k - self.n + j] = (prod[k - self.n + j] - c * mj) % self.p
        return self.encode(prod[: self.n])

    def pow(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def trace(self, x: int, frm: int | None = None, to: int = 1) -> int:
        """Tr_to^frm(x) = sum_j x^(p^(to j)); returns an element encoding."""
        frm = self.n if frm is None else frm
        acc, y = 0, x
        for _ in range(frm // to):
            acc = self.add(acc, y)
            y = self.pow(y, self.p**to)
        return acc

    def abs_trace(self, x: int, frm: int | None = None) -> int:
        t = self.trace(x, frm, 1)
        assert t < self.p, "absolute trace must land in the prime field"
        return t

    def subfield(self, k: int) -> list[int]:
        return [x for x in range(self.q) if self.pow(x, self.p**k) == x]


def omega(p: int, k: int) -> complex:
    return cmath.exp(2j * math.pi * (k % p) / p)


def kloosterman(F: PolyField, a: int, k: int) -> complex:
    total = 0j
    for x in F.subfield(k):
        inv = F.pow(x, F.p**k - 2)
        total += omega(F.p, F.abs_trace(F.add(F.mul(a, x), inv), k))
    return total


def walsh(F: PolyField, table: list[int], lam: int) -> complex:
    total = 0j
    for x in range(F.q):
        total += omega(F.p, table[x] - F.abs_trace(F.mul(lam, x)))
    return total
