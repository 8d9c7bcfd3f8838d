"""Symmetric polynomials S^(d) and the catalog of T-space generators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Optional, Sequence

from .freealg import GF, ModulusError, Poly, Substitution

MAX_SYM_ARITY = 8


def sym(args: Sequence[Poly]) -> Poly:
    """Sum over all orderings of the product of ``args``.

    Multilinear in every slot.  Evaluated by recursion on the set of
    unused slots, S(A) = sum_i a_i S(A - i), which visits 2^d subsets
    instead of d! orderings.
    """
    d = len(args)
    if d < 1:
        raise ValueError("sym needs at least one argument")
    if d > MAX_SYM_ARITY:
        raise ValueError(f"sym arity {d} exceeds the cap {MAX_SYM_ARITY}")
    p = args[0].p
    for a in args:
        if a.p != p:
            raise ModulusError(f"modulus mismatch: {p} vs {a.p}")

    memo: Dict[int, Poly] = {}

    def rec(mask: int) -> Poly:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        parts = []
        for i in range(d):
            bit = 1 << i
            if mask & bit:
                rest = mask ^ bit
                parts.append(args[i] if not rest else args[i] * rec(rest))
        out = parts[0]
        for f in parts[1:]:
            out = out + f
        memo[mask] = out
        return out

    return rec((1 << d) - 1)


def sym_vars(d: int, p: int, start: int = 1) -> Poly:
    """S^(d)(x_start, ..., x_{start+d-1})."""
    return sym([Poly.var(start + k, p) for k in range(d)])


def sym_two_block(p: int, i: int, x: int = 1, y: int = 2) -> Poly:
    """S^(p) with i copies of x and p - i copies of y."""
    if not 1 <= i <= p - 1:
        raise ValueError(f"block size {i} outside 1..{p - 1}")
    X, Y = Poly.var(x, p), Poly.var(y, p)
    return sym([X] * i + [Y] * (p - i))


def block_word_sum(p: int, i: int, x: int = 1, y: int = 2) -> Poly:
    """Sum of the words of length p with x in exactly i positions."""
    terms = {}
    for J in combinations(range(p), i):
        w = [y] * p
        for k in J:
            w[k] = x
        terms[tuple(w)] = 1
    return Poly(p, terms)


@dataclass(frozen=True)
class GeneratorId:
    """Names one T-space generator.

    ``S1`` is S^(d)(x1..xd); ``Sn`` is n copies of S^(d) on consecutive
    variable blocks; ``H`` is x1^p x2^p ... xn^p; ``P`` is an arbitrary
    fixed polynomial, used for spaces such as (S_1 u)^S.
    """

    kind: str
    d: int = 0
    n: int = 1
    poly: Optional[Poly] = None

    def __post_init__(self):
        if self.kind == "S1":
            if self.d < 1 or self.n != 1:
                raise ValueError(f"bad S1 parameters d={self.d}")
        elif self.kind == "Sn":
            if self.d < 1 or self.n < 1:
                raise ValueError(f"bad Sn parameters d={self.d}, n={self.n}")
        elif self.kind == "H":
            if self.n < 1:
                raise ValueError(f"bad H parameter n={self.n}")
        elif self.kind == "P":
            if self.poly is None or self.poly.is_zero():
                raise ValueError("P generator needs a nonzero polynomial")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @classmethod
    def S1(cls, d: int) -> "GeneratorId":
        return cls("S1", d=d)

    @classmethod
    def Sn(cls, d: int, n: int) -> "GeneratorId":
        return cls("Sn", d=d, n=n)

    @classmethod
    def H(cls, n: int) -> "GeneratorId":
        return cls("H", n=n)

    @classmethod
    def P(cls, poly: Poly) -> "GeneratorId":
        return cls("P", poly=poly)

    def nvars(self) -> int:
        if self.kind == "S1":
            return self.d
        if self.kind == "Sn":
            return self.d * self.n
        if self.kind == "H":
            return self.n
        return self.poly.max_var()

    def __str__(self):
        if self.kind == "S1":
            return f"S({self.d})"
        if self.kind == "Sn":
            return f"S({self.d},{self.n})"
        if self.kind == "H":
            return f"H({self.n})"
        return f"P({self.poly})"


_cache: Dict[tuple, Poly] = {}


def generator(gid: GeneratorId, p: int) -> Poly:
    """The defining polynomial of ``gid`` over F_p."""
    GF(p)  # validates p
    if gid.kind == "P":
        if gid.poly.p != p:
            raise ModulusError(f"modulus mismatch: {p} vs {gid.poly.p}")
        return gid.poly
    key = (gid.kind, gid.d, gid.n, p)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    if gid.kind == "S1":
        out = sym_vars(gid.d, p)
    elif gid.kind == "Sn":
        base = sym_vars(gid.d, p)
        out = base
        for m in range(1, gid.n):
            out = out * Substitution.shift(p, m * gid.d, gid.d)(base)
    else:
        out = Poly.word([v for v in range(1, gid.n + 1) for _ in range(p)], p)
    _cache[key] = out
    return out


def reversal_substitution(gid: GeneratorId, p: int) -> Substitution:
    """A variable permutation pi with reverse(g) == pi(g), for g = generator(gid)."""
    if gid.kind == "S1":
        return Substitution.identity(p)
    if gid.kind == "H":
        n = gid.n
        return Substitution(p, {v: Poly.var(n + 1 - v, p) for v in range(1, n + 1)})
    if gid.kind == "Sn":
        d, n = gid.d, gid.n
        imgs = {}
        for b in range(n):
            for k in range(1, d + 1):
                imgs[b * d + k] = Poly.var((n - 1 - b) * d + k, p)
        return Substitution(p, imgs)
    raise ValueError("P generators reverse by reversing their polynomial")
