"""Exact arithmetic in the free nonunital associative algebra over F_p.

Elements are finite linear combinations of nonempty words in the variables
x1, x2, ...; a word is stored as a tuple of positive variable indices.  The
empty word is never allowed, so there are no constants.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Tuple

Word = Tuple[int, ...]


class ModulusError(ValueError):
    """Raised when values over different prime fields are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class GF:
    """Scalar helpers for the prime field F_p.

    Scalars themselves are plain ints in ``range(p)``; this class only
    carries the modulus and the cached inverse tables.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return _inverse(a, self.p)

    def factorial(self, n: int) -> int:
        return _factorial(n, self.p)

    def inv_factorial(self, n: int) -> int:
        return _inverse(_factorial(n, self.p), self.p)


@lru_cache(maxsize=None)
def _inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@lru_cache(maxsize=None)
def _factorial(n: int, p: int) -> int:
    r = 1
    for k in range(2, n + 1):
        r = r * k % p
    return r


def word_key(w: Word):
    """Degree-lexicographic sort key on words."""
    return (len(w), w)


def render_word(w: Word) -> str:
    return ".".join(f"x{i}" for i in w)


@dataclass(frozen=True)
class MultiDegree:
    """Occurrence count per variable, stored as sorted (var, count) pairs."""

    counts: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for v, c in self.counts:
            if v < 1 or c < 1:
                raise ValueError(f"bad multidegree entry x{v}^{c}")

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "MultiDegree":
        return cls(tuple(sorted((v, c) for v, c in mapping.items() if c)))

    @classmethod
    def of_word(cls, w: Iterable[int]) -> "MultiDegree":
        d: Dict[int, int] = defaultdict(int)
        for v in w:
            d[v] += 1
        return cls.of(d)

    @classmethod
    def multilinear(cls, n: int) -> "MultiDegree":
        return cls(tuple((v, 1) for v in range(1, n + 1)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.counts)

    def __add__(self, other: "MultiDegree") -> "MultiDegree":
        d = self.as_dict()
        for v, c in other.counts:
            d[v] = d.get(v, 0) + c
        return MultiDegree.of(d)

    def __str__(self):
        return "{" + ", ".join(f"x{v}:{c}" for v, c in self.counts) + "}"


class Poly:
    """An element of k0<X> over F_p: a map from nonempty words to nonzero residues.

    Instances are immutable.  Arithmetic operators are defined between
    polynomials over the same modulus, and with plain ints as scalars.
    """

    __slots__ = ("p", "_terms", "_hash")

    def __init__(self, p: int, terms: Mapping[Word, int] | None = None):
        self.p = p
        clean: Dict[Word, int] = {}
        if terms:
            for w, c in terms.items():
                c %= p
                if c:
                    w = tuple(w)
                    if not w:
                        raise ValueError("the empty word is not an element of a nonunital algebra")
                    clean[w] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, p: int, terms: Dict[Word, int]) -> "Poly":
        # terms already reduced, nonzero and keyed by nonempty tuples
        obj = cls.__new__(cls)
        obj.p = p
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls._raw(p, {})

    @classmethod
    def var(cls, i: int, p: int) -> "Poly":
        if i < 1:
            raise ValueError("variable indices start at 1")
        return cls._raw(p, {(i,): 1})

    @classmethod
    def word(cls, w: Iterable[int], p: int, coeff: int = 1) -> "Poly":
        return cls(p, {tuple(w): coeff})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> Mapping[Word, int]:
        return self._terms

    def items(self) -> Iterator[Tuple[Word, int]]:
        """Terms in canonical (degree-lexicographic) order."""
        for w in sorted(self._terms, key=word_key):
            yield w, self._terms[w]

    def words(self):
        return sorted(self._terms, key=word_key)

    def coeff(self, w: Iterable[int]) -> int:
        return self._terms.get(tuple(w), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> frozenset:
        out = set()
        for w in self._terms:
            out.update(w)
        return frozenset(out)

    def max_var(self) -> int:
        return max((max(w) for w in self._terms), default=0)

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def leading_word(self) -> Word:
        return min(self._terms, key=word_key)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.p}, {str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            parts.append(render_word(w) if c == 1 else f"{c}*{render_word(w)}")
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Poly"):
        if other.p != self.p:
            raise ModulusError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        p = self.p
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = (out.get(w, 0) + c) % p
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return Poly._raw(p, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw(p, {w: p - c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def scale(self, a: int) -> "Poly":
        p = self.p
        a %= p
        if a == 0:
            return Poly.zero(p)
        if a == 1:
            return self
        return Poly._raw(p, {w: c * a % p for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        p = self.p
        acc: Dict[Word, int] = defaultdict(int)
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                acc[w1 + w2] += c1 * c2
        return Poly._raw(p, {w: c % p for w, c in acc.items() if c % p})

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError("only positive integer powers exist in a nonunital algebra")
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def reversed(self) -> "Poly":
        """Image under the anti-automorphism reversing every word."""
        return Poly._raw(self.p, {w[::-1]: c for w, c in self._terms.items()})

    def substitute(self, s: "Substitution") -> "Poly":
        return s(self)


def mul(f: Poly, g: Poly) -> Poly:
    return f * g


def commutator(u: Poly, v: Poly) -> Poly:
    """[u, v] = uv - vu."""
    return u * v - v * u


def sum_polys(polys: Iterable[Poly], p: int) -> Poly:
    acc: Dict[Word, int] = defaultdict(int)
    for f in polys:
        if f.p != p:
            raise ModulusError(f"modulus mismatch: {p} vs {f.p}")
        for w, c in f.terms.items():
            acc[w] += c
    return Poly._raw(p, {w: c % p for w, c in acc.items() if c % p})


def linear_combination(pairs: Iterable[Tuple[int, Poly]], p: int) -> Poly:
    acc: Dict[Word, int] = defaultdict(int)
    for a, f in pairs:
        if f.p != p:
            raise ModulusError(f"modulus mismatch: {p} vs {f.p}")
        for w, c in f.terms.items():
            acc[w] += a * c
    return Poly._raw(p, {w: c % p for w, c in acc.items() if c % p})


class Substitution:
    """An algebra endomorphism given on finitely many variables.

    Unmapped variables are fixed.  Mapping a variable to the zero
    polynomial is allowed and kills every word containing it.
    """

    __slots__ = ("p", "_images", "_hash")

    def __init__(self, p: int, images: Mapping[int, Poly] | None = None):
        self.p = p
        imgs: Dict[int, Poly] = {}
        for v, f in (images or {}).items():
            if v < 1:
                raise ValueError("variable indices start at 1")
            if f.p != p:
                raise ModulusError(f"image of x{v} has modulus {f.p}, expected {p}")
            # identity entries are dropped so equal maps compare equal
            if f.terms != {(v,): 1}:
                imgs[v] = f
        self._images = imgs
        self._hash = None

    @classmethod
    def identity(cls, p: int) -> "Substitution":
        return cls(p)

    @classmethod
    def of(cls, p: int, images: Iterable[Poly], start: int = 1) -> "Substitution":
        """x_start, x_start+1, ... map to ``images`` in order."""
        return cls(p, {start + k: f for k, f in enumerate(images)})

    @classmethod
    def shift(cls, p: int, offset: int, nvars: int) -> "Substitution":
        return cls(p, {v: Poly.var(v + offset, p) for v in range(1, nvars + 1)})

    @property
    def images(self) -> Mapping[int, Poly]:
        return self._images

    def image(self, v: int) -> Poly:
        f = self._images.get(v)
        return Poly.var(v, self.p) if f is None else f

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.p == other.p and self._images == other._images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self._images.items())))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"x{v} -> {f}" for v, f in sorted(self._images.items()))
        return f"Substitution({self.p}, {{{inner}}})"

    def __call__(self, f: Poly) -> Poly:
        if f.p != self.p:
            raise ModulusError(f"modulus mismatch: {self.p} vs {f.p}")
        if not self._images or not (f.variables() & self._images.keys()):
            return f
        p = self.p
        acc: Dict[Word, int] = defaultdict(int)
        # words sharing a prefix reuse its image
        cache: Dict[Word, Dict[Word, int]] = {}
        for w, c in f.terms.items():
            img = self._word_image(w, cache)
            for u, a in img.items():
                acc[u] += c * a
        return Poly._raw(p, {w: c % p for w, c in acc.items() if c % p})

    def _word_image(self, w: Word, cache) -> Dict[Word, int]:
        hit = cache.get(w)
        if hit is not None:
            return hit
        p = self.p
        last = self.image(w[-1]).terms
        if len(w) == 1:
            out = dict(last)
        else:
            head = self._word_image(w[:-1], cache)
            acc: Dict[Word, int] = defaultdict(int)
            for u1, c1 in head.items():
                for u2, c2 in last.items():
                    acc[u1 + u2] += c1 * c2
            out = {u: c % p for u, c in acc.items() if c % p}
        cache[w] = out
        return out

    def then(self, outer: "Substitution") -> "Substitution":
        """The composite ``outer`` after ``self``: x -> outer(self(x))."""
        if outer.p != self.p:
            raise ModulusError(f"modulus mismatch: {self.p} vs {outer.p}")
        imgs = {v: outer(f) for v, f in self._images.items()}
        for v, f in outer._images.items():
            if v not in self._images:
                imgs[v] = f
        return Substitution(self.p, imgs)

    def reversed(self) -> "Substitution":
        return Substitution(self.p, {v: f.reversed() for v, f in self._images.items()})


def substitute(s: Substitution, f: Poly) -> Poly:
    return s(f)


def eval_at_zero(f: Poly, v: int) -> Poly:
    return Substitution(f.p, {v: Poly.zero(f.p)})(f)


def essential_components(f: Poly) -> Dict[frozenset, Poly]:
    """Group the terms of f by the exact set of variables in each word."""
    groups: Dict[frozenset, Dict[Word, int]] = defaultdict(dict)
    for w, c in f.terms.items():
        groups[frozenset(w)][w] = c
    return {k: Poly._raw(f.p, t) for k, t in groups.items()}


def multilinear_part(f: Poly, variables: Iterable[int]) -> Poly:
    """Terms of f using each of ``variables`` exactly once and nothing else."""
    target = sorted(variables)
    n = len(target)
    return Poly._raw(
        f.p, {w: c for w, c in f.terms.items() if len(w) == n and sorted(w) == target}
    )
