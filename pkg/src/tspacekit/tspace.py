"""T-space sums and products: certificates and a bounded-degree span oracle.

A certificate claims ``target = sum_t c_t * prod_k sigma_tk(g_tk)`` where
each g is a catalog generator and each sigma a substitution.  A product of
substitution instances of generators of V_1, ..., V_m lies in (V_1...V_m)^S,
so a certificate whose factor shapes all fit a SpanSpec witnesses
membership of the target in that sum of T-spaces.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .freealg import MultiDegree, ModulusError, Poly, Substitution, Word, linear_combination, word_key
from .linalg import EchelonBasis
from .symmetric import GeneratorId, generator, reversal_substitution


# ----------------------------------------------------------------------
# span specifications

@dataclass(frozen=True)
class SpanSpec:
    """A finite sum of products of generated T-spaces, e.g. H_1 + H_1 S_1^(p)."""

    alternatives: Tuple[Tuple[GeneratorId, ...], ...]

    def __post_init__(self):
        if not self.alternatives or any(not alt for alt in self.alternatives):
            raise ValueError("a SpanSpec needs at least one nonempty alternative")

    @classmethod
    def of(cls, *alts) -> "SpanSpec":
        out = []
        for alt in alts:
            out.append((alt,) if isinstance(alt, GeneratorId) else tuple(alt))
        return cls(tuple(out))

    @classmethod
    def parse(cls, text: str) -> "SpanSpec":
        alts = []
        for chunk in _split_top(text, "+"):
            alts.append(tuple(parse_generator(f) for f in _split_top(chunk, "*")))
        return cls(tuple(alts))

    def __str__(self):
        return " + ".join("*".join(str(g) for g in alt) for alt in self.alternatives)


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    if any(not s for s in parts):
        raise ValueError(f"malformed span expression {text!r}")
    return parts


_GEN_RE = re.compile(r"^\s*(S1|Sn|S|H)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_generator(text: str, p: Optional[int] = None) -> GeneratorId:
    """Parse ``S(d)``, ``S(d,n)``, ``H(n)`` (also ``S1(d)``, ``Sn(d,n)``) or ``P(<poly>)``."""
    t = text.strip()
    if t.startswith("P(") and t.endswith(")"):
        if p is None:
            raise ValueError("P(...) generators need a modulus")
        from .expr import parse_poly

        return GeneratorId.P(parse_poly(t[2:-1], p))
    m = _GEN_RE.match(t)
    if not m:
        raise ValueError(f"unknown generator id {text!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "H":
        if b is not None:
            raise ValueError(f"unknown generator id {text!r}")
        return GeneratorId.H(a)
    if kind == "S1" and b is not None:
        raise ValueError(f"unknown generator id {text!r}")
    if b is None or int(b) == 1:
        return GeneratorId.S1(a)
    return GeneratorId.Sn(a, int(b))


# ----------------------------------------------------------------------
# shapes: which T-space a product of generator instances lands in

def _canon(gid: GeneratorId) -> GeneratorId:
    if gid.kind == "S1":
        return GeneratorId.Sn(gid.d, 1)
    return gid


def merge_shape(shape: Sequence[GeneratorId]) -> Tuple[GeneratorId, ...]:
    """Merge adjacent H(a)H(b) -> H(a+b) and S(d,a)S(d,b) -> S(d,a+b).

    Both merges are equalities of T-spaces ((V_a V_b)^S = V_{a+b}), so the
    merged shape is a canonical name for the product space.
    """
    out: List[GeneratorId] = []
    for g in map(_canon, shape):
        if out:
            last = out[-1]
            if last.kind == g.kind == "H":
                out[-1] = GeneratorId.H(last.n + g.n)
                continue
            if last.kind == g.kind == "Sn" and last.d == g.d:
                out[-1] = GeneratorId.Sn(g.d, last.n + g.n)
                continue
        out.append(g)
    return tuple(out)


def shape_fits(shape: Sequence[GeneratorId], spec: SpanSpec, sp_in_h: Optional[int] = None) -> bool:
    """Does every product with this factor shape lie in ``spec``?

    ``sp_in_h=p`` additionally allows the inclusion S_n^(p) into H_n, which
    is only legitimate once that inclusion has itself been certified.
    """
    targets = {merge_shape(alt) for alt in spec.alternatives}
    canon = [_canon(g) for g in shape]
    swappable = [k for k, g in enumerate(canon) if sp_in_h and g.kind == "Sn" and g.d == sp_in_h]
    for mask in range(1 << len(swappable)):
        trial = list(canon)
        for b, k in enumerate(swappable):
            if mask >> b & 1:
                trial[k] = GeneratorId.H(trial[k].n)
        if merge_shape(trial) in targets:
            return True
    return False


# ----------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class Factor:
    gen: GeneratorId
    sub: Substitution

    def value(self, p: int) -> Poly:
        return _factor_value(self, p)

    def __str__(self):
        return f"{self.gen}[{_render_sub(self.sub)}]"


@lru_cache(maxsize=8192)
def _factor_value(f: "Factor", p: int) -> Poly:
    return f.sub(generator(f.gen, p))


def _render_sub(s: Substitution) -> str:
    return ", ".join(f"x{v}->{f}" for v, f in sorted(s.images.items()))


@dataclass(frozen=True)
class Term:
    coeff: int
    factors: Tuple[Factor, ...]

    def shape(self) -> Tuple[GeneratorId, ...]:
        return tuple(f.gen for f in self.factors)


class _ValueCache:
    def __init__(self, p: int):
        self.p = p
        self.memo: Dict[Factor, Poly] = {}

    def factor(self, f: Factor) -> Poly:
        v = self.memo.get(f)
        if v is None:
            v = f.value(self.p)
            self.memo[f] = v
        return v

    def term(self, t: Term) -> Poly:
        vals = [self.factor(f) for f in t.factors]
        out = vals[0]
        for v in vals[1:]:
            if not out:
                break
            out = out * v
        return out


@dataclass(frozen=True)
class Certificate:
    """A checkable witness: target == sum of coeff * product of generator instances."""

    p: int
    target: Poly
    terms: Tuple[Term, ...]
    label: str = ""

    def __post_init__(self):
        if self.target.p != self.p:
            raise ModulusError(f"target modulus {self.target.p} differs from {self.p}")
        for t in self.terms:
            if not t.factors:
                raise ValueError("certificate term without factors")
            for f in t.factors:
                if f.sub.p != self.p:
                    raise ModulusError(f"substitution modulus {f.sub.p} differs from {self.p}")

    # -- construction helpers ---------------------------------------

    @classmethod
    def single(cls, p: int, gen: GeneratorId, sub: Optional[Substitution] = None,
               coeff: int = 1, label: str = "") -> "Certificate":
        f = Factor(gen, sub or Substitution.identity(p))
        return cls(p, f.value(p).scale(coeff), (Term(coeff % p, (f,)),), label)

    def evaluate(self, cache: Optional[_ValueCache] = None) -> Poly:
        cache = cache or _ValueCache(self.p)
        return linear_combination(((t.coeff, cache.term(t)) for t in self.terms), self.p)

    def with_target(self, target: Poly, label: Optional[str] = None) -> "Certificate":
        return Certificate(self.p, target, self.terms, self.label if label is None else label)

    def relabel(self, label: str) -> "Certificate":
        return Certificate(self.p, self.target, self.terms, label)

    def shapes(self) -> set:
        return {t.shape() for t in self.terms}

    # -- algebra of certificates -------------------------------------

    def scale(self, a: int) -> "Certificate":
        p = self.p
        a %= p
        terms = tuple(Term(t.coeff * a % p, t.factors) for t in self.terms) if a else ()
        return Certificate(p, self.target.scale(a), terms, self.label)

    def __add__(self, other: "Certificate") -> "Certificate":
        if other.p != self.p:
            raise ModulusError(f"modulus mismatch: {self.p} vs {other.p}")
        return Certificate(self.p, self.target + other.target, self.terms + other.terms, self.label)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "Certificate") -> "Certificate":
        return self + (-other)

    def __mul__(self, other: "Certificate") -> "Certificate":
        """Product of witnesses: the target is the product of targets."""
        if other.p != self.p:
            raise ModulusError(f"modulus mismatch: {self.p} vs {other.p}")
        p = self.p
        terms = tuple(
            Term(a.coeff * b.coeff % p, a.factors + b.factors)
            for a in self.terms for b in other.terms if a.coeff * b.coeff % p
        )
        return Certificate(p, self.target * other.target, terms, self.label)

    def substitute(self, s: Substitution) -> "Certificate":
        """Apply an endomorphism to target and every factor."""
        terms = tuple(
            Term(t.coeff, tuple(Factor(f.gen, f.sub.then(s)) for f in t.factors))
            for t in self.terms
        )
        return Certificate(self.p, s(self.target), terms, self.label)

    def reversed(self) -> "Certificate":
        """Image under the word-reversal anti-automorphism."""
        p = self.p
        terms = []
        for t in self.terms:
            fs = []
            for f in reversed(t.factors):
                rsub = f.sub.reversed()
                if f.gen.kind == "P":
                    fs.append(Factor(GeneratorId.P(f.gen.poly.reversed()), rsub))
                else:
                    fs.append(Factor(f.gen, reversal_substitution(f.gen, p).then(rsub)))
            terms.append(Term(t.coeff, tuple(fs)))
        return Certificate(p, self.target.reversed(), tuple(terms), self.label)

    def expand(self, gen: GeneratorId, witness: "Certificate") -> "Certificate":
        """Replace every factor on ``gen`` by the matching instance of ``witness``.

        ``witness`` must certify generator(gen) itself; its substituted copy
        then certifies each instance sigma(gen).
        """
        p = self.p
        terms: List[Term] = []
        for t in self.terms:
            options: List[List[Tuple[int, Tuple[Factor, ...]]]] = []
            for f in t.factors:
                if f.gen == gen:
                    options.append([
                        (w.coeff, tuple(Factor(g.gen, g.sub.then(f.sub)) for g in w.factors))
                        for w in witness.terms
                    ])
                else:
                    options.append([(1, (f,))])
            terms.extend(_distribute(t.coeff, options, p))
        return Certificate(p, self.target, tuple(terms), self.label)

    def plug(self, witnesses: Mapping[Poly, "Certificate"]) -> "Certificate":
        """Replace each P-factor whose value has a witness by that witness' terms."""
        p = self.p
        terms: List[Term] = []
        for t in self.terms:
            options = []
            for f in t.factors:
                w = witnesses.get(f.value(p)) if f.gen.kind == "P" else None
                if w is None:
                    options.append([(1, (f,))])
                else:
                    options.append([(u.coeff, u.factors) for u in w.terms])
            terms.extend(_distribute(t.coeff, options, p))
        return Certificate(p, self.target, tuple(terms), self.label)

    def merged(self) -> "Certificate":
        """Fuse adjacent H/H and S^(d)/S^(d) factors into single generator instances."""
        p = self.p
        return Certificate(p, self.target, tuple(Term(t.coeff, merge_factors(t.factors, p)) for t in self.terms),
                           self.label)

    def pruned(self) -> "Certificate":
        """Combine identical terms and drop terms whose value is zero."""
        p = self.p
        cache = _ValueCache(p)
        acc: Dict[Tuple[Factor, ...], int] = {}
        for t in self.terms:
            acc[t.factors] = (acc.get(t.factors, 0) + t.coeff) % p
        terms = tuple(Term(c, fs) for fs, c in acc.items() if c and cache.term(Term(1, fs)))
        return Certificate(p, self.target, terms, self.label)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "modulus": self.p,
            "target": str(self.target),
            "terms": [
                {
                    "coeff": t.coeff,
                    "factors": [
                        {"gen": str(f.gen), "sub": {str(v): str(g) for v, g in sorted(f.sub.images.items())}}
                        for f in t.factors
                    ],
                }
                for t in self.terms
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: Mapping) -> "Certificate":
        from .expr import parse_poly

        p = int(doc["modulus"])
        terms = []
        for t in doc["terms"]:
            fs = []
            for f in t["factors"]:
                gen = parse_generator(f["gen"], p)
                sub = Substitution(p, {int(v): parse_poly(g, p) for v, g in f["sub"].items()})
                fs.append(Factor(gen, sub))
            terms.append(Term(int(t["coeff"]) % p, tuple(fs)))
        return cls(p, parse_poly(doc["target"], p), tuple(terms), doc.get("label", ""))

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]


def _distribute(coeff, options, p) -> List[Term]:
    out = []
    for choice in cartesian(*options):
        c = coeff
        fs: Tuple[Factor, ...] = ()
        for a, part in choice:
            c = c * a % p
            fs += part
        if c:
            out.append(Term(c, fs))
    return out


def merge_factors(factors: Sequence[Factor], p: int) -> Tuple[Factor, ...]:
    out: List[Factor] = []
    for f in factors:
        if out and _mergeable(out[-1].gen, f.gen):
            out[-1] = _merge_pair(out[-1], f, p)
        else:
            out.append(f)
    return tuple(out)


def _mergeable(a: GeneratorId, b: GeneratorId) -> bool:
    a, b = _canon(a), _canon(b)
    return (a.kind == b.kind == "H") or (a.kind == b.kind == "Sn" and a.d == b.d)


def _merge_pair(f: Factor, g: Factor, p: int) -> Factor:
    a, b = _canon(f.gen), _canon(g.gen)
    na, nb = a.nvars(), b.nvars()
    imgs = {v: f.sub.image(v) for v in range(1, na + 1)}
    imgs.update({na + v: g.sub.image(v) for v in range(1, nb + 1)})
    gen = GeneratorId.H(a.n + b.n) if a.kind == "H" else GeneratorId.Sn(a.d, a.n + b.n)
    return Factor(gen, Substitution(p, imgs))


@dataclass
class CertificateReport:
    ok: bool
    residual: Poly
    shape_errors: List[Tuple[GeneratorId, ...]] = field(default_factory=list)

    @property
    def residual_terms(self) -> int:
        return len(self.residual)

    def __bool__(self):
        return self.ok


def check_certificate(cert: Certificate, spec: Optional[SpanSpec] = None,
                      sp_in_h: Optional[int] = None) -> CertificateReport:
    """Expand every term exactly and compare with the target.

    With ``spec`` given, every term's factor shape must also fit the spec;
    otherwise only the polynomial identity is checked.
    """
    residual = cert.target - cert.evaluate()
    bad = []
    if spec is not None:
        bad = sorted({t.shape() for t in cert.terms if not shape_fits(t.shape(), spec, sp_in_h)}, key=str)
    return CertificateReport(residual.is_zero() and not bad, residual, bad)


# ----------------------------------------------------------------------
# instance enumeration and the span oracle

@dataclass(frozen=True)
class Limits:
    max_instances: int = 200_000
    max_image_degree: Optional[int] = None
    max_image_support: Optional[int] = None
    time_budget: float = 120.0

    def __post_init__(self):
        if self.max_instances < 1 or self.time_budget <= 0:
            raise ValueError("limits must be positive")
        for v in (self.max_image_degree, self.max_image_support):
            if v is not None and v < 1:
                raise ValueError("limits must be positive")

    @classmethod
    def parse(cls, text: str) -> "Limits":
        names = {"max_instances": "max_instances", "instances": "max_instances",
                 "degree": "max_image_degree", "max_image_degree": "max_image_degree",
                 "support": "max_image_support", "max_image_support": "max_image_support",
                 "time": "time_budget", "time_budget": "time_budget"}
        kw = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            k, _, v = item.partition("=")
            if k.strip() not in names:
                raise ValueError(f"unknown limit {k!r}")
            key = names[k.strip()]
            kw[key] = float(v) if key == "time_budget" else int(v)
        return cls(**kw)


class LimitExceeded(Exception):
    pass


@dataclass
class Enumeration:
    instances: List[Tuple[Tuple[Factor, ...], Poly]]
    truncated: bool = False
    diagnostic: str = ""


def _slot_profile(gen: GeneratorId, p: int) -> List[int]:
    """Multiplicity of each generator variable (every generator is multihomogeneous)."""
    if gen.kind in ("S1", "Sn"):
        return [1] * gen.nvars()
    if gen.kind == "H":
        return [p] * gen.n
    raise ValueError("instance enumeration supports only S and H generators")


def _sub_degrees(budget: Dict[int, int], mult: int, cap: Optional[int]):
    """Nonzero E with mult * E <= budget, in deterministic order."""
    vs = sorted(budget)
    ranges = [range(budget[v] // mult + 1) for v in vs]
    for combo in cartesian(*ranges):
        tot = sum(combo)
        if tot == 0 or (cap is not None and tot > cap):
            continue
        yield {v: c for v, c in zip(vs, combo) if c}


def _words_of(deg: Dict[int, int]):
    """All distinct words with the given multidegree, in lexicographic order."""
    letters = sorted(deg)
    n = sum(deg.values())

    def rec(remaining, prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in letters:
            if remaining[v]:
                remaining[v] -= 1
                prefix.append(v)
                yield from rec(remaining, prefix)
                prefix.pop()
                remaining[v] += 1

    yield from rec(dict(deg), [])


def _factor_instances(gen: GeneratorId, deg: Dict[int, int], p: int, limits: Limits,
                      deadline: float):
    """Single-word substitutions sigma with sigma(gen) of multidegree ``deg``."""
    profile = _slot_profile(gen, p)
    k = len(profile)

    def rec(slot, budget, chosen):
        if time.monotonic() > deadline:
            raise LimitExceeded("time budget exhausted")
        if slot == k:
            if not budget:
                yield tuple(chosen)
            return
        mult = profile[slot]
        if slot == k - 1:
            if any(c % mult for c in budget.values()) or not budget:
                return
            options = [{v: c // mult for v, c in budget.items()}]
            cap = limits.max_image_degree
            if cap is not None and sum(options[0].values()) > cap:
                return
        else:
            options = _sub_degrees(budget, mult, limits.max_image_degree)
        for e in options:
            if limits.max_image_support is not None and len(e) > limits.max_image_support:
                continue
            rest = dict(budget)
            for v, c in e.items():
                rest[v] -= c * mult
                if not rest[v]:
                    del rest[v]
            for w in _words_of(e):
                chosen.append(w)
                yield from rec(slot + 1, rest, chosen)
                chosen.pop()

    for words in rec(0, dict(deg), []):
        sub = Substitution(p, {i + 1: Poly.word(w, p) for i, w in enumerate(words)})
        yield Factor(gen, sub)


def _compositions(deg: Dict[int, int], parts: int):
    """Ordered splits of ``deg`` into ``parts`` nonzero multidegrees."""
    if parts == 1:
        if deg:
            yield [dict(deg)]
        return
    for first in _sub_degrees(deg, 1, None):
        rest = {v: c - first.get(v, 0) for v, c in deg.items() if c - first.get(v, 0)}
        for tail in _compositions(rest, parts - 1):
            yield [first] + tail


def enumerate_instances(spec: SpanSpec, target_degree: MultiDegree, p: int,
                        limits: Limits = Limits()) -> Enumeration:
    """All products of single-word generator instances with the given multidegree.

    Instances are deduplicated by polynomial value; zero products are
    dropped.  Order is deterministic.  Exceeding a limit truncates the list
    and records a diagnostic instead of raising.
    """
    deg = target_degree.as_dict()
    deadline = time.monotonic() + limits.time_budget
    seen: Dict[Poly, int] = {}
    out: List[Tuple[Tuple[Factor, ...], Poly]] = []
    try:
        for alt in spec.alternatives:
            for split in _compositions(deg, len(alt)):
                per_factor = []
                for gen, part in zip(alt, split):
                    vals = {}
                    for f in _factor_instances(gen, part, p, limits, deadline):
                        v = f.value(p)
                        if v and v not in vals:
                            vals[v] = f
                    per_factor.append(list(vals.items()))
                for combo in cartesian(*per_factor):
                    if time.monotonic() > deadline:
                        raise LimitExceeded("time budget exhausted")
                    value = combo[0][0]
                    for v, _ in combo[1:]:
                        value = value * v
                    if not value or value in seen:
                        continue
                    seen[value] = len(out)
                    out.append((tuple(f for _, f in combo), value))
                    if len(out) >= limits.max_instances:
                        raise LimitExceeded(f"more than {limits.max_instances} instances")
    except LimitExceeded as exc:
        return Enumeration(out, True, str(exc))
    return Enumeration(out)


@dataclass
class Membership:
    """Answer of the span oracle: a re-checkable certificate, or unknown."""

    found: bool
    certificate: Optional[Certificate] = None
    diagnostic: str = ""
    instances: int = 0
    rank: int = 0

    @property
    def answer(self) -> str:
        return "yes" if self.found else "unknown"


def multihomogeneous_components(f: Poly) -> Dict[MultiDegree, Poly]:
    groups: Dict[MultiDegree, Dict[Word, int]] = {}
    for w, c in f.terms.items():
        groups.setdefault(MultiDegree.of_word(w), {})[w] = c
    return {d: Poly(f.p, t) for d, t in sorted(groups.items(), key=lambda kv: kv[0].counts)}


def span_membership(target: Poly, spec: SpanSpec, limits: Limits = Limits()) -> Membership:
    """Is ``target`` a combination of word-image instances of ``spec``?

    Sound: a positive answer carries a certificate that has been re-checked.
    Complete at each multidegree for multilinear generators.  A negative
    answer is reported as "unknown", never as non-membership.
    """
    if target.is_zero():
        raise ValueError("target must be nonzero")
    p = target.p
    terms: List[Term] = []
    total_inst = total_rank = 0
    for deg, part in multihomogeneous_components(target).items():
        enum = enumerate_instances(spec, deg, p, limits)
        total_inst += len(enum.instances)
        basis = EchelonBasis(p, word_key)
        for i, (_, value) in enumerate(enum.instances):
            basis.add(dict(value.terms), i)
        total_rank += basis.rank
        combo = basis.express(dict(part.terms))
        if combo is None:
            diag = f"component of multidegree {deg} lies outside the enumerated span"
            if enum.truncated:
                diag += f" (enumeration truncated: {enum.diagnostic})"
            return Membership(False, None, diag, total_inst, total_rank)
        for i in sorted(combo):
            factors, _ = enum.instances[i]
            terms.append(Term(combo[i], factors))
    cert = Certificate(p, target, tuple(terms), label=f"span {spec}")
    report = check_certificate(cert, spec)
    if not report.ok:  # pragma: no cover - would indicate an elimination bug
        raise AssertionError("span oracle produced a certificate that does not verify")
    return Membership(True, cert, "", total_inst, total_rank)
