"""Certificate builders for the T-space inclusions about S^(d) and H_n.

Every builder returns a :class:`Certificate`; none of them is trusted.
Callers verify with :func:`check_certificate`, which expands all terms.
Variables: the S^(d) block of a builder is x1..xd unless arguments are
passed explicitly.
"""

from __future__ import annotations

from itertools import combinations
from typing import List, Mapping, Optional, Sequence, Tuple

from .freealg import GF, Poly, Substitution, commutator
from .symmetric import GeneratorId, generator, sym
from .tspace import Certificate, Factor, SpanSpec, Term


class IdentityError(AssertionError):
    """An identity that a builder relies on failed to hold exactly."""


def _vars(p: int, n: int, start: int = 1) -> List[Poly]:
    return [Poly.var(start + k, p) for k in range(n)]


def _s_instance(p: int, slots: Sequence[Poly], coeff: int = 1) -> Certificate:
    d = len(slots)
    return Certificate.single(p, GeneratorId.S1(d), Substitution.of(p, slots), coeff)


def _h1(p: int, base: Poly, coeff: int = 1) -> Certificate:
    """base^p as an instance of x1^p."""
    return Certificate.single(p, GeneratorId.H(1), Substitution(p, {1: base}), coeff)


def _zero_cert(p: int) -> Certificate:
    return Certificate(p, Poly.zero(p), ())


def _sum(certs, p: int) -> Certificate:
    out = _zero_cert(p)
    for c in certs:
        out = out + c
    return out


def _require_fresh(poly: Poly, taken, what: str):
    clash = poly.variables() & set(taken)
    if clash:
        names = ", ".join(f"x{v}" for v in sorted(clash))
        raise ValueError(f"{what} collides with reserved variables {names}")


# ----------------------------------------------------------------------
# recursion identities for S^(d)

def sym_recursion_sides(d: int, variant: int, p: int) -> Tuple[Poly, Poly]:
    """Both sides of one of the three expansions of S^(d+1) through S^(d).

    1: sum_i S^(d)(x1..^xi..x_{d+1}) x_i
    2: S^(d)(x1..xd) x_{d+1} + sum_i S^(d)(x1,..,x_{d+1} x_i,..,xd)
    3: x_{d+1} S^(d)(x1..xd) + sum_i S^(d)(x1,..,x_i x_{d+1},..,xd)
    """
    if variant not in (1, 2, 3):
        raise ValueError("variant must be 1, 2 or 3")
    xs = _vars(p, d + 1)
    lhs = sym(xs)
    if variant == 1:
        rhs = sum((sym(xs[:i] + xs[i + 1:]) * xs[i] for i in range(d + 1)), Poly.zero(p))
        return lhs, rhs
    last = xs[d]
    head = sym(xs[:d])
    rhs = head * last if variant == 2 else last * head
    for i in range(d):
        slots = list(xs[:d])
        slots[i] = last * xs[i] if variant == 2 else xs[i] * last
        rhs = rhs + sym(slots)
    return lhs, rhs


def cert_mod_s1(d: int, p: int, side: str = "right") -> Certificate:
    """S^(d+1) - S^(d)(x1..xd) x_{d+1} lies in S_1^(d) (``side='left'``: x_{d+1} S^(d))."""
    xs = _vars(p, d + 1)
    head, last = sym(xs[:d]), xs[d]
    target = sym(xs) - (head * last if side == "right" else last * head)
    terms = []
    for i in range(d):
        slots = list(xs[:d])
        slots[i] = last * xs[i] if side == "right" else xs[i] * last
        terms.append(_s_instance(p, slots))
    return _sum(terms, p).with_target(target, f"mod-S1 d={d} {side}")


# ----------------------------------------------------------------------
# (S_1 u v)^S inside S_1 + (S_1 u)^S + (S_1 v)^S

def _corrections(p: int, c: Sequence[Poly]) -> List[Certificate]:
    """Instances S^(d)(c1,..,c_{d+1} c_j,..,cd), j = 1..d, for c of length d+1."""
    d = len(c) - 1
    out = []
    for j in range(d):
        slots = list(c[:d])
        slots[j] = c[d] * c[j]
        out.append(_s_instance(p, slots))
    return out


def uv_spec(d: int, u: Poly, v: Poly, side: str = "right") -> SpanSpec:
    S = GeneratorId.S1(d)
    U, V = GeneratorId.P(u), GeneratorId.P(v)
    if side == "right":
        return SpanSpec.of([S], [S, U], [S, V])
    return SpanSpec.of([S], [U, S], [V, S])


def cert_uv(d: int, u: Poly, v: Poly, p: int, args: Optional[Sequence[Poly]] = None,
            side: str = "right") -> Certificate:
    """Witness that S^(d)(args) u v is in S_1 + (S_1 u)^S + (S_1 v)^S.

    ``side='left'`` gives u v S^(d)(args) in S_1 + (u S_1)^S + (v S_1)^S.
    The default slot arguments are x1..xd, which u and v must avoid.
    """
    if args is None:
        for poly, name in ((u, "u"), (v, "v")):
            _require_fresh(poly, range(1, d + 1), name)
        args = _vars(p, d)
    args = list(args)
    if len(args) != d:
        raise ValueError(f"expected {d} slot arguments, got {len(args)}")
    if side == "left":
        mirror = cert_uv(d, v.reversed(), u.reversed(), p, [a.reversed() for a in args], "right")
        return mirror.reversed().relabel(f"uv d={d} left")
    if side != "right":
        raise ValueError("side must be 'right' or 'left'")

    U = Certificate.single(p, GeneratorId.P(u))
    V = Certificate.single(p, GeneratorId.P(v))
    b = [u] + args  # b_1 = u, b_2.. = slots; b[d] is the last slot
    pieces = []
    # sum_i S(b_1..^b_i..b_{d+1}) b_i v == sum_i S(b_1,..,b_{d+1} b_i,..,b_d) v
    for corr in _corrections(p, b):
        pieces.append(corr * V)
    # peel off i = 2..d, leaving the i = 1 summand, which is the target
    for i in range(1, d):
        c = b[:i] + b[i + 1:] + [b[i] * v]
        e = c[1:] + [c[0]]
        pieces.append(-(_s_instance(p, c[1:]) * U))
        pieces.extend(-x for x in _corrections(p, e))
        pieces.extend(_corrections(p, c))
    target = sym(args) * u * v
    return _sum(pieces, p).with_target(target, f"uv d={d} right")


# ----------------------------------------------------------------------
# S_1^(p) inside H_1 and commutators with x^p

def cert_sp_in_h1(p: int) -> Certificate:
    """S^(p) = sum over nonempty A of (-1)^(p-|A|) (sum_{i in A} x_i)^p."""
    GF(p)
    xs = _vars(p, p)
    terms = []
    for k in range(1, p + 1):
        sign = 1 if (p - k) % 2 == 0 else -1
        for A in combinations(range(p), k):
            base = xs[A[0]]
            for i in A[1:]:
                base = base + xs[i]
            terms.append(_h1(p, base, sign))
    return _sum(terms, p).with_target(sym(xs), f"S^({p}) in H_1")


def comm_xp_sides(p: int, v: Poly, x: int = 1) -> Tuple[Poly, Poly, Poly]:
    """[x^p, v], its telescoped form, and S^(p)(x,..,x,[x,v]) / (p-1)!."""
    X = Poly.var(x, p)
    lhs = commutator(X ** p, v)
    cv = commutator(X, v)
    tele = Poly.zero(p)
    for i in range(p):
        term = cv
        if i:
            term = X ** i * term
        if p - 1 - i:
            term = term * X ** (p - 1 - i)
        tele = tele + term
    sform = sym([X] * (p - 1) + [cv]).scale(GF(p).inv_factorial(p - 1))
    return lhs, tele, sform


def cert_comm_xp(p: int, v: Poly, x: int = 1) -> Certificate:
    """[x^p, v] as the single instance S^(p)(x,..,x,[x,v]) / (p-1)!."""
    _require_fresh(v, [x], "v")
    lhs, tele, sform = comm_xp_sides(p, v, x)
    if not (lhs == tele == sform):
        raise IdentityError(f"commutator identity failed for p={p}, v={v}")
    X = Poly.var(x, p)
    slots = [X] * (p - 1) + [commutator(X, v)]
    return _s_instance(p, slots, GF(p).inv_factorial(p - 1)).with_target(lhs, f"[x^{p}, v]")


def cert_h_commutator(m: int, v: Poly, p: int) -> Certificate:
    """[x1^p ... xm^p, v] via the Leibniz rule; factors are H_1 and S_1^(p) instances."""
    _require_fresh(v, range(1, m + 1), "v")
    xs = _vars(p, m)
    pieces = []
    for k in range(m):
        piece = cert_comm_xp(p, v, x=k + 1)
        for j in reversed(range(k)):
            piece = _h1(p, xs[j]) * piece
        for j in range(k + 1, m):
            piece = piece * _h1(p, xs[j])
        pieces.append(piece)
    target = commutator(generator(GeneratorId.H(m), p), v)
    return _sum(pieces, p).with_target(target, f"[H({m}), v]")


# ----------------------------------------------------------------------
# the (x+y)^p and (x+y)^{2p} expansions

def u_poly(p: int, x: int = 1, y: int = 2) -> Poly:
    """(x+y)^p - x^p - y^p."""
    X, Y = Poly.var(x, p), Poly.var(y, p)
    return (X + Y) ** p - X ** p - Y ** p


def u_from_blocks(p: int, x: int = 1, y: int = 2) -> Poly:
    """sum_i S^(p)(x,y;i) / (i!(p-i)!)."""
    F = GF(p)
    X, Y = Poly.var(x, p), Poly.var(y, p)
    out = Poly.zero(p)
    for i in range(1, p):
        coeff = F.inv(F.factorial(i) * F.factorial(p - i))
        out = out + sym([X] * i + [Y] * (p - i)).scale(coeff)
    return out


def two_p_sides(p: int, x: int = 1, y: int = 2) -> Tuple[Poly, Poly]:
    """(x+y)^{2p} against y^{2p}+x^{2p}+2x^py^p+[y^p,x^p]+u^2+(x^p+y^p)u+u(x^p+y^p)."""
    X, Y = Poly.var(x, p), Poly.var(y, p)
    u = u_from_blocks(p, x, y)
    xp, yp = X ** p, Y ** p
    rhs = (yp * yp + xp * xp + (xp * yp).scale(2) + commutator(yp, xp)
           + u * u + (xp + yp) * u + u * (xp + yp))
    return (X + Y) ** (2 * p), rhs


def cert_u(p: int, x: int = 1, y: int = 2) -> Certificate:
    """(x+y)^p - x^p - y^p as a combination of S^(p)(x,y;i)."""
    F = GF(p)
    X, Y = Poly.var(x, p), Poly.var(y, p)
    pieces = []
    for i in range(1, p):
        coeff = F.inv(F.factorial(i) * F.factorial(p - i))
        pieces.append(_s_instance(p, [X] * i + [Y] * (p - i), coeff))
    return _sum(pieces, p).with_target(u_poly(p, x, y), "u in S_1")


def cert_2xpyp(p: int, cu: Optional[Certificate] = None) -> Certificate:
    """2 x1^p x2^p in H_1 + H_1 S_1^(p) + S_1^(p) H_1 + S_1^(p) S_1^(p)."""
    if p == 2:
        raise ValueError("2 x^p y^p is zero in characteristic 2; needs p > 2")
    lhs, rhs = two_p_sides(p)
    if lhs != rhs:
        raise IdentityError(f"(x+y)^(2p) identity failed for p={p}")
    X, Y = Poly.var(1, p), Poly.var(2, p)
    cu = cu or cert_u(p)
    hx, hy = _h1(p, X), _h1(p, Y)
    cert = (_h1(p, (X + Y) * (X + Y)) - _h1(p, X * X) - _h1(p, Y * Y)
            - cert_comm_xp(p, X ** p, x=2)
            - cu * cu - (hx + hy) * cu - cu * (hx + hy))
    return cert.with_target((X ** p * Y ** p).scale(2), "2 x^p y^p")


def cert_u_and_2xpyp(p: int) -> Tuple[Certificate, Certificate]:
    cu = cert_u(p)
    return cu, cert_2xpyp(p, cu)


# ----------------------------------------------------------------------
# inclusions into H_1 + H_{m+1} for m = 1

def h_spec(*ns: int) -> SpanSpec:
    return SpanSpec.of(*[[GeneratorId.H(n)] for n in ns])


def lower_to_h(cert: Certificate, sp: Optional[Certificate] = None) -> Certificate:
    """Rewrite S_1^(p) factors as H_1 instances and fuse products of H's."""
    p = cert.p
    sp = sp or cert_sp_in_h1(p)
    return cert.expand(GeneratorId.S1(p), sp).merged().pruned()


def _single(p: int, f: Factor) -> Certificate:
    return Certificate(p, f.value(p), (Term(1, (f,)),))


def _slot_args(f: Factor, p: int) -> List[Poly]:
    return [f.sub.image(k) for k in range(1, f.gen.d + 1)]


def cert_h2_s(p: int, a: Factor, b: Factor, s: Factor, side: str = "left") -> Certificate:
    """a b s (side 'left') or s a b (side 'right') for H_1 instances a, b and an S^(p) instance s.

    Lands in S_1^(p) + (S_1^(p) H_1)^S (or its mirror).
    """
    av, bv = a.value(p), b.value(p)
    base = cert_uv(p, av, bv, p, _slot_args(s, p), side)
    return base.plug({av: _single(p, a), bv: _single(p, b)})


def cert_h_s_h(p: int, a: Factor, s: Factor, z: Factor) -> Certificate:
    """a s z for H_1 instances a, z and an S^(p) instance s: a s z = [a, s] z + s a z."""
    q = a.sub.image(1)
    sv = s.value(p)
    k = max(q.max_var(), sv.max_var()) + 1
    comm = cert_comm_xp(p, Poly.var(k, p), x=1).substitute(Substitution(p, {1: q, k: sv}))
    return comm * _single(p, z) + cert_h2_s(p, a, z, s, side="right")


def _as_cert(p: int, term: Term) -> Certificate:
    cert = Certificate(p, Poly.zero(p), (term,))
    return cert.with_target(cert.evaluate())


def _resolve(term: Term, p: int, sp: Certificate) -> Certificate:
    """Re-express one term of shape H S S, H H S or H S H inside H_1 + H_2 shapes.

    Other shapes are returned unchanged.
    """
    H1, S = GeneratorId.H(1), GeneratorId.S1(p)
    shape = term.shape()
    fs = term.factors
    if shape == (H1, S, S):
        # first S factor into H_1, then H H S
        first = _as_cert(p, Term(1, (fs[1],))).expand(S, sp).pruned()
        out = _zero_cert(p)
        for t in first.terms:
            (h,) = t.factors
            out = out + _resolve(Term(term.coeff * t.coeff % p, (fs[0], h, fs[2])), p, sp)
        return out.with_target(_as_cert(p, term).target)
    if shape == (H1, H1, S):
        return cert_h2_s(p, fs[0], fs[1], fs[2], "left").scale(term.coeff)
    if shape == (S, H1, H1):
        return cert_h2_s(p, fs[1], fs[2], fs[0], "right").scale(term.coeff)
    if shape == (H1, S, H1):
        return cert_h_s_h(p, fs[0], fs[1], fs[2]).scale(term.coeff)
    return _as_cert(p, term)


def cert_h_base(p: int, side: str = "right") -> Certificate:
    """S^(p)(x1..xp) x_{p+1}^p x_{p+2}^p (or its mirror) in H_1 + H_2."""
    a = Factor(GeneratorId.H(1), Substitution(p, {1: Poly.var(p + 1, p)}))
    b = Factor(GeneratorId.H(1), Substitution(p, {1: Poly.var(p + 2, p)}))
    s = Factor(GeneratorId.S1(p), Substitution.identity(p))
    return cert_h2_s(p, a, b, s, side).relabel(f"S H_2 in H_1 + H_2 ({side})")


def cert_h_fundamental(p: int) -> Certificate:
    """x1^p S^(p)(x2..x_{p+1}) x_{p+2}^p in H_1 + H_2."""
    a = Factor(GeneratorId.H(1), Substitution.identity(p))
    s = Factor(GeneratorId.S1(p), Substitution.shift(p, 1, p))
    z = Factor(GeneratorId.H(1), Substitution(p, {1: Poly.var(p + 2, p)}))
    return cert_h_s_h(p, a, s, z).relabel("H_1 S H_1 in H_1 + H_2")


def cert_ns_in_h(p: int, m: int, sp: Optional[Certificate] = None) -> Certificate:
    """Generator of S_m^(p) as a combination of H_m instances."""
    sp = sp or cert_sp_in_h1(p)
    out = sp
    for k in range(1, m):
        out = out * sp.substitute(Substitution.shift(p, k * p, p))
    return out.with_target(generator(GeneratorId.Sn(p, m), p)).merged().pruned().relabel(f"S_{m}^({p}) in H_{m}")


def cert_h_odd(p: int, m: int = 1, parts: Optional[Mapping[str, Certificate]] = None,
               lower: bool = True) -> Certificate:
    """x1^p x2^p x3^p in H_1 + H_2, composed from the sub-certificates.

    ``parts`` may override the sub-certificates ``two_xpyp`` (for
    2 x1^p x2^p) and ``sp_in_h1``; they are used as given, unverified.
    With ``lower`` the result uses only H(1) and H(2) instances.
    """
    if p == 2:
        raise ValueError("the odd-degree inclusion needs p > 2")
    if m != 1:
        raise NotImplementedError("only m = 1 is composed")
    parts = dict(parts or {})
    sp = parts.get("sp_in_h1") or cert_sp_in_h1(p)
    two = parts.get("two_xpyp") or cert_2xpyp(p)
    F = GF(p)
    shifted = two.substitute(Substitution(p, {1: Poly.var(2, p), 2: Poly.var(3, p)}))
    top = (_h1(p, Poly.var(1, p)) * shifted).scale(F.inv(2))
    pieces = [_resolve(t, p, sp) for t in top.terms]
    target = generator(GeneratorId.H(3), p)
    cert = _sum(pieces, p).with_target(target, f"H_3 in H_1 + H_2 (p={p})")
    if lower:
        cert = lower_to_h(cert, sp).relabel(cert.label)
    return cert
