"""Registry of executable checks C1..C15 and the suite runner.

Each check is a pure function of (p, long) returning a CheckReport.  A
check that does not apply to the modulus reports ``skipped``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from . import certs
from .freealg import Poly, Substitution, essential_components, eval_at_zero
from .reduction import closure_covers, family, reduce_sequence
from .symmetric import GeneratorId, block_word_sum, generator, sym, sym_two_block
from .tspace import Certificate, SpanSpec, check_certificate, span_membership

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckReport:
    id: str
    params: Dict
    status: str
    residual: Optional[Poly] = None
    witness: Optional[Certificate] = None
    detail: List[str] = field(default_factory=list)
    ms: float = 0.0

    @property
    def residual_terms(self) -> int:
        return 0 if self.residual is None else len(self.residual)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "params": self.params,
            "status": self.status,
            "residual_terms": self.residual_terms,
            "witness_ref": None if self.witness is None else f"{self.witness.label}#{self.witness.digest()}",
            "ms": round(self.ms, 1),
        }


class _Run:
    """Collects subcase outcomes for one check."""

    def __init__(self, cid: str, params: Dict):
        self.cid = cid
        self.params = params
        self.residual: Optional[Poly] = None
        self.witness: Optional[Certificate] = None
        self.detail: List[str] = []
        self.failed = False

    def identity(self, name: str, lhs: Poly, rhs: Poly):
        res = lhs - rhs
        self._record(name, res.is_zero(), res)

    def cert(self, name: str, cert: Certificate, spec: Optional[SpanSpec] = None, sp_in_h=None):
        rep = check_certificate(cert, spec, sp_in_h)
        self._record(name, rep.ok, rep.residual, rep.shape_errors)
        self.witness = cert
        return rep.ok

    def fact(self, name: str, ok: bool, note: str = ""):
        self._record(name + (f" ({note})" if note else ""), ok, None)

    def _record(self, name, ok, residual, shape_errors=()):
        tag = "ok" if ok else "FAILED"
        extra = ""
        if not ok and residual is not None and residual:
            extra = f", residual {len(residual)} terms"
        if shape_errors:
            extra += ", shapes outside span: " + "; ".join("*".join(map(str, s)) for s in shape_errors)
        self.detail.append(f"{name}: {tag}{extra}")
        if not ok:
            self.failed = True
            if self.residual is None and residual is not None and residual:
                self.residual = residual

    def report(self) -> CheckReport:
        return CheckReport(self.cid, self.params, FAIL if self.failed else PASS,
                           self.residual, self.witness, self.detail)


def _skip(cid, params, why) -> CheckReport:
    return CheckReport(cid, params, SKIPPED, detail=[why])


# ----------------------------------------------------------------------
# checks

def c1_sym_recursion(p: int, long: bool = False) -> CheckReport:
    run = _Run("C1", {"p": p, "d": [1, 2, 3, 4], "variants": [1, 2, 3]})
    for d in range(1, 5):
        for variant in (1, 2, 3):
            run.identity(f"d={d} variant {variant}", *certs.sym_recursion_sides(d, variant, p))
    return run.report()


def c2_mod_s1(p: int, long: bool = False) -> CheckReport:
    run = _Run("C2", {"p": p, "d": [1, 2, 3, 4]})
    for d in range(1, 5):
        for side in ("right", "left"):
            run.cert(f"d={d} {side}", certs.cert_mod_s1(d, p, side), SpanSpec.of([GeneratorId.S1(d)]))
    return run.report()


def _uv_samples(p: int):
    x = lambda i: Poly.var(i, p)
    return [(x(5), x(6)), (x(5) * x(5), x(6)), (x(5) * x(7) + x(6), x(6) * x(6))]


def c3_uv(p: int, long: bool = False) -> CheckReport:
    run = _Run("C3", {"p": p, "d": [1, 2, 3]})
    for d in (1, 2, 3):
        for u, v in _uv_samples(p):
            for side in ("right", "left"):
                run.cert(f"d={d} u={u} v={v} {side}", certs.cert_uv(d, u, v, p, side=side),
                         certs.uv_spec(d, u, v, side))
    return run.report()


def c4_s_sequence(p: int, long: bool = False) -> CheckReport:
    run = _Run("C4", {"p": p, "d": [2, 3]})
    for d in (2, 3):
        for a in (1, 2):
            for b in (1, 2):
                lhs = generator(GeneratorId.Sn(d, a), p) * Substitution.shift(p, a * d, b * d)(
                    generator(GeneratorId.Sn(d, b), p))
                run.identity(f"S_{a}^({d}) S_{b}^({d}) generators concatenate", lhs,
                             generator(GeneratorId.Sn(d, a + b), p))
    ans = span_membership(generator(GeneratorId.Sn(2, 3), p), SpanSpec.parse("S(2) + S(2,2)"))
    if ans.found:
        run.cert("S_3^(2) generator in S_1^(2) + S_2^(2)", ans.certificate, SpanSpec.parse("S(2) + S(2,2)"))
    else:
        run.fact("S_3^(2) generator in S_1^(2) + S_2^(2)", False, ans.diagnostic)
    return run.report()


def _reduction_cases(kind: str, run: _Run, p: int, d: int = 2):
    seqs = [(1, 3, 6), family("all", 10), family("odd", 8), family("primes", 8),
            family("squares", 6), family("ap:4,3", 8), (2, 5, 7, 11)]
    for seq in seqs:
        res = reduce_sequence(seq)
        covered, _ = closure_covers(res.values, seq, max(seq))
        gap = seq[1] - seq[0]
        run.fact(f"I={list(seq)} -> J={list(res.positions)}", covered and len(res) <= gap + 1
                 and {1, 2} <= set(res.positions), f"basis size {len(res)} <= {gap + 1}")
        basis = [GeneratorId.H(i) if kind == "H" else GeneratorId.Sn(d, i) for i in res.values]
        run.detail.append("  basis: " + ", ".join(str(g) for g in basis))
    res = reduce_sequence((1, 3, 6))
    run.fact("I=[1,3,6] basis meets the bound with equality", len(res) == 3)
    res = reduce_sequence(family("all", 10))
    run.fact("I=1..10 basis of size 2", len(res) == 2)
    if kind == "H":
        h = generator(GeneratorId.H(1), p)
        run.detail.append(f"  H(1) = {h}")


def c5_reduce_s(p: int, long: bool = False) -> CheckReport:
    run = _Run("C5", {"p": p, "d": 2})
    _reduction_cases("S", run, p)
    return run.report()


def c6_essential(p: int, long: bool = False) -> CheckReport:
    run = _Run("C6", {"p": p})
    xs = [Poly.var(i, p) for i in range(1, p + 1)]
    total = xs[0]
    for x in xs[1:]:
        total = total + x
    f = total ** p
    comps = essential_components(f)
    run.identity("components sum to f", sum(comps.values(), Poly.zero(p)), f)
    run.identity("multilinear component is S^(p)", comps.get(frozenset(range(1, p + 1)), Poly.zero(p)), sym(xs))
    for v in range(1, p + 1):
        keep = sum((c for k, c in comps.items() if v not in k), Poly.zero(p))
        run.identity(f"f|x{v}=0 is the sum of components without x{v}", eval_at_zero(f, v), keep)
    return run.report()


def c7_sp_in_h1(p: int, long: bool = False) -> CheckReport:
    run = _Run("C7", {"p": p})
    run.cert(f"S^({p}) in H_1", certs.cert_sp_in_h1(p), certs.h_spec(1))
    return run.report()


def c8_ns_in_h(p: int, long: bool = False) -> CheckReport:
    # S_2^(5) lowered to H_2 instances runs to ~10^7 words per term
    ms = [1, 2] if p <= 3 else [1]
    run = _Run("C8", {"p": p, "m": ms})
    for m in ms:
        run.cert(f"S_{m}^({p}) in H_{m}", certs.cert_ns_in_h(p, m), certs.h_spec(m))
    return run.report()


def c9_comm_xp(p: int, long: bool = False) -> CheckReport:
    run = _Run("C9", {"p": p})
    x2, x3 = Poly.var(2, p), Poly.var(3, p)
    for v in (x2, x2 * x3):
        lhs, tele, sform = certs.comm_xp_sides(p, v)
        run.identity(f"[x1^{p}, {v}] telescopes", lhs, tele)
        run.identity(f"[x1^{p}, {v}] = S^({p})(x1,..,x1,[x1,v])/({p}-1)!", lhs, sform)
        cert = certs.cert_comm_xp(p, v)
        run.cert(f"[x1^{p}, {v}] in S_1^({p})", cert, SpanSpec.of([GeneratorId.S1(p)]))
        run.cert(f"[x1^{p}, {v}] in H_1", certs.lower_to_h(cert), certs.h_spec(1))
    return run.report()


def c10_h_concat(p: int, long: bool = False) -> CheckReport:
    run = _Run("C10", {"p": p})
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            lhs = generator(GeneratorId.H(m), p) * Substitution.shift(p, m, n)(generator(GeneratorId.H(n), p))
            run.identity(f"H({m}) H({n}) = H({m + n})", lhs, generator(GeneratorId.H(m + n), p))
    return run.report()


def c11_h_base(p: int, long: bool = False) -> CheckReport:
    run = _Run("C11", {"p": p, "m": 1})
    sp = certs.cert_sp_in_h1(p)
    run.cert(f"S^({p}) in H_1", sp, certs.h_spec(1))
    for side in ("right", "left"):
        cert = certs.cert_h_base(p, side)
        run.cert(f"S H_2 in H_1 + H_2 ({side})", cert, certs.h_spec(1, 2), sp_in_h=p)
        if p <= 3 or long:
            run.cert(f"  lowered to H instances ({side})", certs.lower_to_h(cert, sp), certs.h_spec(1, 2))
    return run.report()


def c12_h_commutator(p: int, long: bool = False) -> CheckReport:
    run = _Run("C12", {"p": p, "m": [1, 2]})
    x = lambda i: Poly.var(i, p)
    for m, v in ((1, x(2)), (1, x(2) * x(3)), (2, x(3)), (2, x(3) * x(4))):
        cert = certs.cert_h_commutator(m, v, p)
        run.cert(f"[H({m}), {v}] in H_{m}", cert, certs.h_spec(m), sp_in_h=p)
        if p <= 3 or long:
            run.cert("  lowered", certs.lower_to_h(cert), certs.h_spec(m))
    return run.report()


def c13_h_fundamental(p: int, long: bool = False) -> CheckReport:
    run = _Run("C13", {"p": p, "m": 1, "i": 1})
    cert = certs.cert_h_fundamental(p)
    run.cert("H_1 S H_1 in H_1 + H_2", cert, certs.h_spec(1, 2), sp_in_h=p)
    if p <= 3:
        run.cert("  lowered", certs.lower_to_h(cert), certs.h_spec(1, 2))
    return run.report()


def c14_h_odd(p: int, long: bool = False) -> CheckReport:
    params = {"p": p, "m": 1}
    if p == 2:
        return _skip("C14", params, "needs p > 2")
    run = _Run("C14", params)
    cu, two = certs.cert_u_and_2xpyp(p)
    for i in range(1, p):
        run.identity(f"S^({p})(x,y;{i}) = {i}!{p - i}! sum P_J", sym_two_block(p, i),
                     block_word_sum(p, i).scale(_fact(i) * _fact(p - i)))
    run.identity("(x+y)^p = x^p + y^p + u", certs.u_poly(p), certs.u_from_blocks(p))
    run.cert("u in S_1^(p)", cu, SpanSpec.of([GeneratorId.S1(p)]))
    run.identity("(x+y)^(2p) expansion", *certs.two_p_sides(p))
    S, H1 = GeneratorId.S1(p), GeneratorId.H(1)
    run.cert("2 x^p y^p in H_1 + H_1 S + S H_1 + S S", two,
             SpanSpec.of([H1], [H1, S], [S, H1], [S, S]), sp_in_h=p)
    if p > 3 and not long:
        run.detail.append("x1^p x2^p x3^p in H_1 + H_2: skipped for p > 3 without --long")
        return run.report()
    sp = certs.cert_sp_in_h1(p)
    run.cert(f"S^({p}) in H_1", sp, certs.h_spec(1))
    composed = certs.cert_h_odd(p, lower=False)
    run.cert("x1^p x2^p x3^p in H_1 + H_2", composed, certs.h_spec(1, 2), sp_in_h=p)
    if p <= 3:
        run.cert("  lowered to H(1), H(2) instances", certs.lower_to_h(composed, sp), certs.h_spec(1, 2))
    return run.report()


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def c15_reduce_h(p: int, long: bool = False) -> CheckReport:
    params = {"p": p}
    if p == 2:
        return _skip("C15", params, "needs p > 2")
    run = _Run("C15", params)
    _reduction_cases("H", run, p)
    return run.report()


CHECKS: Dict[str, Callable[[int, bool], CheckReport]] = {
    "C1": c1_sym_recursion,
    "C2": c2_mod_s1,
    "C3": c3_uv,
    "C4": c4_s_sequence,
    "C5": c5_reduce_s,
    "C6": c6_essential,
    "C7": c7_sp_in_h1,
    "C8": c8_ns_in_h,
    "C9": c9_comm_xp,
    "C10": c10_h_concat,
    "C11": c11_h_base,
    "C12": c12_h_commutator,
    "C13": c13_h_fundamental,
    "C14": c14_h_odd,
    "C15": c15_reduce_h,
}

DESCRIPTIONS = {
    "C1": "three expansions of S^(d+1) through S^(d), d = 1..4",
    "C2": "S^(d+1) = S^(d) x_{d+1} = x_{d+1} S^(d) modulo S_1^(d)",
    "C3": "(S_1 u v)^S in S_1 + (S_1 u)^S + (S_1 v)^S and mirror",
    "C4": "S_n^(2) concatenation; S_3^(2) in S_1^(2) + S_2^(2)",
    "C5": "index reduction for sums of S_n^(d)",
    "C6": "essential components of (x1+..+xp)^p",
    "C7": "S_1^(p) in H_1",
    "C8": "S_m^(p) in H_m",
    "C9": "[x^p, v] in S_1^(p)",
    "C10": "(H_m H_n)^S = H_{m+n} on generators",
    "C11": "S_1^(p) H_2 and H_2 S_1^(p) in H_1 + H_2",
    "C12": "[H_m, v] in H_m",
    "C13": "H_1 S^(p) H_1 in H_1 + H_2",
    "C14": "H_3 in H_1 + H_2",
    "C15": "index reduction for sums of H_n",
}


def _order(cid: str) -> int:
    return int(cid[1:])


def select(filter: Optional[Iterable[str]] = None) -> List[str]:
    if not filter:
        return sorted(CHECKS, key=_order)
    out = []
    for item in filter:
        item = item.strip().upper()
        if "-" in item:
            a, b = (_order(x.strip()) for x in item.split("-"))
            ids = [f"C{k}" for k in range(a, b + 1)]
        else:
            ids = [item]
        for cid in ids:
            if cid not in CHECKS:
                raise KeyError(f"unknown check id {cid!r}")
            if cid not in out:
                out.append(cid)
    return sorted(out, key=_order)


def run_check(cid: str, p: int, long: bool = False) -> CheckReport:
    start = time.perf_counter()
    report = CHECKS[cid](p, long)
    report.ms = (time.perf_counter() - start) * 1000
    return report


def run_suite(filter: Optional[Iterable[str]] = None, p_list: Sequence[int] = (3,),
              long: bool = False) -> List[CheckReport]:
    """Run the selected checks for every modulus; reports ordered by (check, p)."""
    ids = select(filter)
    return [run_check(cid, p, long) for cid in ids for p in p_list]


def reports_json(reports: Iterable[CheckReport]) -> str:
    return "\n".join(json.dumps(r.to_json(), sort_keys=True) for r in reports)
