import itertools

import pytest
from hypothesis import given, strategies as st

from tspacekit.freealg import MultiDegree, Poly, Substitution
from tspacekit.linalg import EchelonBasis, rank_mod_p
from tspacekit.symmetric import GeneratorId, generator, sym_vars
from tspacekit.tspace import (
    Certificate, Limits, SpanSpec, Term, check_certificate, enumerate_instances, merge_shape,
    parse_generator, shape_fits, span_membership,
)

S = GeneratorId.S1
H = GeneratorId.H


def x(i, p=3):
    return Poly.var(i, p)


class TestSpanSpec:
    def test_parse_and_render(self):
        spec = SpanSpec.parse("H(1) + H(1)*S(3) + S(2,2)")
        assert spec.alternatives == ((H(1),), (H(1), S(3)), (GeneratorId.Sn(2, 2),))
        assert str(spec) == "H(1) + H(1)*S(3) + S(2,2)"
        assert SpanSpec.parse(str(spec)) == spec

    @pytest.mark.parametrize("bad", ["", "H(1) +", "Q(2)", "H(1,2)", "S1(2,3)"])
    def test_parse_errors(self, bad):
        with pytest.raises(ValueError):
            SpanSpec.parse(bad)

    def test_poly_generator_needs_modulus(self):
        with pytest.raises(ValueError):
            parse_generator("P(x1.x2)")
        assert parse_generator("P(x1.x2)", 3) == GeneratorId.P(x(1) * x(2))

    def test_merge_shape(self):
        assert merge_shape([H(1), H(2)]) == (H(3),)
        assert merge_shape([S(2), S(2), S(3)]) == (GeneratorId.Sn(2, 2), GeneratorId.Sn(3, 1))

    def test_shape_fits(self):
        spec = SpanSpec.parse("H(1) + H(2)")
        assert shape_fits([H(1), H(1)], spec)
        assert not shape_fits([S(3), H(1)], spec)
        # only with the certified inclusion of S^(3) into H_1
        assert shape_fits([S(3), H(1)], spec, sp_in_h=3)
        assert not shape_fits([S(2), H(1)], spec, sp_in_h=3)


def _s_instance(p, *images, coeff=1):
    return Certificate.single(p, S(len(images)), Substitution.of(p, images), coeff)


class TestCertificate:
    def test_single_and_check(self):
        c = _s_instance(3, x(1) * x(2), x(3))
        assert c.target == x(1) * x(2) * x(3) + x(3) * x(1) * x(2)
        assert check_certificate(c, SpanSpec.of(S(2))).ok

    def test_wrong_target_reports_residual(self):
        c = _s_instance(3, x(1), x(2)).with_target(x(1) * x(2))
        rep = check_certificate(c)
        assert not rep.ok and rep.residual == -(x(2) * x(1)) and rep.residual_terms == 1

    def test_shape_errors(self):
        c = _s_instance(3, x(1), x(2))
        rep = check_certificate(c, SpanSpec.of(H(1)))
        assert not rep.ok and rep.residual.is_zero() and rep.shape_errors == [(S(2),)]

    def test_algebra(self):
        a = _s_instance(5, x(1, 5), x(2, 5))
        b = Certificate.single(5, H(1), Substitution(5, {1: x(3, 5)}))
        for c in (a + b, a - b, a.scale(3), -a, a * b, b * a):
            assert check_certificate(c).ok
        assert (a * b).target == a.target * b.target

    def test_substitute_and_reverse(self):
        a = Certificate.single(3, GeneratorId.Sn(2, 2)) * Certificate.single(3, H(2))
        s = Substitution(3, {1: x(1) + x(7), 4: x(2) * x(2), 2: Poly.zero(3)})
        assert check_certificate(a.substitute(s)).ok
        r = a.reversed()
        assert r.target == a.target.reversed()
        assert check_certificate(r).ok

    def test_expand_with_witness(self):
        # S^(2)(x1, x2) = (x1+x2)^2 - x1^2 - x2^2 at p = 2, with H(1) instances
        wit = (Certificate.single(2, H(1), Substitution(2, {1: x(1, 2) + x(2, 2)}))
               - Certificate.single(2, H(1)) - Certificate.single(2, H(1), Substitution(2, {1: x(2, 2)})))
        wit = wit.with_target(sym_vars(2, 2))
        assert check_certificate(wit, SpanSpec.of(H(1))).ok
        c = _s_instance(2, x(3, 2) * x(3, 2), x(1, 2))
        out = c.expand(S(2), wit)
        assert check_certificate(out, SpanSpec.of(H(1))).ok

    def test_merged_and_pruned(self):
        a = Certificate.single(3, H(1)) * Certificate.single(3, H(1), Substitution(3, {1: x(2)}))
        m = a.merged()
        assert m.shapes() == {(H(2),)} and check_certificate(m).ok
        doubled = (m + m + m).with_target(Poly.zero(3))
        assert doubled.pruned().terms == ()

    def test_json_round_trip(self):
        a = (_s_instance(5, x(1, 5) * x(2, 5), x(3, 5), coeff=4)
             * Certificate.single(5, GeneratorId.P(x(1, 5) * x(1, 5)), Substitution(5, {1: x(4, 5)})))
        back = Certificate.loads(a.dumps())
        assert back == a
        assert back.digest() == a.digest()
        assert check_certificate(back).ok

    @given(st.data())
    def test_corrupting_any_coefficient_is_detected(self, data):
        p = 5
        c = Certificate(p, Poly.zero(p), ())
        for k in range(data.draw(st.integers(1, 4))):
            imgs = data.draw(st.lists(st.sampled_from([x(1, p), x(2, p), x(3, p) * x(1, p)]), min_size=2, max_size=2))
            c = c + _s_instance(p, *imgs, coeff=data.draw(st.integers(1, p - 1)))
        assert check_certificate(c).ok
        i = data.draw(st.integers(0, len(c.terms) - 1))
        delta = data.draw(st.integers(1, p - 1))
        terms = list(c.terms)
        t = terms[i]
        terms[i] = Term((t.coeff + delta) % p, t.factors)
        bad = Certificate(p, c.target, tuple(terms))
        # the change adds delta times a nonzero instance
        assert not check_certificate(bad).ok


def _brute_rank(rows, p):
    """Oracle: the span of r rows over F_p has p^rank elements."""
    keys = sorted({k for r in rows for k in r})
    vecs = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = tuple(sum(c * r.get(k, 0) for c, r in zip(coeffs, rows)) % p for k in keys)
        vecs.add(v)
    rank = 0
    while p ** rank < len(vecs):
        rank += 1
    return rank


class TestLinalg:
    @given(st.sampled_from([2, 3]), st.lists(st.dictionaries(st.integers(0, 3), st.integers(0, 2), max_size=4),
                                             max_size=4))
    def test_rank_matches_exhaustive_span(self, p, rows):
        rows = [{k: v % p for k, v in r.items() if v % p} for r in rows]
        assert rank_mod_p(rows, p) == _brute_rank(rows, p)

    @given(st.lists(st.dictionaries(st.integers(0, 4), st.integers(1, 4), min_size=1, max_size=4),
                    min_size=1, max_size=5), st.lists(st.integers(0, 4), min_size=5, max_size=5))
    def test_express_recovers_combination(self, rows, coeffs):
        p = 5
        basis = EchelonBasis(p)
        for i, r in enumerate(rows):
            basis.add(r, i)
        target = {}
        for c, r in zip(coeffs, rows):
            for k, v in r.items():
                target[k] = (target.get(k, 0) + c * v) % p
        target = {k: v for k, v in target.items() if v}
        combo = basis.express(target)
        assert combo is not None
        again = {}
        for i, c in combo.items():
            for k, v in rows[i].items():
                again[k] = (again.get(k, 0) + c * v) % p
        assert {k: v for k, v in again.items() if v} == target


class TestEnumeration:
    def test_s2_instances_at_multilinear_degree_three(self):
        # S(2) instances with single-word images over x1..x3: 3 splits x 2 orders each
        enum = enumerate_instances(SpanSpec.of(S(2)), MultiDegree.multilinear(3), 3)
        assert not enum.truncated
        assert len(enum.instances) == 6
        for factors, value in enum.instances:
            assert factors[0].value(3) == value

    def test_truncation(self):
        enum = enumerate_instances(SpanSpec.of(S(2)), MultiDegree.multilinear(4), 3, Limits(max_instances=5))
        assert enum.truncated and "5" in enum.diagnostic
        assert len(enum.instances) == 5

    def test_h_instances(self):
        # H(1) at degree {x1: 3} over F_3 is the single word x1^3
        enum = enumerate_instances(SpanSpec.of(H(1)), MultiDegree.of({1: 3}), 3)
        assert [v for _, v in enum.instances] == [x(1) ** 3]
        # degree {x1: 2} is not a multiple of p
        assert enumerate_instances(SpanSpec.of(H(1)), MultiDegree.of({1: 2}), 3).instances == []

    def test_limits_parse(self):
        lim = Limits.parse("instances=10, degree=2, support=1, time=3.5")
        assert lim == Limits(10, 2, 1, 3.5)
        with pytest.raises(ValueError):
            Limits.parse("bogus=1")
        with pytest.raises(ValueError):
            Limits(max_instances=0)


class TestMembership:
    def test_s3_in_s2_span_over_f3(self):
        ans = span_membership(sym_vars(3, 3), SpanSpec.of(S(2)))
        assert ans.answer == "yes" and ans.instances == 6
        assert check_certificate(ans.certificate, SpanSpec.of(S(2))).ok

    def test_s3_not_found_over_f2(self):
        ans = span_membership(sym_vars(3, 2), SpanSpec.of(S(2)))
        assert ans.answer == "unknown" and ans.rank == 4

    def test_f2_negative_agrees_with_exhaustive_search(self):
        # oracle: try all 2^6 combinations of the six instances
        target = sym_vars(3, 2)
        enum = enumerate_instances(SpanSpec.of(S(2)), MultiDegree.multilinear(3), 2)
        values = [v for _, v in enum.instances]
        hits = 0
        for coeffs in itertools.product(range(2), repeat=len(values)):
            acc = Poly.zero(2)
            for c, v in zip(coeffs, values):
                if c:
                    acc = acc + v
            hits += acc == target
        assert hits == 0

    def test_zero_target_rejected(self):
        with pytest.raises(ValueError):
            span_membership(Poly.zero(3), SpanSpec.of(S(2)))

    def test_non_homogeneous_target(self):
        target = generator(H(1), 3) + sym_vars(2, 3)
        ans = span_membership(target, SpanSpec.parse("H(1) + S(2)"))
        assert ans.found and check_certificate(ans.certificate).ok

    @given(st.lists(st.tuples(st.integers(1, 2), st.sampled_from([(1, 2), (2, 1), (1, 3), (3, 2)])),
                    min_size=1, max_size=4))
    def test_completeness_on_combinations_of_instances(self, picks):
        # any nonzero combination of S(2) word instances must be found
        p = 3
        target = Poly.zero(p)
        for c, (a, b) in picks:
            rest = ({1, 2, 3} - {a, b}).pop()
            inst = generator(S(2), p)
            inst = Substitution(p, {1: x(a) * x(rest), 2: x(b)})(inst)
            target = target + inst.scale(c)
        if target.is_zero():
            return
        assert span_membership(target, SpanSpec.of(S(2))).found
