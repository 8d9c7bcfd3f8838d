import itertools
import math

import pytest
from hypothesis import given, strategies as st

from strategies import PRIMES, polys
from tspacekit.freealg import Poly, Substitution
from tspacekit.symmetric import (
    MAX_SYM_ARITY, GeneratorId, block_word_sum, generator, reversal_substitution, sym, sym_two_block, sym_vars,
)


def brute_sym(args):
    """Oracle: sum of products over all d! orderings."""
    p = args[0].p
    out = Poly.zero(p)
    for perm in itertools.permutations(args):
        prod = perm[0]
        for f in perm[1:]:
            prod = prod * f
        out = out + prod
    return out


def x(i, p=3):
    return Poly.var(i, p)


@pytest.mark.parametrize("d", range(1, 6))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_sym_matches_permutation_oracle(d, p):
    args = [x(i, p) for i in range(1, d + 1)]
    assert sym(args) == brute_sym(args)


def test_sym_small_cases():
    assert str(sym_vars(2, 3)) == "x1.x2 + x2.x1"
    assert len(sym_vars(3, 7)) == 6
    assert len(sym_vars(6, 7)) == 720


def test_sym_arity_limits():
    with pytest.raises(ValueError):
        sym([])
    with pytest.raises(ValueError):
        sym([x(1)] * (MAX_SYM_ARITY + 1))


@given(st.lists(polys(p=5, max_len=2, max_terms=2), min_size=1, max_size=4))
def test_sym_matches_oracle_on_polys(args):
    assert sym(args) == brute_sym(args)


@given(st.lists(polys(p=3, max_len=2, max_terms=2), min_size=2, max_size=4), st.randoms())
def test_sym_permutation_invariant(args, rnd):
    shuffled = list(args)
    rnd.shuffle(shuffled)
    assert sym(shuffled) == sym(args)


@given(st.lists(polys(p=5, max_len=2, max_terms=2), min_size=1, max_size=3),
       polys(p=5, max_len=2, max_terms=2), st.integers(0, 4), st.data())
def test_sym_multilinear(args, g, a, data):
    i = data.draw(st.integers(0, len(args) - 1))
    f = args[i]
    mixed = list(args)
    mixed[i] = f.scale(a) + g
    other = list(args)
    other[i] = g
    assert sym(mixed) == sym(args).scale(a) + sym(other)


@pytest.mark.parametrize("p", [3, 5])
def test_two_block_counts(p):
    for i in range(1, p):
        assert sym_two_block(p, i) == block_word_sum(p, i).scale(math.factorial(i) * math.factorial(p - i))
        assert len(block_word_sum(p, i)) == math.comb(p, i)
    with pytest.raises(ValueError):
        sym_two_block(p, 0)


class TestGenerators:
    def test_strings(self):
        assert str(GeneratorId.S1(3)) == "S(3)"
        assert str(GeneratorId.Sn(2, 3)) == "S(2,3)"
        assert str(GeneratorId.H(2)) == "H(2)"

    def test_h_generator(self):
        assert str(generator(GeneratorId.H(2), 3)) == "x1.x1.x1.x2.x2.x2"
        assert GeneratorId.H(4).nvars() == 4

    def test_sn_generator_uses_blocks(self):
        g = generator(GeneratorId.Sn(2, 2), 3)
        assert g == sym_vars(2, 3) * sym_vars(2, 3, start=3)
        assert GeneratorId.Sn(2, 3).nvars() == 6
        assert generator(GeneratorId.Sn(3, 1), 5) == generator(GeneratorId.S1(3), 5)

    def test_bad_modulus(self):
        with pytest.raises(ValueError):
            generator(GeneratorId.H(1), 4)

    @pytest.mark.parametrize("gid", [GeneratorId.S1(3), GeneratorId.H(3), GeneratorId.Sn(2, 3), GeneratorId.Sn(3, 2)])
    @pytest.mark.parametrize("p", [2, 3])
    def test_reversal_substitution(self, gid, p):
        g = generator(gid, p)
        assert reversal_substitution(gid, p)(g) == g.reversed()

    @given(PRIMES, st.integers(1, 3), st.integers(1, 3))
    def test_h_concatenation(self, p, m, n):
        lhs = generator(GeneratorId.H(m), p) * Substitution.shift(p, m, n)(generator(GeneratorId.H(n), p))
        assert lhs == generator(GeneratorId.H(m + n), p)
