"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from tspacekit.freealg import Poly, Substitution

PRIMES = st.sampled_from([2, 3, 5, 7])


def words(max_var=3, max_len=3):
    return st.lists(st.integers(1, max_var), min_size=1, max_size=max_len).map(tuple)


@st.composite
def polys(draw, p=None, max_var=3, max_len=3, max_terms=4):
    if p is None:
        p = draw(PRIMES)
    terms = draw(st.dictionaries(words(max_var, max_len), st.integers(0, p - 1), max_size=max_terms))
    return Poly(p, terms)


@st.composite
def poly_pairs(draw, n=2, **kw):
    p = draw(PRIMES)
    return tuple(draw(polys(p=p, **kw)) for _ in range(n))


@st.composite
def substitutions(draw, p, max_var=3):
    vs = draw(st.lists(st.integers(1, max_var), unique=True, max_size=max_var))
    return Substitution(p, {v: draw(polys(p=p, max_var=max_var, max_len=2, max_terms=2)) for v in vs})
