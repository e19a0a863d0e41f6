import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import laurent
from qloop.coeff import (ONE, ZERO, LaurentPoly, StabCoeff, TwoVarPoly, cyclotomic, gauss, gauss_multi,
                         gauss_sym, gauss_vec, sgp_product_rule, sgp_sum_rule)

v = LaurentPoly.monomial(1)


def count_subspaces(N, t, p):
    """Brute force: distinct spans of t-tuples of vectors in GF(p)^N with p^t elements."""
    vecs = list(itertools.product(range(p), repeat=N))
    seen = set()
    for gens in itertools.product(vecs, repeat=t):
        span = set()
        for cs in itertools.product(range(p), repeat=t):
            span.add(tuple(sum(c * g[k] for c, g in zip(cs, gens)) % p for k in range(N)))
        if len(span) == p ** t:
            seen.add(frozenset(span))
    return len(seen)


# -- Laurent polynomials ----------------------------------------------------


def test_laurent_basic():
    p = LaurentPoly({2: 1, 0: 1})
    assert str(p) == "v^2 + 1"
    assert p.bar() == LaurentPoly({-2: 1, 0: 1})
    assert (p * p)[2] == 2
    assert p.evaluate(Fraction(1, 2)) == Fraction(5, 4)
    assert LaurentPoly.coerce(3) == LaurentPoly({0: 3})
    with pytest.raises(TypeError):
        LaurentPoly.coerce(1.5)


def test_laurent_exact_division():
    assert ((v**2 - ONE) * (v + ONE)).divmod_exact(v**2 - ONE) == v + ONE
    with pytest.raises(ArithmeticError):
        (v**2 + ONE).divmod_exact(v - ONE)


@given(laurent(), laurent(), laurent())
def test_laurent_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ZERO


@given(laurent(), laurent())
def test_bar_is_involutive_ring_map(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a + b).bar() == a.bar() + b.bar()


@given(laurent())
def test_laurent_json_roundtrip(a):
    assert LaurentPoly.from_json(a.to_json()) == a


# -- Gaussian binomials -----------------------------------------------------


@pytest.mark.parametrize("N,t,p", [(2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 2, 2), (3, 1, 3), (3, 2, 3), (4, 1, 3)])
def test_gauss_sym_counts_subspaces(N, t, p):
    # at v^2 = p the unbalanced binomial counts t-dimensional subspaces
    value = sum(c * p ** (e // 2) for e, c in gauss_sym(N, t).items())
    assert all(e % 2 == 0 for e, _ in gauss_sym(N, t).items())
    assert value == count_subspaces(N, t, p)


def test_gauss_frozen_values():
    assert gauss(4, 2) == LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})
    assert gauss(2, 1) == v + v.bar()
    assert gauss(1, 2) == ZERO
    assert gauss(-1, 3) == -ONE
    assert gauss_sym(-1, 1) == -LaurentPoly.monomial(-2)
    assert gauss_sym(-2, 2) == LaurentPoly({-6: 1, -8: 1, -10: 1})
    with pytest.raises(ValueError):
        gauss_sym(3, -1)


@given(st.integers(-6, 8), st.integers(0, 5))
def test_gauss_is_bar_invariant(N, t):
    assert gauss(N, t).bar() == gauss(N, t)


@given(st.integers(-6, 8), st.integers(1, 5))
def test_gauss_pascal(N, t):
    # [N+1, t] = v^{-t} [N, t] + v^{N+1-t} [N, t-1]
    assert gauss(N + 1, t) == gauss(N, t).shift(-t) + gauss(N, t - 1).shift(N + 1 - t)


@given(st.integers(0, 7), st.integers(0, 7))
def test_gauss_at_one_is_binomial(N, t):
    from math import comb
    assert gauss(N, t).evaluate(1) == comb(N, t)


def test_gauss_multi_order_independent():
    top = (4, 3)
    parts = [(1, 1), (2, 0), (1, 2)]
    vals = {gauss_multi(top, perm) for perm in itertools.permutations(parts)}
    assert len(vals) == 1
    with pytest.raises(ValueError):
        gauss_multi(top, [(1, 1)])


vec2 = st.tuples(st.integers(-3, 4), st.integers(-3, 4))
nat2 = st.tuples(st.integers(0, 3), st.integers(0, 3))


@given(vec2, vec2, nat2)
def test_sum_rule(alpha, beta, lam):
    lhs, rhs = sgp_sum_rule(alpha, beta, lam)
    assert lhs == rhs


@given(vec2, nat2, nat2)
def test_product_rule(alpha, lam, mu):
    lhs, rhs = sgp_product_rule(alpha, lam, mu)
    assert lhs == rhs


def test_gauss_vec_is_componentwise():
    assert gauss_vec((2, 3), (1, 1)) == gauss(2, 1) * gauss(3, 1)
    with pytest.raises(ValueError):
        gauss_vec((1,), (1, 1))


# -- cyclotomics and fractions ----------------------------------------------


@pytest.mark.parametrize("m", range(1, 13))
def test_cyclotomic_product(m):
    prod = ONE
    for d in range(1, m + 1):
        if m % d == 0:
            prod = prod * cyclotomic(d)
    assert prod == LaurentPoly({m: 1, 0: -1})


def test_cyclotomic_frozen():
    assert cyclotomic(6) == LaurentPoly({2: 1, 1: -1, 0: 1})
    assert cyclotomic(12) == LaurentPoly({4: 1, 2: -1, 0: 1})


def w_poly(groups):
    return TwoVarPoly({(ev, ew): c for ew, p in groups.items() for ev, c in p.items()})


@given(laurent(3, -3, 3), laurent(3, -3, 3), st.lists(st.integers(1, 4), min_size=1, max_size=3),
       st.integers(0, 3))
def test_stabcoeff_ratio_specializes(p0, p1, ks, p):
    den = ONE
    for k in ks:
        den = den * (LaurentPoly.monomial(k) - ONE)
    num = w_poly({0: p0 * den, 1: p1 * den})
    x = StabCoeff.ratio(num, den)
    assert x.den == {}
    assert x.specialize(p) == p0 + p1.shift(-p)
    assert x.specialize(None) == p0 + p1


@given(laurent(3, -3, 3), laurent(3, -3, 3), st.integers(1, 4), st.integers(1, 4))
def test_stabcoeff_field_ops(a, b, k1, k2):
    x = StabCoeff.ratio(TwoVarPoly.from_laurent(a, 1), LaurentPoly.monomial(k1) - ONE)
    y = StabCoeff.ratio(TwoVarPoly.from_laurent(b), LaurentPoly.monomial(k2) - ONE)
    assert (x + y) - y == x
    assert x * y == y * x
    assert x.bar().bar() == x
    assert StabCoeff.from_json(x.to_json()) == x


def test_stabcoeff_bar_of_fraction():
    # (w^2 - v^2) / (v^2 - 1) has bar (w^-2 - v^-2) / (v^-2 - 1) = (v^2 w^-2 - 1) / (1 - v^2)
    num = TwoVarPoly({(0, 2): 1, (2, 0): -1})
    x = StabCoeff.ratio(num, LaurentPoly({2: 1, 0: -1}))
    y = StabCoeff.ratio(TwoVarPoly({(2, -2): 1, (0, 0): -1}), LaurentPoly({0: 1, 2: -1}))
    assert x.bar() == y


def test_stabcoeff_rejects_non_cyclotomic():
    with pytest.raises(ArithmeticError):
        StabCoeff.ratio(ONE, LaurentPoly({0: 2, 1: 1}))
