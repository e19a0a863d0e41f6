import itertools
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qloop.afmat import PerMatrix, enumerate_theta
from qloop.afsym import (AffinePermutation, HeckeElem, coset_rep_of, double_coset, hecke_bar, hecke_mul,
                         longest_in_coset, longest_parabolic, matrix_of, x_lambda)
from qloop.coeff import ONE, LaurentPoly

R = 3
v2 = LaurentPoly.monomial(2)


def length_brute(w, reach=20):
    return sum(1 for i in range(1, w.r + 1) for j in range(i + 1, i + reach * w.r) if w(i) > w(j))


def perms(r=R, max_len=4):
    """Affine permutations reached by short words in simples and the rotation."""
    gens = [AffinePermutation.simple(r, i) for i in range(1, r + 1)] + [AffinePermutation.rotation(r)]
    return st.lists(st.sampled_from(gens), max_size=max_len).map(
        lambda ws: _prod(ws, r))


def _prod(ws, r):
    out = AffinePermutation.identity(r)
    for w in ws:
        out = out * w
    return out


def T(w, c=ONE):
    return HeckeElem.basis(w, c)


def hecke(r=R):
    return st.lists(st.tuples(perms(r, 3), st.integers(-2, 2)), max_size=3).map(
        lambda ts: sum((T(w, LaurentPoly.const(c)) for w, c in ts), HeckeElem(r)))


@given(perms())
def test_length_matches_inversions(w):
    assert w.length() == length_brute(w)


@given(perms(), perms())
def test_group_laws(u, w):
    assert (u * w).inverse() == w.inverse() * u.inverse()
    assert (u * u.inverse()) == AffinePermutation.identity(R)


@given(perms())
def test_reduced_word(w):
    a, word = w.reduced_word()
    x = AffinePermutation.rotation(R, a)
    for i in word:
        x = x * AffinePermutation.simple(R, i)
    assert x == w
    assert len(word) == w.length()


def test_bad_window():
    with pytest.raises(ValueError):
        AffinePermutation((1, 1, 3))


def test_hecke_relations():
    s = [AffinePermutation.simple(R, i) for i in (1, 2, 3)]
    for si in s:
        assert T(si) * T(si) == T(si, v2 - ONE) + HeckeElem.one(R).scale(v2)
    for i, j in [(0, 1), (1, 2), (2, 0)]:
        assert T(s[i]) * T(s[j]) * T(s[i]) == T(s[j]) * T(s[i]) * T(s[j])
    rho = AffinePermutation.rotation(R)
    assert T(rho) * T(s[0]) == T(rho * s[0])


@given(hecke(), hecke(), hecke())
def test_hecke_associative(x, y, z):
    assert hecke_mul(hecke_mul(x, y), z) == hecke_mul(x, hecke_mul(y, z))


@given(hecke(), hecke())
def test_hecke_bar(x, y):
    assert hecke_bar(hecke_bar(x)) == x
    assert hecke_bar(x * y) == hecke_bar(x) * hecke_bar(y)


def test_bar_of_simple():
    s = AffinePermutation.simple(R, 1)
    vm2 = LaurentPoly.monomial(-2)
    assert hecke_bar(T(s)) == T(s, vm2) + HeckeElem.one(R).scale(vm2 - ONE)


@pytest.mark.parametrize("A", enumerate_theta(2, 3, 1) + enumerate_theta(3, 2, 1))
def test_coset_rep_roundtrip(A):
    lam, d, mu = coset_rep_of(A)
    assert (lam, mu) == (A.ro(), A.co())
    assert matrix_of(lam, d, mu) == A
    coset = double_coset(lam, d, mu)
    assert d in coset and all(d.length() <= w.length() for w in coset)
    assert all(matrix_of(lam, w, mu) == A for w in coset)
    top = longest_in_coset(lam, d, mu)
    assert top.length() == max(w.length() for w in coset)


@pytest.mark.parametrize("lam", [(2, 1), (1, 1, 1), (3, 0), (2, 2)])
def test_parabolic(lam):
    x = x_lambda(lam)
    size = 1
    for a in lam:
        size *= factorial(a)
    assert len(x.terms) == size
    w0 = longest_parabolic(lam)
    assert w0.length() == sum(a * (a - 1) // 2 for a in lam)
