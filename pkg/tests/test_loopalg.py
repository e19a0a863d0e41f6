import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qloop.afmat import PerMatrix, enumerate_theta
from qloop.coeff import ONE, LaurentPoly
from qloop.loopalg import VElem, evaluate, gen_decompose, generator_word, mul, surjectivity_witness, truncate
from qloop.schur import SchurElem, elem_Ajlr

v = LaurentPoly.monomial(1)
Z = PerMatrix.zero(2)
E = PerMatrix(2, {(1, 2): 1})
F = PerMatrix(2, {(2, 1): 1})
OFFS = [Z, E, F, PerMatrix(2, {(2, 3): 1}), PerMatrix(2, {(1, 2): 1, (2, 1): 1}), PerMatrix(2, {(1, 3): 1}),
        PerMatrix(2, {(2, 0): 1}), PerMatrix(2, {(1, 2): 2})]
BITS = list(itertools.product((0, 1), repeat=2))


def symbols(offs=OFFS):
    return st.tuples(st.sampled_from(offs), st.sampled_from(BITS), st.sampled_from(BITS)).map(
        lambda s: VElem.symbol(*s))


def velems():
    return st.lists(st.tuples(symbols(), st.integers(-2, 2)), min_size=1, max_size=2).map(
        lambda ts: sum((x.scale(LaurentPoly.const(c)) for x, c in ts), VElem(2)))


def test_normal_form_frozen():
    # v^{2m} = 1 + (v - v^-1) v^m [m]
    assert VElem.symbol(Z, (2, 0)) == VElem(2, {(Z, (0, 0), (0, 0)): ONE, (Z, (1, 0), (1, 0)): v - v.bar()})
    assert VElem.symbol(Z, (-1, 0)) == VElem(2, {(Z, (1, 0), (0, 0)): ONE, (Z, (0, 0), (1, 0)): v.bar() - v})


def test_commutator_frozen():
    x, y = VElem.symbol(E), VElem.symbol(F)
    assert x * y - y * x == VElem(2, {(Z, (0, 1), (1, 0)): ONE, (Z, (1, 0), (0, 1)): -ONE})


@pytest.mark.parametrize("j", list(itertools.product(range(-3, 4), repeat=2)))
@pytest.mark.parametrize("A", [Z, E, PerMatrix(2, {(1, 3): 1})])
def test_normal_form_agrees_with_definition(A, j):
    for lam in [(0, 0), (1, 0), (2, 1)]:
        raw = VElem(2, {(A, j, lam): ONE}, raw=True)
        normal = VElem.symbol(A, j, lam)
        assert all(jj in (0, 1) for (_, jj_, _), _ in normal.terms.items() for jj in jj_)
        for r in range(A.level(), A.level() + 4):
            assert truncate(raw, r) == truncate(normal, r) == elem_Ajlr(A, j, lam, r)


@given(symbols(), symbols())
def test_truncation_is_multiplicative(x, y):
    p = x * y
    for r in range(5):
        assert truncate(p, r) == truncate(x, r) * truncate(y, r)


@given(velems(), velems(), velems())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(velems())
def test_one_is_identity(x):
    one = VElem.one(2)
    assert one * x == x and x * one == x


@pytest.mark.parametrize("A", OFFS)
@pytest.mark.parametrize("j", BITS)
@pytest.mark.parametrize("lam", BITS)
def test_generator_decomposition(A, j, lam):
    assert evaluate(gen_decompose(A, j, lam), 2) == VElem.symbol(A, j, lam)


def test_generator_word_frozen():
    assert generator_word(PerMatrix(2, {(1, 2): 1, (2, 1): 1})) == (("S", (1, 0)), ("T", (1, 0)))


@pytest.mark.parametrize("A", enumerate_theta(2, 2, 2) + enumerate_theta(3, 2, 1)[::4])
def test_surjectivity_witness(A):
    assert truncate(surjectivity_witness(A), A.level()) == SchurElem.basis(A)


def test_json_roundtrip():
    x = VElem.symbol(E) * VElem.symbol(F)
    assert VElem.from_json(x.to_json()) == x


def test_rejects_diagonal():
    with pytest.raises(ValueError):
        VElem.symbol(PerMatrix.diag((1, 0)))
    with pytest.raises(ValueError):
        gen_decompose(E, (2, 0), (0, 0))
    with pytest.raises(ValueError):
        mul(VElem.one(2), VElem.one(3))
