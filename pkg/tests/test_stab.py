import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import offdiag, tilde, with_diag_for_cols, with_diag_for_rows
from qloop.afmat import PerMatrix, interval
from qloop.coeff import ONE, LaurentPoly, StabCoeff, TwoVarPoly
from qloop.loopalg import VElem
from qloop.schur import canonical_r
from qloop.stab import (KElem, StabElem, bar_K, bimodule_act, canonical_K, check_stabilization, k_mul,
                        monomial_K, p_start, stab_coeff_P, stab_mul, stab_mul_transposed, tau_dot, zeta_dot_r)

v = LaurentPoly.monomial(1)
E = PerMatrix(2, {(1, 2): 1})
F = PerMatrix(2, {(2, 1): 1})


def pairs(max_norm=3):
    """(B, A) with co(B) = ro(A)."""
    return st.tuples(offdiag(max_norm=max_norm), tilde(max_norm=max_norm, diag=(-1, 2))).map(
        lambda p: (with_diag_for_cols(p[0], p[1].ro()), p[1]))


def test_stab_product_frozen():
    res = stab_mul(F, E)
    # [E21][E12] = (v^2 - w^2)/(v^2 - 1) [E22] + [E12 + E21 - E11]
    expect_diag = StabCoeff.ratio(TwoVarPoly({(2, 0): 1, (0, 2): -1}), LaurentPoly({2: 1, 0: -1}))
    assert res == StabElem(2, {PerMatrix(2, {(2, 2): 1}): expect_diag,
                              PerMatrix(2, {(1, 2): 1, (2, 1): 1, (1, 1): -1}): ONE})
    assert res.at_one() == KElem(2, {PerMatrix(2, {(2, 2): 1}): ONE,
                                     PerMatrix(2, {(1, 2): 1, (2, 1): 1, (1, 1): -1}): ONE})
    assert p_start(F, E, res) == 2


def test_generator_coefficient_frozen():
    # the upper generator E12 on the idempotent of (0, 1) adds E12 with coefficient 1
    A = PerMatrix.diag((0, 1))
    T = PerMatrix(2, {(1, 2): 1})
    assert stab_coeff_P(T, A) == StabCoeff.coerce(ONE)


@given(pairs())
def test_stabilization_matches_schur(pair):
    B, A = pair
    checks = check_stabilization(B, A, 3)
    assert len(checks) == 3
    assert all(ok for _, _, ok in checks)
    p0 = checks[0][0]
    assert [p for p, _, _ in checks] == [p0, p0 + 1, p0 + 2]


@given(pairs())
def test_both_recursion_orders_agree(pair):
    B, A = pair
    assert stab_mul(B, A) == stab_mul_transposed(B, A)


@given(pairs())
def test_w_to_one(pair):
    B, A = pair
    assert stab_mul(B, A).at_one() == k_mul(B, A)


@given(pairs(2), offdiag(max_norm=2))
def test_associative(pair, off):
    B, A = pair
    C = with_diag_for_rows(off, A.co())
    x, y, z = StabElem.basis(B), StabElem.basis(A), StabElem.basis(C)
    assert (x * y) * z == x * (y * z)


CANON = [PerMatrix(2, e) + PerMatrix.diag(d)
         for e in [{(1, 2): 1}, {(1, 2): 1, (2, 1): 1}, {(1, 3): 1}, {(1, 2): 2, (2, 1): 1}, {(2, 3): 1, (1, 2): 1}]
         for d in [(-1, 0), (0, 0), (1, 1), (2, -1)]]


@pytest.mark.parametrize("A", CANON)
def test_canonical_basis(A):
    th = canonical_K(A)
    assert bar_K(th) == th
    assert th.coeff(A) == ONE
    lower = set(interval(A))
    assert all(B in lower and c.in_negative_part() for B, c in th.terms.items() if B != A)
    assert tau_dot(th) == canonical_K(A.transpose())


@pytest.mark.parametrize("A", CANON)
def test_canonical_truncates_to_schur(A):
    th = canonical_K(A)
    for r in range(0, max(A.level(), 0) + 1):
        z = zeta_dot_r(th, r)
        if A.in_theta() and A.level() == r:
            assert z == canonical_r(A)
        else:
            assert not z


@pytest.mark.parametrize("A", CANON)
def test_bar_involution(A):
    x = KElem.basis(A)
    assert bar_K(bar_K(x)) == x
    m = monomial_K(A)
    assert bar_K(m) == m


def test_canonical_frozen():
    A = PerMatrix(2, {(1, 2): 1, (2, 1): 1})
    assert canonical_K(A) == KElem(2, {A: ONE, PerMatrix.diag((1, 1)): v.bar()})


SYMS = [VElem.symbol(E), VElem.symbol(F), VElem.symbol(PerMatrix.zero(2), (1, 0), (0, 0)),
        VElem.symbol(PerMatrix.zero(2), (0, 0), (0, 1)), VElem.symbol(PerMatrix(2, {(1, 3): 1}))]
KS = [KElem.basis(PerMatrix.diag((1, -1))), KElem.basis(PerMatrix(2, {(1, 2): 1, (2, 2): -1})),
      KElem.basis(PerMatrix(2, {(2, 1): 1, (1, 1): 2}))]


@pytest.mark.parametrize("k", KS)
def test_bimodule(k):
    one = VElem.one(2)
    assert bimodule_act(one, k) == k
    assert bimodule_act(one, k, "right") == k
    for x in SYMS:
        for y in SYMS[:3]:
            assert bimodule_act(x * y, k) == bimodule_act(x, bimodule_act(y, k))
            assert bimodule_act(x * y, k, "right") == bimodule_act(y, bimodule_act(x, k, "right"), "right")
            assert bimodule_act(x, bimodule_act(y, k, "right")) == bimodule_act(y, bimodule_act(x, k), "right")
    with pytest.raises(ValueError):
        bimodule_act(one, k, "middle")


def test_json_roundtrip():
    res = stab_mul(F, E)
    assert StabElem.from_json(res.to_json()) == res
    th = canonical_K(PerMatrix(2, {(1, 2): 2, (2, 1): 1}))
    assert KElem.from_json(th.to_json()) == th


def test_mismatched_pair_is_zero():
    assert not stab_mul(E, E)
    with pytest.raises(ValueError):
        stab_mul(PerMatrix(2, {(1, 2): -1}), E)
