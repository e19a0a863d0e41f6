import pytest

from qloop.afmat import PerMatrix, enumerate_offdiag
from qloop.aperiodic import (AperiodicBasisElem, aperiodic_range, aperiodic_word, check_matrix, conjecture_report,
                             elem_E, monomial_ap, theta_prime, theta_prime_coords)
from qloop.coeff import ONE
from qloop.stab import bar_K, canonical_K

RANGE_2 = aperiodic_range(2, 2)


def test_range_sizes():
    # aperiodic off-diagonal parts times the 4^2 diagonals in [-1, 2]
    assert len(aperiodic_range(2, 3)) == 29 * 16
    assert len(aperiodic_range(2, 1)) == 5 * 16
    assert len(RANGE_2) == sum(A.is_aperiodic() for A in enumerate_offdiag(2, 2)) * 16


def test_word_uses_single_simples():
    A = PerMatrix(2, {(1, 3): 1, (2, 3): 1})
    assert aperiodic_word(A) == (("U", (1, 0)), ("U", (0, 2)), ("D", (2, 0)))
    for A in RANGE_2:
        for kind, vec in aperiodic_word(A):
            if kind != "D":
                assert sum(1 for x in vec if x) == 1


def test_periodic_rejected():
    P = PerMatrix(2, {(1, 2): 1, (2, 3): 1})
    with pytest.raises(ValueError):
        elem_E(P)
    with pytest.raises(ValueError):
        check_matrix(P)


@pytest.mark.parametrize("A", RANGE_2[::3])
def test_elements(A):
    E = elem_E(A)
    assert E.coeff(A) == ONE
    assert all(B == A or not B.is_aperiodic() for B in E.terms)
    m = monomial_ap(A)
    assert isinstance(m, AperiodicBasisElem) and m.kind == "monomial" and m.elem.coeff(A) == ONE
    tp = theta_prime(A)
    assert bar_K(tp) == tp
    assert theta_prime_coords(A)[A] == ONE
    assert tp == canonical_K(A)


@pytest.mark.parametrize("A", RANGE_2[::5])
def test_check_matrix(A):
    entry = check_matrix(A)
    for key in ("E_minus_A_periodic", "theta_prime_bar_invariant", "zeta_matches_canonical", "zeta_E_in_lattice",
                "theta_prime_equals_theta"):
        assert entry[key] is True
    assert entry["diff"] == []


def test_report_summary():
    rep = conjecture_report(2, 1)
    assert rep["summary"]["total"] == 80
    assert all(rep["summary"][k] == 80 for k in rep["summary"])
    limited = conjecture_report(2, 1, r_max=0)
    assert limited["r_max"] == 0
    assert all(sum(a for i, j, a in e["A"]) <= 0 for e in limited["entries"])
