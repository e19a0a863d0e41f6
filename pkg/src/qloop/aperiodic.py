"""The subalgebra spanned by aperiodic matrices.

Its monomial basis uses words in divided powers of single simples.  The
elements E_A correct those monomials so that E_A - [A] involves only periodic
matrices; theta'_A is the bar-invariant basis built from the E_A.  The report
compares theta'_A with the canonical basis theta_A of the whole algebra.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .afmat import PerMatrix, enumerate_offdiag, interval
from .coeff import ONE, LaurentPoly
from .hall import simple_word
from .lusztig import lusztig_solve
from .schur import canonical_r
from .stab import KElem, bar_K, canonical_K, monomial_from_word, zeta_dot_r

__all__ = [
    "AperiodicBasisElem",
    "aperiodic_word",
    "monomial_ap",
    "elem_E",
    "theta_prime",
    "aperiodic_range",
    "check_matrix",
    "conjecture_report",
]


@dataclass(frozen=True)
class AperiodicBasisElem:
    """A basis element of the aperiodic subalgebra together with its label."""

    A: PerMatrix
    kind: str
    elem: KElem


def _require_aperiodic(A: PerMatrix):
    if not A.in_theta_tilde():
        raise ValueError("off-diagonal entries must be nonnegative")
    if not A.is_aperiodic():
        raise ValueError(f"{A!r} is periodic")


@functools.lru_cache(maxsize=None)
def aperiodic_word(A: PerMatrix) -> tuple:
    """Upper simple letters, the idempotent, then lower simple letters."""
    _require_aperiodic(A)
    up = simple_word(A.upper())
    low = simple_word(A.lower().transpose())
    word = [("U", a) for a in up]
    word.append(("D", A.bsigma()))
    word.extend(("L", c) for c in reversed(low))
    return tuple(word)


@functools.lru_cache(maxsize=None)
def _monomial(A: PerMatrix) -> KElem:
    return monomial_from_word(aperiodic_word(A), A)


def monomial_ap(A: PerMatrix) -> AperiodicBasisElem:
    return AperiodicBasisElem(A, "monomial", _monomial(A))


@functools.lru_cache(maxsize=None)
def elem_E(A: PerMatrix) -> KElem:
    """The monomial minus its aperiodic lower terms, each replaced by E_B."""
    _require_aperiodic(A)
    M = _monomial(A)
    out = M
    for B, h in M.items():
        if B != A and B.is_aperiodic():
            out = out - elem_E(B).scale(h)
    return out


def _e_coords(x: KElem) -> dict:
    """Coordinates in the E-basis of an element of the aperiodic subalgebra."""
    return {B: c for B, c in x.terms.items() if B.is_aperiodic()}


@functools.lru_cache(maxsize=None)
def _bar_E(B: PerMatrix) -> dict:
    return _e_coords(bar_K(elem_E(B)))


@functools.lru_cache(maxsize=None)
def _theta_prime_coords(A: PerMatrix) -> tuple:
    below = [B for B in interval(A) if B.is_aperiodic()]
    return tuple(lusztig_solve(A, below, _bar_E).items())


def theta_prime_coords(A: PerMatrix) -> dict:
    """theta'_A in the E-basis."""
    _require_aperiodic(A)
    return dict(_theta_prime_coords(A))


def theta_prime(A: PerMatrix) -> KElem:
    out = KElem(A.n)
    for B, g in _theta_prime_coords(A):
        out = out + elem_E(B).scale(g)
    return out


# ---------------------------------------------------------------------------
# evidence report
# ---------------------------------------------------------------------------


def aperiodic_range(n: int, max_norm: int, diag_lo: int = -1, diag_hi: int = 2) -> list:
    """Aperiodic matrices of norm <= max_norm with diagonal entries in [diag_lo, diag_hi]."""
    out = []
    diags = list(itertools.product(range(diag_lo, diag_hi + 1), repeat=n))
    for off in enumerate_offdiag(n, max_norm):
        if not off.is_aperiodic():
            continue
        for d in diags:
            out.append(off + PerMatrix.diag(d))
    out.sort(key=PerMatrix.sort_key)
    return out


def _in_v_inv_lattice(c: LaurentPoly) -> bool:
    return not c or c.max_exp() < 0


def _diff(x: KElem, y: KElem) -> list:
    keys = sorted(set(x.terms) | set(y.terms), key=PerMatrix.sort_key)
    return [[B.to_json()["entries"], x.coeff(B).to_json(), y.coeff(B).to_json()]
            for B in keys if x.coeff(B) != y.coeff(B)]


def check_matrix(A: PerMatrix) -> dict:
    """All checks for one aperiodic matrix, as a JSON-ready dict."""
    _require_aperiodic(A)
    E = elem_E(A)
    tp = theta_prime(A)
    th = canonical_K(A)
    periodic_rest = all(B == A or not B.is_aperiodic() for B in E.terms) and E.coeff(A) == ONE
    entry = {
        "A": A.to_json()["entries"],
        "E_minus_A_periodic": periodic_rest,
        "theta_prime_bar_invariant": bar_K(tp) == tp,
        "theta_prime_equals_theta": tp == th,
        "diff": _diff(tp, th),
    }
    r = A.level()
    zeta_ok = True
    lattice_ok = True
    if r >= 0:
        z = zeta_dot_r(tp, r)
        if A.in_theta():
            zeta_ok = z == canonical_r(A)
            zE = zeta_dot_r(E, r)
            lattice_ok = zE.coeff(A) == ONE and all(
                _in_v_inv_lattice(c) for B, c in zE.terms.items() if B != A)
        else:
            zeta_ok = not z and not zeta_dot_r(E, r)
    entry["zeta_matches_canonical"] = zeta_ok
    entry["zeta_E_in_lattice"] = lattice_ok
    return entry


def conjecture_report(n: int = 2, max_norm: int = 3, diag_lo: int = -1, diag_hi: int = 2,
                      r_max: int | None = None) -> dict:
    """Run :func:`check_matrix` over :func:`aperiodic_range` and summarize.

    With ``r_max`` set, only matrices of level at most ``r_max`` are checked.
    """
    mats = aperiodic_range(n, max_norm, diag_lo, diag_hi)
    if r_max is not None:
        mats = [A for A in mats if A.level() <= r_max]
    entries = [check_matrix(A) for A in mats]
    keys = ("E_minus_A_periodic", "theta_prime_bar_invariant", "zeta_matches_canonical",
            "zeta_E_in_lattice", "theta_prime_equals_theta")
    summary = {k: sum(1 for e in entries if e[k]) for k in keys}
    summary["total"] = len(entries)
    return {"n": n, "max_norm": max_norm, "r_max": r_max, "diag_range": [diag_lo, diag_hi],
            "summary": summary, "entries": entries}

