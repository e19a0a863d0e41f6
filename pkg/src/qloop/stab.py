"""The stabilized algebra on periodic matrices with off-diagonal entries >= 0.

Products of ``[B + pI][A + pI]`` at level ``pn + level(A)`` are, for all large
``p``, fixed combinations of ``[X + pI]`` whose coefficients are rational
functions of ``v`` and ``w = v^{-p}``.  :class:`StabElem` stores those
coefficients as :class:`~qloop.coeff.StabCoeff`; :class:`KElem` is the
specialization ``w = 1``.

The same recursion computes both: closed formulas for generator-shaped left
factors, and the monomial expansion of the left factor otherwise.
"""

from __future__ import annotations

import functools
from typing import Mapping, Sequence

from . import _tsum
from .afmat import PerMatrix, interval, sqsubseteq
from .coeff import ONE, ZERO, LaurentPoly, StabCoeff, TwoVarPoly, dot, gauss_sym, gauss_vec
from .lusztig import lusztig_solve
from .schur import SchurElem, basis_product, monomial_word

__all__ = [
    "StabElem",
    "KElem",
    "stab_coeff_P",
    "stab_coeff_Q",
    "stab_mul",
    "stab_mul_transposed",
    "k_mul",
    "zeta_dot_r",
    "monomial_K",
    "monomial_from_word",
    "bar_K",
    "canonical_K",
    "tau_dot",
    "bimodule_act",
    "p_start",
    "check_stabilization",
]


# ---------------------------------------------------------------------------
# coefficient rings
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _diag_ratio(N: int, t: int) -> StabCoeff:
    """prod_{s=1..t} (v^{-2(N-s+1)} w^2 - 1) / (v^{-2s} - 1)."""
    num = TwoVarPoly({(0, 0): 1})
    den = ONE
    for s in range(1, t + 1):
        num = num * TwoVarPoly({(-2 * (N - s + 1), 2): 1, (0, 0): -1})
        den = den * LaurentPoly({-2 * s: 1, 0: -1})
    return StabCoeff.ratio(num, den)


class _Ring:
    def __init__(self, name, zero, one, lift, diag):
        self.name = name
        self.zero = zero
        self.one = one
        self.lift = lift
        self.diag = diag


_W = _Ring("w", StabCoeff(TwoVarPoly()), StabCoeff(TwoVarPoly({(0, 0): 1})), StabCoeff.coerce, _diag_ratio)
_K = _Ring("k", ZERO, ONE, LaurentPoly.coerce, lambda N, t: gauss_sym(N, t).bar())


def _acc(out: dict, C: PerMatrix, c, zero):
    s = out.get(C, zero) + c
    if s:
        out[C] = s
    else:
        out.pop(C, None)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class _Elem:
    _ring: _Ring

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        acc: dict = {}
        for A, c in (terms or {}).items():
            if A.n != n:
                raise ValueError("size mismatch")
            if not A.in_theta_tilde():
                continue
            _acc(acc, A, self._ring.lift(c), self._ring.zero)
        self.terms = acc

    @classmethod
    def basis(cls, A: PerMatrix, c=None):
        return cls(A.n, {A: cls._ring.one if c is None else c})

    def _new(self, terms: dict):
        obj = object.__new__(type(self))
        obj.n = self.n
        obj.terms = terms
        return obj

    def __add__(self, other):
        out = dict(self.terms)
        for A, c in other.terms.items():
            _acc(out, A, c, self._ring.zero)
        return self._new(out)

    def __neg__(self):
        return self._new({A: -c for A, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self._ring.lift(c)
        return self._new({A: a * c for A, a in self.terms.items() if a * c})

    def __mul__(self, other):
        out: dict = {}
        for B, b in self.terms.items():
            for A, a in other.terms.items():
                for C, c in _product(self._ring, B, A):
                    _acc(out, C, b * a * c, self._ring.zero)
        return self._new(out)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, A: PerMatrix):
        return self.terms.get(A, self._ring.zero)

    def items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        body = ", ".join(f"{A!r}: {c}" for A, c in self.items())
        return f"{type(self).__name__}(n={self.n}, {{{body}}})"

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [[A.to_json()["entries"], c.to_json()] for A, c in self.items()]}


class KElem(_Elem):
    """A finite combination of basis symbols with Laurent polynomial coefficients."""

    _ring = _K
    __slots__ = ()

    @classmethod
    def from_json(cls, data) -> KElem:
        n = int(data["n"])
        return cls(n, {PerMatrix.from_json({"n": n, "entries": e}): LaurentPoly.from_json(c)
                       for e, c in data["terms"]})


class StabElem(_Elem):
    """A finite combination of basis symbols with coefficients rational in v and w."""

    _ring = _W
    __slots__ = ()

    @classmethod
    def from_json(cls, data) -> StabElem:
        n = int(data["n"])
        return cls(n, {PerMatrix.from_json({"n": n, "entries": e}): StabCoeff.from_json(c)
                       for e, c in data["terms"]})

    def at_one(self) -> KElem:
        """Specialize w -> 1."""
        return KElem(self.n, {A: c.specialize(None) for A, c in self.terms.items()})

    def specialize(self, p: int) -> SchurElem | None:
        """Shift every matrix by pI and substitute w -> v^{-p}; None for the zero element."""
        if not self.terms:
            return None
        levels = {A.level() for A in self.terms}
        if len(levels) != 1:
            raise ValueError("terms of mixed level")
        r = levels.pop() + p * self.n
        terms = {}
        for A, c in self.terms.items():
            X = A.add_identity(p)
            if X.in_theta():
                terms[X] = c.specialize(p)
        return SchurElem(self.n, r, terms)


# ---------------------------------------------------------------------------
# structure constants of generator-shaped left factors
# ---------------------------------------------------------------------------


def _coeff_upper(ring: _Ring, T: PerMatrix, A: PerMatrix):
    off = _tsum.upper_brackets(T, A, False)
    if not off:
        return ring.zero
    c = ring.lift(off.shift(_tsum.beta_upper(T, A)))
    for i in range(1, A.n + 1):
        t = T[i, i]
        if t:
            c = c * ring.diag(A[i, i] + t - T[i - 1, i], t)
    return c


def _coeff_lower(ring: _Ring, T: PerMatrix, A: PerMatrix):
    off = _tsum.lower_brackets(T, A, False)
    if not off:
        return ring.zero
    c = ring.lift(off.shift(_tsum.beta_lower(T, A)))
    for i in range(1, A.n + 1):
        t = T[i - 1, i]
        if t:
            c = c * ring.diag(A[i, i] - T[i, i] + t, t)
    return c


def stab_coeff_P(T: PerMatrix, A: PerMatrix) -> StabCoeff:
    """Coefficient of A + T - shift(T) when an upper generator multiplies A."""
    return _coeff_upper(_W, T, A)


def stab_coeff_Q(T: PerMatrix, A: PerMatrix) -> StabCoeff:
    """Coefficient of A - T + shift(T) when a lower generator multiplies A."""
    return _coeff_lower(_W, T, A)


@functools.lru_cache(maxsize=200000)
def _gen_on_basis(ring: _Ring, kind: str, vec: tuple, A: PerMatrix) -> tuple:
    out: dict = {}
    if kind == "U":
        for T in _tsum.upper_T(A, vec, True):
            C = _tsum.upper_result(A, T)
            if C.in_theta_tilde():
                c = _coeff_upper(ring, T, A)
                if c:
                    _acc(out, C, c, ring.zero)
    else:
        for T in _tsum.lower_T(A, vec, True):
            C = _tsum.lower_result(A, T)
            if C.in_theta_tilde():
                c = _coeff_lower(ring, T, A)
                if c:
                    _acc(out, C, c, ring.zero)
    return tuple(out.items())


def _apply_word(ring: _Ring, word: Sequence[tuple], terms: dict) -> dict:
    for kind, vec in reversed(word):
        out: dict = {}
        for A, a in terms.items():
            if kind == "D":
                if A.ro() == vec:
                    _acc(out, A, a, ring.zero)
                continue
            for C, c in _gen_on_basis(ring, kind, vec, A):
                _acc(out, C, a * c, ring.zero)
        terms = out
        if not terms:
            break
    return terms


# ---------------------------------------------------------------------------
# general products through the monomial basis
# ---------------------------------------------------------------------------


def _word_terms(ring: _Ring, word: tuple, A: PerMatrix) -> tuple:
    terms = _apply_word(ring, word, {PerMatrix.diag(A.co()): ring.one})
    if terms.get(A) != ring.one:
        raise ArithmeticError(f"monomial of {A!r} has leading coefficient {terms.get(A)}")
    for B in terms:
        if B != A and not sqsubseteq(B, A):
            raise ArithmeticError(f"monomial of {A!r} contains {B!r}, not below it")
    return tuple(terms.items())


@functools.lru_cache(maxsize=100000)
def _monomial_terms(ring: _Ring, A: PerMatrix) -> tuple:
    return _word_terms(ring, monomial_word(A), A)


def monomial_from_word(word: tuple, A: PerMatrix) -> KElem:
    """The word applied to the idempotent of co(A), checked to be A plus lower terms."""
    return KElem(A.n, dict(_word_terms(_K, tuple(word), A)))


@functools.lru_cache(maxsize=200000)
def _product(ring: _Ring, B: PerMatrix, A: PerMatrix) -> tuple:
    # the monomial check guarantees every recursive call is on a strictly lower C
    if B.co() != A.ro():
        return ()
    if B.is_diagonal():
        return ((A, ring.one),)
    alpha = B.upper_ss_vector()
    if alpha is not None:
        return _gen_on_basis(ring, "U", alpha, A)
    gamma = B.lower_ss_vector()
    if gamma is not None:
        return _gen_on_basis(ring, "L", gamma, A)
    out = _apply_word(ring, monomial_word(B), {A: ring.one})
    for C, h in _monomial_terms(ring, B):
        if C == B:
            continue
        for D, c in _product(ring, C, A):
            _acc(out, D, -h * c, ring.zero)
    return tuple(out.items())


def _check_pair(B: PerMatrix, A: PerMatrix):
    if B.n != A.n:
        raise ValueError("size mismatch")
    if not (B.in_theta_tilde() and A.in_theta_tilde()):
        raise ValueError("off-diagonal entries must be nonnegative")


def stab_mul(B: PerMatrix, A: PerMatrix) -> StabElem:
    """The stabilized product of the basis symbols B and A (zero unless co(B) = ro(A))."""
    _check_pair(B, A)
    return StabElem(A.n, dict(_product(_W, B, A)))


def stab_mul_transposed(B: PerMatrix, A: PerMatrix) -> StabElem:
    """B * A computed as the transpose of tA * tB, which expands A instead of B."""
    _check_pair(B, A)
    prod = _product(_W, A.transpose(), B.transpose())
    return StabElem(A.n, {C.transpose(): c for C, c in prod})


def k_mul(B: PerMatrix, A: PerMatrix) -> KElem:
    """The product of basis symbols after specializing w -> 1."""
    _check_pair(B, A)
    return KElem(A.n, dict(_product(_K, B, A)))


# ---------------------------------------------------------------------------
# comparison with the Schur algebras
# ---------------------------------------------------------------------------


def p_start(B: PerMatrix, A: PerMatrix, result: StabElem | None = None) -> int:
    """One more than the smallest p making every diagonal entry involved nonnegative."""
    mats = [B, A] + list((result or stab_mul(B, A)).terms)
    low = min(min(M.diag_vec()) for M in mats)
    return max(0, -low) + 1


def check_stabilization(B: PerMatrix, A: PerMatrix, count: int = 3) -> list:
    """Compare the stabilized product with Schur products at p = p_0, ..., p_0 + count - 1.

    Returns a list of (p, r, agrees).
    """
    res = stab_mul(B, A)
    p0 = p_start(B, A, res)
    out = []
    for p in range(p0, p0 + count):
        r = A.level() + p * A.n
        Bp, Ap = B.add_identity(p), A.add_identity(p)
        expected = {C: c for C, c in basis_product(Bp, Ap).items() if c}
        spec = res.specialize(p)
        got = {} if spec is None else dict(spec.terms)
        out.append((p, r, got == expected))
    return out


def zeta_dot_r(x: KElem, r: int) -> SchurElem:
    """Keep the nonnegative matrices of level r."""
    return SchurElem(x.n, r, {A: c for A, c in x.terms.items() if A.in_theta() and A.level() == r})


def tau_dot(x: _Elem) -> _Elem:
    return x._new({A.transpose(): c for A, c in x.terms.items()})


# ---------------------------------------------------------------------------
# monomials, bar involution and canonical basis
# ---------------------------------------------------------------------------


def monomial_K(A: PerMatrix) -> KElem:
    if not A.in_theta_tilde():
        raise ValueError("off-diagonal entries must be nonnegative")
    return KElem(A.n, dict(_monomial_terms(_K, A)))


@functools.lru_cache(maxsize=100000)
def _monomial_inverse(A: PerMatrix) -> tuple:
    out = {A: ONE}
    for C, h in _monomial_terms(_K, A):
        if C == A:
            continue
        for B, c in _monomial_inverse(C):
            _acc(out, B, -h * c, ZERO)
    return tuple(out.items())


@functools.lru_cache(maxsize=100000)
def _bar_basis(A: PerMatrix) -> tuple:
    out: dict = {}
    for B, c in _monomial_inverse(A):
        cb = c.bar()
        for C, m in _monomial_terms(_K, B):
            _acc(out, C, cb * m, ZERO)
    return tuple(out.items())


def bar_basis_K(A: PerMatrix) -> dict:
    return dict(_bar_basis(A))


def bar_K(x: KElem) -> KElem:
    acc: dict = {}
    for A, a in x.terms.items():
        ab = a.bar()
        for C, c in _bar_basis(A):
            _acc(acc, C, ab * c, ZERO)
    return KElem(x.n, acc)


@functools.lru_cache(maxsize=100000)
def _canonical(A: PerMatrix) -> tuple:
    return tuple(lusztig_solve(A, interval(A), bar_basis_K).items())


def canonical_K(A: PerMatrix) -> KElem:
    """The bar-invariant element with leading symbol A and lower coefficients in v^{-1}Z[v^{-1}]."""
    if not A.in_theta_tilde():
        raise ValueError("off-diagonal entries must be nonnegative")
    return KElem(A.n, dict(_canonical(A)))


# ---------------------------------------------------------------------------
# action of the loop algebra
# ---------------------------------------------------------------------------


def _symbol_on(A: PerMatrix, j: tuple, lam: tuple, C: PerMatrix, side: str) -> dict:
    """A(j, lam) * [C] (side 'left') or [C] * A(j, lam) (side 'right')."""
    if side == "left":
        mu = tuple(x - y for x, y in zip(C.ro(), A.co()))
    else:
        mu = tuple(x - y for x, y in zip(C.co(), A.ro()))
    c = gauss_vec(mu, lam)
    if not c:
        return {}
    c = c.shift(dot(mu, j))
    X = A + PerMatrix.diag(mu)
    if not X.in_theta_tilde():
        return {}
    prod = _product(_K, X, C) if side == "left" else _product(_K, C, X)
    return {D: c * d for D, d in prod}


def bimodule_act(x, k: KElem, side: str = "left") -> KElem:
    """Action of a loop algebra element (a VElem) on a KElem from the given side."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    acc: dict = {}
    for (A, j, lam), a in x.terms.items():
        for C, c in k.terms.items():
            for D, d in _symbol_on(A, j, lam, C, side).items():
                _acc(acc, D, a * c * d, ZERO)
    return KElem(k.n, acc)
