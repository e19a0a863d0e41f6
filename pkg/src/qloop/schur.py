"""Affine quantum Schur algebras with the normalized standard basis [A] = v^{-d_A} e_A.

Elements are finite sums of nonnegative periodic matrices of a fixed level.
Products by the semisimple generators use closed formulas.  General products,
the bar involution and the canonical basis go through the monomial basis.
"""

from __future__ import annotations

import functools
from typing import Mapping, Sequence

from . import _tsum
from .afmat import PerMatrix, compositions, d_exponent, interval, sqsubseteq
from .coeff import ONE, ZERO, LaurentPoly, dot, gauss_vec
from .hall import radical_word
from .lusztig import lusztig_solve

__all__ = [
    "SchurElem",
    "d_A",
    "mul_left_upper",
    "mul_left_lower",
    "mul_left_diag",
    "basis_product",
    "elem_Ajr",
    "elem_Ajlr",
    "zeta_r",
    "monomial_word",
    "monomial",
    "bar_schur",
    "bar_basis",
    "canonical_r",
    "tau_r",
    "semisimple_element",
    "apply_word",
]

d_A = d_exponent


class SchurElem:
    """A finite sum of basis symbols [A] at a fixed level with Laurent coefficients."""

    __slots__ = ("n", "r", "terms")

    def __init__(self, n: int, r: int, terms: Mapping[PerMatrix, LaurentPoly] | None = None):
        self.n = n
        self.r = r
        t = {}
        for A, c in (terms or {}).items():
            c = LaurentPoly.coerce(c)
            if not c or not A.in_theta():
                continue
            if A.level() != r or A.n != n:
                raise ValueError(f"{A!r} is not a level-{r} matrix with n={n}")
            t[A] = c
        self.terms = t

    @classmethod
    def basis(cls, A: PerMatrix, c=ONE) -> SchurElem:
        return cls(A.n, A.level(), {A: c})

    @classmethod
    def zero(cls, n: int, r: int) -> SchurElem:
        return cls(n, r)

    @classmethod
    def identity(cls, n: int, r: int) -> SchurElem:
        return cls(n, r, {PerMatrix.diag(mu): ONE for mu in compositions(r, n)})

    def _check(self, other: SchurElem):
        if (self.n, self.r) != (other.n, other.r):
            raise ValueError("elements live in different Schur algebras")

    def __add__(self, other: SchurElem) -> SchurElem:
        self._check(other)
        t = dict(self.terms)
        for A, c in other.terms.items():
            t[A] = t.get(A, ZERO) + c
        return SchurElem(self.n, self.r, t)

    def __neg__(self) -> SchurElem:
        return SchurElem(self.n, self.r, {A: -c for A, c in self.terms.items()})

    def __sub__(self, other: SchurElem) -> SchurElem:
        return self + (-other)

    def scale(self, c) -> SchurElem:
        c = LaurentPoly.coerce(c)
        return SchurElem(self.n, self.r, {A: c * x for A, x in self.terms.items()})

    def __mul__(self, other: SchurElem) -> SchurElem:
        self._check(other)
        acc: dict = {}
        for B, b in self.terms.items():
            for A, a in other.terms.items():
                for C, c in basis_product(B, A).items():
                    acc[C] = acc.get(C, ZERO) + b * a * c
        return SchurElem(self.n, self.r, acc)

    def __eq__(self, other):
        if isinstance(other, SchurElem):
            return (self.n, self.r, self.terms) == (other.n, other.r, other.terms)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, A: PerMatrix) -> LaurentPoly:
        return self.terms.get(A, ZERO)

    def items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        body = " + ".join(f"({c})[{A.items()}]" for A, c in self.items())
        return f"SchurElem(n={self.n}, r={self.r}: {body or '0'})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "terms": [[A.to_json()["entries"], c.to_json()] for A, c in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> SchurElem:
        n, r = data["n"], data["r"]
        terms = {}
        for ent, c in data["terms"]:
            terms[PerMatrix.from_json({"n": n, "entries": ent})] = LaurentPoly.from_json(c)
        return cls(n, r, terms)


def _acc(out: dict, C: PerMatrix, c: LaurentPoly):
    s = out.get(C, ZERO) + c
    if s:
        out[C] = s
    else:
        out.pop(C, None)


# ---------------------------------------------------------------------------
# generator products
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=200000)
def _upper_on_basis(alpha: tuple, A: PerMatrix) -> tuple:
    out: dict = {}
    for T in _tsum.upper_T(A, alpha, False):
        C = _tsum.upper_result(A, T)
        if not C.in_theta():
            continue
        c = _tsum.upper_brackets(T, A, True)
        if c:
            _acc(out, C, c.shift(_tsum.beta_upper(T, A)))
    return tuple(out.items())


@functools.lru_cache(maxsize=200000)
def _lower_on_basis(gamma: tuple, A: PerMatrix) -> tuple:
    out: dict = {}
    for T in _tsum.lower_T(A, gamma, False):
        C = _tsum.lower_result(A, T)
        if not C.in_theta():
            continue
        c = _tsum.lower_brackets(T, A, True)
        if c:
            _acc(out, C, c.shift(_tsum.beta_lower(T, A)))
    return tuple(out.items())


def _upper_generator(alpha: Sequence[int], A: PerMatrix) -> PerMatrix | None:
    """The generator-shaped matrix with upper layer alpha and column sums ro(A)."""
    n = A.n
    ro = A.ro()
    diag = tuple(ro[j] - alpha[j - 1] for j in range(n))
    if min(diag) < 0:
        return None
    return PerMatrix.upper_ss(alpha) + PerMatrix.diag(diag)


def _lower_generator(gamma: Sequence[int], A: PerMatrix) -> PerMatrix | None:
    ro = A.ro()
    diag = tuple(ro[j] - gamma[j] for j in range(A.n))
    if min(diag) < 0:
        return None
    return PerMatrix.lower_ss(gamma) + PerMatrix.diag(diag)


def _map_terms(x: SchurElem, fn) -> SchurElem:
    acc: dict = {}
    for A, a in x.terms.items():
        for C, c in fn(A):
            _acc(acc, C, a * c)
    return SchurElem(x.n, x.r, acc)


def mul_left_upper(B: PerMatrix, x: SchurElem) -> SchurElem:
    """[B] x for B = diagonal + sum alpha_i E_{i,i+1}."""
    alpha = B.upper_ss_vector()
    if alpha is None or not B.in_theta():
        raise ValueError("B must be a nonnegative diagonal plus one upper layer")
    co = B.co()
    return _map_terms(x, lambda A: _upper_on_basis(alpha, A) if A.ro() == co else ())


def mul_left_lower(C: PerMatrix, x: SchurElem) -> SchurElem:
    """[C] x for C = diagonal + sum gamma_i E_{i+1,i}."""
    gamma = C.lower_ss_vector()
    if gamma is None or not C.in_theta():
        raise ValueError("C must be a nonnegative diagonal plus one lower layer")
    co = C.co()
    return _map_terms(x, lambda A: _lower_on_basis(gamma, A) if A.ro() == co else ())


def mul_left_diag(lam: Sequence[int], x: SchurElem) -> SchurElem:
    lam = tuple(lam)
    return SchurElem(x.n, x.r, {A: c for A, c in x.terms.items() if A.ro() == lam})


def _apply_factor(factor: tuple, x: SchurElem) -> SchurElem:
    """Left multiplication by S_alpha(0, r), its transpose, or the idempotent [diag lam]."""
    kind, vec = factor
    if kind == "D":
        return mul_left_diag(vec, x)
    if kind == "U":
        return _map_terms(x, lambda A: _upper_on_basis(vec, A) if _upper_generator(vec, A) else ())
    return _map_terms(x, lambda A: _lower_on_basis(vec, A) if _lower_generator(vec, A) else ())


def apply_word(word: Sequence[tuple], x: SchurElem) -> SchurElem:
    for factor in reversed(word):
        x = _apply_factor(factor, x)
        if not x:
            break
    return x


# ---------------------------------------------------------------------------
# A(j, r) and A(j, lambda, r)
# ---------------------------------------------------------------------------


def elem_Ajr(A: PerMatrix, j: Sequence[int], r: int) -> SchurElem:
    """sum_mu v^{mu.j} [A + diag(mu)] over mu of total r - level(A)."""
    return elem_Ajlr(A, j, (0,) * A.n, r)


def elem_Ajlr(A: PerMatrix, j: Sequence[int], lam: Sequence[int], r: int) -> SchurElem:
    """sum_mu v^{mu.j} [mu over lam] [A + diag(mu)] over mu of total r - level(A)."""
    if not A.in_theta_pm():
        raise ValueError("A must have zero diagonal and nonnegative entries")
    n = A.n
    s = r - A.level()
    if s < 0:
        return SchurElem.zero(n, r)
    terms = {}
    for mu in compositions(s, n):
        c = gauss_vec(mu, lam)
        if c:
            terms[A + PerMatrix.diag(mu)] = c.shift(dot(mu, j))
    return SchurElem(n, r, terms)


def zeta_r(x, sign: str, r: int) -> SchurElem:
    """Image of a Hall algebra element (tight basis) in level r, on the + or - side."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    out = SchurElem.zero(x.n, r)
    for A, c in x.terms.items():
        M = A if sign == "+" else A.transpose()
        out = out + elem_Ajr(M, (0,) * x.n, r).scale(c)
    return out


# ---------------------------------------------------------------------------
# monomial basis
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=100000)
def monomial_word(A: PerMatrix) -> tuple:
    """Factors of m^(A), leftmost first: upper layers, the idempotent, then lower layers."""
    up = radical_word(A.upper())
    low = radical_word(A.lower().transpose())
    word = [("U", a) for a in up]
    word.append(("D", A.bsigma()))
    word.extend(("L", c) for c in reversed(low))
    return tuple(word)


@functools.lru_cache(maxsize=100000)
def _monomial_terms(A: PerMatrix) -> tuple:
    x = apply_word(monomial_word(A), SchurElem.basis(PerMatrix.diag(A.co())))
    if x.coeff(A) != ONE:
        raise ArithmeticError(f"monomial of {A!r} has leading coefficient {x.coeff(A)}")
    for B in x.terms:
        if B != A and not sqsubseteq(B, A):
            raise ArithmeticError(f"monomial of {A!r} contains {B!r}, not below it")
    return tuple(x.terms.items())


def monomial(A: PerMatrix) -> SchurElem:
    if not A.in_theta():
        raise ValueError("monomial needs a nonnegative matrix")
    return SchurElem(A.n, A.level(), dict(_monomial_terms(A)))


@functools.lru_cache(maxsize=100000)
def _monomial_inverse(A: PerMatrix) -> tuple:
    """Coefficients N with [A] = sum_B N_B m^(B)."""
    out = {A: ONE}
    for C, h in _monomial_terms(A):
        if C == A:
            continue
        for B, c in _monomial_inverse(C):
            _acc(out, B, -h * c)
    return tuple(out.items())


# ---------------------------------------------------------------------------
# general products
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=200000)
def _basis_product(B: PerMatrix, A: PerMatrix) -> tuple:
    if B.co() != A.ro():
        return ()
    if B.is_diagonal():
        return ((A, ONE),)
    alpha = B.upper_ss_vector()
    if alpha is not None:
        return _upper_on_basis(alpha, A)
    gamma = B.lower_ss_vector()
    if gamma is not None:
        return _lower_on_basis(gamma, A)
    # [B] = m^(B) - sum_{C below B} h_C [C]
    out = dict(apply_word(monomial_word(B), SchurElem.basis(A)).terms)
    for C, h in _monomial_terms(B):
        if C == B:
            continue
        for D, c in _basis_product(C, A):
            _acc(out, D, -h * c)
    return tuple(out.items())


def basis_product(B: PerMatrix, A: PerMatrix) -> dict:
    """[B][A] in the basis [C]."""
    return dict(_basis_product(B, A))


# ---------------------------------------------------------------------------
# bar involution, canonical basis, transpose
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=100000)
def _bar_basis(A: PerMatrix) -> tuple:
    out: dict = {}
    for B, c in _monomial_inverse(A):
        cb = c.bar()
        for C, m in _monomial_terms(B):
            _acc(out, C, cb * m)
    return tuple(out.items())


def bar_basis(A: PerMatrix) -> dict:
    """bar([A]) in the basis [C]."""
    return dict(_bar_basis(A))


def bar_schur(x: SchurElem) -> SchurElem:
    acc: dict = {}
    for A, a in x.terms.items():
        ab = a.bar()
        for C, c in _bar_basis(A):
            _acc(acc, C, ab * c)
    return SchurElem(x.n, x.r, acc)


@functools.lru_cache(maxsize=100000)
def _canonical(A: PerMatrix) -> tuple:
    below = interval(A, nonneg_diag=True)
    return tuple(lusztig_solve(A, below, bar_basis).items())


def canonical_r(A: PerMatrix) -> SchurElem:
    """The bar-invariant element [A] + sum_{B below A} g_B [B] with g_B in v^{-1}Z[v^{-1}]."""
    if not A.in_theta():
        raise ValueError("canonical_r needs a nonnegative matrix")
    return SchurElem(A.n, A.level(), dict(_canonical(A)))


def tau_r(x: SchurElem) -> SchurElem:
    """The anti-automorphism [A] -> [tA]."""
    return SchurElem(x.n, x.r, {A.transpose(): c for A, c in x.terms.items()})


def semisimple_element(alpha: Sequence[int], r: int, lower: bool = False) -> SchurElem:
    """S_alpha(0, r) or its transpose."""
    M = PerMatrix.lower_ss(alpha) if lower else PerMatrix.upper_ss(alpha)
    return elem_Ajr(M, (0,) * len(alpha), r)

