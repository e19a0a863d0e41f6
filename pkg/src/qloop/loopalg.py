"""The integral loop algebra realized by the symbols A(j, lambda).

A(j, lambda) stands for the family over all levels r of
sum_mu v^{mu.j} [mu over lambda] [A + diag(mu)], with A off-diagonal.
Elements are kept in the normal form where every j_i is 0 or 1.
"""

from __future__ import annotations

import functools
import itertools
from typing import Mapping, Sequence

from . import _tsum
from .afmat import PerMatrix
from .coeff import (ONE, ZERO, LaurentPoly, V_MINUS_VINV, dot, gauss, gauss_multi,
                    gauss_vec, vec_add, vec_sub)
from .hall import radical_word
from .schur import SchurElem, _monomial_terms, elem_Ajlr

__all__ = [
    "VElem",
    "normal_form",
    "generator_word",
    "act_gen",
    "apply_word",
    "gen_decompose",
    "evaluate",
    "mul",
    "truncate",
    "surjectivity_witness",
]

# Generator tokens:
#   ("K", i)          0(e_i)
#   ("D", i, t)       0(0, t e_i)
#   ("Z", jv, lam)    0(j, lambda) for arbitrary j in Z^n
#   ("S", alpha)      S_alpha(0)
#   ("T", alpha)      the transpose of S_alpha, evaluated at 0


def _zero_vec(n: int) -> tuple:
    return (0,) * n


class VElem:
    """A finite combination of normal-form symbols A(j, lambda)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, LaurentPoly] | None = None, *, raw: bool = False):
        self.n = n
        acc: dict = {}
        for key, c in (terms or {}).items():
            c = LaurentPoly.coerce(c)
            if not c:
                continue
            A, j, lam = key
            if not A.in_theta_tilde():
                continue
            if not A.in_theta_pm():
                raise ValueError(f"{A!r} has a nonzero diagonal")
            if raw:
                _add(acc, (A, tuple(j), tuple(lam)), c)
            else:
                for (j2, lam2), d in _normal_vec(tuple(j), tuple(lam)):
                    _add(acc, (A, j2, lam2), c * d)
        self.terms = acc

    @classmethod
    def symbol(cls, A: PerMatrix, j: Sequence[int] | None = None, lam: Sequence[int] | None = None,
               c=ONE) -> VElem:
        n = A.n
        return cls(n, {(A, tuple(j or _zero_vec(n)), tuple(lam or _zero_vec(n))): c})

    @classmethod
    def one(cls, n: int) -> VElem:
        return cls.symbol(PerMatrix.zero(n))

    def __add__(self, other: VElem) -> VElem:
        t = dict(self.terms)
        for k, c in other.terms.items():
            _add(t, k, c)
        return VElem(self.n, t, raw=True)

    def __neg__(self) -> VElem:
        return VElem(self.n, {k: -c for k, c in self.terms.items()}, raw=True)

    def __sub__(self, other: VElem) -> VElem:
        return self + (-other)

    def scale(self, c) -> VElem:
        c = LaurentPoly.coerce(c)
        return VElem(self.n, {k: c * x for k, x in self.terms.items()}, raw=True)

    def __mul__(self, other: VElem) -> VElem:
        return mul(self, other)

    def __eq__(self, other):
        if isinstance(other, VElem):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, A: PerMatrix, j: Sequence[int], lam: Sequence[int]) -> LaurentPoly:
        return self.terms.get((A, tuple(j), tuple(lam)), ZERO)

    def items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1], kv[0][2]))

    def __repr__(self):
        body = " + ".join(f"({c}){A.items()}({list(j)},{list(lam)})" for (A, j, lam), c in self.items())
        return f"VElem(n={self.n}: {body or '0'})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [[A.to_json()["entries"], list(j), list(lam), c.to_json()]
                      for (A, j, lam), c in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> VElem:
        n = data["n"]
        terms = {}
        for ent, j, lam, c in data["terms"]:
            A = PerMatrix.from_json({"n": n, "entries": ent})
            terms[(A, tuple(j), tuple(lam))] = LaurentPoly.from_json(c)
        return cls(n, terms)


def _add(acc: dict, key, c: LaurentPoly):
    s = acc.get(key, ZERO) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _normal_1(j: int, lam: int) -> tuple:
    """The function m -> v^{mj}[m over lam] as a combination of those with j in {0, 1}.

    Uses v^{mj}[m over lam] = v^{2 lam} v^{m(j-2)}[m over lam]
    + (v - v^{-1}) v^{lam} [lam+1] v^{m(j-1)}[m over lam+1].
    """
    if j in (0, 1):
        return (((j, lam), ONE),)
    step = V_MINUS_VINV * gauss(lam + 1, 1).shift(lam)
    acc: dict = {}
    if j >= 2:
        parts = [((j - 2, lam), LaurentPoly.monomial(2 * lam)), ((j - 1, lam + 1), step)]
    else:
        inv = LaurentPoly.monomial(-2 * lam)
        parts = [((j + 2, lam), inv), ((j + 1, lam + 1), -(inv * step))]
    for (j2, l2), c in parts:
        for key, d in _normal_1(j2, l2):
            _add(acc, key, c * d)
    return tuple(acc.items())


@functools.lru_cache(maxsize=None)
def _normal_vec(j: tuple, lam: tuple) -> tuple:
    if all(x in (0, 1) for x in j) and min(lam, default=0) >= 0:
        return (((j, lam), ONE),)
    if min(lam) < 0:
        raise ValueError("lambda must be nonnegative")
    acc: dict = {}
    for combo in itertools.product(*(_normal_1(a, b) for a, b in zip(j, lam))):
        c = ONE
        for _, d in combo:
            c = c * d
        _add(acc, (tuple(k[0] for k, _ in combo), tuple(k[1] for k, _ in combo)), c)
    return tuple(acc.items())


def normal_form(x: VElem) -> VElem:
    """Rewrite every symbol so that each j_i lies in {0, 1}."""
    return VElem(x.n, x.terms)


# ---------------------------------------------------------------------------
# generator actions
# ---------------------------------------------------------------------------


def _f_upper(T: PerMatrix, A: PerMatrix, jv: tuple) -> int:
    total = 0
    for i in range(1, A.n + 1):
        Ti, Tm, Tn = T.row(i), T.row(i - 1), T.row(i + 1)
        Ai, An = A.row(i), A.row(i + 1)
        for l, t in Ti.items():
            total += t * sum(a for j, a in Ai.items() if j >= l and j != i)
            total -= t * sum(a for j, a in An.items() if j > l and j != i + 1)
            total -= t * sum(s for j, s in Tm.items() if j >= l and j != i)
            total += t * sum(s for j, s in Ti.items() if j > l and j != i and j != i + 1)
        total += sum(s for j, s in Ti.items() if j < i + 1) * Tn.get(i + 1, 0)
        total += jv[i - 1] * (Tm.get(i, 0) - Ti.get(i, 0))
    return total


def _f_lower(T: PerMatrix, A: PerMatrix, jv: tuple) -> int:
    total = 0
    for i in range(1, A.n + 1):
        Ti, Tm = T.row(i), T.row(i - 1)
        Ai = A.row(i)
        for j, a in Ai.items():
            if j == i:
                continue
            total += a * sum(s for l, s in Tm.items() if l >= j)
            total -= a * sum(s for l, s in Ti.items() if l > j)
        for l, t in Ti.items():
            if l != i:
                total -= t * sum(s for j, s in Tm.items() if j >= l)
            if l != i and l != i + 1:
                total += t * sum(s for j, s in Ti.items() if j > l)
        total += sum(s for j, s in Ti.items() if j > i) * Tm.get(i, 0)
        total += jv[i - 1] * (Ti.get(i, 0) - Tm.get(i, 0))
    return total


def _offdiag(M: PerMatrix) -> PerMatrix:
    return M.offdiag()


def _vec_range(upper: tuple):
    return itertools.product(*(range(u + 1) for u in upper))


@functools.lru_cache(maxsize=None)
def _act_zero(jp: tuple, mu: tuple, A: PerMatrix, j: tuple, lam: tuple) -> tuple:
    """0(j', mu) A(j, lambda) as unnormalized terms."""
    ro = A.ro()
    acc: dict = {}
    for nu in _vec_range(mu):
        a_nu = ZERO
        lo = tuple(max(0, x - y) for x, y in zip(nu, lam))
        for jpp in itertools.product(*(range(l, u + 1) for l, u in zip(lo, nu))):
            e = dot(ro, vec_sub(vec_add(jp, mu), jpp)) + dot(lam, vec_sub(mu, jpp))
            top = vec_sub(vec_add(lam, mu), nu)
            parts = [vec_sub(nu, jpp), vec_add(vec_sub(lam, nu), jpp), vec_sub(mu, nu)]
            c = gauss_vec(ro, jpp) * gauss_multi(top, parts)
            if c:
                a_nu = a_nu + c.shift(e)
        if a_nu:
            key = (A, vec_sub(vec_add(jp, j), nu), vec_sub(vec_add(lam, mu), nu))
            _add(acc, key, a_nu)
    return tuple(acc.items())


@functools.lru_cache(maxsize=None)
def _act_upper(alpha: tuple, A: PerMatrix, j: tuple, lam: tuple) -> tuple:
    """S_alpha(0) A(j, lambda) as unnormalized terms."""
    n = A.n
    acc: dict = {}
    for T in _tsum.upper_T(A, alpha, True):
        Tt = T.shift_rows()
        target = A + _offdiag(T) - _offdiag(Tt)
        if not target.in_theta_tilde():
            continue
        br = _tsum.upper_brackets(T, A, False)
        if not br:
            continue
        dT, dTt = T.diag_vec(), Tt.diag_vec()
        fT = _f_upper(T, A, j)
        jT = list(j)
        for i in range(1, n + 1):
            jT[i - 1] += sum(t for c, t in T.row(i).items() if c < i)
            jT[i - 1] -= sum(t for c, t in T.row(i - 1).items() if c < i)
        jT = tuple(jT)
        weight = vec_sub(tuple(2 * x for x in dT), dTt)
        for beta in _vec_range(dT):
            rest = vec_sub(lam, beta)
            if min(rest) < 0:
                continue
            for eta in _vec_range(rest):
                k = vec_sub(rest, eta)
                c = gauss_vec(vec_sub(dTt, dT), k)
                if not c:
                    continue
                c = c * gauss_multi(vec_add(dT, eta), [beta, vec_sub(dT, beta), eta])
                if not c:
                    continue
                e = fT + dot(vec_add(eta, beta), weight)
                jn = tuple(a + b - c2 - 2 * d for a, b, c2, d in zip(jT, lam, eta, beta))
                _add(acc, (target, jn, vec_add(dT, eta)), (c * br).shift(e))
    return tuple(acc.items())


@functools.lru_cache(maxsize=None)
def _act_lower(alpha: tuple, A: PerMatrix, j: tuple, lam: tuple) -> tuple:
    """(transpose of S_alpha)(0) A(j, lambda) as unnormalized terms."""
    n = A.n
    acc: dict = {}
    for T in _tsum.lower_T(A, alpha, True):
        Tt = T.shift_rows()
        target = A - _offdiag(T) + _offdiag(Tt)
        if not target.in_theta_tilde():
            continue
        br = _tsum.lower_brackets(T, A, False)
        if not br:
            continue
        dT, dTt = T.diag_vec(), Tt.diag_vec()
        fT = _f_lower(T, A, j)
        jT = list(j)
        for i in range(1, n + 1):
            jT[i - 1] += sum(t for c, t in T.row(i - 1).items() if c > i)
            jT[i - 1] -= sum(t for c, t in T.row(i).items() if c > i)
        jT = tuple(jT)
        weight = vec_sub(tuple(2 * x for x in dTt), dT)
        for beta in _vec_range(dTt):
            rest = vec_sub(lam, beta)
            if min(rest) < 0:
                continue
            for eta in _vec_range(rest):
                k = vec_sub(rest, eta)
                c = gauss_vec(vec_sub(dT, dTt), k)
                if not c:
                    continue
                c = c * gauss_multi(vec_add(dTt, eta), [beta, vec_sub(dTt, beta), eta])
                if not c:
                    continue
                e = fT + dot(vec_add(eta, beta), weight)
                jn = tuple(a + b - c2 - 2 * d for a, b, c2, d in zip(jT, lam, eta, beta))
                _add(acc, (target, jn, vec_add(dTt, eta)), (c * br).shift(e))
    return tuple(acc.items())


def _token_terms(token: tuple, key: tuple) -> tuple:
    A, j, lam = key
    n = A.n
    kind = token[0]
    if kind == "K":
        jp = tuple(1 if k == token[1] - 1 else 0 for k in range(n))
        return _act_zero(jp, _zero_vec(n), A, j, lam)
    if kind == "D":
        mu = tuple(token[2] if k == token[1] - 1 else 0 for k in range(n))
        return _act_zero(_zero_vec(n), mu, A, j, lam)
    if kind == "Z":
        return _act_zero(tuple(token[1]), tuple(token[2]), A, j, lam)
    if kind == "S":
        return _act_upper(tuple(token[1]), A, j, lam)
    if kind == "T":
        return _act_lower(tuple(token[1]), A, j, lam)
    raise ValueError(f"unknown generator {token!r}")


def act_gen(token: tuple, x: VElem) -> VElem:
    """Left multiplication of x by one generator."""
    acc: dict = {}
    for key, c in x.terms.items():
        for k2, d in _token_terms(token, key):
            _add(acc, k2, c * d)
    return VElem(x.n, acc)


def apply_word(word: Sequence[tuple], x: VElem) -> VElem:
    """Multiply x on the left by the product of the word (rightmost letter first)."""
    for token in reversed(word):
        x = act_gen(token, x)
        if not x:
            break
    return x


# ---------------------------------------------------------------------------
# decomposition into generators
# ---------------------------------------------------------------------------


def zero_part_word(j: Sequence[int], lam: Sequence[int]) -> tuple:
    """0(j, lambda) for j in N^n as a product of 0(e_i) and 0(0, t e_i)."""
    word = []
    for i, (a, b) in enumerate(zip(j, lam), start=1):
        if a < 0:
            raise ValueError("j must be nonnegative")
        word.extend([("K", i)] * a)
        if b:
            word.append(("D", i, b))
    return tuple(word)


def generator_word(A: PerMatrix) -> tuple:
    """The word m^+ m^- built from the radical words of the two halves of A."""
    up = radical_word(A.upper())
    low = radical_word(A.lower().transpose())
    return tuple([("S", a) for a in up] + [("T", c) for c in reversed(low)])


@functools.lru_cache(maxsize=None)
def _shift_coeffs(c: int, j: int, lam: int) -> tuple:
    """v^{(m-c)j}[m-c over lam] as a normal combination of v^{m j'}[m over lam']."""
    acc: dict = {}
    for d in range(lam + 1):
        coeff = gauss(-c, lam - d).shift(-c * j + d * c)
        if not coeff:
            continue
        for key, x in _normal_1(j + lam - d, d):
            _add(acc, key, coeff * x)
    return tuple(acc.items())


def _add_expr(acc: dict, expr: Mapping, c: LaurentPoly, prefix: tuple = ()):
    for w, d in expr.items():
        _add(acc, prefix + w, c * d)


@functools.lru_cache(maxsize=None)
def _decompose(A: PerMatrix, j: tuple, lam: tuple) -> tuple:
    n = A.n
    if A == PerMatrix.zero(n):
        return ((zero_part_word(j, lam), ONE),)
    acc: dict = {}
    if any(j) or any(lam):
        # A(j, lambda) = h A(0) with h(m) = v^{(m-ro)j}[m-ro over lambda]
        ro = A.ro()
        base = dict(_decompose(A, _zero_vec(n), _zero_vec(n)))
        per = [_shift_coeffs(ro[i], j[i], lam[i]) for i in range(n)]
        for combo in itertools.product(*per):
            c = ONE
            for _, d in combo:
                c = c * d
            jj = tuple(k[0] for k, _ in combo)
            ll = tuple(k[1] for k, _ in combo)
            _add_expr(acc, base, c, zero_part_word(jj, ll))
        return tuple(acc.items())
    word = generator_word(A)
    prod = apply_word(word, VElem.one(n))
    if prod.coeff(A, j, lam) != ONE:
        raise ArithmeticError(f"generator word of {A!r} has leading coefficient {prod.coeff(A, j, lam)}")
    acc[word] = ONE
    for (B, jb, lb), c in prod.terms.items():
        if (B, jb, lb) == (A, j, lam):
            continue
        if not B.norm() < A.norm():
            raise ArithmeticError(f"generator word of {A!r} produces {B!r}, which is not lower")
        _add_expr(acc, dict(_decompose(B, jb, lb)), -c)
    return tuple(acc.items())


def gen_decompose(A: PerMatrix, j: Sequence[int] | None = None, lam: Sequence[int] | None = None) -> dict:
    """{word: coefficient} whose evaluation is the normal-form symbol A(j, lambda)."""
    n = A.n
    j = tuple(j or _zero_vec(n))
    lam = tuple(lam or _zero_vec(n))
    if not A.in_theta_pm():
        raise ValueError("A must have zero diagonal and nonnegative entries")
    if any(x not in (0, 1) for x in j) or min(lam) < 0:
        raise ValueError("(j, lambda) must be in normal form")
    return dict(_decompose(A, j, lam))


def evaluate(expr: Mapping[tuple, LaurentPoly], n: int, x: VElem | None = None) -> VElem:
    """Evaluate a combination of words applied to x (default: the identity)."""
    if x is None:
        x = VElem.one(n)
    out = VElem(n)
    for word, c in expr.items():
        out = out + apply_word(word, x).scale(c)
    return out


def mul(x: VElem, y: VElem) -> VElem:
    """Product in the loop algebra; coefficients stay in Z[v, v^{-1}] by construction."""
    if x.n != y.n:
        raise ValueError("different n")
    out = VElem(x.n)
    for (A, j, lam), c in x.terms.items():
        out = out + evaluate(gen_decompose(A, j, lam), x.n, y).scale(c)
    return out


def truncate(x: VElem, r: int) -> SchurElem:
    """The level-r component: A(j, lambda) -> A(j, lambda, r)."""
    out = SchurElem.zero(x.n, r)
    for (A, j, lam), c in x.terms.items():
        out = out + elem_Ajlr(A, j, lam, r).scale(c)
    return out


# ---------------------------------------------------------------------------
# surjectivity onto level r
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _witness(A: PerMatrix) -> tuple:
    n = A.n
    diag = VElem.symbol(PerMatrix.zero(n), _zero_vec(n), A.bsigma())
    up = [("S", a) for a in radical_word(A.upper())]
    low = [("T", c) for c in reversed(radical_word(A.lower().transpose()))]
    x = apply_word(low, VElem.one(n))
    x = mul(diag, x)
    x = apply_word(up, x)
    acc = dict(x.terms)
    for B, h in _monomial_terms(A):
        if B == A:
            continue
        for key, c in _witness(B):
            _add(acc, key, -h * c)
    return tuple(acc.items())


def surjectivity_witness(A: PerMatrix) -> VElem:
    """An integral element of the loop algebra whose level-sigma(A) truncation is [A]."""
    if not A.in_theta():
        raise ValueError("A must be nonnegative")
    return VElem(A.n, dict(_witness(A)), raw=True)

