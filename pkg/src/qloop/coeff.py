"""Exact coefficient arithmetic over Z[v, v^-1] and its two-variable relatives.

Three value types live here:

* :class:`LaurentPoly`, sparse Laurent polynomials in ``v`` with Python ints;
* :class:`TwoVarPoly`, sparse Laurent polynomials in ``v`` and ``w`` where ``w``
  plays the role of the second indeterminate used for stabilization;
* :class:`StabCoeff`, a fraction ``TwoVarPoly / D`` whose denominator ``D`` is a
  product of cyclotomic polynomials in ``v``.  Structure constants of the
  stabilized algebra have denominators of exactly this kind, and reducing by
  irreducible cyclotomic factors gives every value a unique representation.

All values are immutable and hashable.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from typing import Iterable, Mapping, Sequence

__all__ = [
    "LaurentPoly",
    "TwoVarPoly",
    "StabCoeff",
    "V",
    "ONE",
    "ZERO",
    "gauss_sym",
    "gauss",
    "gauss_vec",
    "gauss_multi",
    "sgp_sum_rule",
    "sgp_product_rule",
    "bar",
    "bar2",
    "specialize",
    "cyclotomic",
    "dot",
    "vec_le",
    "vec_add",
    "vec_sub",
]


class LaurentPoly:
    """A Laurent polynomial with integer coefficients.

    >>> p = LaurentPoly({2: 1, 0: 1})
    >>> p
    LaurentPoly('v^2 + 1')
    >>> p.bar()
    LaurentPoly('1 + v^-2')
    >>> (p * p)[2]
    2
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[int, int] | None = None):
        if terms:
            self._t = {e: c for e, c in terms.items() if c}
        else:
            self._t = {}
        self._h = None

    @classmethod
    def _raw(cls, terms: dict) -> LaurentPoly:
        obj = object.__new__(cls)
        obj._t = terms
        obj._h = None
        return obj

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls._raw({0: c} if c else {})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> LaurentPoly:
        return cls._raw({e: c} if c else {})

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def __getitem__(self, e: int) -> int:
        return self._t.get(e, 0)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_one(self) -> bool:
        return self._t == {0: 1}

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def in_negative_part(self) -> bool:
        """True when every exponent is negative, i.e. the value lies in v^-1 Z[v^-1]."""
        return all(e < 0 for e in self._t)

    def evaluate(self, x):
        """Evaluate at a number (an int or Fraction); negative powers need x invertible."""
        return sum(c * x**e for e, c in self._t.items())

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return LaurentPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            return LaurentPoly._raw({e + eb: c * cb for e, c in a.items()})
        t: dict = {}
        get = t.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = ea + eb
                t[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if self.is_monomial():
                (e, c), = self._t.items()
                if c in (1, -1):
                    return LaurentPoly._raw({e * k: c**k if k % 2 else 1})
            raise ValueError("only units have negative powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by v^k."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._t.items()})

    def bar(self) -> LaurentPoly:
        """The ring involution v -> v^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._t.items()})

    def negative_part(self) -> LaurentPoly:
        return LaurentPoly._raw({e: c for e, c in self._t.items() if e < 0})

    def divmod_exact(self, d: LaurentPoly) -> LaurentPoly:
        """Exact quotient self / d in Z[v, v^-1]; raises ArithmeticError otherwise."""
        q, r = self.divmod(d)
        if r:
            raise ArithmeticError(f"{d!r} does not divide {self!r}")
        return q

    def divmod(self, d: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        """Long division by ``d`` after normalizing both sides to ordinary polynomials.

        The leading coefficient of ``d`` must be a unit.  The remainder is zero
        exactly when ``d`` divides ``self`` in the Laurent ring.
        """
        if not d._t:
            raise ZeroDivisionError("division by zero polynomial")
        if not self._t:
            return ZERO, ZERO
        dlo = d.min_exp()
        dd = {e - dlo: c for e, c in d._t.items()}
        ddeg = max(dd)
        lead = dd[ddeg]
        if lead not in (1, -1):
            raise ArithmeticError("divisor leading coefficient must be a unit")
        nlo = self.min_exp()
        rem = {e - nlo: c for e, c in self._t.items()}
        quot: dict = {}
        while rem:
            top = max(rem)
            if top < ddeg:
                break
            c = rem[top] * lead
            k = top - ddeg
            quot[k] = c
            for e, dc in dd.items():
                x = rem.get(e + k, 0) - c * dc
                if x:
                    rem[e + k] = x
                else:
                    rem.pop(e + k, None)
        shift = nlo - dlo
        return (
            LaurentPoly._raw({e + shift: c for e, c in quot.items()}),
            LaurentPoly._raw({e + nlo: c for e, c in rem.items()}),
        )

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e, c in sorted(self._t.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "v"
            else:
                mono = f"v^{e}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"LaurentPoly('{self}')"

    def to_json(self) -> list:
        return [[e, str(c)] for e, c in sorted(self._t.items())]

    @classmethod
    def from_json(cls, data: Sequence) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in data})


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
V = LaurentPoly._raw({1: 1})
V_MINUS_VINV = LaurentPoly._raw({1: 1, -1: -1})


def bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


# ---------------------------------------------------------------------------
# Gaussian binomials
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def gauss_sym(N: int, t: int) -> LaurentPoly:
    """The symmetric-style Gaussian binomial prod_{i<=t} (v^{2(N-i+1)}-1)/(v^{2i}-1).

    >>> gauss_sym(2, 1)
    LaurentPoly('v^2 + 1')
    >>> gauss_sym(-1, 1)
    LaurentPoly('-v^-2')
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return ONE
    prev = gauss_sym(N, t - 1)
    num = prev * (LaurentPoly.monomial(2 * (N - t + 1)) - ONE)
    return num.divmod_exact(LaurentPoly({2 * t: 1, 0: -1}))


@functools.lru_cache(maxsize=None)
def gauss(N: int, t: int) -> LaurentPoly:
    """The balanced Gaussian binomial v^{-t(N-t)} * gauss_sym(N, t).

    >>> gauss(2, 1)
    LaurentPoly('v + v^-1')
    >>> gauss(1, 2)
    LaurentPoly('0')
    """
    return gauss_sym(N, t).shift(-t * (N - t))


def gauss_vec(mu: Sequence[int], lam: Sequence[int]) -> LaurentPoly:
    """Componentwise product of balanced Gaussian binomials."""
    if len(mu) != len(lam):
        raise ValueError("length mismatch")
    out = ONE
    for m, l in zip(mu, lam):
        if l:
            out = out * gauss(m, l)
            if not out:
                return ZERO
    return out


def gauss_multi(top: Sequence[int], parts: Iterable[Sequence[int]]) -> LaurentPoly:
    """Iterated-binomial multinomial [top over p_1, p_2, ...].

    The parts must sum to ``top``; the value is
    gauss_vec(top, p_1) * gauss_vec(top - p_1, p_2) * ...
    """
    parts = [tuple(p) for p in parts]
    rest = tuple(top)
    total = tuple(sum(col) for col in zip(*parts)) if parts else tuple(0 for _ in rest)
    if total != rest:
        raise ValueError(f"parts {parts} do not sum to {tuple(top)}")
    out = ONE
    for p in parts:
        out = out * gauss_vec(rest, p)
        if not out:
            return ZERO
        rest = vec_sub(rest, p)
    return out


def _vectors_below(lam: Sequence[int]):
    return itertools.product(*(range(x + 1) for x in lam))


def sgp_sum_rule(alpha: Sequence[int], beta: Sequence[int], lam: Sequence[int]) -> tuple:
    """Both sides of [alpha+beta over lam] = sum_mu v^{alpha.(lam-mu) - mu.beta} [alpha over mu][beta over lam-mu]."""
    lhs = gauss_vec(vec_add(alpha, beta), lam)
    rhs = ZERO
    for mu in _vectors_below(lam):
        rest = vec_sub(lam, mu)
        term = gauss_vec(alpha, mu) * gauss_vec(beta, rest)
        if term:
            rhs = rhs + term.shift(dot(alpha, rest) - dot(mu, beta))
    return lhs, rhs


def sgp_product_rule(alpha: Sequence[int], lam: Sequence[int], mu: Sequence[int]) -> tuple:
    """Both sides of [alpha over lam][alpha over mu] as a sum over gamma <= lam, mu of multinomials."""
    lhs = gauss_vec(alpha, lam) * gauss_vec(alpha, mu)
    rhs = ZERO
    for gamma in _vectors_below(tuple(min(a, b) for a, b in zip(lam, mu))):
        top = vec_sub(vec_add(lam, mu), gamma)
        term = gauss_vec(alpha, top) * gauss_multi(top, [gamma, vec_sub(lam, gamma), vec_sub(mu, gamma)])
        if term:
            rhs = rhs + term.shift(dot(lam, mu) - dot(alpha, gamma))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Small vector helpers (vectors are plain tuples of ints)
# ---------------------------------------------------------------------------


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def vec_le(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def vec_add(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Two-variable Laurent polynomials
# ---------------------------------------------------------------------------


class TwoVarPoly:
    """Sparse Laurent polynomial in ``v`` and a second variable ``w``.

    Terms map ``(ev, ew)`` to nonzero ints.  Internally the polynomial is kept
    grouped by the ``w`` exponent, with :class:`LaurentPoly` coefficients.
    """

    __slots__ = ("_g", "_h")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        groups: dict = {}
        for (ev, ew), c in (terms or {}).items():
            if c:
                groups.setdefault(ew, {})
                groups[ew][ev] = groups[ew].get(ev, 0) + c
        self._g = {}
        for ew, t in groups.items():
            p = LaurentPoly(t)
            if p:
                self._g[ew] = p
        self._h = None

    @classmethod
    def _raw(cls, groups: dict) -> TwoVarPoly:
        obj = object.__new__(cls)
        obj._g = groups
        obj._h = None
        return obj

    @classmethod
    def from_laurent(cls, p: LaurentPoly, ew: int = 0) -> TwoVarPoly:
        return cls._raw({ew: p} if p else {})

    @classmethod
    def coerce(cls, x) -> TwoVarPoly:
        if isinstance(x, TwoVarPoly):
            return x
        return cls.from_laurent(LaurentPoly.coerce(x))

    @property
    def terms(self) -> dict:
        return {(ev, ew): c for ew, p in self._g.items() for ev, c in p._t.items()}

    def groups(self) -> dict:
        return dict(self._g)

    def __bool__(self):
        return bool(self._g)

    def __add__(self, other):
        other = TwoVarPoly.coerce(other)
        g = dict(self._g)
        for ew, p in other._g.items():
            s = g[ew] + p if ew in g else p
            if s:
                g[ew] = s
            else:
                g.pop(ew, None)
        return TwoVarPoly._raw(g)

    __radd__ = __add__

    def __neg__(self):
        return TwoVarPoly._raw({ew: -p for ew, p in self._g.items()})

    def __sub__(self, other):
        return self + (-TwoVarPoly.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = TwoVarPoly.coerce(other)
        if not isinstance(other, TwoVarPoly):
            return NotImplemented
        g: dict = {}
        for e1, p1 in self._g.items():
            for e2, p2 in other._g.items():
                e = e1 + e2
                g[e] = g[e] + p1 * p2 if e in g else p1 * p2
        return TwoVarPoly._raw({e: p for e, p in g.items() if p})

    __rmul__ = __mul__

    def bar(self) -> TwoVarPoly:
        return TwoVarPoly._raw({-ew: p.bar() for ew, p in self._g.items()})

    def map_v(self, f) -> TwoVarPoly:
        g = {}
        for ew, p in self._g.items():
            q = f(p)
            if q:
                g[ew] = q
        return TwoVarPoly._raw(g)

    def specialize(self, p: int | None = None) -> LaurentPoly:
        """Substitute w -> 1 (``p is None``) or w -> v^{-p}."""
        out = ZERO
        for ew, q in self._g.items():
            out = out + (q if p is None else q.shift(-p * ew))
        return out

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = TwoVarPoly.coerce(other)
        if isinstance(other, TwoVarPoly):
            return self._g == other._g
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._g.items()))
        return self._h

    def __str__(self):
        if not self._g:
            return "0"
        parts = []
        for ew in sorted(self._g, reverse=True):
            mono = "" if ew == 0 else ("w" if ew == 1 else f"w^{ew}")
            p = str(self._g[ew])
            parts.append(f"({p})*{mono}" if mono else f"({p})")
        return " + ".join(parts)

    def __repr__(self):
        return f"TwoVarPoly('{self}')"

    def to_json(self) -> list:
        return [[[ev, ew], str(c)] for (ev, ew), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> TwoVarPoly:
        return cls({(int(k[0]), int(k[1])): int(c) for k, c in data})


def bar2(p: TwoVarPoly) -> TwoVarPoly:
    return p.bar()


def specialize(p, p_shift: int | None = None) -> LaurentPoly:
    """Specialize a two-variable value: w -> 1 when ``p_shift`` is None, else w -> v^{-p_shift}."""
    return p.specialize(p_shift)


# ---------------------------------------------------------------------------
# Fractions with cyclotomic denominators
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def cyclotomic(d: int) -> LaurentPoly:
    """The cyclotomic polynomial Phi_d(v)."""
    p = LaurentPoly({d: 1, 0: -1})
    for e in range(1, d):
        if d % e == 0:
            p = p.divmod_exact(cyclotomic(e))
    return p


def _euler_phi(d: int) -> int:
    return cyclotomic(d).max_exp()


def _divide_groups(num: TwoVarPoly, d: LaurentPoly):
    """Divide every w-coefficient of ``num`` by ``d``; None when some division is inexact."""
    g = {}
    for ew, p in num._g.items():
        q, r = p.divmod(d)
        if r:
            return None
        g[ew] = q
    return TwoVarPoly._raw(g)


class StabCoeff:
    """An element ``num / prod_d Phi_d(v)^{m_d}`` of Q(v)[w, w^-1].

    The fraction is kept reduced: no cyclotomic factor of the denominator
    divides the numerator.  Because each ``Phi_d`` is monic and irreducible,
    reduced forms are unique and equality is structural.
    """

    __slots__ = ("num", "den", "_h")

    def __init__(self, num: TwoVarPoly, den: Mapping[int, int] | None = None, *, reduce: bool = True):
        self.num = num
        self.den = {d: m for d, m in (den or {}).items() if m}
        self._h = None
        if reduce and self.den:
            self._reduce()

    def _reduce(self):
        if not self.num:
            self.den = {}
            return
        den = dict(self.den)
        num = self.num
        for d in sorted(den):
            while den[d]:
                q = _divide_groups(num, cyclotomic(d))
                if q is None:
                    break
                num = q
                den[d] -= 1
        self.num = num
        self.den = {d: m for d, m in den.items() if m}

    @classmethod
    def coerce(cls, x) -> StabCoeff:
        if isinstance(x, StabCoeff):
            return x
        return cls(TwoVarPoly.coerce(x))

    @classmethod
    def ratio(cls, num, den: LaurentPoly) -> StabCoeff:
        """Build num / den where den = unit * prod of cyclotomics (e.g. v^k - 1)."""
        num = TwoVarPoly.coerce(num)
        factors: Counter = Counter()
        rest = den
        lo = rest.min_exp()
        rest = rest.shift(-lo)
        unit_shift = lo
        d = 1
        while rest.max_exp() > 0:
            c = cyclotomic(d)
            q, r = rest.divmod(c)
            if not r:
                factors[d] += 1
                rest = q
            else:
                d += 1
                if d > 2 * (den.max_exp() - den.min_exp()) ** 2 + 2:
                    raise ArithmeticError(f"{den!r} is not a product of cyclotomic polynomials")
        if rest not in (ONE, -ONE):
            raise ArithmeticError(f"{den!r} has a non-unit content")
        sign = rest[0]
        num = num * LaurentPoly.monomial(-unit_shift, sign)
        return cls(num, factors)

    def __bool__(self):
        return bool(self.num)

    def _lift(self, den: Mapping[int, int]) -> TwoVarPoly:
        extra = ONE
        for d, m in den.items():
            k = m - self.den.get(d, 0)
            if k:
                extra = extra * cyclotomic(d) ** k
        return self.num * extra

    def __add__(self, other):
        other = StabCoeff.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return StabCoeff(self.num + other.num, self.den)
        den = {d: max(self.den.get(d, 0), other.den.get(d, 0)) for d in set(self.den) | set(other.den)}
        return StabCoeff(self._lift(den) + other._lift(den), den)

    __radd__ = __add__

    def __neg__(self):
        return StabCoeff(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-StabCoeff.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly, TwoVarPoly)):
            other = StabCoeff.coerce(other)
        if not isinstance(other, StabCoeff):
            return NotImplemented
        if not self.num or not other.num:
            return StabCoeff(TwoVarPoly())
        den = Counter(self.den)
        den.update(other.den)
        return StabCoeff(self.num * other.num, den)

    __rmul__ = __mul__

    def bar(self) -> StabCoeff:
        # Phi_1(1/v) = -v^-1 Phi_1(v); Phi_d(1/v) = v^-phi(d) Phi_d(v) for d >= 2.
        shift = 0
        sign = 1
        for d, m in self.den.items():
            shift += _euler_phi(d) * m
            if d == 1 and m % 2:
                sign = -sign
        num = self.num.bar() * LaurentPoly.monomial(shift, sign)
        return StabCoeff(num, self.den, reduce=False)

    def specialize(self, p: int | None = None) -> LaurentPoly:
        """Substitute w -> 1 or w -> v^{-p}; the result must lie in Z[v, v^-1]."""
        out = self.num.specialize(p)
        for d, m in self.den.items():
            for _ in range(m):
                out = out.divmod_exact(cyclotomic(d))
        return out

    def is_laurent(self) -> bool:
        return not self.den and set(self.num._g) <= {0}

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly, TwoVarPoly)):
            other = StabCoeff.coerce(other)
        if isinstance(other, StabCoeff):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.num, frozenset(self.den.items())))
        return self._h

    def __repr__(self):
        if not self.den:
            return f"StabCoeff({self.num})"
        den = "*".join(f"Phi{d}^{m}" if m > 1 else f"Phi{d}" for d, m in sorted(self.den.items()))
        return f"StabCoeff(({self.num}) / {den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": [[d, m] for d, m in sorted(self.den.items())]}

    @classmethod
    def from_json(cls, data) -> StabCoeff:
        return cls(TwoVarPoly.from_json(data["num"]), {int(d): int(m) for d, m in data["den"]})
