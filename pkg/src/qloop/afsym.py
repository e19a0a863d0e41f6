"""The extended affine symmetric group with its Hecke algebra and a double-coset oracle.

Permutations are stored by their window ``(w(1), ..., w(r))`` and extended by
``w(i + r) = w(i) + r``.  The Hecke algebra has basis ``T_w`` with
``T_s^2 = (v^2 - 1) T_s + v^2`` and ``T_w T_w' = T_{ww'}`` when lengths add.

The module also realizes the affine q-Schur algebra as endomorphisms of
``sum_lambda x_lambda H``; products and the bar involution computed this way
are a brute-force reference for the closed formulas in :mod:`qloop.schur`.
"""

from __future__ import annotations

import functools
from collections import deque
from typing import Iterable, Mapping, Sequence

from .afmat import PerMatrix, d_exponent
from .coeff import ONE, ZERO, LaurentPoly

__all__ = [
    "AffinePermutation",
    "HeckeElem",
    "hecke_mul",
    "hecke_bar",
    "blocks",
    "matrix_of",
    "coset_rep_of",
    "double_coset",
    "double_cosets",
    "e_action",
    "longest_in_coset",
    "longest_parabolic",
    "x_lambda",
    "oracle_schur_product",
    "oracle_schur_bar",
]

_V2 = LaurentPoly({2: 1})
_V2_MINUS_1 = LaurentPoly({2: 1, 0: -1})
_VM2 = LaurentPoly({-2: 1})
_VM2_MINUS_1 = LaurentPoly({-2: 1, 0: -1})


class AffinePermutation:
    """A bijection w of Z with w(i + r) = w(i) + r, stored by its window.

    >>> s1 = AffinePermutation.simple(3, 1)
    >>> s1.window, s1.length()
    ((2, 1, 3), 1)
    >>> AffinePermutation.rotation(3).length()
    0
    """

    __slots__ = ("r", "window", "_h")

    def __init__(self, window: Sequence[int]):
        self.window = tuple(window)
        self.r = len(self.window)
        if sorted(x % self.r for x in self.window) != list(range(self.r)):
            raise ValueError(f"window {self.window} does not define a bijection")
        self._h = hash(self.window)

    @classmethod
    def identity(cls, r: int) -> AffinePermutation:
        return cls(range(1, r + 1))

    @classmethod
    def simple(cls, r: int, i: int) -> AffinePermutation:
        """The transposition s_i swapping i and i+1 (periodically); 1 <= i <= r."""
        w = list(range(1, r + 1))
        if i < r:
            w[i - 1], w[i] = w[i], w[i - 1]
        else:
            w[0], w[r - 1] = 0, r + 1
        return cls(w)

    @classmethod
    def rotation(cls, r: int, a: int = 1) -> AffinePermutation:
        return cls(range(1 + a, r + 1 + a))

    def __call__(self, k: int) -> int:
        q, i = divmod(k - 1, self.r)
        return self.window[i] + q * self.r

    def __mul__(self, other: AffinePermutation) -> AffinePermutation:
        return AffinePermutation(tuple(self(x) for x in other.window))

    def inverse(self) -> AffinePermutation:
        r = self.r
        inv = [0] * r
        for i, x in enumerate(self.window, start=1):
            q, m = divmod(x - 1, r)
            inv[m] = i - q * r
        return AffinePermutation(inv)

    def __eq__(self, other):
        return isinstance(other, AffinePermutation) and self.window == other.window

    def __hash__(self):
        return self._h

    def __lt__(self, other):
        return self.window < other.window

    def __repr__(self):
        return f"AffinePermutation({self.window})"

    def length(self) -> int:
        return _length(self.window)

    def rotation_degree(self) -> int:
        return (sum(self.window) - self.r * (self.r + 1) // 2) // self.r

    def right_mul_simple(self, i: int) -> AffinePermutation:
        w = list(self.window)
        r = self.r
        if i < r:
            w[i - 1], w[i] = w[i], w[i - 1]
        else:
            w[0], w[r - 1] = w[r - 1] - r, w[0] + r
        return AffinePermutation(w)

    def left_mul_simple(self, i: int) -> AffinePermutation:
        r = self.r

        def s(x):
            m = x % r
            if m == i % r:
                return x + 1
            if m == (i + 1) % r:
                return x - 1
            return x

        return AffinePermutation(tuple(s(x) for x in self.window))

    def reduced_word(self) -> tuple[int, tuple]:
        """(a, word) with self = rho^a * s_{word[0]} * ... * s_{word[-1]}, the word reduced."""
        return _reduced_word(self.window)

    def to_json(self) -> dict:
        return {"r": self.r, "window": list(self.window)}


@functools.lru_cache(maxsize=None)
def _length(window: tuple) -> int:
    r = len(window)
    total = 0
    for a in range(r):
        for b in range(a + 1, r):
            total += abs((window[b] - window[a]) // r)
    return total


@functools.lru_cache(maxsize=None)
def _reduced_word(window: tuple) -> tuple[int, tuple]:
    r = len(window)
    a = (sum(window) - r * (r + 1) // 2) // r
    x = [w - a for w in window]
    letters = []
    while True:
        for i in range(1, r + 1):
            nxt = x[i] if i < r else x[0] + r
            if x[i - 1] > nxt:
                if i < r:
                    x[i - 1], x[i] = x[i], x[i - 1]
                else:
                    x[0], x[r - 1] = x[r - 1] - r, x[0] + r
                letters.append(i)
                break
        else:
            break
    return a, tuple(reversed(letters))


# ---------------------------------------------------------------------------
# Hecke algebra
# ---------------------------------------------------------------------------


class HeckeElem:
    """A finite combination of T_w with Laurent coefficients."""

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Mapping[AffinePermutation, LaurentPoly] | None = None):
        self.r = r
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, w: AffinePermutation, c: LaurentPoly = ONE) -> HeckeElem:
        return cls(w.r, {w: c})

    @classmethod
    def one(cls, r: int) -> HeckeElem:
        return cls.basis(AffinePermutation.identity(r))

    def __add__(self, other: HeckeElem) -> HeckeElem:
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, ZERO) + c
        return HeckeElem(self.r, t)

    def __sub__(self, other: HeckeElem) -> HeckeElem:
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, c: LaurentPoly) -> HeckeElem:
        return HeckeElem(self.r, {w: x * c for w, x in self.terms.items()})

    def __mul__(self, other: HeckeElem) -> HeckeElem:
        return hecke_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, HeckeElem) and self.r == other.r and self.terms == other.terms

    def coeff(self, w: AffinePermutation) -> LaurentPoly:
        return self.terms.get(w, ZERO)

    def __repr__(self):
        body = " + ".join(f"({c})T{w.window}" for w, c in sorted(self.terms.items()))
        return f"HeckeElem({body or '0'})"

    def to_json(self) -> list:
        return [[list(w.window), c.to_json()] for w, c in sorted(self.terms.items())]


def _acc(t: dict, w, c):
    s = t.get(w)
    s = c if s is None else s + c
    if s:
        t[w] = s
    else:
        t.pop(w, None)


@functools.lru_cache(maxsize=200000)
def _basis_product(u: AffinePermutation, w: AffinePermutation) -> tuple:
    """T_u * T_w as a tuple of (permutation, coefficient) pairs."""
    a, word = w.reduced_word()
    cur = {u * AffinePermutation.rotation(u.r, a): ONE}
    for i in word:
        nxt: dict = {}
        for x, c in cur.items():
            xs = x.right_mul_simple(i)
            if xs.length() > x.length():
                _acc(nxt, xs, c)
            else:
                _acc(nxt, x, c * _V2_MINUS_1)
                _acc(nxt, xs, c * _V2)
        cur = nxt
    return tuple(cur.items())


def hecke_mul(x: HeckeElem, y: HeckeElem) -> HeckeElem:
    if x.r != y.r:
        raise ValueError("rank mismatch")
    t: dict = {}
    for u, cu in x.terms.items():
        for w, cw in y.terms.items():
            c = cu * cw
            for z, cz in _basis_product(u, w):
                _acc(t, z, c * cz)
    return HeckeElem(x.r, t)


@functools.lru_cache(maxsize=100000)
def _bar_basis(w: AffinePermutation) -> tuple:
    a, word = w.reduced_word()
    cur = {AffinePermutation.rotation(w.r, a): ONE}
    for i in word:
        nxt: dict = {}
        for x, c in cur.items():
            xs = x.right_mul_simple(i)
            if xs.length() > x.length():
                _acc(nxt, xs, c * _VM2)
                _acc(nxt, x, c * _VM2_MINUS_1)
            else:
                # T_x T_s = (v^2-1) T_x + v^2 T_xs when xs < x
                _acc(nxt, x, c * (_V2_MINUS_1 * _VM2 + _VM2_MINUS_1))
                _acc(nxt, xs, c * (_V2 * _VM2))
        cur = nxt
    return tuple(cur.items())


def hecke_bar(x: HeckeElem) -> HeckeElem:
    """The ring involution v -> v^-1, T_w -> T_{w^-1}^{-1}."""
    t: dict = {}
    for w, c in x.terms.items():
        cb = c.bar()
        for z, cz in _bar_basis(w):
            _acc(t, z, cb * cz)
    return HeckeElem(x.r, t)


# ---------------------------------------------------------------------------
# Parabolic subgroups and double cosets
# ---------------------------------------------------------------------------


def blocks(lam: Sequence[int]) -> list:
    """Window positions of the blocks R_1, ..., R_n of a composition of r."""
    out, start = [], 0
    for a in lam:
        out.append(list(range(start + 1, start + a + 1)))
        start += a
    return out


def _parabolic_gens(lam: Sequence[int]) -> list:
    return [b[k] for b in blocks(lam) for k in range(len(b) - 1)]


def _block_index(lam: Sequence[int], x: int) -> int:
    """The Z-indexed block of lam containing the integer x."""
    r, n = sum(lam), len(lam)
    q, m = divmod(x - 1, r)
    acc = 0
    for i, a in enumerate(lam):
        if m < acc + a:
            return i + 1 + q * n
        acc += a
    raise AssertionError("unreachable")


def matrix_of(lam: Sequence[int], d: AffinePermutation, mu: Sequence[int]) -> PerMatrix:
    """The matrix (|R_k^lam intersect d R_l^mu|)_{k,l}."""
    n = len(lam)
    ent: dict = {}
    for l, block in enumerate(blocks(mu), start=1):
        for p in block:
            k = _block_index(lam, d(p))
            ent[(k, l)] = ent.get((k, l), 0) + 1
    return PerMatrix(n, ent)


def coset_rep_of(A: PerMatrix) -> tuple[tuple, AffinePermutation, tuple]:
    """(lam, d, mu) with d the shortest element of its double coset and matrix_of(lam, d, mu) = A."""
    n = A.n
    lam, mu = A.ro(), A.co()
    r = sum(lam)
    starts_lam = [sum(lam[:i]) for i in range(n)]
    starts_mu = [sum(mu[:i]) for i in range(n)]
    window = [0] * r
    for l in range(1, n + 1):
        col = []
        for (i, j), a in A.items():
            if (j - l) % n == 0:
                m = (j - l) // n
                col.append((i - m * n, a))
        col.sort()
        pos = starts_mu[l - 1]
        for K, a in col:
            q, i0 = divmod(K - 1, n)
            offset = 0
            for (i2, j2), a2 in A.items():
                if i2 == i0 + 1 and j2 + q * n < l:
                    offset += a2
            base = starts_lam[i0] + q * r + offset
            for t in range(a):
                window[pos] = base + t + 1
                pos += 1
    d = AffinePermutation(window)
    return lam, d, mu


def double_coset(lam: Sequence[int], d: AffinePermutation, mu: Sequence[int], cap: int = 10**6) -> frozenset:
    return _double_coset(tuple(lam), d, tuple(mu), cap)


@functools.lru_cache(maxsize=20000)
def _double_coset(lam: tuple, d: AffinePermutation, mu: tuple, cap: int) -> frozenset:
    left, right = _parabolic_gens(lam), _parabolic_gens(mu)
    seen = {d}
    queue = deque([d])
    while queue:
        w = queue.popleft()
        for i in left:
            x = w.left_mul_simple(i)
            if x not in seen:
                seen.add(x)
                queue.append(x)
        for i in right:
            x = w.right_mul_simple(i)
            if x not in seen:
                seen.add(x)
                queue.append(x)
        if len(seen) > cap:
            raise RuntimeError(f"double coset exceeds the cap of {cap} elements")
    return frozenset(seen)


def _is_shortest(lam, w: AffinePermutation, mu) -> bool:
    ell = w.length()
    return all(w.left_mul_simple(i).length() > ell for i in _parabolic_gens(lam)) and all(
        w.right_mul_simple(i).length() > ell for i in _parabolic_gens(mu)
    )


def double_cosets(lam: Sequence[int], mu: Sequence[int], band: int, max_length: int | None = None):
    """Shortest double-coset representatives whose matrices have support in |j - i| <= band.

    Returns (pairs, truncated) where pairs is a sorted list of (d, A) and
    ``truncated`` reports whether the length cap removed any representative.
    """
    from .afmat import compositions

    n = len(lam)
    r = sum(lam)
    positions = [(i, j) for i in range(1, n + 1) for j in range(i - band, i + band + 1)]
    out, truncated = [], False
    for comp in compositions(r, len(positions)):
        A = PerMatrix(n, {p: a for p, a in zip(positions, comp) if a})
        if A.ro() != tuple(lam) or A.co() != tuple(mu):
            continue
        _, d, _ = coset_rep_of(A)
        if max_length is not None and d.length() > max_length:
            truncated = True
            continue
        out.append((d, A))
    out.sort(key=lambda da: (da[0].length(), da[0].window))
    return out, truncated


def x_lambda(lam: Sequence[int]) -> HeckeElem:
    r = sum(lam)
    coset = double_coset(lam, AffinePermutation.identity(r), lam)
    return HeckeElem(r, {w: ONE for w in coset if _in_parabolic(lam, w)})


def _in_parabolic(lam, w: AffinePermutation) -> bool:
    return all(_block_index(lam, w(p)) == _block_index(lam, p) for p in range(1, w.r + 1))


def longest_parabolic(lam: Sequence[int]) -> AffinePermutation:
    """The longest element of the parabolic subgroup attached to lam."""
    window = []
    for b in blocks(lam):
        window.extend(reversed(b))
    return AffinePermutation(window)


def longest_in_coset(lam: Sequence[int], d: AffinePermutation, mu: Sequence[int]) -> AffinePermutation:
    """The unique longest element of the double coset of d, found by scanning the coset."""
    coset = double_coset(lam, d, mu)
    return max(coset, key=lambda w: (w.length(), w.window))


# ---------------------------------------------------------------------------
# Schur algebra through its action on sum x_lambda H
# ---------------------------------------------------------------------------


def _coset_sum(A: PerMatrix) -> HeckeElem:
    lam, d, mu = coset_rep_of(A)
    return HeckeElem(sum(lam), {w: ONE for w in double_coset(lam, d, mu)})


def e_action(A: PerMatrix, nu: Sequence[int], h: HeckeElem) -> HeckeElem:
    """e_A applied to x_nu h: the double-coset sum of A times h when nu = co(A), else 0."""
    if tuple(nu) != A.co():
        return HeckeElem(h.r)
    return hecke_mul(_coset_sum(A), h)


def _decompose_in_cosets(z: HeckeElem, lam: tuple, mu: tuple) -> dict:
    """Coefficients c_C with z = sum_C c_C * (double-coset sum of C)."""
    out = {}
    for w, c in z.terms.items():
        if _is_shortest(lam, w, mu):
            out[matrix_of(lam, w, mu)] = c
    return out


def oracle_schur_product(B: PerMatrix, A: PerMatrix) -> dict:
    """[B][A] expanded in the normalized basis [C] = v^{-d_C} e_C, via Hecke algebra arithmetic."""
    if B.co() != A.ro():
        return {}
    lam, mu, kappa = A.ro(), A.co(), B.ro()
    coset_a = _coset_sum(A)
    h = HeckeElem(coset_a.r, {y: ONE for y in coset_a.terms if all(
        y.left_mul_simple(i).length() > y.length() for i in _parabolic_gens(lam))})
    z = hecke_mul(_coset_sum(B), h)
    shift = -d_exponent(B) - d_exponent(A)
    out = {}
    for C, c in _decompose_in_cosets(z, kappa, mu).items():
        out[C] = c.shift(shift + d_exponent(C))
    _check_expansion(z, out, kappa, mu, shift)
    return out


def _check_expansion(z: HeckeElem, coeffs: dict, lam, mu, shift) -> None:
    total = HeckeElem(z.r)
    for C, c in coeffs.items():
        total = total + _coset_sum(C).scale(c.shift(-shift - d_exponent(C)))
    if total != z:
        raise AssertionError("Hecke element is not a combination of double-coset sums")


def oracle_schur_bar(A: PerMatrix) -> dict:
    """bar([A]) in the basis [C], via the bar involution of the Hecke algebra."""
    lam, mu = A.ro(), A.co()
    ell0 = longest_parabolic(mu).length()
    image = _coset_sum(A).scale(LaurentPoly.monomial(-d_exponent(A) - ell0))
    z = hecke_bar(image)
    out = {}
    for C, c in _decompose_in_cosets(z, lam, mu).items():
        out[C] = c.shift(d_exponent(C) + ell0)
    return out
