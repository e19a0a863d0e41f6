"""Periodic integer matrices indexed by Z x Z with a_{i+n, j+n} = a_{i, j}.

A :class:`PerMatrix` stores one period: the nonzero entries ``(i, j) -> a``
with ``1 <= i <= n`` and ``j`` any integer.  Vectors indexed by Z/nZ are plain
tuples ``(x_1, ..., x_n)``.
"""

from __future__ import annotations

import functools
import itertools
import logging
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

log = logging.getLogger(__name__)

__all__ = [
    "PerMatrix",
    "unit_vec",
    "compositions",
    "preceq",
    "sqsubseteq",
    "interval",
    "enumerate_theta",
    "d_exponent",
]


def unit_vec(n: int, i: int) -> tuple:
    """The unit vector e_i, with i read modulo n (1-based)."""
    v = [0] * n
    v[(i - 1) % n] = 1
    return tuple(v)


def compositions(total: int, parts: int, cap: Sequence[int] | None = None) -> Iterator[tuple]:
    """All tuples of ``parts`` nonnegative ints summing to ``total`` (optionally bounded by ``cap``)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = total if cap is None else min(total, cap[0])
    for x in range(hi, -1, -1):
        rest = None if cap is None else cap[1:]
        for tail in compositions(total - x, parts - 1, rest):
            yield (x,) + tail


class PerMatrix:
    """A periodic integer matrix with finitely many nonzero entries per period.

    >>> A = PerMatrix.from_entries(2, {(1, 3): 1})
    >>> A.ro(), A.co(), A.norm()
    ((1, 0), (1, 0), 3)
    >>> A[3, 5], A[0, 2]
    (1, 0)
    """

    __slots__ = ("n", "_e", "_key", "_h")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], int] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        e: dict = {}
        for (i, j), a in (entries or {}).items():
            if not a:
                continue
            k = (i - 1) // n
            key = (i - k * n, j - k * n)
            s = e.get(key, 0) + a
            if s:
                e[key] = s
            else:
                e.pop(key, None)
        self._e = e
        self._key = None
        self._h = None

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[tuple[int, int], int]) -> PerMatrix:
        return cls(n, entries)

    @classmethod
    def diag(cls, vec: Sequence[int]) -> PerMatrix:
        n = len(vec)
        return cls(n, {(i + 1, i + 1): a for i, a in enumerate(vec)})

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> PerMatrix:
        return cls(n, {(i, j): 1})

    @classmethod
    def zero(cls, n: int) -> PerMatrix:
        return cls(n)

    @classmethod
    def upper_ss(cls, alpha: Sequence[int]) -> PerMatrix:
        """The matrix sum_i alpha_i E_{i, i+1}."""
        n = len(alpha)
        return cls(n, {(i + 1, i + 2): a for i, a in enumerate(alpha)})

    @classmethod
    def lower_ss(cls, alpha: Sequence[int]) -> PerMatrix:
        """The matrix sum_i alpha_i E_{i+1, i}."""
        n = len(alpha)
        return cls(n, {(i + 2, i + 1): a for i, a in enumerate(alpha)})

    # -- access -----------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        k = (i - 1) // self.n
        return self._e.get((i - k * self.n, j - k * self.n), 0)

    def items(self) -> list:
        return sorted(self._e.items())

    def row(self, i: int) -> dict:
        """Nonzero entries {j: a_{i,j}} of row i, for any integer i."""
        k = (i - 1) // self.n
        base = i - k * self.n
        shift = k * self.n
        return {j + shift: a for (r, j), a in self._e.items() if r == base}

    def entries(self) -> dict:
        return dict(self._e)

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.n, tuple(sorted(self._e.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, PerMatrix) and self.key == other.key

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.key)
        return self._h

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        """Linear extension of the interval order: norm first, then entries."""
        return (self.norm(), self.key)

    def __repr__(self):
        body = ", ".join(f"({i},{j}):{a}" for (i, j), a in self.items())
        return f"PerMatrix(n={self.n}, {{{body}}})"

    def __add__(self, other: PerMatrix) -> PerMatrix:
        if self.n != other.n:
            raise ValueError("size mismatch")
        e = dict(self._e)
        for k, a in other._e.items():
            e[k] = e.get(k, 0) + a
        return PerMatrix(self.n, e)

    def __sub__(self, other: PerMatrix) -> PerMatrix:
        if self.n != other.n:
            raise ValueError("size mismatch")
        e = dict(self._e)
        for k, a in other._e.items():
            e[k] = e.get(k, 0) - a
        return PerMatrix(self.n, e)

    def __neg__(self) -> PerMatrix:
        return PerMatrix(self.n, {k: -a for k, a in self._e.items()})

    # -- statistics --------------------------------------------------------

    def ro(self) -> tuple:
        r = [0] * self.n
        for (i, _), a in self._e.items():
            r[i - 1] += a
        return tuple(r)

    def co(self) -> tuple:
        c = [0] * self.n
        for (_, j), a in self._e.items():
            c[(j - 1) % self.n] += a
        return tuple(c)

    def level(self) -> int:
        return sum(self._e.values())

    def norm(self) -> int:
        return sum(comb(abs(j - i) + 1, 2) * a for (i, j), a in self._e.items() if i != j)

    def bsigma(self) -> tuple:
        """The vector with i-th entry a_{ii} + sum_{j<i} (a_{ij} + a_{ji})."""
        n = self.n
        out = [0] * n
        for (i, j), a in self._e.items():
            if i == j:
                out[i - 1] += a
            elif j < i:
                out[i - 1] += a
            else:
                # an upper entry a_{i,j}, j > i, is a_{j', i'} with j' = j shifted into [1, n]
                out[(j - 1) % n] += a
        return tuple(out)

    def diag_vec(self) -> tuple:
        return tuple(self._e.get((i, i), 0) for i in range(1, self.n + 1))

    def dimvec(self) -> tuple:
        """Dimension vector of the nilpotent representation attached to an upper matrix."""
        n = self.n
        d = [0] * n
        for (i, j), a in self._e.items():
            for m in range(i, j):
                d[(m - 1) % n] += a
        return tuple(d)

    def span(self) -> int:
        return max((abs(j - i) for (i, j) in self._e), default=0)

    def stats(self) -> dict:
        return {
            "ro": self.ro(),
            "co": self.co(),
            "level": self.level(),
            "norm": self.norm(),
            "bsigma": self.bsigma(),
            "diag": self.diag_vec(),
            "dimvec": self.dimvec() if self.in_theta_plus() else None,
        }

    # -- class predicates --------------------------------------------------

    def in_theta(self) -> bool:
        return all(a > 0 for a in self._e.values())

    def in_theta_tilde(self) -> bool:
        return all(a > 0 for (i, j), a in self._e.items() if i != j)

    def in_theta_pm(self) -> bool:
        return self.in_theta_tilde() and all(i != j for (i, j) in self._e)

    def in_theta_plus(self) -> bool:
        return all(j > i and a > 0 for (i, j), a in self._e.items())

    def in_theta_minus(self) -> bool:
        return all(j < i and a > 0 for (i, j), a in self._e.items())

    def is_diagonal(self) -> bool:
        return all(i == j for (i, j) in self._e)

    def is_aperiodic(self) -> bool:
        """True when each nonzero off-diagonal stripe has a vanishing entry in one period."""
        stripes: dict = {}
        for (i, j), a in self._e.items():
            if i != j and a:
                stripes.setdefault(j - i, set()).add(i)
        return all(len(rows) < self.n for rows in stripes.values())

    # -- transforms --------------------------------------------------------

    def transpose(self) -> PerMatrix:
        return PerMatrix(self.n, {(j, i): a for (i, j), a in self._e.items()})

    def shift_rows(self) -> PerMatrix:
        """The matrix with (i, j) entry a_{i-1, j}."""
        return PerMatrix(self.n, {(i + 1, j): a for (i, j), a in self._e.items()})

    def add_identity(self, p: int) -> PerMatrix:
        return self + PerMatrix.diag((p,) * self.n)

    def upper(self) -> PerMatrix:
        return PerMatrix(self.n, {k: a for k, a in self._e.items() if k[1] > k[0]})

    def lower(self) -> PerMatrix:
        return PerMatrix(self.n, {k: a for k, a in self._e.items() if k[1] < k[0]})

    def diag_part(self) -> PerMatrix:
        return PerMatrix(self.n, {k: a for k, a in self._e.items() if k[1] == k[0]})

    def offdiag(self) -> PerMatrix:
        return PerMatrix(self.n, {k: a for k, a in self._e.items() if k[1] != k[0]})

    def with_diag(self, vec: Sequence[int]) -> PerMatrix:
        return self.offdiag() + PerMatrix.diag(vec)

    def upper_ss_vector(self) -> tuple | None:
        """alpha when self - sum alpha_i E_{i,i+1} is diagonal, else None."""
        alpha = [0] * self.n
        for (i, j), a in self._e.items():
            if j == i + 1:
                alpha[i - 1] = a
            elif j != i:
                return None
        return tuple(alpha)

    def lower_ss_vector(self) -> tuple | None:
        """gamma when self - sum gamma_i E_{i+1,i} is diagonal, else None."""
        gamma = [0] * self.n
        for (i, j), a in self._e.items():
            if j == i - 1:
                gamma[(j - 1) % self.n] = a
            elif j != i:
                return None
        return tuple(gamma)

    # -- orders -------------------------------------------------------------

    def sigma_ij(self, i: int, j: int) -> int:
        """Sum of a_{s,t} over s <= i, t >= j (when i < j) or s >= i, t <= j (when i > j)."""
        return _sigma_ij(self.n, tuple(self._e.items()), i, j)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[i, j, a] for (i, j), a in self.items()]}

    @classmethod
    def from_json(cls, data) -> PerMatrix:
        n = int(data["n"])
        ent = {}
        for row in data["entries"]:
            if len(row) != 3:
                raise ValueError(f"malformed entry {row!r}: expected [i, j, a]")
            i, j, a = (int(x) for x in row)
            if not 1 <= i <= n:
                raise ValueError(f"row index {i} outside 1..{n}")
            ent[(i, j)] = ent.get((i, j), 0) + a
        return cls(n, ent)


def _count_shifts(lo_num: int, hi_num: int, n: int) -> int:
    """Number of integers k with ceil(lo_num / n) <= k <= floor(hi_num / n)."""
    lo = -((-lo_num) // n)
    hi = hi_num // n
    return max(0, hi - lo + 1)


def _sigma_ij(n: int, items: tuple, i: int, j: int) -> int:
    total = 0
    if i < j:
        for (s, t), a in items:
            if t > s:
                total += a * _count_shifts(j - t, i - s, n)
    elif i > j:
        for (s, t), a in items:
            if t < s:
                total += a * _count_shifts(i - s, j - t, n)
    return total


def _sigma_window(n: int, span: int) -> list:
    pairs = []
    for i in range(1, n + 1):
        for d in range(1, span + 1):
            pairs.append((i, i + d))
            pairs.append((i, i - d))
    return pairs


def sigma_table(A: PerMatrix, span: int) -> dict:
    items = tuple(A._e.items())
    return {(i, j): _sigma_ij(A.n, items, i, j) for i, j in _sigma_window(A.n, span)}


def preceq(B: PerMatrix, A: PerMatrix) -> bool:
    """B is below A in the sigma order (off-diagonal partial sums dominated)."""
    if B.n != A.n:
        raise ValueError("size mismatch")
    span = max(A.span(), B.span())
    bi, ai = tuple(B._e.items()), tuple(A._e.items())
    return all(_sigma_ij(A.n, bi, i, j) <= _sigma_ij(A.n, ai, i, j) for i, j in _sigma_window(A.n, span))


def sqsubseteq(B: PerMatrix, A: PerMatrix) -> bool:
    return B.ro() == A.ro() and B.co() == A.co() and preceq(B, A)


# ---------------------------------------------------------------------------
# Interval enumeration
# ---------------------------------------------------------------------------


def _enumerate_part(n: int, positions: list, bounds: dict, upper: bool) -> list:
    """All nonnegative fillings of ``positions`` whose sigma-values stay within ``bounds``."""
    out = []
    pairs = list(bounds)

    def ok(items):
        for (i, j) in pairs:
            if (i < j) == upper and _sigma_ij(n, items, i, j) > bounds[(i, j)]:
                return False
        return True

    def rec(k, cur):
        if k == len(positions):
            out.append(dict(cur))
            return
        pos = positions[k]
        i, j = pos
        cap = bounds.get((i, j), 0)
        for a in range(cap + 1):
            if a:
                cur[pos] = a
                if not ok(tuple(cur.items())):
                    del cur[pos]
                    break
            rec(k + 1, cur)
            cur.pop(pos, None)

    rec(0, {})
    return out


def _margin_shift(n: int, part: dict) -> tuple:
    """co - ro of an off-diagonal part; the diagonal must absorb the difference."""
    d = [0] * n
    for (i, j), a in part.items():
        d[i - 1] -= a
        d[(j - 1) % n] += a
    return tuple(d)


@functools.lru_cache(maxsize=4096)
def _interval_cached(A: PerMatrix, nonneg_diag: bool) -> tuple:
    n = A.n
    span = A.span()
    bounds = sigma_table(A, span)
    up_pos = [(i, i + d) for i in range(1, n + 1) for d in range(1, span + 1)]
    lo_pos = [(i, i - d) for i in range(1, n + 1) for d in range(1, span + 1)]
    ups = _enumerate_part(n, up_pos, bounds, True)
    lows = _enumerate_part(n, lo_pos, bounds, False)
    target = tuple(c - r for r, c in zip(A.ro(), A.co()))
    by_shift: dict = {}
    for lo in lows:
        by_shift.setdefault(_margin_shift(n, lo), []).append(lo)
    ro = A.ro()
    out = []
    for up in ups:
        su = _margin_shift(n, up)
        need = tuple(t - s for t, s in zip(target, su))
        for lo in by_shift.get(need, ()):
            ent = dict(up)
            ent.update(lo)
            rows = [0] * n
            for (i, _), a in ent.items():
                rows[i - 1] += a
            diag = tuple(r - x for r, x in zip(ro, rows))
            if nonneg_diag and min(diag) < 0:
                continue
            for i, a in enumerate(diag):
                if a:
                    ent[(i + 1, i + 1)] = a
            B = PerMatrix(n, ent)
            out.append(B)
    out.sort(key=PerMatrix.sort_key)
    for B in out:
        if B != A and not B.norm() < A.norm():
            log.warning("norm does not decrease along the order: %r below %r", B, A)
    return tuple(out)


def interval(A: PerMatrix, nonneg_diag: bool = False) -> list:
    """All B with B below A in the interval order, sorted by (norm, entries).

    With ``nonneg_diag`` only matrices with nonnegative diagonal are kept.
    """
    if not A.in_theta_tilde():
        raise ValueError("interval needs nonnegative off-diagonal entries")
    return list(_interval_cached(A, nonneg_diag))


def enumerate_theta(n: int, r: int, band: int) -> list:
    """All nonnegative matrices of level r with support in |j - i| <= band."""
    positions = [(i, j) for i in range(1, n + 1) for j in range(i - band, i + band + 1)]
    out = []
    for comp in compositions(r, len(positions)):
        out.append(PerMatrix(n, {p: a for p, a in zip(positions, comp) if a}))
    out.sort(key=PerMatrix.sort_key)
    return out


def d_exponent(A: PerMatrix) -> int:
    """sum of a_{ij} a_{kl} over 1 <= i <= n, k <= i, l > j (all periodic copies of (k, l))."""
    n = A.n
    items = A.items()
    total = 0
    for (i, j), a in items:
        for (k0, l0), b in items:
            # copies (k0 + m n, l0 + m n) with k0 + m n <= i and l0 + m n > j
            lo = (j - l0) // n + 1
            hi = (i - k0) // n
            if hi >= lo:
                total += a * b * (hi - lo + 1)
    return total


def enumerate_offdiag(n: int, max_norm: int) -> list:
    """All matrices with zero diagonal, nonnegative entries and norm <= max_norm."""
    positions = []
    d = 1
    while comb(d + 1, 2) <= max_norm:
        positions += [(i, i + d) for i in range(1, n + 1)] + [(i, i - d) for i in range(1, n + 1)]
        d += 1
    out = []

    def rec(k, left, cur):
        if k == len(positions):
            out.append(PerMatrix(n, cur))
            return
        pos = positions[k]
        w = comb(abs(pos[1] - pos[0]) + 1, 2)
        for a in range(left // w + 1):
            if a:
                cur[pos] = a
            rec(k + 1, left - a * w, cur)
        cur.pop(pos, None)

    rec(0, max_norm, {})
    out.sort(key=PerMatrix.sort_key)
    return out
