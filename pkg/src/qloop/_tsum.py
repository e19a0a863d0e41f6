"""Shared pieces of the generator multiplication formulas.

Left multiplication by a matrix of the shape ``diag + sum alpha_i E_{i,i+1}``
(or its transpose) is a finite sum over nonnegative periodic matrices ``T``
with prescribed row sums.  This module enumerates those ``T`` and computes
the exponents and bracket products shared by the Schur algebra formulas and
their stabilized versions.
"""

from __future__ import annotations

import functools
import itertools

from .afmat import PerMatrix
from .coeff import ONE, ZERO, LaurentPoly, gauss_sym


def _bounded_compositions(total: int, caps: list) -> list:
    """Fillings of slots with 0 <= x_k <= caps[k] (None = unbounded) summing to total."""
    out = []

    def rec(k, left, cur):
        if k == len(caps):
            if left == 0:
                out.append(tuple(cur))
            return
        cap = caps[k]
        hi = left if cap is None else min(left, cap)
        for x in range(hi, -1, -1):
            cur.append(x)
            rec(k + 1, left - x, cur)
            cur.pop()

    rec(0, total, [])
    return out


def _enumerate(n: int, alpha, slots_per_row) -> list:
    rows = []
    for i in range(1, n + 1):
        cols = [c for c, _ in slots_per_row[i - 1]]
        caps = [cap for _, cap in slots_per_row[i - 1]]
        fills = _bounded_compositions(alpha[i - 1], caps)
        rows.append([{(i, c): x for c, x in zip(cols, f) if x} for f in fills])
    out = []
    for combo in itertools.product(*rows):
        ent = {}
        for part in combo:
            ent.update(part)
        out.append(PerMatrix(n, ent))
    return out


@functools.lru_cache(maxsize=100000)
def upper_T(A: PerMatrix, alpha: tuple, free_diag: bool) -> tuple:
    """T with ro(T) = alpha and t_{i,j} <= a_{i+1,j}.

    With ``free_diag`` the entries t_{i,i+1} (landing on the diagonal of A) are
    unbounded, as in the loop-level and stabilized formulas.
    """
    n = A.n
    slots = []
    for i in range(1, n + 1):
        nxt = A.row(i + 1)
        row = []
        for j in sorted(set(nxt) | {i + 1}):
            if j == i + 1 and free_diag:
                row.append((j, None))
            elif nxt.get(j, 0) > 0:
                row.append((j, nxt[j]))
        slots.append(row)
    return tuple(_enumerate(n, alpha, slots))


@functools.lru_cache(maxsize=100000)
def lower_T(A: PerMatrix, gamma: tuple, free_diag: bool) -> tuple:
    """T with ro(T) = gamma and t_{i,j} <= a_{i,j} (diagonal unbounded with ``free_diag``)."""
    n = A.n
    slots = []
    for i in range(1, n + 1):
        cur = A.row(i)
        row = []
        for j in sorted(set(cur) | {i}):
            if j == i and free_diag:
                row.append((j, None))
            elif cur.get(j, 0) > 0:
                row.append((j, cur[j]))
        slots.append(row)
    return tuple(_enumerate(n, gamma, slots))


def _sum_ge(row: dict, l: int) -> int:
    return sum(a for j, a in row.items() if j >= l)


def _sum_gt(row: dict, l: int) -> int:
    return sum(a for j, a in row.items() if j > l)


def _minus(r1: dict, r2: dict) -> dict:
    out = dict(r1)
    for j, a in r2.items():
        out[j] = out.get(j, 0) - a
    return out


def beta_upper(T: PerMatrix, A: PerMatrix) -> int:
    """sum_{i, j>=l} (a_{ij} - t_{i-1,j}) t_{il} - sum_{i, j>l} (a_{i+1,j} - t_{ij}) t_{il}."""
    total = 0
    for i in range(1, A.n + 1):
        ti = T.row(i)
        if not ti:
            continue
        first = _minus(A.row(i), T.row(i - 1))
        second = _minus(A.row(i + 1), ti)
        for l, t in ti.items():
            total += t * (_sum_ge(first, l) - _sum_gt(second, l))
    return total


def beta_lower(T: PerMatrix, A: PerMatrix) -> int:
    """sum_{i, l>=j} (a_{ij} - t_{ij}) t_{i-1,l} - sum_{i, l>j} (a_{ij} - t_{ij}) t_{il}."""
    total = 0
    for i in range(1, A.n + 1):
        diff = _minus(A.row(i), T.row(i))
        prev = T.row(i - 1)
        cur = T.row(i)
        for j, d in diff.items():
            if d:
                total += d * (_sum_ge(prev, j) - _sum_gt(cur, j))
    return total


def upper_brackets(T: PerMatrix, A: PerMatrix, include_diag: bool) -> LaurentPoly:
    """prod over i in [1,n], j of bar [[a_{ij} + t_{ij} - t_{i-1,j} over t_{ij}]]."""
    out = ONE
    for i in range(1, A.n + 1):
        ai, prev = A.row(i), T.row(i - 1)
        for j, t in T.row(i).items():
            if j == i and not include_diag:
                continue
            out = out * gauss_sym(ai.get(j, 0) + t - prev.get(j, 0), t).bar()
            if not out:
                return ZERO
    return out


def lower_brackets(T: PerMatrix, A: PerMatrix, include_diag: bool) -> LaurentPoly:
    """prod over i in [1,n], j of bar [[a_{ij} - t_{ij} + t_{i-1,j} over t_{i-1,j}]]."""
    out = ONE
    for i in range(1, A.n + 1):
        ai, cur = A.row(i), T.row(i)
        for j, t in T.row(i - 1).items():
            if j == i and not include_diag:
                continue
            out = out * gauss_sym(ai.get(j, 0) - cur.get(j, 0) + t, t).bar()
            if not out:
                return ZERO
    return out


def upper_result(A: PerMatrix, T: PerMatrix) -> PerMatrix:
    return A + T - T.shift_rows()


def lower_result(A: PerMatrix, T: PerMatrix) -> PerMatrix:
    return A - T + T.shift_rows()
