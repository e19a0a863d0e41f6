"""Finite-field kernels for counting submodules of cyclic quiver representations.

Field elements of GF(q) are integers 0..q-1 with arithmetic through lookup
tables, so prime powers work the same way as primes.  The hot loops are
compiled with numba when it is available; setting QLOOP_DISABLE_NUMBA=1 runs
the identical pure Python code instead.
"""

from __future__ import annotations

import functools
import itertools
import os

import numpy as np

NUMBA_DISABLED = os.environ.get("QLOOP_DISABLE_NUMBA", "") not in ("", "0")

try:
    if NUMBA_DISABLED:
        raise ImportError
    import numba

    def kernel(fn):
        return numba.njit(cache=True)(fn)

    HAVE_NUMBA = True
except ImportError:

    def kernel(fn):
        return fn

    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# field tables
# ---------------------------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _poly_mulmod(a: list, b: list, mod: list, p: int) -> list:
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for t in range(k + 1):
                prod[deg - k + t] = (prod[deg - k + t] - c * mod[t]) % p
    return prod[:k]


def _irreducible(p: int, k: int) -> list:
    """A monic irreducible polynomial of degree k over GF(p), low degree first."""
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        # no roots and no factor of degree <= k/2, tested by trial division
        if all(_has_no_factor(f, g, p) for d in range(1, k // 2 + 1) for g in _monics(p, d)):
            return f
    raise ArithmeticError("no irreducible polynomial found")


def _monics(p: int, d: int):
    for tail in itertools.product(range(p), repeat=d):
        yield list(tail) + [1]


def _has_no_factor(f: list, g: list, p: int) -> bool:
    r = list(f)
    dg = len(g) - 1
    for deg in range(len(r) - 1, dg - 1, -1):
        c = r[deg]
        if c:
            for t in range(dg + 1):
                r[deg - dg + t] = (r[deg - dg + t] - c * g[t]) % p
    return any(r[:dg])


@functools.lru_cache(maxsize=None)
def field_tables(q: int) -> tuple:
    """(add, mul, neg, inv) tables of GF(q) as int64 arrays."""
    p, k = _prime_power(q)
    if k == 1:
        a = np.arange(q)
        add = (a[:, None] + a[None, :]) % q
        mul = (a[:, None] * a[None, :]) % q
    else:
        mod = _irreducible(p, k)
        digits = [[(x // p**t) % p for t in range(k)] for x in range(q)]
        enc = lambda ds: sum(d * p**t for t, d in enumerate(ds))  # noqa: E731
        add = np.array([[enc([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
                        for a in range(q)])
        mul = np.array([[enc(_poly_mulmod(digits[a], digits[b], mod, p)) for b in range(q)]
                        for a in range(q)])
    add = add.astype(np.int64)
    mul = mul.astype(np.int64)
    neg = np.array([int(np.where(add[x] == 0)[0][0]) for x in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = int(np.where(mul[x] == 1)[0][0])
    return add, mul, neg, inv


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


def subspaces(d: int, q: int) -> list:
    """Row-reduced echelon bases of every subspace of GF(q)^d."""
    out = []
    for k in range(d + 1):
        for pivots in itertools.combinations(range(d), k):
            free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, d) if c not in pivots]
            for vals in itertools.product(range(q), repeat=len(free)):
                m = np.zeros((k, d), dtype=np.int64)
                for r, c in enumerate(pivots):
                    m[r, c] = 1
                for (r, c), x in zip(free, vals):
                    m[r, c] = x
                out.append(m)
    return out


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@kernel
def rank_gf(m, rows, cols, add, mul, neg, inv):
    """Rank of the top-left rows x cols block of m over GF(q); m is overwritten."""
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = t
        s = inv[m[r, c]]
        for j in range(cols):
            m[r, j] = mul[s, m[r, j]]
        for i in range(r + 1, rows):
            f = m[i, c]
            if f != 0:
                nf = neg[f]
                for j in range(cols):
                    m[i, j] = add[m[i, j], mul[nf, m[r, j]]]
        r += 1
        if r == rows:
            break
    return r


@kernel
def _image_rows(sub, k, path, d_src, d_dst, out, row0, mul, add):
    """Write the images of the k basis rows of sub under path (d_dst x d_src) into out."""
    for a in range(k):
        for t in range(d_dst):
            s = 0
            for u in range(d_src):
                if path[t, u] != 0 and sub[a, u] != 0:
                    s = add[s, mul[path[t, u], sub[a, u]]]
            out[row0 + a, t] = s


@kernel
def submodule_profiles(subs, ks, offsets, counts, dims, paths, n, lmax, lo, hi,
                       add, mul, neg, inv, out):
    """Rank profiles of the arrow-stable subspace tuples with linear index in [lo, hi).

    Tuples pick subspace number idx_i at vertex i (mixed radix over ``counts``).
    Row layout of a profile: for each vertex i and length L in [0, lmax], the
    rank of the length-L path map on the submodule, then the same on the quotient.
    Returns the number of profiles written to ``out``.
    """
    dmax = subs.shape[1]
    scratch = np.zeros((2 * dmax, dmax), dtype=np.int64)
    idx = np.zeros(n, dtype=np.int64)
    written = 0
    for lin in range(lo, hi):
        rem = lin
        for i in range(n):
            idx[i] = rem % counts[i]
            rem //= counts[i]
        ok = True
        for i in range(n):
            j = (i + 1) % n
            si = offsets[i] + idx[i]
            sj = offsets[j] + idx[j]
            ki = ks[si]
            kj = ks[sj]
            if ki == 0 or dims[j] == 0:
                continue
            for a in range(kj):
                for t in range(dims[j]):
                    scratch[a, t] = subs[sj, a, t]
            _image_rows(subs[si], ki, paths[i, 1], dims[i], dims[j], scratch, kj, mul, add)
            if rank_gf(scratch, kj + ki, dims[j], add, mul, neg, inv) != kj:
                ok = False
                break
        if not ok:
            continue
        col = 0
        for i in range(n):
            si = offsets[i] + idx[i]
            ki = ks[si]
            for L in range(lmax + 1):
                j = (i + L) % n
                dj = dims[j]
                _image_rows(subs[si], ki, paths[i, L], dims[i], dj, scratch, 0, mul, add)
                out[written, col] = rank_gf(scratch, ki, dj, add, mul, neg, inv)
                col += 1
        for i in range(n):
            di = dims[i]
            for L in range(lmax + 1):
                j = (i + L) % n
                dj = dims[j]
                sj = offsets[j] + idx[j]
                kj = ks[sj]
                for a in range(kj):
                    for t in range(dj):
                        scratch[a, t] = subs[sj, a, t]
                # columns of the path map are the images of the standard basis of vertex i
                for u in range(di):
                    for t in range(dj):
                        scratch[kj + u, t] = paths[i, L, t, u]
                out[written, col] = rank_gf(scratch, kj + di, dj, add, mul, neg, inv) - kj
                col += 1
        written += 1
    return written
