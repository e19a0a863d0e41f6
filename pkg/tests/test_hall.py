import itertools
import json
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qloop import hall
from qloop.afmat import PerMatrix
from qloop.coeff import ONE, LaurentPoly
from qloop.hall import (HallElem, count_submodules, dim_hom, euler_form, generic_ext, hall_mul, hall_poly,
                        radical_word, reps_with_dimvec, simple_word, tight_exponent, total_dim)

v = LaurentPoly.monomial(1)


# -- brute-force model of nilpotent representations over GF(p) --------------


class Rep:
    """Basis vectors are (copy, position); the arrow moves position k to k + 1."""

    def __init__(self, A, p):
        self.n, self.p = A.n, p
        self.basis = []
        copy = 0
        for (i, j), a in A.items():
            for _ in range(a):
                self.basis += [(copy, k, j - i, (i - 1 + k) % A.n) for k in range(j - i)]
                copy += 1
        self.dim = len(self.basis)
        self.at = [[t for t, b in enumerate(self.basis) if b[3] == x] for x in range(self.n)]

    def arrow(self, vec):
        out = [0] * self.dim
        for t, c in enumerate(vec):
            if c:
                cp, k, length, _ = self.basis[t]
                if k + 1 < length:
                    out[self.basis.index((cp, k + 1, length, (self.basis[t][3] + 1) % self.n))] = c
        return tuple(out)

    def vectors_at(self, x):
        idx = self.at[x]
        for cs in itertools.product(range(self.p), repeat=len(idx)):
            vec = [0] * self.dim
            for t, c in zip(idx, cs):
                vec[t] = c
            yield tuple(vec)

    def span(self, gens):
        out = {tuple([0] * self.dim)}
        for g in gens:
            out = {tuple((a + c * b) % self.p for a, b in zip(u, g)) for u in out for c in range(self.p)}
        return frozenset(out)

    def subspaces_at(self, x):
        vecs = list(self.vectors_at(x))
        seen = set()
        for k in range(len(self.at[x]) + 1):
            for gens in itertools.combinations(vecs, k):
                seen.add(self.span(gens))
        return seen

    def path_rank(self, space, length):
        """log_p of the size of the image of ``space`` under the path of given length."""
        img = {self.apply(u, length) for u in space}
        return _log(len(img), self.p)

    def apply(self, u, length):
        for _ in range(length):
            u = self.arrow(u)
        return u


def _log(size, p):
    k = 0
    while size > 1:
        size //= p
        k += 1
    return k


def classify(n, lmax, rank):
    """Segment multiplicities from path ranks rank(vertex, length)."""
    def r(i, L):
        return 0 if L > lmax else rank(i % n, L)
    ent = {}
    for i in range(n):
        for L in range(1, lmax + 1):
            m = r(i, L - 1) - r(i, L) - r(i - 1, L) + r(i - 1, L + 1)
            if m:
                ent[(i + 1, i + 1 + L)] = m
    return PerMatrix(n, ent)


def brute_counts(C, p):
    R = Rep(C, p)
    n, lmax = C.n, max(1, total_dim(C))
    per_vertex = [R.subspaces_at(x) for x in range(n)]
    out = {}
    for choice in itertools.product(*per_vertex):
        if not all(R.arrow(u) in choice[(x + 1) % n] for x in range(n) for u in choice[x]):
            continue
        sub_space = [choice[x] for x in range(n)]
        full = [R.span([u for u in R.vectors_at(x)]) for x in range(n)]

        def sub_rank(i, L):
            return R.path_rank(sub_space[i], L)

        def quo_rank(i, L):
            img = {R.apply(u, L) for u in full[i]}
            tgt = sub_space[(i + L) % n]
            combined = {tuple((a + b) % p for a, b in zip(u, w)) for u in img for w in tgt}
            return _log(len(combined), p) - _log(len(tgt), p)

        key = (classify(n, lmax, quo_rank), classify(n, lmax, sub_rank))
        out[key] = out.get(key, 0) + 1
    return out


def reps_up_to(n, max_dim):
    out = []
    for total in range(1, max_dim + 1):
        for d in itertools.product(range(total + 1), repeat=n):
            if sum(d) == total:
                out += reps_with_dimvec(n, d)
    return out


SMALL_2 = reps_up_to(2, 3)
SMALL_3 = reps_up_to(3, 3)


@pytest.mark.parametrize("C", SMALL_2 + [PerMatrix(2, {(1, 3): 1, (2, 3): 1}), PerMatrix(2, {(1, 2): 2, (2, 3): 2})])
def test_count_submodules_brute_q2(C):
    assert count_submodules(C, 2) == brute_counts(C, 2)


@pytest.mark.parametrize("C", SMALL_3)
def test_count_submodules_brute_q2_n3(C):
    assert count_submodules(C, 2) == brute_counts(C, 2)


@pytest.mark.parametrize("C", reps_up_to(2, 2))
def test_count_submodules_brute_q3(C):
    assert count_submodules(C, 3) == brute_counts(C, 3)


@pytest.mark.parametrize("C", reps_up_to(2, 3))
def test_count_submodules_prime_power(C):
    # GF(4) counts agree with the interpolated polynomial, which is fit without q = 4 tables only
    counts = count_submodules(C, 4)
    for (A, B), c in counts.items():
        poly = hall_poly(A, B, C)
        assert sum(k * 4 ** (e // 2) for e, k in poly.items()) == c


def test_count_rejects_large():
    C = PerMatrix(2, {(1, 2): 7})
    with pytest.raises(ValueError):
        count_submodules(C, 2)


def test_reps_with_dimvec_brute():
    # multisets of segments (start, length) with the given dimension vector
    for n, d in [(2, (1, 1)), (2, (2, 2)), (3, (1, 1, 1)), (2, (3, 1))]:
        segs = [(i, L) for i in range(1, n + 1) for L in range(1, sum(d) + 1)]
        found = set()
        for mult in itertools.product(range(sum(d) + 1), repeat=len(segs)):
            dv = [0] * n
            for (i, L), m in zip(segs, mult):
                for k in range(L):
                    dv[(i - 1 + k) % n] += m
            if tuple(dv) == d:
                found.add(PerMatrix(n, {(i, i + L): m for (i, L), m in zip(segs, mult)}))
        assert set(reps_with_dimvec(n, d)) == found
    assert len(reps_with_dimvec(2, (1, 1))) == 3


def hom_count_brute(M, N, p=2):
    """Number of graded linear maps commuting with the arrows."""
    RM, RN = Rep(M, p), Rep(N, p)
    n = M.n
    per_vertex = []
    for x in range(n):
        src, tgt = RM.at[x], list(RN.vectors_at(x))
        per_vertex.append([dict(zip(src, imgs)) for imgs in itertools.product(tgt, repeat=len(src))])
    count = 0
    for f in itertools.product(*per_vertex):
        def apply(u):
            out = [0] * RN.dim
            for t, c in enumerate(u):
                if c:
                    img = f[RM.basis[t][3]][t]
                    out = [(a + c * b) % p for a, b in zip(out, img)]
            return tuple(out)
        ok = all(apply(RM.arrow(e)) == RN.arrow(apply(e))
                 for e in (tuple(1 if s == t else 0 for s in range(RM.dim)) for t in range(RM.dim)))
        count += ok
    return count


@pytest.mark.parametrize("M,N", list(itertools.product(reps_up_to(2, 2), repeat=2)))
def test_dim_hom_brute(M, N):
    assert 2 ** dim_hom(M, N) == hom_count_brute(M, N)


def test_euler_form_frozen():
    assert euler_form((1, 0), (0, 1)) == -1
    assert euler_form((0, 1), (1, 0)) == -1
    assert euler_form((1, 1), (1, 1)) == 0
    assert euler_form((1, 0, 0), (0, 0, 1)) == 0


def S(*alpha):
    return PerMatrix.upper_ss(alpha)


def test_products_frozen():
    S1, S2 = S(1, 0), S(0, 1)
    u1, u2 = HallElem.basis(S1), HallElem.basis(S2)
    assert u1 * u2 == HallElem(2, {S(1, 1): v.bar(), PerMatrix(2, {(1, 3): 1}): ONE})
    assert u2 * u1 == HallElem(2, {S(1, 1): v.bar(), PerMatrix(2, {(2, 4): 1}): ONE})
    # divided powers: u_{S1}^3 = [2][3] u~_{3 S1}
    assert u1 * u1 * u1 == HallElem(2, {S(3, 0): LaurentPoly({3: 1, 1: 2, -1: 2, -3: 1})})
    assert tight_exponent(PerMatrix(2, {(1, 3): 1})) == -1


def hall_elems(n=2, max_dim=1):
    mats = reps_up_to(n, max_dim)
    return st.lists(st.tuples(st.sampled_from(mats), st.integers(-2, 2)), min_size=1, max_size=2).map(
        lambda ts: sum((HallElem.basis(A, LaurentPoly.const(c)) for A, c in ts), HallElem(n)))


@given(hall_elems(max_dim=2), hall_elems(), hall_elems())
def test_hall_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(hall_elems(), hall_elems(), hall_elems())
def test_hall_distributive(x, y, z):
    assert x * (y + z) == x * y + x * z


def test_generic_extension_and_words():
    assert generic_ext(S(1, 0), S(0, 1)) == PerMatrix(2, {(1, 3): 1})
    A = PerMatrix(2, {(1, 3): 1, (2, 3): 1})
    assert radical_word(A) == ((1, 1), (0, 1))
    assert simple_word(A) == ((1, 0), (0, 2))
    with pytest.raises(ArithmeticError):
        simple_word(S(1, 1))


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("QLOOP_CACHE_DIR", str(tmp_path))
    C = PerMatrix(2, {(1, 3): 1, (2, 3): 1})
    table = hall.hall_table.__wrapped__(C)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    data = json.loads(files[0].read_text())
    assert data["validated"] == [hall.HELD_OUT[0]]
    assert hall.hall_table.__wrapped__(C) == table


_FALLBACK = """
import json
from qloop import _gfq
from qloop.afmat import PerMatrix
from qloop.hall import count_submodules
C = PerMatrix(2, {(1, 3): 1, (2, 3): 1, (1, 2): 1})
res = count_submodules(C, 3)
print(json.dumps({"numba": _gfq.HAVE_NUMBA,
                  "counts": sorted([a.to_json()["entries"], b.to_json()["entries"], c] for (a, b), c in res.items())}))
"""


def test_python_fallback_matches_compiled():
    outs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, QLOOP_DISABLE_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", _FALLBACK], env=env, capture_output=True, text=True,
                              check=True)
        outs[flag] = json.loads(proc.stdout)
    assert outs["1"]["numba"] is False
    assert outs["0"]["counts"] == outs["1"]["counts"]
