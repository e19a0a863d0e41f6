import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qloop.afmat import PerMatrix
from qloop.coeff import LaurentPoly

settings.register_profile("qloop", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("qloop")


def laurent(max_terms=4, lo=-4, hi=4, coeff=5):
    return st.dictionaries(st.integers(lo, hi), st.integers(-coeff, coeff), max_size=max_terms).map(LaurentPoly)


def offdiag(n=2, span=2, max_entry=2, max_norm=4):
    """Zero-diagonal nonnegative matrices with small support and norm."""
    positions = [(i, i + d) for i in range(1, n + 1) for d in range(-span, span + 1) if d]
    return (st.dictionaries(st.sampled_from(positions), st.integers(1, max_entry), max_size=4)
            .map(lambda e: PerMatrix(n, e))
            .filter(lambda A: A.norm() <= max_norm))


def tilde(n=2, span=2, max_entry=2, max_norm=4, diag=(-2, 2)):
    """Matrices with nonnegative off-diagonal part and a small integer diagonal."""
    return st.tuples(offdiag(n, span, max_entry, max_norm),
                     st.lists(st.integers(*diag), min_size=n, max_size=n)).map(
        lambda p: p[0] + PerMatrix.diag(p[1]))


def with_diag_for_cols(off: PerMatrix, target_co) -> PerMatrix:
    """``off`` plus the diagonal making its column sums equal ``target_co``."""
    return off + PerMatrix.diag([t - c for t, c in zip(target_co, off.co())])


def with_diag_for_rows(off: PerMatrix, target_ro) -> PerMatrix:
    return off + PerMatrix.diag([t - r for t, r in zip(target_ro, off.ro())])


@pytest.fixture
def P2():
    def make(entries, diag=(0, 0)):
        return PerMatrix(2, entries) + PerMatrix.diag(diag)
    return make


def small_vectors(n, hi):
    return list(itertools.product(range(hi + 1), repeat=n))
