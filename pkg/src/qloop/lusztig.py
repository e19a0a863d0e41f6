"""Lusztig's lemma: bar-invariant bases from a unitriangular bar matrix."""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

from .coeff import ONE, ZERO, LaurentPoly


def lusztig_solve(
    top: Hashable,
    below: Sequence[Hashable],
    bar_of: Callable[[Hashable], Mapping[Hashable, LaurentPoly]],
    key=None,
) -> dict:
    """Coefficients g with g_top = 1, g_C in v^{-1}Z[v^{-1}] and sum g_C b_C bar-invariant.

    ``below`` lists every basis index that can appear under ``top``; ``bar_of(B)``
    expands the bar image of b_B.  Indices are processed from the top down in
    the order given by ``key`` (default: the reverse of ``below``), which must
    be a linear extension of the partial order.
    """
    order = sorted(below, key=key, reverse=True) if key else list(reversed(list(below)))
    if top in order:
        order.remove(top)
    g = {top: ONE}
    bars = {top: bar_of(top)}
    if bars[top].get(top, ZERO) != ONE:
        raise ArithmeticError("bar matrix is not unitriangular at the top")
    for C in order:
        rhs = ZERO
        for B, gb in g.items():
            k = bars[B].get(C)
            if k:
                rhs = rhs + gb.bar() * k
        if rhs:
            if rhs[0] != 0 or rhs != -rhs.bar():
                raise ArithmeticError(f"no bar-invariant solution at {C!r}")
            neg = rhs.negative_part()
            if neg:
                g[C] = neg
                bars[C] = bar_of(C)
                if bars[C].get(C, ZERO) != ONE:
                    raise ArithmeticError(f"bar matrix is not unitriangular at {C!r}")
    return g
