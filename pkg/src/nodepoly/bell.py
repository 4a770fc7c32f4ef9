"""Complete and partial exponential Bell polynomials.

``P_r`` is built from the recursion ``P_{r+1} = sum_s C(r, s) X_{r-s+1} P_s``;
``B_{r,k}`` from the multinomial formula.  The two constructions are
independent, which lets the test suite check ``P_r == sum_k B_{r,k}``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .exactalg import SparsePolynomial, WeightedRing


def bell_ring(r: int) -> WeightedRing:
    """Ring in ``X1..Xr`` with ``Xi`` of weight ``i``."""
    n = max(r, 1)
    return WeightedRing(tuple(f"X{i}" for i in range(1, n + 1)), tuple(range(1, n + 1)))


@lru_cache(maxsize=None)
def _complete(r: int) -> SparsePolynomial:
    ring = bell_ring(r)
    xs = ring.gens()
    table = [ring.one()]
    for n in range(r):
        table.append(sum((xs[n - s] * table[s] * comb(n, s) for s in range(n + 1)), ring.zero()))
    return table[r]


def complete_bell(r: int) -> SparsePolynomial:
    """The complete Bell polynomial ``P_r`` in ``X1..Xr``; zero when ``r < 0``."""
    if r < 0:
        return bell_ring(1).zero()
    return _complete(r)


def _compositions(total: int, parts: int, weight_total: int, start: int = 1):
    """Yield ``(i_start, ..., i_n)`` with sum ``total`` and ``sum j*i_j == weight_total``."""
    if start > parts:
        if total == 0 and weight_total == 0:
            yield ()
        return
    for i in range(min(total, weight_total // start) + 1):
        for rest in _compositions(total - i, parts, weight_total - start * i, start + 1):
            yield (i,) + rest


@lru_cache(maxsize=None)
def partial_bell(r: int, k: int) -> SparsePolynomial:
    """``B_{r,k}``: sum over block profiles with ``k`` blocks on ``r`` points."""
    if k < 0 or k > r:
        raise ValueError(f"partial Bell polynomial needs 0 <= k <= r, got r={r}, k={k}")
    ring = bell_ring(r)
    if k == 0:
        return ring.one() if r == 0 else ring.zero()
    top = r - k + 1
    terms = {}
    for profile in _compositions(k, top, r):
        coeff = factorial(r)
        for j, i in enumerate(profile, start=1):
            coeff //= factorial(i) * factorial(j) ** i
        exps = profile + (0,) * (ring.nvars - top)
        terms[exps] = coeff
    return SparsePolynomial(ring, terms)


def bell_eval(r: int, values: Sequence, one=None):
    """Evaluate ``P_r`` at ``values[0..r-1]`` in any commutative ring.

    Elements need ``+``, ``*`` and multiplication by an int.  ``P_0`` is
    ``one``, which defaults to the integer 1.
    """
    if r < 0:
        return 0 if one is None else one * 0
    if len(values) < r:
        raise ValueError(f"P_{r} needs {r} values, got {len(values)}")
    table = [1 if one is None else one]
    for n in range(r):
        acc = None
        for s in range(n + 1):
            term = values[n - s] * table[s]
            c = comb(n, s)
            if c != 1:
                term = term * c
            acc = term if acc is None else acc + term
        table.append(acc)
    return table[r]


def profile_exponents(r: int, profile: Sequence[int]) -> tuple[int, ...]:
    """Exponent tuple in :func:`bell_ring` for block profile ``(s_1, s_2, ...)``."""
    ring = bell_ring(r)
    padded = tuple(profile) + (0,) * (ring.nvars - len(profile))
    return padded[: ring.nvars]
