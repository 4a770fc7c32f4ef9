"""Universal classes in ``(v, w1, w2)``: the X-classes, the Q operator and
the b-class recursion feeding the node-class formula.

``v`` is the divisor class, ``w1``/``w2`` the Chern classes of the relative
cotangent sheaf; ``w2`` has weight 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable

from .bell import bell_eval
from .exactalg import (
    SparsePolynomial,
    WeightedRing,
    coefficient_of,
    divmod_univariate,
    substitute,
)

VW_RING = WeightedRing(("v", "w1", "w2"), (1, 1, 2))
BLOWUP_RING = VW_RING.extended("e:1")
_ROOT_RING = WeightedRing(("v", "t1", "t2"), (1, 1, 1))

# Constant attached to the quadruple-point class in the eighth b-class.
QUADRUPLE_POINT_CONSTANT = 3281 * factorial(7)

MAX_DELTA = 8


class SymmetrizationError(ArithmeticError):
    """A polynomial in the Chern roots was not symmetric."""


def _symmetric_rewrite(p: SparsePolynomial) -> SparsePolynomial:
    """Rewrite a polynomial symmetric in ``t1, t2`` in terms of ``w1 = t1 + t2``, ``w2 = t1 t2``."""
    t1, t2 = _ROOT_RING.gen("t1"), _ROOT_RING.gen("t2")
    e1, e2 = t1 + t2, t1 * t2
    out = {}
    rest = p
    while rest:
        # lex-leading monomial in (t1, t2) among all v-powers
        (k, a, b), c = max(rest.items(), key=lambda t: (t[0][1], t[0][2], t[0][0]))
        if a < b:
            raise SymmetrizationError(f"leftover non-symmetric term in {rest}")
        rest = rest - (e1 ** (a - b) * e2 ** b * _ROOT_RING.monomial(c, v=k))
        out[(k, a - b, b)] = out.get((k, a - b, b), 0) + c
    return SparsePolynomial(VW_RING, out)


@lru_cache(maxsize=None)
def principal_parts_top_chern(i: int) -> SparsePolynomial:
    """Top Chern class of the order-``(i-1)`` principal parts of ``O(D)``.

    Multiplies the Chern roots ``v + a*t1 + b*t2`` over ``a + b < i`` and
    symmetrizes.  Independent of any printed table.
    """
    if not 1 <= i <= 5:
        raise ValueError(f"X-class index must be in 1..5, got {i}")
    v, t1, t2 = _ROOT_RING.gens()
    prod = _ROOT_RING.one()
    for j in range(i):
        for a in range(j + 1):
            prod = prod * (v + t1 * a + t2 * (j - a))
    return _symmetric_rewrite(prod)


# Canonical X-classes as (v, w1, w2, coefficient) rows.  The x4 row carries
# 429 for v^5 w1^3 w2, the value the Chern-root product produces.
X_CLASS_TABLE: dict[int, tuple[tuple[int, int, int, int], ...]] = {
    2: ((3, 0, 0, 1), (2, 1, 0, 1), (1, 0, 1, 1)),
    3: ((6, 0, 0, 1), (5, 1, 0, 4), (4, 2, 0, 5), (4, 0, 1, 5), (3, 3, 0, 2), (3, 1, 1, 11),
        (2, 2, 1, 6), (2, 0, 2, 4), (1, 1, 2, 4)),
    4: ((10, 0, 0, 1), (9, 1, 0, 10), (8, 2, 0, 40), (8, 0, 1, 15), (7, 3, 0, 82), (7, 1, 1, 111),
        (6, 4, 0, 91), (6, 2, 1, 315), (6, 0, 2, 63), (5, 5, 0, 52), (5, 3, 1, 429),
        (5, 1, 2, 324), (4, 6, 0, 12), (4, 4, 1, 282), (4, 2, 2, 593), (4, 0, 3, 85),
        (3, 5, 1, 72), (3, 3, 2, 464), (3, 1, 3, 259), (2, 4, 2, 132), (2, 2, 3, 246),
        (2, 0, 4, 36), (1, 3, 3, 72), (1, 1, 4, 36)),
}


def x_class(i: int, oracle: bool = False) -> SparsePolynomial:
    """``[X_i]``: from the frozen table when present, else (or if ``oracle``) recomputed."""
    if oracle or i not in X_CLASS_TABLE:
        return principal_parts_top_chern(i)
    return SparsePolynomial(VW_RING, {(a, b, c): k for a, b, c, k in X_CLASS_TABLE[i]})


def q_operator(r: SparsePolynomial, i: int) -> SparsePolynomial:
    """``Q_{R,i}``: blow up a point of multiplicity ``i`` and keep minus the ``e^2`` part.

    Substitutes ``(v - i e, w1 + e, w2 - e^2)``, reduces modulo
    ``e^3 + w1 e^2 + w2 e`` and returns the negated ``e^2`` coefficient.
    """
    if i < 2:
        raise ValueError("Q operator needs i >= 2")
    v, w1, w2, e = BLOWUP_RING.gens()
    lifted = substitute(r, {"v": v - e * i, "w1": w1 + e, "w2": w2 - e * e}, BLOWUP_RING)
    modulus = e ** 3 + w1 * e ** 2 + w2 * e
    _, rem = divmod_univariate(lifted, "e", modulus)
    return (-coefficient_of(rem, "e", 2)).in_ring(VW_RING)


@dataclass(frozen=True)
class BClasses:
    delta: int
    classes: tuple[SparsePolynomial, ...]

    def __getitem__(self, i: int) -> SparsePolynomial:
        """1-based access: ``bset[1]`` is ``b_1``."""
        if not 1 <= i <= len(self.classes):
            raise IndexError(f"b_{i} not computed (delta={self.delta})")
        return self.classes[i - 1]

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)


@lru_cache(maxsize=None)
def _b_sequence(delta: int) -> tuple[SparsePolynomial, ...]:
    x2, x3, x4 = x_class(2), x_class(3), x_class(4)
    one = VW_RING.one()
    bs: list[SparsePolynomial] = []
    q2: list[SparsePolynomial] = []
    q3: list[SparsePolynomial] = []
    for s in range(delta):
        b = bell_eval(s, q2, one) * x2
        if s >= 3:
            b = b - bell_eval(s - 3, q3, one) * x3 * (s * (s - 1) * (s - 2))
        if s >= 7:
            b = b + bell_eval(s - 7, [], one) * x4 * QUADRUPLE_POINT_CONSTANT
        bs.append(b)
        q2.append(q_operator(b, 2))
        q3.append(q_operator(b, 3))
    return tuple(bs)


def b_classes(delta: int) -> BClasses:
    """``b_1 .. b_delta`` with every monomial retained."""
    if not 1 <= delta <= MAX_DELTA:
        raise ValueError(f"b-class recursion is only defined for 1 <= delta <= {MAX_DELTA}, got {delta}")
    return BClasses(delta, _b_sequence(MAX_DELTA)[:delta])


def node_class(delta: int, pushforward: Callable[[SparsePolynomial, int], object], one=1):
    """``P_delta(push(b_1), ..., push(b_delta)) / delta!``.

    ``pushforward(b, i)`` maps ``b_i`` to the base ring; ``one`` is the unit there.
    """
    if not 0 <= delta <= MAX_DELTA:
        raise ValueError(f"delta must be in 0..{MAX_DELTA}, got {delta}")
    if delta == 0:
        return one
    bset = b_classes(delta)
    pushed = [pushforward(bset[i], i) for i in range(1, delta + 1)]
    total = bell_eval(delta, pushed, one)
    return exact_scale(total, factorial(delta))


def exact_scale(value, n: int):
    """Divide by ``n``; integral values must stay integral."""
    if isinstance(value, int):
        if value % n:
            raise ArithmeticError(f"{value} is not divisible by {n}")
        return value // n
    if isinstance(value, Fraction):
        if value.denominator == 1 and value.numerator % n:
            raise ArithmeticError(f"{value} is not divisible by {n}")
        return value / n
    return value * Fraction(1, n)
