"""Residual polynomials for multisingularities and the counts built from them.

Residual classes ``R_S`` are polynomials in ``v`` and the classes
``alpha_1..alpha_4``.  Substituting the alpha classes of a family and
pushing forward gives:

* the linear forms ``a_S`` for linear systems on a fixed surface, and
* hyperplane contact counts for a smooth hypersurface in P^2 or P^3.

Counts for multisingularities come from a sum over set partitions.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Mapping

from .exactalg import (
    SparsePolynomial,
    WeightedRing,
    drop_powers,
    series_inverse,
    substitute,
    weighted_part,
)
from .families import (
    DKSX_RING,
    LinearForm,
    SurfaceInvariants,
    push_to_surface_system,
)
from .kp_core import VW_RING, x_class
from .partition_lattice import all_partitions

ALPHA_RING = WeightedRing(("v", "alpha1", "alpha2", "alpha3", "alpha4"), (1, 1, 2, 3, 4))
MAX_ALPHA = 4

GENERICITY_CAVEAT = ("enumerative only for sufficiently generic families: curves off the "
                     "versal-deformation locus must have codimension above codim(S)")
UNVERIFIED_CAVEAT = "unverified convention: no printed value checks this multisingularity"


# multisingularity specs ---------------------------------------------------

_NAME = r"(?:X1,0|[ADE]\d+)"
_TOKEN = re.compile(rf"(\d*)({_NAME})(?:\^(\d+))?")


def _type_key(name: str) -> tuple:
    m = re.fullmatch(r"([A-Z])(\d+)(?:,(\d+))?", name)
    return (m.group(1), int(m.group(2)), int(m.group(3) or 0)) if m else (name,)


def local_codimension(name: str) -> int:
    """Codimension of a single local singularity type (A_k, D_k, E_k have k)."""
    if name == "X1,0":
        return 8
    m = re.fullmatch(r"[ADE](\d+)", name)
    if not m:
        raise ValueError(f"unknown singularity type {name!r}")
    return int(m.group(1))


@dataclass(frozen=True)
class MultisingularitySpec:
    """An unordered multiset of local singularity types."""

    counts: tuple[tuple[str, int], ...]

    def __post_init__(self):
        merged = Counter()
        for name, c in self.counts:
            if c < 0:
                raise ValueError(f"negative count for {name}")
            merged[name] += c
        object.__setattr__(self, "counts", tuple(sorted(
            ((n, c) for n, c in merged.items() if c), key=lambda t: _type_key(t[0]))))

    @classmethod
    def of(cls, *names: str) -> "MultisingularitySpec":
        return cls(tuple(Counter(names).items()))

    @property
    def members(self) -> tuple[str, ...]:
        """One entry per point, in canonical order."""
        return tuple(n for n, c in self.counts for _ in range(c))

    @property
    def size(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def aut(self) -> int:
        return prod(factorial(c) for _, c in self.counts)

    @property
    def codim(self) -> int:
        return sum(local_codimension(n) * c for n, c in self.counts)

    @property
    def key(self) -> str:
        return "*".join(n if c == 1 else f"{n}^{c}" for n, c in self.counts)

    def __str__(self) -> str:
        return self.key


def parse_spec(text: str | MultisingularitySpec) -> MultisingularitySpec:
    """Parse ``"A1^3"``, ``"A1*A2"``, ``"D4+2A1"`` or ``"A1^2A2"``."""
    if isinstance(text, MultisingularitySpec):
        return text
    counts: Counter = Counter()
    pieces = [p.strip() for p in re.split(r"[+*]", text.replace(" ", ""))]
    if not any(pieces):
        raise ValueError("empty multisingularity spec")
    for piece in pieces:
        if not piece:
            raise ValueError(f"empty token in {text!r}")
        pos = 0
        while pos < len(piece):
            m = _TOKEN.match(piece, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse token {piece[pos:]!r} in {text!r}")
            mult = int(m.group(1) or 1) * int(m.group(3) or 1)
            counts[m.group(2)] += mult
            pos = m.end()
    return MultisingularitySpec(tuple(counts.items()))


# residual table -----------------------------------------------------------

def _residual_table() -> dict[str, SparsePolynomial]:
    v, a1, a2, a3, a4 = ALPHA_RING.gens()
    one = ALPHA_RING.one()
    entries = {
        "A1": one,
        "A2": a1,
        "A1^2": -v - a1 * 3,
        "A3": v * a1 + a2 * 3,
        "A1*A2": (v * a1 + a2 * 2) * -6,
        "A1^3": (v ** 2 + v * a1 * 19 + a2 * 30) * 2,
        "A4": v ** 2 * a1 + v * a2 * 4 + a1 * a2 * 3 + a3 * 6,
        "D4": -v * a2 + a1 * a2 - a3 * 2,
        "A1*A3": (v ** 2 * a1 * 2 + v * a2 * 5 + a1 * a2 * 6 + a3 * 3) * -4,
        "A2^2": (v ** 2 * a1 * 3 + v * a2 * 8 + a1 * a2 * 7 + a3 * 6) * -3,
        "A1^2*A2": (v ** 2 * a1 * 3 + v * a2 * 7 + a1 * a2 * 6 + a3 * 3) * 24,
        "A1^4": (v ** 3 + v ** 2 * a1 * 111 + v * a2 * 239 + a1 * a2 * 171 + a3 * 78) * -6,
        "A5": (v ** 3 * a1 - v ** 2 * a2 * 4 + v * a1 * a2 * 16 - v * a3 * 12
               + a1 * a3 * 27 + a4 * 6),
        "D5": (v ** 2 * a2 * 2 - v * a1 * a2 * 2 + v * a3 * 7 - a1 * a3 * 3 + a4 * 6) * -2,
        "A1*A4": (v ** 3 * a1 - v ** 2 * a2 * 4 + v * a1 * a2 * 14 - v * a3 * 16
                  + a1 * a3 * 21 - a4 * 6) * -10,
        "A1*D4": (v ** 2 * a2 * 5 - v * a1 * a2 * 5 + v * a3 * 16 - a1 * a3 * 6 + a4 * 12) * 4,
        "A2*A3": (v ** 3 * a1 * 2 - v ** 2 * a2 * 10 + v * a1 * a2 * 28 - v * a3 * 39
                  + a1 * a3 * 39 - a4 * 18) * -6,
        "A1^2*A3": (v ** 3 * a1 * 56 - v ** 2 * a2 * 220 + v * a1 * a2 * 684 - v * a3 * 951
                    + a1 * a3 * 891 - a4 * 522) * 2,
        "A1*A2^2": (v ** 3 * a1 * 7 - v ** 2 * a2 * 20 + v * a1 * a2 * 74 - v * a3 * 96
                    + a1 * a3 * 95 - a4 * 50) * 18,
        "A1^3*A2": (v ** 3 * a1 * 28 - v ** 2 * a2 * 55 + v * a1 * a2 * 250 - v * a3 * 318
                    + a1 * a3 * 300 - a4 * 180) * -48,
        "A1^5": (v ** 4 + v ** 3 * a1 * 671 - v ** 2 * a2 * 701 + v * a1 * a2 * 4863
                 - v * a3 * 5844 + a1 * a3 * 5490 - a4 * 3420) * 24,
    }
    return {parse_spec(k).key: p for k, p in entries.items()}


RESIDUAL_TABLE: dict[str, SparsePolynomial] = _residual_table()


class UntabulatedError(KeyError):
    pass


def residual_class(spec) -> SparsePolynomial:
    spec = parse_spec(spec)
    try:
        return RESIDUAL_TABLE[spec.key]
    except KeyError:
        raise UntabulatedError(
            f"{spec.key}: beyond tabulated codimension (residual classes are known for "
            f"critical-locus codimension at most 4)") from None


# alpha classes ------------------------------------------------------------

@lru_cache(maxsize=None)
def alpha_classes(max_index: int = MAX_ALPHA) -> tuple[SparsePolynomial, ...]:
    """``alpha_1 .. alpha_max`` for surface fibres, untruncated, in ``(v, w1, w2)``."""
    v, w1, w2 = VW_RING.gens()
    numerator = (1 + v) ** 2 + (1 + v) * w1 + w2
    total = numerator * series_inverse(1 - w1 + w2, max_index)
    return tuple(weighted_part(total, i) for i in range(1, max_index + 1))


def fixed_surface_reduce(p: SparsePolynomial) -> SparsePolynomial:
    """Drop monomials whose ``w1 + 2*w2`` degree exceeds 2 (zero on a surface)."""
    i1, i2 = p.ring.index("w1"), p.ring.index("w2")
    return SparsePolynomial(p.ring, {e: c for e, c in p.items() if e[i1] + 2 * e[i2] <= 2})


def residual_in_vw(spec) -> SparsePolynomial:
    alphas = alpha_classes()
    assignments = {f"alpha{i}": a for i, a in enumerate(alphas, start=1)}
    assignments["v"] = VW_RING.gen("v")
    return substitute(residual_class(spec), assignments, VW_RING)


def a_linear_form(spec) -> LinearForm:
    """``a_S``: push forward ``R_S(v, alpha) * x_2`` to the linear system."""
    return push_to_surface_system(residual_in_vw(spec) * x_class(2))


# surface counts -----------------------------------------------------------

def _sub_spec(members: tuple[str, ...], block) -> MultisingularitySpec:
    return MultisingularitySpec.of(*(members[i - 1] for i in block))


def partition_sum(spec, block_value, one):
    """Sum over set partitions of the points of ``spec`` of products of ``block_value``."""
    spec = parse_spec(spec)
    members = spec.members
    total = None
    for part in all_partitions(spec.size):
        term = one
        for block in part.blocks:
            term = term * block_value(_sub_spec(members, block))
        total = term if total is None else total + term
    return one if total is None else total


@dataclass
class CountResult:
    spec: MultisingularitySpec
    value: object
    caveats: list[str] = field(default_factory=list)


def _surface_verified(spec: MultisingularitySpec) -> bool:
    names = {n for n, _ in spec.counts}
    return spec.size == 1 or (names == {"A1"} and spec.size <= 5)


def multisingularity_polynomial(spec) -> SparsePolynomial:
    """``N_S`` as a polynomial in ``(d, k, s, x)``."""
    spec = parse_spec(spec)
    total = partition_sum(spec, lambda sub: a_linear_form(sub).to_polynomial(), DKSX_RING.one())
    return total * Fraction(1, spec.aut)


def multisingularity_count(spec, surface: SurfaceInvariants | None = None) -> CountResult:
    """``N_S`` on a surface, or symbolically when ``surface`` is ``None``."""
    spec = parse_spec(spec)
    poly = multisingularity_polynomial(spec)
    if surface is None:
        value = poly
    else:
        value = substitute(poly, dict(zip("dksx", surface.values())), DKSX_RING).to_rational()
    caveats = [GENERICITY_CAVEAT]
    if not _surface_verified(spec):
        caveats.append(UNVERIFIED_CAVEAT)
    return CountResult(spec, value, caveats)


# hyperplane contacts ------------------------------------------------------

CONTACT_RING = WeightedRing(("d", "h"), (1, 1))
DUAL_RING = WeightedRing(("d", "H"), (1, 1))
DEGREE_RING = WeightedRing(("d",), (1,))
_VERIFIED_CONTACTS = {(2, "A2"), (2, "A1^2"), (3, "A3"), (3, "A1*A2"), (3, "A1^3")}


class HypersurfaceContactModel:
    """Conormal variety of a smooth degree-``d`` hypersurface in P^n, ``n`` in {2, 3}.

    It is identified with the hypersurface itself; ``h`` is the hyperplane
    class there, so ``h^n = 0`` and ``h^(n-1)`` has degree ``d``.  The Gauss
    map pulls the dual hyperplane class back to ``(d - 1) h``.
    """

    def __init__(self, n: int):
        if n not in (2, 3):
            raise ValueError(f"contact model supports n = 2 or 3, got {n}")
        self.n = n
        d, h = CONTACT_RING.gens()
        self.d, self.h = d, h
        self.v = d * h
        grading = {"h": 1}
        top = n - 1
        tangent = self._cut((1 + h) ** (n + 1) * series_inverse(1 + d * h, top, grading))
        chern_t = [weighted_part(tangent, i, grading) for i in range(n)]
        twisted = CONTACT_RING.zero()
        for i in range(n):
            twisted = twisted + chern_t[i] * (-1) ** i * (1 + self.v) ** (n - 1 - i)
        alpha = self._cut(self._cut(twisted) * series_inverse(tangent, top, grading))
        self.alphas = tuple(weighted_part(alpha, i, grading) for i in range(1, MAX_ALPHA + 1))

    def _cut(self, p: SparsePolynomial) -> SparsePolynomial:
        return drop_powers(p, "h", self.n - 1)

    def residual(self, spec) -> SparsePolynomial:
        assignments = {f"alpha{i}": a for i, a in enumerate(self.alphas, start=1)}
        assignments["v"] = self.v
        return self._cut(substitute(residual_class(spec), assignments, CONTACT_RING))

    def pushforward(self, p: SparsePolynomial) -> SparsePolynomial:
        """To the dual P^n: ``h^a -> d (d-1)^(n-1-a) H^(a+1)``."""
        d, H = DUAL_RING.gens()
        out = DUAL_RING.zero()
        for (dk, a), c in p.items():
            if a <= self.n - 1:
                out = out + d ** (dk + 1) * (d - 1) ** (self.n - 1 - a) * H ** (a + 1) * c
        return out

    def pull_push(self, p: SparsePolynomial) -> SparsePolynomial:
        """Composite ``h^a -> d (d-1)^n h^(a+1)`` on the hypersurface."""
        d, h = self.d, self.h
        out = CONTACT_RING.zero()
        for (dk, a), c in p.items():
            out = out + d ** (dk + 1) * (d - 1) ** self.n * h ** (a + 1) * c
        return self._cut(out)

    def degree(self, p: SparsePolynomial) -> SparsePolynomial:
        """Coefficient of ``H^n`` as a polynomial in ``d``."""
        top = {(e[0],): c for e, c in p.items() if e[1] == self.n}
        return SparsePolynomial(DEGREE_RING, top)

    def n_class(self, spec) -> SparsePolynomial:
        return partition_sum(spec, lambda sub: self.pushforward(self.residual(sub)), DUAL_RING.one())

    def m_class(self, spec) -> SparsePolynomial:
        """Class on the hypersurface; the block holding the first point stays unpushed."""
        spec = parse_spec(spec)
        members = spec.members
        total = CONTACT_RING.zero()
        for part in all_partitions(spec.size):
            first, *rest = part.blocks
            term = self.residual(_sub_spec(members, first))
            for block in rest:
                term = self._cut(term * self.pull_push(self.residual(_sub_spec(members, block))))
            total = total + term
        return total


def contact_count(n: int, spec, d: int | None = None) -> CountResult:
    """Hyperplanes meeting a general degree-``d`` hypersurface in P^n with contact ``spec``.

    With ``d=None`` the value is a polynomial in ``d``.
    """
    spec = parse_spec(spec)
    if spec.codim != n:
        raise ValueError(f"{spec.key} has codimension {spec.codim}, but the dual P^{n} needs {n}")
    model = HypersurfaceContactModel(n)
    poly = model.degree(model.n_class(spec)) * Fraction(1, spec.aut)
    value = poly if d is None else substitute(poly, {"d": d}, DEGREE_RING).to_rational()
    caveats = [GENERICITY_CAVEAT]
    if (n, spec.key) not in _VERIFIED_CONTACTS:
        caveats.append(UNVERIFIED_CAVEAT)
    return CountResult(spec, value, caveats)


def tabulated_specs() -> list[str]:
    return list(RESIDUAL_TABLE)


def sub_specs_tabulated(spec) -> bool:
    """True when every sub-multiset reached by the partition sum has a residual class."""
    spec = parse_spec(spec)
    members = spec.members
    return all(_sub_spec(members, b).key in RESIDUAL_TABLE
               for part in all_partitions(spec.size) for b in part.blocks)


def spec_from_mapping(data: Mapping[str, int]) -> MultisingularitySpec:
    return MultisingularitySpec(tuple(data.items()))
