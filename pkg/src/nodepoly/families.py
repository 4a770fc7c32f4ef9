"""Push-forward models turning the universal b-classes into numbers.

Three families are modelled:

* a complete linear system on a fixed surface, with answers as linear
  forms in ``d = L^2``, ``k = L.K``, ``s = K^2``, ``x = c_2``;
* all planes in P^4 cut by a degree ``m`` threefold;
* the planes through a fixed line in that threefold.

Also holds the advisory checker for the printed validity thresholds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .exactalg import (
    SparsePolynomial,
    WeightedRing,
    as_rational,
    drop_powers,
    substitute,
    weighted_part,
)
from .kp_core import b_classes, node_class

DKSX_RING = WeightedRing(("d", "k", "s", "x"))
_DKSX = ("d", "k", "s", "x")


@dataclass(frozen=True)
class LinearForm:
    """``d*d + k*k + s*s + x*x`` with exact rational coefficients."""

    d: Fraction = Fraction(0)
    k: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    x: Fraction = Fraction(0)

    def __post_init__(self):
        for name in _DKSX:
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def zero(cls) -> "LinearForm":
        return cls()

    @classmethod
    def from_polynomial(cls, p: SparsePolynomial) -> "LinearForm":
        p = p.in_ring(DKSX_RING) if p.ring != DKSX_RING else p
        if not p.is_homogeneous(1):
            raise ValueError(f"not a linear form: {p}")
        return cls(*(p.coefficient(**{n: 1}) for n in _DKSX))

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.d, self.k, self.s, self.x)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(*(a + b for a, b in zip(self.coefficients(), other.coefficients())))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(*(a - b for a, b in zip(self.coefficients(), other.coefficients())))

    def __neg__(self) -> "LinearForm":
        return LinearForm(*(-a for a in self.coefficients()))

    def __mul__(self, c) -> "LinearForm":
        c = as_rational(c)
        return LinearForm(*(a * c for a in self.coefficients()))

    __rmul__ = __mul__

    def to_polynomial(self) -> SparsePolynomial:
        return SparsePolynomial(DKSX_RING, {
            (1, 0, 0, 0): self.d, (0, 1, 0, 0): self.k, (0, 0, 1, 0): self.s, (0, 0, 0, 1): self.x})

    def evaluate(self, surface: "SurfaceInvariants") -> Fraction:
        return sum((c * v for c, v in zip(self.coefficients(), surface.values())), Fraction(0))

    def pretty(self) -> str:
        return self.to_polynomial().pretty()

    def __str__(self) -> str:
        return self.pretty()


@dataclass(frozen=True)
class SurfaceInvariants:
    """Chern numbers of a polarized surface."""

    d: int
    k: int
    s: int
    x: int
    label: str = ""

    @classmethod
    def plane(cls, m: int) -> "SurfaceInvariants":
        """``P^2`` with ``L = O(m)``."""
        return cls(m * m, -3 * m, 9, 3, f"P2 degree {m}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "SurfaceInvariants":
        if "preset" in data:
            if str(data["preset"]).upper() != "P2":
                raise ValueError(f"unknown surface preset {data['preset']!r}")
            return cls.plane(int(data["degree"]))
        missing = [n for n in _DKSX if n not in data]
        if missing:
            raise ValueError(f"surface invariants missing {', '.join(missing)}")
        return cls(*(int(data[n]) for n in _DKSX))

    @classmethod
    def parse(cls, text: str) -> "SurfaceInvariants":
        """Accept JSON, or the shorthand ``P2:m``."""
        text = text.strip()
        if text.upper().startswith("P2:"):
            return cls.plane(int(text[3:]))
        return cls.from_mapping(json.loads(text))

    def values(self) -> tuple[int, int, int, int]:
        return (self.d, self.k, self.s, self.x)


# Fixed surface ------------------------------------------------------------

def fixed_surface_pushforward(alpha: int, beta1: int, beta2: int, delta: int) -> LinearForm:
    """Push forward ``v^alpha w1^beta1 w2^beta2`` to the linear system.

    The result multiplies the hyperplane class to the power ``delta``.
    """
    if alpha + beta1 + 2 * beta2 != delta + 2:
        return LinearForm.zero()
    if (beta1, beta2) == (0, 0):
        return LinearForm(d=comb(delta + 2, 2))
    if (beta1, beta2) == (1, 0):
        return LinearForm(k=delta + 1)
    if (beta1, beta2) == (2, 0):
        return LinearForm(s=1)
    if (beta1, beta2) == (0, 1):
        return LinearForm(x=1)
    return LinearForm.zero()


def push_to_surface_system(p: SparsePolynomial, delta: int | None = None) -> LinearForm:
    """Linear extension of :func:`fixed_surface_pushforward` to a polynomial in ``(v, w1, w2)``.

    With ``delta=None`` each monomial uses its own weighted degree minus 2.
    """
    total = LinearForm.zero()
    for (a, b1, b2), c in p.items():
        dl = a + b1 + 2 * b2 - 2 if delta is None else delta
        total = total + fixed_surface_pushforward(a, b1, b2, dl) * c
    return total


def a_coefficients(delta: int = 8) -> list[LinearForm]:
    """``a_1 .. a_delta`` for a linear system on a fixed surface."""
    bset = b_classes(delta)
    return [push_to_surface_system(bset[i], i) for i in range(1, delta + 1)]


@dataclass(frozen=True)
class NodePolynomial:
    delta: int
    body: SparsePolynomial

    def evaluate(self, surface: SurfaceInvariants) -> Fraction:
        return substitute(self.body, dict(zip(_DKSX, surface.values())), DKSX_RING).to_rational()

    def to_text(self) -> str:
        return self.body.to_text()

    def pretty(self) -> str:
        return self.body.pretty()


def node_polynomial(delta: int) -> NodePolynomial:
    if delta == 0:
        return NodePolynomial(0, DKSX_RING.one())
    forms = a_coefficients(delta)
    body = node_class(delta, lambda b, i: forms[i - 1].to_polynomial(), DKSX_RING.one())
    return NodePolynomial(delta, body)


def count_on_surface(surface: SurfaceInvariants, delta: int) -> Fraction:
    return node_polynomial(delta).evaluate(surface)


# Planes in P^4 -----------------------------------------------------------

P4_RING = WeightedRing(("m", "h", "q1", "q2"), (1, 1, 1, 2))
GRASSMANNIAN_RING = WeightedRing(("m", "q1", "q2"), (1, 1, 2))
_Q_GRADING = {"q1": 1, "q2": 2}
GRASSMANNIAN_DIM = 6
# degrees of the top monomials on the Grassmannian of planes in P^4
GRASSMANNIAN_TOP_DEGREES = {(6, 0): 5, (4, 1): 3, (2, 2): 2, (0, 3): 1}


def grassmannian_degree(p: SparsePolynomial) -> SparsePolynomial:
    """Integrate over the Grassmannian; coefficients may still involve ``m``."""
    ring = p.ring
    top = weighted_part(p, GRASSMANNIAN_DIM, _Q_GRADING)
    iq1, iq2 = ring.index("q1"), ring.index("q2")
    out = {}
    for exps, c in top.items():
        key = (exps[iq1], exps[iq2])
        if key not in GRASSMANNIAN_TOP_DEGREES:
            continue
        rest = list(exps)
        rest[iq1] = rest[iq2] = 0
        out[tuple(rest)] = out.get(tuple(rest), 0) + c * GRASSMANNIAN_TOP_DEGREES[key]
    return SparsePolynomial(ring, out)


def _fiber_integral(p: SparsePolynomial) -> SparsePolynomial:
    """Integrate the ``h``-powers over the plane fibres."""
    h = P4_RING.index("h")
    q1, q2 = GRASSMANNIAN_RING.gen("q1"), GRASSMANNIAN_RING.gen("q2")
    images = {2: GRASSMANNIAN_RING.one(), 3: q1, 4: q1 * q1 - q2}
    out = GRASSMANNIAN_RING.zero()
    for exps, c in p.items():
        if exps[h] not in images:
            continue
        rest = SparsePolynomial(GRASSMANNIAN_RING, {exps[:h] + exps[h + 1:]: c})
        out = out + rest * images[exps[h]]
    return out


class P4Model:
    """The universal plane over the Grassmannian of planes in P^4.

    ``m`` is the degree of the threefold; ``None`` keeps it symbolic.
    ``divisor`` overrides the class of the relative divisor (default ``m*h``).
    """

    def __init__(self, m: int | None = None, divisor: SparsePolynomial | None = None):
        self.m = m
        ring = P4_RING
        mm = ring.gen("m") if m is None else ring.const(m)
        h, q1, q2 = ring.gen("h"), ring.gen("q1"), ring.gen("q2")
        self.v = mm * h if divisor is None else divisor
        # Chern classes of the relative cotangent sheaf, from c(Omega(1)) = c(Q)/(1+h).
        # The 3h^2 in w2 is needed; without it the degree-6 count is wrong.
        self.w1 = q1 - h * 3
        self.w2 = q2 - h * q1 * 2 + h * h * 3

    def pushforward(self, b: SparsePolynomial, i: int | None = None) -> SparsePolynomial:
        lifted = substitute(b, {"v": self.v, "w1": self.w1, "w2": self.w2}, P4_RING)
        return _fiber_integral(drop_powers(lifted, "h", 4))

    def node_class(self, delta: int) -> SparsePolynomial:
        if not 0 <= delta <= GRASSMANNIAN_DIM:
            raise ValueError(f"delta must be at most {GRASSMANNIAN_DIM} for planes in P^4, got {delta}")
        return node_class(delta, self.pushforward, GRASSMANNIAN_RING.one())


@dataclass(frozen=True)
class P4NodeClass:
    delta: int
    m: int | None
    node_class: SparsePolynomial
    degree: SparsePolynomial | None = None

    def degree_value(self) -> Fraction:
        if self.degree is None:
            raise ValueError("degree only defined for delta = 6")
        return self.degree.to_rational()


def p4_node_class(delta: int, m: int | None = None) -> P4NodeClass:
    """Class of the ``delta``-nodal plane sections, and its degree when ``delta = 6``."""
    cls = P4Model(m).node_class(delta)
    degree = grassmannian_degree(cls) if delta == GRASSMANNIAN_DIM else None
    return P4NodeClass(delta, m, cls, degree)


def p4_pairing(delta: int, m: int | None, other: SparsePolynomial) -> SparsePolynomial:
    """Degree of ``node_class(delta) * other`` on the Grassmannian."""
    cls = P4Model(m).node_class(delta)
    return grassmannian_degree(cls * other.in_ring(GRASSMANNIAN_RING))


def residual_line_divisor(m: int, reading: str = "residual") -> SparsePolynomial:
    """Divisor class used for the planes-through-a-line family.

    ``"residual"`` is the quartic left after removing the line,
    ``m*h - (h - q1)``; ``"line"`` is the line divisor ``h - q1`` itself.
    """
    h, q1 = P4_RING.gen("h"), P4_RING.gen("q1")
    line = h - q1
    if reading == "residual":
        return h * m - line
    if reading == "line":
        return line
    raise ValueError(f"unknown divisor reading {reading!r}")


def planes_through_line_count(delta: int = 2, m: int = 5, reading: str = "residual") -> Fraction:
    """2-nodal residual curves in the plane of planes through a line on the threefold."""
    if delta != 2:
        raise ValueError("the planes-through-a-line family is only set up for delta = 2")
    model = P4Model(m, residual_line_divisor(m, reading))
    q1, q2 = GRASSMANNIAN_RING.gen("q1"), GRASSMANNIAN_RING.gen("q2")
    schubert = (q1 * q1 - q2) ** 2
    return grassmannian_degree(schubert * model.node_class(delta)).to_rational()


QUINTIC_LINES = 2875
QUINTIC_CONICS = 609250


def quintic_irreducible_count() -> Fraction:
    """Irreducible 6-nodal plane quintics on a general quintic threefold."""
    total = p4_node_class(6, 5).degree_value()
    return total - QUINTIC_CONICS - QUINTIC_LINES * planes_through_line_count(2, 5)


# Validity advisor ---------------------------------------------------------

DELTA8_CAVEAT = ("delta = 8 additionally needs the cross-ratio of the four tangents at "
                 "a quadruple point to vary; this is not checked")


@dataclass
class ValidityReport:
    setting: str
    delta: int
    valid: bool | None
    conditions: list[str] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        head = {True: "valid", False: "not guaranteed", None: "undetermined"}[self.valid]
        return [f"{self.setting}, delta={self.delta}: {head}"] + self.conditions + [
            f"caveat: {c}" for c in self.caveats]


def _k3_like(setting: str, delta: int, L2: int, m: int, k: int, first_bound) -> ValidityReport:
    report = ValidityReport(setting, delta, None)
    if m == 1:
        ok = first_bound(k, L2)
        report.valid = ok
        report.conditions.append(f"m = 1: {'holds' if ok else 'fails'} for L^2 = {L2}")
        return report
    readings = {"L^2 of the primitive class": L2, "L^2 of m times the primitive class": m * m * L2}
    verdicts = []
    for name, val in readings.items():
        ok = Fraction(k + 1) < Fraction(m - 1, m * m) * val
        verdicts.append(ok)
        report.conditions.append(f"k + 1 < (m-1)/m^2 L^2 with {name} ({val}): {'holds' if ok else 'fails'}")
    report.valid = True if all(verdicts) else (False if not any(verdicts) else None)
    if report.valid is None:
        report.caveats.append("the two readings of L^2 disagree")
    return report


def validity_check(setting: str, delta: int, **params) -> ValidityReport:
    """Advisory check of the printed sufficient conditions; never blocks anything.

    Settings: ``generic`` (m), ``plane`` (d), ``k3-rho1`` and ``abelian-rho1``
    (L2, m, k; ``k`` is the k-very-ampleness level).
    """
    if setting == "generic":
        m = params["m"]
        report = ValidityReport(setting, delta, m >= 3 * delta, [f"m >= 3*delta: {m} >= {3 * delta}"])
    elif setting == "plane":
        d = params["d"]
        bound = Fraction(delta, 2) + 1
        ok = delta == 0 or d >= bound
        report = ValidityReport(setting, delta, ok, [f"d >= delta/2 + 1: {d} >= {bound}"])
    elif setting == "k3-rho1":
        report = _k3_like(setting, delta, params["L2"], params["m"], params["k"],
                          lambda k, L2: Fraction(k) <= Fraction(L2, 4))
    elif setting == "abelian-rho1":
        report = _k3_like(setting, delta, params["L2"], params["m"], params["k"],
                          lambda k, L2: Fraction(k + 1) <= Fraction(L2, 4))
    else:
        raise ValueError(f"unknown validity setting {setting!r}")
    if delta == 8:
        report.caveats.append(DELTA8_CAVEAT)
    return report
