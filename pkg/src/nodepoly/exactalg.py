"""Exact sparse multivariate polynomials over the rationals.

Polynomials live in a :class:`WeightedRing`, which fixes the variable order,
the weight of each variable and an optional cap on the weighted degree.
Every coefficient is a :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]
Exponents = tuple[int, ...]


class RingMismatchError(ValueError):
    """Operands belong to different rings."""


def as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def format_rational(c: Fraction) -> str:
    """``p/q``, or ``p`` when the denominator is 1."""
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class WeightedRing:
    variables: tuple[str, ...]
    weights: tuple[int, ...] = ()
    truncation: int | None = None

    def __post_init__(self):
        variables = tuple(self.variables)
        weights = tuple(self.weights) if self.weights else (1,) * len(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        if len(weights) != len(variables):
            raise ValueError("one weight per variable is required")
        if any(w < 1 for w in weights):
            raise ValueError("variable weights must be >= 1")
        if self.truncation is not None and self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def of(cls, spec: str | Iterable, truncation: int | None = None) -> "WeightedRing":
        """Build from ``"v:1 w1:1 w2:2"``-style text or ``[("v", 1), ...]`` pairs."""
        if isinstance(spec, str):
            pairs = []
            for tok in spec.split():
                name, _, w = tok.partition(":")
                pairs.append((name, int(w) if w else 1))
        else:
            pairs = [(p, 1) if isinstance(p, str) else tuple(p) for p in spec]
        return cls(tuple(n for n, _ in pairs), tuple(w for _, w in pairs), truncation)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"variable {var!r} not in ring {self.variables}") from None

    def degree_of(self, exps: Exponents) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def with_truncation(self, truncation: int | None) -> "WeightedRing":
        return WeightedRing(self.variables, self.weights, truncation)

    def extended(self, spec: str | Iterable) -> "WeightedRing":
        extra = WeightedRing.of(spec)
        return WeightedRing(self.variables + extra.variables,
                            self.weights + extra.weights, self.truncation)

    # constructors
    def zero(self) -> "SparsePolynomial":
        return SparsePolynomial(self, {})

    def one(self) -> "SparsePolynomial":
        return self.const(1)

    def const(self, c: Scalar) -> "SparsePolynomial":
        return SparsePolynomial(self, {(0,) * self.nvars: c})

    def gen(self, var: str) -> "SparsePolynomial":
        exps = [0] * self.nvars
        exps[self.index(var)] = 1
        return SparsePolynomial(self, {tuple(exps): 1})

    def gens(self) -> tuple["SparsePolynomial", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def monomial(self, coeff: Scalar = 1, **powers: int) -> "SparsePolynomial":
        exps = [0] * self.nvars
        for var, k in powers.items():
            exps[self.index(var)] = k
        return SparsePolynomial(self, {tuple(exps): coeff})

    def __str__(self) -> str:
        body = ", ".join(f"{v}:{w}" for v, w in zip(self.variables, self.weights))
        return f"Q[{body}]" + (f"/deg>{self.truncation}" if self.truncation is not None else "")


class SparsePolynomial:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero rationals."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: WeightedRing, terms: Mapping[Exponents, Scalar] | None = None):
        self.ring = ring
        clean: dict[Exponents, Fraction] = {}
        trunc = ring.truncation
        n = ring.nvars
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for ring {ring.variables}")
            if trunc is not None and ring.degree_of(exps) > trunc:
                continue
            c = as_rational(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: WeightedRing, terms: dict[Exponents, Fraction]) -> "SparsePolynomial":
        # caller guarantees canonical, truncated, zero-free terms
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    # inspection
    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def coefficient(self, **powers: int) -> Fraction:
        exps = [0] * self.ring.nvars
        for var, k in powers.items():
            exps[self.ring.index(var)] = k
        return self._terms.get(tuple(exps), Fraction(0))

    def degree_in(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        i = self.ring.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def weighted_degrees(self) -> set[int]:
        return {self.ring.degree_of(e) for e in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.weighted_degrees()
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def variables_used(self) -> set[str]:
        used = set()
        for exps in self._terms:
            used.update(v for v, e in zip(self.ring.variables, exps) if e)
        return used

    # arithmetic
    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exps, c in other._terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return SparsePolynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "SparsePolynomial":
        c = as_rational(c)
        if not c:
            return self.ring.zero()
        return SparsePolynomial._raw(self.ring, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        trunc = ring.truncation
        weights = ring.weights
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if trunc is not None and sum(x * w for x, w in zip(exps, weights)) > trunc:
                    continue
                s = out.get(exps, 0) + c1 * c2
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return SparsePolynomial._raw(ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"negative or non-integer power {k!r}")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # conversion
    def to_rational(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.constant_term()

    def in_ring(self, ring: WeightedRing) -> "SparsePolynomial":
        """Re-express in another ring that contains every variable used here."""
        idx = []
        for var in self.ring.variables:
            idx.append(ring.index(var) if var in ring.variables else None)
        out = {}
        for exps, c in self._terms.items():
            new = [0] * ring.nvars
            for i, e in enumerate(exps):
                if e:
                    if idx[i] is None:
                        raise KeyError(f"variable {self.ring.variables[i]!r} missing from target ring")
                    new[idx[i]] = e
            out[tuple(new)] = c
        return SparsePolynomial(ring, out)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Canonical order: descending weighted degree, then descending lex."""
        deg = self.ring.degree_of
        return sorted(self._terms.items(), key=lambda t: (deg(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        return _render(self, star="*", pow_sym="^")

    def pretty(self) -> str:
        """Compact one-line form, e.g. ``3d + 2k + x``."""
        return _render(self, star="", pow_sym="^")

    def to_records(self) -> list[dict]:
        out = []
        for exps, c in self.sorted_terms():
            out.append({
                "coefficient": format_rational(c),
                "exponents": {v: e for v, e in zip(self.ring.variables, exps) if e},
            })
        return out

    @classmethod
    def from_records(cls, ring: WeightedRing, records: Iterable[Mapping]) -> "SparsePolynomial":
        terms: dict[Exponents, Fraction] = {}
        for rec in records:
            exps = [0] * ring.nvars
            for var, e in rec["exponents"].items():
                exps[ring.index(var)] = int(e)
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + Fraction(rec["coefficient"])
        return cls(ring, terms)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"SparsePolynomial({self.to_text()!r})"


Poly = SparsePolynomial


def _render(p: SparsePolynomial, star: str, pow_sym: str) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for exps, c in p.sorted_terms():
        factors = []
        for var, e in zip(p.ring.variables, exps):
            if e == 1:
                factors.append(var)
            elif e > 1:
                factors.append(f"{var}{pow_sym}{e}")
        mono = "*".join(factors)
        mag = abs(c)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        elif not star and mag.denominator != 1:
            body = f"({format_rational(mag)}){mono}"
        else:
            body = f"{format_rational(mag)}{star}{mono}"
        pieces.append((c < 0, body))
    neg0, first = pieces[0]
    out = ("-" if neg0 else "") + first
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# Free-function forms of the core operations.

def arith(kind: str, *operands, ring: WeightedRing | None = None):
    """Dispatch ``add``/``subtract``/``multiply``/``scale``/``power``."""
    polys = [o for o in operands if isinstance(o, SparsePolynomial)]
    if ring is not None and any(p.ring != ring for p in polys):
        raise RingMismatchError("operand outside the requested ring")
    if kind == "add":
        out = operands[0]
        for o in operands[1:]:
            out = out + o
        return out
    if kind == "subtract":
        a, b = operands
        return a - b
    if kind == "multiply":
        out = operands[0]
        for o in operands[1:]:
            out = out * o
        return out
    if kind == "scale":
        p, c = operands
        return p.scale(c)
    if kind == "power":
        p, k = operands
        return p ** k
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def weighted_part(p: SparsePolynomial, degree: int, grading: Mapping[str, int] | None = None) -> SparsePolynomial:
    """Terms of ``p`` of exactly the given weighted degree.

    ``grading`` overrides the ring weights: listed variables get the given
    weight, all others weight 0.
    """
    deg = _grading_fn(p.ring, grading)
    return SparsePolynomial._raw(p.ring, {e: c for e, c in p.items() if deg(e) == degree})


def _grading_fn(ring: WeightedRing, grading: Mapping[str, int] | None):
    if grading is None:
        return ring.degree_of
    w = [grading.get(v, 0) for v in ring.variables]
    return lambda exps: sum(e * x for e, x in zip(exps, w))


def truncate(p: SparsePolynomial, max_degree: int, grading: Mapping[str, int] | None = None) -> SparsePolynomial:
    deg = _grading_fn(p.ring, grading)
    return SparsePolynomial._raw(p.ring, {e: c for e, c in p.items() if deg(e) <= max_degree})


def drop_powers(p: SparsePolynomial, var: str, max_power: int) -> SparsePolynomial:
    """Delete every term where ``var`` appears to a power above ``max_power``."""
    i = p.ring.index(var)
    return SparsePolynomial._raw(p.ring, {e: c for e, c in p.items() if e[i] <= max_power})


def series_inverse(p: SparsePolynomial, max_degree: int,
                   grading: Mapping[str, int] | None = None) -> SparsePolynomial:
    """Inverse of ``p`` as a formal power series, up to weighted degree ``max_degree``.

    The degree-0 part must be a nonzero constant.
    """
    deg = _grading_fn(p.ring, grading)
    c0_part = {e: c for e, c in p.items() if deg(e) == 0}
    if any(e != (0,) * p.ring.nvars for e in c0_part) or not c0_part:
        raise ZeroDivisionError("series inverse needs a nonzero constant degree-0 part")
    c0 = c0_part[(0,) * p.ring.nvars]
    if any(deg(e) < 0 for e, _ in p.items()):
        raise ValueError("negative grading")
    # p = c0 (1 + u), u of positive degree; 1/p = (1/c0) sum (-u)^k
    u = truncate(p.scale(1 / c0) - 1, max_degree, grading)
    result = p.ring.one()
    term = p.ring.one()
    for _ in range(max_degree):
        term = truncate(-(term * u), max_degree, grading)
        if term.is_zero():
            break
        result = result + term
    return result.scale(1 / c0)


def substitute(p: SparsePolynomial, assignments: Mapping[str, SparsePolynomial | Scalar],
               target: WeightedRing | None = None) -> SparsePolynomial:
    """Compose ``p`` with the given assignments.

    Variables without an assignment map to the same-named variable of the
    target ring (which defaults to the ring of the first polynomial value,
    or ``p.ring``).
    """
    if target is None:
        target = next((a.ring for a in assignments.values() if isinstance(a, SparsePolynomial)), p.ring)
    images = []
    for var in p.ring.variables:
        if var in assignments:
            val = assignments[var]
            if isinstance(val, SparsePolynomial):
                if val.ring != target:
                    val = val.in_ring(target)
            else:
                val = target.const(val)
        elif var in target.variables:
            val = target.gen(var)
        else:
            val = None
        images.append(val)
    cache: dict[tuple[int, int], SparsePolynomial] = {}

    def power(i: int, k: int) -> SparsePolynomial:
        key = (i, k)
        if key not in cache:
            cache[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return cache[key]

    result = target.zero()
    for exps, c in p.items():
        term = target.const(c)
        for i, k in enumerate(exps):
            if k:
                if images[i] is None:
                    raise KeyError(f"variable {p.ring.variables[i]!r} has no assignment")
                term = term * power(i, k)
        result = result + term
    return result


def coefficient_of(p: SparsePolynomial, var: str, power: int) -> SparsePolynomial:
    """Coefficient of ``var**power`` as a polynomial (same ring, ``var`` absent)."""
    i = p.ring.index(var)
    out = {}
    for exps, c in p.items():
        if exps[i] == power:
            out[exps[:i] + (0,) + exps[i + 1:]] = c
    return SparsePolynomial._raw(p.ring, out)


def divmod_univariate(p: SparsePolynomial, var: str,
                      modulus: SparsePolynomial) -> tuple[SparsePolynomial, SparsePolynomial]:
    """Euclidean division of ``p`` by ``modulus`` viewed as polynomials in ``var``."""
    if modulus.ring != p.ring:
        raise RingMismatchError("modulus lives in a different ring")
    n = modulus.degree_in(var)
    if n < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = coefficient_of(modulus, var, n)
    if not lead.is_constant():
        raise ValueError(f"modulus is not monic in {var}: leading coefficient {lead}")
    modulus = modulus.scale(1 / lead.constant_term())
    x = p.ring.gen(var)
    quotient = p.ring.zero()
    rem = p
    while rem.degree_in(var) >= n:
        k = rem.degree_in(var)
        lc = coefficient_of(rem, var, k)
        step = lc * x ** (k - n)
        quotient = quotient + step
        rem = rem - step * modulus
    if lead.constant_term() != 1:
        quotient = quotient.scale(1 / lead.constant_term())
    return quotient, rem


def exact_integer(value, what: str = "value") -> int:
    """Return ``value`` as an int, raising if it is not integral."""
    if isinstance(value, SparsePolynomial):
        value = value.to_rational()
    value = as_rational(value)
    if value.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {format_rational(value)}")
    return value.numerator


def exact_divide(value, n: int):
    """Divide an integer-valued quantity by ``n``; a remainder is an error."""
    if isinstance(value, SparsePolynomial):
        for _, c in value.items():
            if c.denominator != 1 or c.numerator % n:
                raise ArithmeticError(f"coefficient {format_rational(c)} not divisible by {n}")
        return value.scale(Fraction(1, n))
    v = exact_integer(value)
    if v % n:
        raise ArithmeticError(f"{v} is not divisible by {n}")
    return Fraction(v // n)
