from fractions import Fraction

import pytest
from hypothesis import given

from strategies import VW, VWE, polynomials
from nodepoly.exactalg import (
    RingMismatchError,
    SparsePolynomial,
    WeightedRing,
    arith,
    coefficient_of,
    divmod_univariate,
    drop_powers,
    exact_divide,
    exact_integer,
    series_inverse,
    substitute,
    weighted_part,
)
from nodepoly.kp_core import x_class

v, w1, w2 = VW.gens()


def test_ring_rejects_bad_definitions():
    with pytest.raises(ValueError):
        WeightedRing(("a", "a"))
    with pytest.raises(ValueError):
        WeightedRing(("a",), (0,))
    with pytest.raises(ValueError):
        WeightedRing(("a", "b"), (1,))


def test_ring_of_parses_text():
    ring = WeightedRing.of("v:1 w1:1 w2:2")
    assert ring == VW
    assert str(ring) == "Q[v:1, w1:1, w2:2]"


def test_zero_coefficients_are_not_stored():
    p = SparsePolynomial(VW, {(1, 0, 0): 0, (0, 1, 0): Fraction(2, 4)})
    assert len(p) == 1
    assert p.coefficient(w1=1) == Fraction(1, 2)


def test_binomial_square():
    assert arith("power", v + w1, 2) == v * v + v * w1 * 2 + w1 * w1


def test_truncated_ring_drops_high_weight():
    ring = VW.with_truncation(3)
    q = ring.gen("w2")
    assert q * q == ring.zero()
    assert (ring.gen("v") ** 4).is_zero()


def test_multiply_by_one_is_identity():
    p = v ** 3 + w2 * v - 5
    assert arith("multiply", p, VW.one()) == p


def test_arith_kinds_and_errors():
    assert arith("add", v, w1, w2) == v + w1 + w2
    assert arith("subtract", v, v).is_zero()
    assert arith("scale", v, Fraction(1, 3)).coefficient(v=1) == Fraction(1, 3)
    with pytest.raises(ValueError):
        arith("power", v, -1)
    with pytest.raises(ValueError):
        arith("divide", v, w1)
    other = WeightedRing(("v",))
    with pytest.raises(RingMismatchError):
        v + other.gen("v")


def test_series_inverse_examples():
    ring = WeightedRing(("v",))
    x = ring.gen("v")
    assert series_inverse(1 + x, 3) == 1 - x + x ** 2 - x ** 3
    assert series_inverse(VW.one(), 5) == 1
    assert series_inverse(1 - w1 + w2, 2) == 1 + w1 + w1 ** 2 - w2


def test_series_inverse_needs_unit():
    with pytest.raises(ZeroDivisionError):
        series_inverse(v + w1, 3)


def test_series_inverse_scales_constant():
    inv = series_inverse(2 + v * 2, 2)
    assert inv == (1 - v + v * v) * Fraction(1, 2)


def test_substitute_identity_and_zero():
    x2 = x_class(2)
    assert substitute(x2, {}) == x2
    assert substitute(x2, {"v": 0}, VW).is_zero()


def test_substitute_blowup_e_cubed_coefficient():
    b1 = x_class(2)
    V, W1, W2, e = VWE.gens()
    lifted = substitute(b1, {"v": V - e * 2, "w1": W1 + e, "w2": W2 - e * e}, VWE)
    assert coefficient_of(lifted, "e", 3) == -2


def test_substitute_missing_variable():
    ring = WeightedRing(("a",))
    with pytest.raises(KeyError):
        substitute(v * w1, {"v": ring.gen("a")}, ring)


def test_divmod_examples():
    V, W1, W2, e = VWE.gens()
    modulus = e ** 3 + W1 * e ** 2 + W2 * e
    _, r = divmod_univariate(e ** 3, "e", modulus)
    assert r == -W1 * e ** 2 - W2 * e
    q, r = divmod_univariate(e, "e", modulus)
    assert q.is_zero() and r == e
    _, r = divmod_univariate(e ** 4, "e", modulus)
    assert r == (W1 ** 2 - W2) * e ** 2 + W1 * W2 * e


def test_divmod_requires_monic_after_normalisation():
    V, W1, W2, e = VWE.gens()
    q, r = divmod_univariate(e ** 2, "e", e * 2)
    assert q == e * Fraction(1, 2) and r.is_zero()
    with pytest.raises(ValueError):
        divmod_univariate(e ** 2, "e", e * W1)


def test_coefficient_of_examples():
    V, W1, W2, e = VWE.gens()
    assert coefficient_of(-W1 * e ** 2 - W2 * e, "e", 2) == -W1
    assert coefficient_of(V * e ** 2, "e", 5).is_zero()
    assert coefficient_of(V ** 3 + V * e, "e", 0) == V ** 3


@given(polynomials(VWE, max_exp=3))
def test_coefficient_of_reassembles(p):
    e = VWE.gen("e")
    rebuilt = sum((coefficient_of(p, "e", k) * e ** k for k in range(p.degree_in("e") + 1)), VWE.zero())
    assert rebuilt == p


def test_weighted_part_examples():
    p = v ** 3 + w2 * v
    assert weighted_part(p, 3) == p
    assert weighted_part(p, 2).is_zero()
    assert weighted_part(x_class(2), 3) == x_class(2)


@given(polynomials())
def test_weighted_parts_sum_to_whole(p):
    degs = p.weighted_degrees()
    assert sum((weighted_part(p, d) for d in degs), VW.zero()) == p


def test_drop_powers():
    assert drop_powers(v ** 5 + v ** 2 * w1, "v", 4) == v ** 2 * w1


def test_text_serialisation():
    p = v * 3 - w1 * Fraction(1, 2) + 1
    assert p.to_text() == "3*v - 1/2*w1 + 1"
    assert p.pretty() == "3v - (1/2)w1 + 1"
    assert VW.zero().to_text() == "0"
    assert (-v).to_text() == "-v"


@given(polynomials())
def test_records_round_trip(p):
    assert SparsePolynomial.from_records(VW, p.to_records()) == p


def test_records_shape():
    recs = (v ** 2 * Fraction(-3, 2)).to_records()
    assert recs == [{"coefficient": "-3/2", "exponents": {"v": 2}}]


def test_exact_integer_and_divide():
    assert exact_integer(Fraction(6, 3)) == 2
    with pytest.raises(ArithmeticError):
        exact_integer(Fraction(1, 2))
    assert exact_divide(12, 4) == 3
    with pytest.raises(ArithmeticError):
        exact_divide(13, 4)
    with pytest.raises(ArithmeticError):
        exact_divide(v * 3, 2)


def test_in_ring_moves_between_rings():
    assert (v * w1).in_ring(VWE) == VWE.gen("v") * VWE.gen("w1")
    with pytest.raises(KeyError):
        VWE.gen("e").in_ring(VW)


def test_rejects_floats():
    with pytest.raises(TypeError):
        SparsePolynomial(VW, {(1, 0, 0): 0.5})
