from fractions import Fraction

import pytest

from strategies import VW
from nodepoly.exactalg import substitute, weighted_part
from nodepoly.families import (
    LinearForm,
    SurfaceInvariants,
    a_coefficients,
    count_on_surface,
)
from nodepoly.kazarian import (
    ALPHA_RING,
    DEGREE_RING,
    GENERICITY_CAVEAT,
    RESIDUAL_TABLE,
    UNVERIFIED_CAVEAT,
    HypersurfaceContactModel,
    MultisingularitySpec,
    UntabulatedError,
    a_linear_form,
    alpha_classes,
    contact_count,
    fixed_surface_reduce,
    local_codimension,
    multisingularity_count,
    parse_spec,
    residual_class,
    residual_in_vw,
    spec_from_mapping,
    sub_specs_tabulated,
    tabulated_specs,
)
from nodepoly.kp_core import q_operator, x_class

v, w1, w2 = VW.gens()


def test_alpha_classes():
    a1, a2, a3, a4 = alpha_classes()
    assert a1 == (v + w1) * 2
    assert a2 == (v + w1) * (v + w1 * 2)
    assert a3 == v * v * w1 + v * w1 * w1 * 3 - v * w2 * 2 + w1 ** 3 * 2 - w1 * w2 * 2
    assert fixed_surface_reduce(a3) == v * (v * w1 + w1 * w1 * 3 - w2 * 2)
    assert fixed_surface_reduce(a4) == v * v * (w1 * w1 - w2)


def test_alpha_series_multiplies_back():
    total = VW.one() + sum(alpha_classes(), VW.zero())
    product = total * (1 - w1 + w2)
    numerator = (1 + v) ** 2 + (1 + v) * w1 + w2
    for deg in range(5):
        assert weighted_part(product, deg) == weighted_part(numerator, deg)


def test_fixed_surface_reduce_examples():
    assert fixed_surface_reduce(w1 ** 3).is_zero()
    assert fixed_surface_reduce(w1 * w2).is_zero()
    assert fixed_surface_reduce(v * w1 ** 2) == v * w1 ** 2


def test_residual_examples():
    v_, a1, a2, a3, _ = ALPHA_RING.gens()
    assert residual_class("A1") == 1
    assert residual_class("A1^2") == -v_ - a1 * 3
    assert residual_class("D4") == -v_ * a2 + a1 * a2 - a3 * 2
    with pytest.raises(UntabulatedError, match="beyond tabulated codimension"):
        residual_class("A1^6")
    assert len(RESIDUAL_TABLE) == 21 == len(tabulated_specs())


def test_residual_matches_q_operator():
    assert residual_in_vw("A1^2") == q_operator(x_class(2), 2)


def test_a_linear_form_examples():
    assert a_linear_form("A2") == LinearForm(12, 12, 2, 2)
    assert a_linear_form("D4") == LinearForm(15, 20, 5, 5)
    assert a_linear_form("A1^5") == LinearForm(5225472, 7725168, 2723400, 84384)


def test_a_forms_of_node_tuples_match_recursion():
    forms = a_coefficients(5)
    for r in range(1, 6):
        assert a_linear_form(MultisingularitySpec.of(*["A1"] * r)) == forms[r - 1]


def test_parse_spec_forms():
    three = MultisingularitySpec((("A1", 3),))
    assert parse_spec("A1^3") == parse_spec("3A1") == parse_spec("A1*A1*A1") == parse_spec("A1+A1^2") == three
    assert parse_spec("A2*A1").key == "A1*A2"
    assert parse_spec("D4+2A1").key == "A1^2*D4"
    assert parse_spec("A1^2A2").key == "A1^2*A2"
    assert parse_spec("X1,0").codim == 8
    assert parse_spec(three) is three
    assert spec_from_mapping({"A1": 2}) == parse_spec("A1^2")


@pytest.mark.parametrize("text", ["", "A1+", "B2", "A1^x", "A1**A2"])
def test_parse_spec_errors(text):
    with pytest.raises(ValueError):
        parse_spec(text)


def test_spec_properties():
    spec = parse_spec("A1^2*A3")
    assert spec.members == ("A1", "A1", "A3")
    assert spec.size == 3 and spec.aut == 2 and spec.codim == 5
    assert local_codimension("E7") == 7
    with pytest.raises(ValueError):
        local_codimension("Q5")
    with pytest.raises(ValueError):
        MultisingularitySpec((("A1", -1),))


def test_singleton_count_is_a_form():
    plane = SurfaceInvariants.plane(6)
    assert multisingularity_count("A2", plane).value == a_linear_form("A2").evaluate(plane)


def test_mixed_pair_has_no_aut_factor():
    plane = SurfaceInvariants.plane(7)
    expected = (a_linear_form("A1*A2").evaluate(plane)
                + a_linear_form("A1").evaluate(plane) * a_linear_form("A2").evaluate(plane))
    assert multisingularity_count("A1*A2", plane).value == expected


def test_node_tuples_match_node_polynomial():
    for m in (3, 5, 8):
        plane = SurfaceInvariants.plane(m)
        for r in range(1, 6):
            assert multisingularity_count(f"A1^{r}", plane).value == count_on_surface(plane, r)


def test_classical_cusp_count():
    # cuspidal plane cubics through 7 points: 24
    assert multisingularity_count("A2", SurfaceInvariants.plane(3)).value == 24


def test_count_caveats():
    verified = multisingularity_count("A1^3")
    assert verified.caveats == [GENERICITY_CAVEAT]
    other = multisingularity_count("A1*A2", SurfaceInvariants.plane(5))
    assert UNVERIFIED_CAVEAT in other.caveats
    assert sub_specs_tabulated("A1^2*A2")
    assert not sub_specs_tabulated("A1^6")


CONTACT_CASES = [
    (2, "A2", lambda d: 3 * d * (d - 2)),
    (2, "A1^2", lambda d: Fraction(1, 2) * d * (d - 3) * (d - 2) * (d + 3)),
    (3, "A3", lambda d: 2 * d * (11 * d - 24) * (d - 2)),
    (3, "A1*A2", lambda d: 4 * d * (d - 3) * (d - 2) * (d ** 3 + 3 * d - 16)),
    (3, "A1^3", lambda d: Fraction(1, 6) * d * (d - 2) * (
        d ** 7 - 4 * d ** 6 + 7 * d ** 5 - 45 * d ** 4 + 114 * d ** 3 - 111 * d ** 2 + 548 * d - 960)),
]


@pytest.mark.parametrize("n, spec, formula", CONTACT_CASES)
def test_contact_formulas(n, spec, formula):
    poly = contact_count(n, spec).value
    for d in range(1, 12):
        assert substitute(poly, {"d": d}, DEGREE_RING).to_rational() == formula(d)
        assert contact_count(n, spec, d).value == formula(d)


def test_classical_contact_numbers():
    assert contact_count(2, "A1^2", 4).value == 28
    assert contact_count(2, "A2", 4).value == 24
    assert contact_count(3, "A1^3", 3).value == 45
    assert contact_count(3, "A1^3", 4).value == 3200


@pytest.mark.parametrize("n, spec", [(2, "A2"), (2, "A1^2"), (3, "A3"), (3, "A1*A2"), (3, "A1^3")])
def test_contact_divisible_by_d(n, spec):
    poly = contact_count(n, spec).value
    assert poly.coefficient(d=0) == 0


def test_m_class_pushes_to_n_class():
    for n, spec, _ in CONTACT_CASES:
        model = HypersurfaceContactModel(n)
        assert model.pushforward(model.m_class(spec)) == model.n_class(spec)


def test_contact_errors():
    with pytest.raises(ValueError, match="codimension"):
        contact_count(2, "A3")
    with pytest.raises(ValueError):
        HypersurfaceContactModel(4)
    assert UNVERIFIED_CAVEAT not in contact_count(2, "A2").caveats
