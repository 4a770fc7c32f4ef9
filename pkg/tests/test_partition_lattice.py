from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nodepoly.bell import complete_bell
from nodepoly.partition_lattice import (
    SetPartition,
    all_partitions,
    interval_sum,
    m_coefficient,
    profile_count,
    profile_table,
    refinements,
    refines,
    verify_moebius_recursion,
)

BELL_NUMBERS = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


def test_counts_are_bell_numbers():
    for r in range(11):
        assert len(all_partitions(r)) == BELL_NUMBERS[r]
    assert {str(p) for p in all_partitions(3)} == {"123", "1|23", "13|2", "12|3", "1|2|3"}
    with pytest.raises(ValueError):
        all_partitions(11)


def test_parse_and_print():
    p = SetPartition.parse("1|23|4")
    assert p.blocks == ((1,), (2, 3), (4,))
    assert str(p) == "1|23|4"
    assert SetPartition.parse("32|1") == SetPartition.parse("1|23")
    assert p.profile() == (2, 1, 0, 0)
    big = SetPartition.parse("1,10|2|3|4|5|6|7|8|9")
    assert str(big) == "1,10|2|3|4|5|6|7|8|9"
    with pytest.raises(ValueError):
        SetPartition.parse("1|3")
    with pytest.raises(ValueError):
        SetPartition(((1,), (1, 2)))


def test_refines_examples():
    for p in all_partitions(4):
        assert refines(SetPartition.finest(4), p)
        assert refines(p, SetPartition.coarsest(4))
    assert not refines(SetPartition.parse("1|23"), SetPartition.parse("12|3"))
    with pytest.raises(ValueError):
        refines(SetPartition.finest(2), SetPartition.finest(3))


@given(st.integers(1, 6), st.data())
def test_refinements_match_brute_force(r, data):
    p = data.draw(st.sampled_from(all_partitions(r)))
    assert set(refinements(p)) == {q for q in all_partitions(r) if refines(q, p)}


def test_m_coefficient_examples():
    assert m_coefficient(SetPartition.finest(5)) == 1
    for p in all_partitions(5):
        if len(p) == 4:
            assert m_coefficient(p) == -1
    assert m_coefficient(SetPartition.coarsest(3)) == 2
    assert m_coefficient(SetPartition.coarsest(5)) == 24


def test_moebius_recursion():
    for r in range(1, 9):
        assert verify_moebius_recursion(r)
    assert interval_sum(SetPartition.finest(4)) == 1
    with pytest.raises(ValueError):
        verify_moebius_recursion(9)


def test_profile_count_examples():
    assert profile_count((1, 1)) == 3
    assert profile_count((0, 0, 1)) == 1
    assert profile_count((0, 2), 4) == 3
    with pytest.raises(ValueError):
        profile_count((1, 1), 4)


def test_profile_counts_are_bell_coefficients():
    # coefficient of prod X_i^{s_i} in P_r counts partitions of that profile
    for r in range(1, 8):
        table = profile_table(r)
        poly = complete_bell(r)
        assert len(table) == len(poly)
        for prof, count in table.items():
            exps = tuple(prof) + (0,) * (poly.ring.nvars - len(prof))
            assert poly.coefficient(**{f"X{i + 1}": e for i, e in enumerate(exps) if e}) == count


def test_profile_count_formula():
    # r! / prod (i!^{s_i} s_i!)
    for r in range(1, 8):
        for prof, count in profile_table(r).items():
            denom = 1
            for i, s in enumerate(prof, start=1):
                denom *= factorial(i) ** s * factorial(s)
            assert count == factorial(r) // denom
