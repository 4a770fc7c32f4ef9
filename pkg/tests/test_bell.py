from math import factorial

import pytest

from nodepoly.bell import bell_eval, bell_ring, complete_bell, partial_bell
from nodepoly.exactalg import WeightedRing


def test_negative_order_is_zero():
    assert complete_bell(-1).is_zero()
    assert bell_eval(-3, []) == 0


def test_partial_bell_edges():
    for r in range(1, 8):
        ring = bell_ring(r)
        assert partial_bell(r, 1) == ring.gen(f"X{r}")
        assert partial_bell(r, r) == ring.gen("X1") ** r
    X1, X2, _ = bell_ring(3).gens()
    assert partial_bell(3, 2) == X1 * X2 * 3
    with pytest.raises(ValueError):
        partial_bell(2, 3)


def test_partial_bell_uses_only_early_variables():
    for r in range(1, 9):
        for k in range(1, r + 1):
            used = partial_bell(r, k).variables_used()
            assert used <= {f"X{i}" for i in range(1, r - k + 2)}


def test_partial_sums_give_complete():
    for r in range(11):
        ring = bell_ring(r)
        total = sum((partial_bell(r, k).in_ring(ring) for k in range(r + 1)), ring.zero())
        assert total == complete_bell(r).in_ring(ring)


def test_homogeneity():
    for r in range(1, 10):
        assert complete_bell(r).is_homogeneous(r)
        for k in range(1, r + 1):
            exps = [sum(e) for e, _ in partial_bell(r, k).items()]
            assert set(exps) == {k}


def test_coefficients_are_nonnegative_integers():
    for r in range(10):
        assert all(c > 0 and c.denominator == 1 for _, c in complete_bell(r).items())


def test_bell_eval_shapes():
    ring = WeightedRing(("a", "b"))
    a, b = ring.gens()
    assert bell_eval(2, [a, b]) == a * a + b
    assert bell_eval(0, []) == 1
    assert bell_eval(4, [1, 1, 1, 1]) == 15
    with pytest.raises(ValueError):
        bell_eval(3, [1, 1])


def test_bell_eval_matches_substitution():
    from nodepoly.exactalg import substitute
    vals = [2, -3, 5, 7, -11, 13]
    for r in range(7):
        poly = complete_bell(r)
        direct = substitute(poly, {f"X{i}": vals[i - 1] for i in range(1, poly.ring.nvars + 1)})
        assert direct.to_rational() == bell_eval(r, vals)


def test_all_ones_gives_bell_numbers():
    bell_numbers = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    assert [bell_eval(r, [1] * r) for r in range(9)] == bell_numbers


def test_single_variable_gives_powers():
    # only X1 = t nonzero: P_r = t^r; only X_r nonzero relates to r!/(...)
    assert bell_eval(5, [3, 0, 0, 0, 0]) == 3 ** 5
    assert partial_bell(4, 2).coefficient(X2=2) == factorial(4) // (2 * 2 * 2)
