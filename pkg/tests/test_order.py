import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfaff_gsv.errors import InvalidInput, ResourceCapExceeded
from pfaff_gsv.order import (
    INFINITE,
    SingularPointError,
    TruncationError,
    order_along_divisor,
    order_at_smooth_point,
    order_via_parametrization,
)
from pfaff_gsv.pfaff import CompleteIntersection, ParametrizedPoint
from pfaff_gsv.poly import Polynomial

from helpers import P, random_graph_instance, variety

XYZ = "x y z"
T = Polynomial.variable(1, 0)
CUSP_BRANCH = ParametrizedPoint((0, 0), (T**2, T**3))


# -- along a divisor ------------------------------------------------------------

def test_monomial_valuation_along_a_line():
    r = order_along_divisor(P("x^3"), variety(["y"]), P("x"))
    assert r.value == 3 and r.method == "divisor"
    assert r.witness.check(P("x^3"), variety(["y"]))


def test_function_in_the_ideal_has_infinite_order():
    r = order_along_divisor(P("y^2 - x^3"), variety(["y^2 - x^3"]), P("x"))
    assert r.infinite and str(r) == "INFINITE" and r.as_json() == "INFINITE"
    with pytest.raises(ValueError):
        int(r)


def test_conic_chart_needs_two_extractions():
    V = variety(["y - x^2"])
    r = order_along_divisor(P("x^2"), V, P("x"))
    assert r.value == 2 and r.witness.check(P("x^2"), V)
    # on V, y = x^2 as well
    assert order_along_divisor(P("y"), V, P("x")).value == 2


def test_divisor_on_a_surface():
    V = variety(["z - x*y"], XYZ)
    f = P("x^2*y + z*x", XYZ)  # = 2 x^2 y on V
    r = order_along_divisor(f, V, P("x", XYZ))
    assert r.value == 2 and r.witness.check(f, V)


def test_h_has_order_one_along_itself():
    for eqs, h in [(["y"], "x"), (["y - x^2"], "x"), (["y^2 - x^3"], "x - 1")]:
        assert order_along_divisor(P(h), variety(eqs), P(h)).value == 1


def test_divisor_preconditions():
    with pytest.raises(InvalidInput, match="identically"):
        order_along_divisor(P("x"), variety(["y"]), P("y"))
    with pytest.raises(InvalidInput, match="zero-divisor"):
        order_along_divisor(P("x"), variety(["x*y"]), P("x"))


def test_divisor_cap():
    with pytest.raises(ResourceCapExceeded):
        order_along_divisor(P("x^10"), variety(["y"]), P("x"), max_order=4)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 10_000))
def test_divisor_order_is_multiplicative(a, b, seed):
    rng = random.Random(seed)
    V = variety(["y - x^2 - x^3"])
    # units along {x = 0}: nonzero at the generic point (0, y) of the divisor
    f = P("x") ** a * (P("1 + y") + P("x") * rng.randint(-3, 3))
    g = P("x") ** b * (P("2 - y^2") + P("x*y") * rng.randint(-3, 3))
    rf = order_along_divisor(f, V, P("x"))
    rg = order_along_divisor(g, V, P("x"))
    rfg = order_along_divisor(f * g, V, P("x"))
    assert rfg.value == rf.value + rg.value


def test_permuted_generators_give_the_same_order():
    eqs = ["z - x*y", "y - x^2 - z^2"]
    f = P("x^3*y + z^2*x", XYZ)
    h = P("x", XYZ)
    a = order_along_divisor(f, CompleteIntersection(tuple(P(e, XYZ) for e in eqs)), h)
    b = order_along_divisor(f, CompleteIntersection(tuple(P(e, XYZ) for e in reversed(eqs))), h)
    assert a.value == b.value


# -- at a smooth point ----------------------------------------------------------

@pytest.mark.parametrize(
    "f, eqs, point, expected",
    [("x", ["y"], (0, 0), 1), ("y", ["y - x^2"], (0, 0), 2), ("1", ["y - x^2"], (1, 1), 0),
     ("x - 1", ["y - x^2"], (1, 1), 1), ("y - 2*x + 1", ["y - x^2"], (1, 1), 2)],
)
def test_smooth_point_examples(f, eqs, point, expected):
    V = variety(eqs)
    r = order_at_smooth_point(P(f), V, point)
    assert r.value == expected
    assert r.witness.check(P(f), V)


def test_smooth_point_infinite_order():
    V = variety(["y - x^2"])
    assert order_at_smooth_point(P("y - x^2"), V, (0, 0)).infinite
    # x*y vanishes on the branch {y = 0} of {x*y = 0} through (1, 0)
    assert order_at_smooth_point(P("y"), variety(["x*y"]), (1, 0)).infinite


def test_smooth_point_preconditions():
    with pytest.raises(InvalidInput, match="does not lie"):
        order_at_smooth_point(P("x"), variety(["y"]), (0, 1))
    with pytest.raises(SingularPointError):
        order_at_smooth_point(P("x"), variety(["y^2 - x^3"]), (0, 0))


def test_smooth_point_cap():
    with pytest.raises(ResourceCapExceeded):
        order_at_smooth_point(P("x^6"), variety(["y"]), (0, 0), max_order=3)


def test_smooth_point_in_three_space():
    V = variety(["x", "y - z^2"], XYZ)
    assert order_at_smooth_point(P("y", XYZ), V, (0, 0, 0)).value == 2
    assert order_at_smooth_point(P("z^3 + x", XYZ), V, (0, 0, 0)).value == 3


# -- parametrizations -----------------------------------------------------------

@pytest.mark.parametrize("f, expected", [("y", 3), ("x^2", 4), ("-3*y", 3), ("2*x", 2)])
def test_cusp_valuations(f, expected):
    r = order_via_parametrization(P(f), CUSP_BRANCH)
    assert r.value == expected and r.method == "parametrized"


def test_cusp_equation_has_infinite_valuation():
    assert order_via_parametrization(P("y^2 - x^3"), CUSP_BRANCH).infinite
    assert order_via_parametrization(P("y^2 - x^3"), CUSP_BRANCH, variety(["y^2 - x^3"])).infinite


def test_truncation_too_small():
    # the branch (t, t + t^40) of y = x + x^40, cut at t^32, looks like y = x
    V = variety(["y - x - x^40"])
    S = ParametrizedPoint((0, 0), (T, T), truncation=32)
    with pytest.raises(TruncationError):
        order_via_parametrization(P("y - x"), S, V)
    S = ParametrizedPoint((0, 0), (T, T + T**40), truncation=48)
    assert order_via_parametrization(P("y - x"), S, V).value == 40


def test_invalid_parametrization_is_rejected():
    with pytest.raises(InvalidInput):
        order_via_parametrization(P("x"), ParametrizedPoint((0, 0), (T, T)), variety(["y - x^2"]))


def test_series_witness_records_leading_coefficient():
    r = order_via_parametrization(P("3*x^2 + y"), CUSP_BRANCH)
    assert r.value == 3 and r.witness.coefficient == 1


@pytest.mark.parametrize("seed", range(10))
def test_smooth_point_matches_parametrization(seed):
    f, V, pt, param, m = random_graph_instance(random.Random(seed))
    a = order_at_smooth_point(f, V, pt)
    b = order_via_parametrization(f, ParametrizedPoint(pt, param), V)
    assert a.value == b.value == m


def test_divisor_order_matches_parametrization_at_a_generic_point():
    # along {x = 0} on the surface z = x*y, slice by y = 1: branch (t, 1, t)
    V = variety(["z - x*y"], XYZ)
    f = P("x^2*y + z*x", XYZ)
    S = ParametrizedPoint((0, 1, 0), (T, Polynomial.constant(1, 1), T))
    assert order_along_divisor(f, V, P("x", XYZ)).value == order_via_parametrization(f, S, V).value
    assert INFINITE == float("inf")
