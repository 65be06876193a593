"""Vanishing orders of restrictions f|_V along a component of V.

Three procedures, one per kind of component:

* along a divisor {h = 0} of V, by repeatedly extracting the h-cofactor
  modulo I_V (valid when h is a non-zero-divisor modulo I_V);
* at a smooth point of V, as the largest m with f in I_V + M^m;
* along one analytic branch given by truncated series, as a t-adic
  valuation.  This last one is also the oracle the other two are tested
  against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import ComputationError, InvalidInput, ResourceCapExceeded
from .groebner import Ideal, ideal_quotient, ideal_quotient_stable, radical_membership
from .pfaff import CompleteIntersection, ParametrizedPoint, check_parametrization, smooth_at
from .poly import Polynomial

INFINITE = math.inf
DEFAULT_MAX_ORDER = 64
DEFAULT_TRUNCATION = 32
# beyond this level a local-membership test decides INFINITE before going on
_LOCAL_CHECK_LEVEL = 8


class SingularPointError(ComputationError):
    """Smooth-point order requested at a singular point of V."""


class TruncationError(ComputationError):
    """The branch series are too short to see the valuation."""


@dataclass(frozen=True)
class DivisorWitness:
    """f = h^m * mu + sum(cofactors[j] * f_j)."""

    h: Polynomial
    m: int
    mu: Polynomial
    cofactors: tuple

    def check(self, f: Polynomial, V: CompleteIntersection) -> bool:
        rhs = self.h ** self.m * self.mu
        for c, g in zip(self.cofactors, V.equations):
            rhs = rhs + c * g
        return rhs == f


@dataclass(frozen=True)
class SmoothPointWitness:
    """After translating the point to 0: f - sum(cofactors[j] * f_j) has no term below degree m."""

    point: tuple
    m: int
    cofactors: tuple

    def check(self, f: Polynomial, V: CompleteIntersection) -> bool:
        rest = f.translate(self.point)
        for c, g in zip(self.cofactors, V.equations):
            rest = rest - c * g.translate(self.point)
        return rest.is_zero() or rest.min_degree() >= self.m


@dataclass(frozen=True)
class SeriesWitness:
    """Lowest nonzero coefficient of f(param(t)) mod t^truncation."""

    coefficient: object
    truncation: int


@dataclass(frozen=True)
class OrderResult:
    value: float | int
    method: str
    witness: object = None

    @property
    def infinite(self) -> bool:
        return self.value == INFINITE

    def __int__(self):
        if self.infinite:
            raise ValueError("infinite order")
        return int(self.value)

    def __str__(self):
        return "INFINITE" if self.infinite else str(self.value)

    def as_json(self):
        return "INFINITE" if self.infinite else int(self.value)


def order_along_divisor(
    f: Polynomial, V: CompleteIntersection, h: Polynomial, max_order: int = DEFAULT_MAX_ORDER
) -> OrderResult:
    I = V.ideal
    if radical_membership(h, I):
        raise InvalidInput("h vanishes identically on V; it does not define a divisor of V")
    if not ideal_quotient_stable(I, h):
        raise InvalidInput("h is a zero-divisor modulo I_V; its cofactors are not well defined")
    if radical_membership(f, I):
        return OrderResult(INFINITE, "divisor")
    J = Ideal(I.generators + (h,), I.nvars)
    gb = J.groebner(lifts=True)
    k = len(I.generators)
    cofactors = [Polynomial.zero(f.nvars)] * k
    h_power = Polynomial.constant(f.nvars, 1)
    current = f
    m = 0
    while True:
        lift = gb.lift(current)
        if lift is None:
            if radical_membership(current, J):
                raise ComputationError(
                    "I_V + (h) is not radical along the component: h does not define it reducedly"
                )
            return OrderResult(m, "divisor", DivisorWitness(h, m, current, tuple(cofactors)))
        cofactors = [a + h_power * c for a, c in zip(cofactors, lift[:k])]
        h_power = h_power * h
        current = lift[k]
        m += 1
        if m > max_order:
            raise ResourceCapExceeded(f"order along the divisor exceeds max_order={max_order}")


def _power_of_maximal_ideal(nvars: int, m: int) -> list[Polynomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), m):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(Polynomial.monomial(e))
    return out


def _locally_in(f: Polynomial, I: Ideal) -> bool:
    """f in I·O_0: some element of (I : f) is a unit at the origin."""
    return any(g.constant_term() != 0 for g in ideal_quotient(I, f).generators)


def order_at_smooth_point(
    f: Polynomial, V: CompleteIntersection, point: Sequence, max_order: int = DEFAULT_MAX_ORDER
) -> OrderResult:
    point = tuple(point)
    if len(point) != V.nvars:
        raise InvalidInput(f"point has {len(point)} coordinates, V lives in {V.nvars} variables")
    if not V.contains_point(point):
        raise InvalidInput("point does not lie on V")
    if not smooth_at(V, point):
        raise SingularPointError(
            "V is singular at the point; supply a branch parametrization instead"
        )
    n = V.nvars
    ft = f.translate(point)
    eqs = [g.translate(point) for g in V.equations]
    I = Ideal(eqs, n)
    if I.contains(ft):
        return OrderResult(INFINITE, "smooth-point")
    k = len(eqs)
    witness = SmoothPointWitness(tuple(point), 0, tuple([Polynomial.zero(n)] * k))
    for m in range(1, max_order + 2):
        if m > max_order:
            raise ResourceCapExceeded(f"order at the point exceeds max_order={max_order}")
        if m == _LOCAL_CHECK_LEVEL and _locally_in(ft, I):
            return OrderResult(INFINITE, "smooth-point")
        J = Ideal(tuple(eqs) + tuple(_power_of_maximal_ideal(n, m)), n)
        lift = J.groebner(lifts=True).lift(ft)
        if lift is None:
            return OrderResult(m - 1, "smooth-point", witness)
        witness = SmoothPointWitness(tuple(point), m, tuple(lift[:k]))


def order_via_parametrization(
    f: Polynomial, S: ParametrizedPoint, V: CompleteIntersection | None = None
) -> OrderResult:
    """t-adic valuation of f(param(t)), exact below the truncation order."""
    if len(S.param) != f.nvars:
        raise InvalidInput(f"branch has {len(S.param)} series, f has {f.nvars} variables")
    if V is not None:
        reason = check_parametrization(S, V)
        if reason:
            raise InvalidInput(f"invalid parametrization: {reason}")
    N = S.truncation
    exact = f.subs(list(S.param), 1)
    composite = exact.truncate(0, N)
    if composite.is_zero():
        if V is not None and radical_membership(f, V.ideal):
            return OrderResult(INFINITE, "parametrized")
        if V is None and exact.is_zero():
            # without V the series are taken as the exact curve
            return OrderResult(INFINITE, "parametrized")
        raise TruncationError(
            f"f(param(t)) vanishes modulo t^{N} but f is not certified to vanish on V; increase the truncation"
        )
    val = composite.min_degree()
    return OrderResult(val, "parametrized", SeriesWitness(composite.coefficient((val,)), N))
