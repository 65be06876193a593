"""Aleksandrov-Saito decompositions and the GSV-index.

For a rank-k system with an invariant codimension-k complete intersection,
each Jacobian minor Delta_I gives the decomposition

    Delta_I * omega = a_I * (df_1 ^ ... ^ df_k) + eta,   eta in (f) * Omega^k,

and the index along a component S is ord_S(a_I|_V) - ord_S(Delta_I|_V), the
same for every minor whose orders are finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ComputationError, InvalidInput
from .forms import DiffForm, d, form_in_ideal_module, wedge_all
from .groebner import radical_membership
from .order import (
    DEFAULT_MAX_ORDER,
    OrderResult,
    order_along_divisor,
    order_at_smooth_point,
    order_via_parametrization,
)
from .pfaff import (
    CompleteIntersection,
    DivisorOnV,
    ParametrizedPoint,
    PfaffSystem,
    Point,
    check_invariance,
    check_rank_codim,
    component_failure,
    smooth_at,
)
from .poly import Polynomial


class DecompositionError(ComputationError):
    pass


class GSVError(ComputationError):
    pass


@dataclass(frozen=True)
class Decomposition:
    """g * omega = (df_1 ^ ... ^ df_k) * xi + eta, eta = sum f_j * eta_components[j]."""

    g: Polynomial
    xi: Polynomial
    eta: DiffForm
    minor_index: tuple | None = None
    eta_components: tuple = ()


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failed: str | None = None

    def __bool__(self):
        return self.ok


def volume_form(V: CompleteIntersection) -> DiffForm:
    """df_1 ^ ... ^ df_k."""
    return wedge_all([d(f) for f in V.equations])


def aleksandrov_decomposition(omega: PfaffSystem, V: CompleteIntersection, index) -> Decomposition:
    check_rank_codim(omega, V)
    index = tuple(index)
    g = V.minor(index)
    if g.is_zero() or radical_membership(g, V.ideal):
        raise DecompositionError(f"minor {index} vanishes identically on V (inadmissible)")
    xi = omega.coefficient(index)
    eta = omega.form * g - volume_form(V) * xi
    mem = form_in_ideal_module(eta, V.ideal)
    if not mem:
        raise DecompositionError(
            f"coefficient {mem.failed_index} of eta is not in (f_1..f_k): "
            "V is not invariant or its equations are not reduced"
        )
    D = Decomposition(g, xi, eta, index, mem.components)
    verdict = verify_decomposition(D, omega, V)
    if not verdict:
        raise DecompositionError(f"constructed decomposition fails: {verdict.failed}")  # pragma: no cover
    return D


def verify_decomposition(D: Decomposition, omega: PfaffSystem, V: CompleteIntersection) -> Verdict:
    """Re-check every clause of the decomposition from scratch."""
    if D.g.is_zero() or radical_membership(D.g, V.ideal):
        return Verdict(False, "g vanishes identically on V")
    if omega.form * D.g != volume_form(V) * D.xi + D.eta:
        return Verdict(False, "expansion: g*omega != (df_1^...^df_k)*xi + eta")
    if D.eta_components:
        total = DiffForm.zero(D.eta.nvars, D.eta.grade)
        for f, comp in zip(V.equations, D.eta_components):
            total = total + comp * f
        if total != D.eta:
            return Verdict(False, "eta certificate does not re-expand")
    if not form_in_ideal_module(D.eta, V.ideal):
        return Verdict(False, "eta is not in (f_1..f_k) * Omega^k")
    return Verdict(True)


@dataclass(frozen=True)
class GSVResult:
    component: object
    index: int
    per_minor: dict
    method: str
    inadmissible: dict = field(default_factory=dict)
    decompositions: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        return {
            "index": self.index,
            "method": self.method,
            "minors": [
                {"minor": list(I), "ord_coefficient": a.as_json(), "ord_minor": b.as_json()}
                for I, (a, b) in sorted(self.per_minor.items())
            ],
            "inadmissible": [{"minor": list(I), "reason": r} for I, r in sorted(self.inadmissible.items())],
        }


def _order_function(S, V: CompleteIntersection, max_order: int):
    if isinstance(S, Point):
        if not smooth_at(V, S.coordinates):
            raise GSVError("V is singular at the point: supply a ParametrizedPoint for each branch")
        return "smooth-point", lambda f: order_at_smooth_point(f, V, S.coordinates, max_order)
    if isinstance(S, DivisorOnV):
        return "divisor", lambda f: order_along_divisor(f, V, S.h, max_order)
    if isinstance(S, ParametrizedPoint):
        return "parametrized", lambda f: order_via_parametrization(f, S, V)
    raise InvalidInput(f"unknown component type {type(S).__name__}")


def gsv_index(
    omega: PfaffSystem,
    V: CompleteIntersection,
    S,
    max_order: int = DEFAULT_MAX_ORDER,
    check: bool = True,
) -> GSVResult:
    """GSV(omega, V, S) from every admissible minor; all of them must agree."""
    check_rank_codim(omega, V)
    if omega.homogeneous:
        raise InvalidInput("compute indices in an affine chart (see projective.chart_restriction)")
    if check:
        if not check_invariance(omega, V):
            raise GSVError("V is not invariant by the system")
        reason = component_failure(S, omega, V)
        if reason:
            raise GSVError(f"component is not in Sing(omega, V): {reason}")
    method, order = _order_function(S, V, max_order)
    per_minor: dict[tuple, tuple[OrderResult, OrderResult]] = {}
    inadmissible: dict[tuple, str] = {}
    decompositions: dict[tuple, Decomposition] = {}
    for I, delta in V.minors().items():
        if delta.is_zero() or radical_membership(delta, V.ideal):
            inadmissible[I] = "minor vanishes identically on V"
            continue
        ord_a = order(omega.coefficient(I))
        ord_delta = order(delta)
        if ord_a.infinite or ord_delta.infinite:
            inadmissible[I] = "infinite order"
            continue
        per_minor[I] = (ord_a, ord_delta)
        decompositions[I] = aleksandrov_decomposition(omega, V, I)
    if not per_minor:
        raise GSVError("no admissible minor: V appears generically non-reduced along the component")
    diffs = {I: int(a) - int(b) for I, (a, b) in per_minor.items()}
    values = set(diffs.values())
    if len(values) != 1:
        detail = ", ".join(f"{list(I)}: {v}" for I, v in sorted(diffs.items()))
        raise GSVError(f"minors disagree ({detail}): component data inconsistent")
    index = values.pop()
    for I, D in decompositions.items():
        # xi = a_I and g = Delta_I, so this is the defining order difference
        if int(per_minor[I][0]) - int(per_minor[I][1]) != index or D.xi != omega.coefficient(I):
            raise GSVError("decomposition and order formula disagree")  # pragma: no cover
    if method == "smooth-point" and index < 0:
        raise GSVError("negative index at a smooth point of V contradicts non-negativity")
    return GSVResult(S, index, per_minor, method, inadmissible, decompositions)
