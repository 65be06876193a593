"""Pfaff systems on P^n: charts, the degree formula and the Poincaré bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .errors import InvalidInput, ValidationError
from .forms import DiffForm, d, wedge_all
from .groebner import point_ideal, projective_point_degree
from .gsv import GSVError, GSVResult, gsv_index
from .order import DEFAULT_MAX_ORDER
from .pfaff import (
    CompleteIntersection,
    DivisorOnV,
    ParametrizedPoint,
    PfaffSystem,
    Point,
    check_invariance,
    check_rank_codim,
    component_failure,
    pfaff_degree,
)
from .poly import Polynomial


def dehomogenize(p: Polynomial, chart: int) -> Polynomial:
    """Set x_chart = 1; the remaining variables keep their relative order."""
    if not 0 <= chart < p.nvars:
        raise InvalidInput(f"chart index {chart} out of range")
    out: dict = {}
    for m, c in p.terms.items():
        mon = m[:chart] + m[chart + 1:]
        out[mon] = out.get(mon, 0) + c
    return Polynomial(p.nvars - 1, out)


def _restrict_form(form: DiffForm, chart: int) -> DiffForm:
    terms = {}
    for idx, c in form.items():
        if chart in idx:
            continue  # dx_chart = 0 on the chart
        terms[tuple(i if i < chart else i - 1 for i in idx)] = dehomogenize(c, chart)
    return DiffForm(form.nvars - 1, form.grade, terms)


def chart_restriction(omega: PfaffSystem, chart: int) -> PfaffSystem:
    """Affine representative of a homogeneous system on {x_chart != 0}."""
    if not omega.homogeneous:
        raise InvalidInput("chart restriction needs a homogeneous system")
    form = _restrict_form(omega.form, chart)
    if form.is_zero():
        raise InvalidInput(f"system vanishes identically on the chart x{chart} = 1")
    return PfaffSystem(form)


def chart_variety(V: CompleteIntersection, chart: int) -> CompleteIntersection:
    if not V.homogeneous:
        raise InvalidInput("chart restriction needs a homogeneous variety")
    return CompleteIntersection(tuple(dehomogenize(f, chart) for f in V.equations))


def default_chart(S) -> int:
    if S.chart is not None:
        return S.chart
    coords = S.coordinates if isinstance(S, Point) else getattr(S, "center", None)
    if coords is None:
        raise InvalidInput("divisor components on P^n need an explicit chart")
    for i, c in enumerate(coords):
        if c:
            return i
    raise InvalidInput("the zero vector is not a projective point")


def component_to_chart(S, chart: int, nvars: int):
    """Express a projective component in the affine coordinates of a chart."""
    if isinstance(S, Point):
        return Point(_affine_coords(S.coordinates, chart, nvars), chart=None, degree=S.degree)
    if isinstance(S, DivisorOnV):
        if S.h.nvars != nvars:
            raise InvalidInput("divisor equation lives in the wrong ring")
        return DivisorOnV(dehomogenize(S.h, chart), None, S.degree)
    if isinstance(S, ParametrizedPoint):
        center = _affine_coords(S.center, chart, nvars)
        param = S.param
        if len(param) == nvars:
            if param[chart] != 1:
                raise InvalidInput("homogeneous branch series need the chart coordinate equal to 1")
            param = param[:chart] + param[chart + 1:]
        elif len(param) != nvars - 1:
            raise InvalidInput(f"branch needs {nvars - 1} affine or {nvars} homogeneous series")
        return ParametrizedPoint(center, param, S.truncation, None, S.degree)
    raise InvalidInput(f"unknown component type {type(S).__name__}")


def _affine_coords(coords, chart: int, nvars: int) -> tuple:
    if len(coords) != nvars:
        raise InvalidInput(f"projective point needs {nvars} homogeneous coordinates")
    scale = coords[chart]
    if not scale:
        raise InvalidInput(f"point is at infinity for the chart x{chart} = 1")
    return tuple(Fraction(c) / scale for i, c in enumerate(coords) if i != chart)


def component_degree(S) -> tuple[int, str]:
    """(degree, source): computed for rational points, declared otherwise."""
    if isinstance(S, Point):
        computed = projective_point_degree(point_ideal(S.coordinates))
        if S.degree is not None and S.degree != computed:
            raise ValidationError("point degree", f"declared {S.degree}, computed {computed}")
        return computed, "computed"
    if S.degree is None:
        raise ValidationError("declared degree", "positive-dimensional or branch components need a declared degree")
    if S.degree < 1:
        raise ValidationError("declared degree", "degrees are positive")
    return S.degree, "declared"


def logarithmic_example(fs: Sequence[Polynomial]) -> PfaffSystem:
    """sum_j (-1)^j d_j f_j df_0 ^ ... ^ (df_j omitted) ^ ... ^ df_k."""
    fs = list(fs)
    if len(fs) < 2:
        raise InvalidInput("the logarithmic example needs at least two polynomials")
    for f in fs:
        if f.is_zero() or not f.is_homogeneous() or f.degree() < 1:
            raise InvalidInput("logarithmic factors must be homogeneous of positive degree")
    k = len(fs) - 1
    n = fs[0].nvars
    if k >= n:
        raise InvalidInput(f"rank {k} forms need at least {k + 1} homogeneous variables")
    diffs = [d(f) for f in fs]
    form = DiffForm.zero(n, k)
    for j, f in enumerate(fs):
        rest = wedge_all([diffs[i] for i in range(len(fs)) if i != j])
        term = rest * (f * f.degree())
        form = form - term if j % 2 else form + term
    omega = PfaffSystem(form, homogeneous=True)
    expected = sum(f.degree() for f in fs) - k - 1
    if pfaff_degree(omega) != expected:
        raise ValidationError("degree", f"expected {expected}, got {pfaff_degree(omega)}")  # pragma: no cover
    return omega


@dataclass
class ComponentEntry:
    component: object
    chart: int
    index: int
    degree: int
    degree_source: str
    result: GSVResult = field(repr=False, default=None)


@dataclass
class DegreeFormulaReport:
    left: int
    right: int
    degree: int
    rank: int
    multidegree: tuple
    per_component: list
    match: bool
    brunella_right: int | None = None
    note: str = (
        "formula evaluated under the declared component list; completeness of "
        "Sing(omega, V) is asserted by the user, not proved"
    )

    def as_json(self) -> dict:
        out = {
            "left": self.left,
            "right": self.right,
            "match": self.match,
            "degree": self.degree,
            "rank": self.rank,
            "multidegree": list(self.multidegree),
            "components": [
                {
                    "chart": e.chart,
                    "index": e.index,
                    "degree": e.degree,
                    "degree_source": e.degree_source,
                    "gsv": e.result.as_json() if e.result else None,
                }
                for e in self.per_component
            ],
            "note": self.note,
        }
        if self.brunella_right is not None:
            out["brunella_right"] = self.brunella_right
        return out


def degree_formula_right(d: int, multidegree: Sequence[int]) -> int:
    k = len(multidegree)
    return (d + k + 1 - sum(multidegree)) * prod(multidegree)


def indices_in_charts(omega: PfaffSystem, V: CompleteIntersection, components, max_order=DEFAULT_MAX_ORDER):
    """GSV of every component in its chart, as ComponentEntry records."""
    check_rank_codim(omega, V)
    if not omega.homogeneous:
        raise InvalidInput("projective checks need a homogeneous problem")
    if not check_invariance(omega, V):
        raise GSVError("V is not invariant by the system")
    n = omega.nvars
    entries = []
    for S in components:
        chart = default_chart(S)
        if isinstance(S, Point):
            reason = component_failure(S, omega, V)
            if reason:
                raise GSVError(f"component {S.coordinates}: {reason}")
        omega_c = chart_restriction(omega, chart)
        V_c = chart_variety(V, chart)
        S_c = component_to_chart(S, chart, n)
        result = gsv_index(omega_c, V_c, S_c, max_order=max_order)
        deg, source = component_degree(S)
        entries.append(ComponentEntry(S, chart, result.index, deg, source, result))
    return entries


def degree_formula_check(
    omega: PfaffSystem, V: CompleteIntersection, components, max_order: int = DEFAULT_MAX_ORDER
) -> DegreeFormulaReport:
    entries = indices_in_charts(omega, V, components, max_order)
    d = pfaff_degree(omega)
    ds = V.multidegree
    left = sum(e.index * e.degree for e in entries)
    right = degree_formula_right(d, ds)
    brunella = None
    if omega.rank == 1 and omega.nvars == 3:
        # NF.C - C.C on P^2 with NF = O(d + 2)
        brunella = (d + 2) * ds[0] - ds[0] ** 2
    return DegreeFormulaReport(left, right, d, omega.rank, ds, entries, left == right, brunella)


@dataclass
class PoincareReport:
    degree: int
    rank: int
    multidegree: tuple
    indices: list
    all_nonnegative: bool
    all_positive: bool
    smooth: bool
    bound_lhs: int
    bound_rhs: int
    bound_holds: bool
    status: str
    refined_rhs: int
    refined_holds: bool
    refined_status: str

    @property
    def sharp(self) -> bool:
        return self.bound_lhs == self.refined_rhs

    def as_json(self) -> dict:
        return {
            "degree": self.degree,
            "rank": self.rank,
            "multidegree": list(self.multidegree),
            "indices": list(self.indices),
            "all_nonnegative": self.all_nonnegative,
            "all_positive": self.all_positive,
            "smooth": self.smooth,
            "bound": {"lhs": self.bound_lhs, "rhs": self.bound_rhs, "holds": self.bound_holds, "status": self.status},
            "smooth_bound": {
                "lhs": self.bound_lhs,
                "rhs": self.refined_rhs,
                "holds": self.refined_holds,
                "status": self.refined_status,
                "sharp": self.sharp,
            },
        }


def poincare_bound_check(
    omega: PfaffSystem, V: CompleteIntersection, indices: Sequence, smooth: bool = False
) -> PoincareReport:
    """Check d_1+...+d_k <= d+k+1 under non-negative indices (<= d+k for smooth V)."""
    d = pfaff_degree(omega)
    k = omega.rank
    ds = V.multidegree
    values = [r.index if isinstance(r, (GSVResult, ComponentEntry)) else int(r) for r in indices]
    nonneg = all(v >= 0 for v in values)
    positive = bool(values) and all(v >= 1 for v in values)
    lhs = sum(ds)
    holds = lhs <= d + k + 1
    status = ("holds" if holds else "VIOLATED") if nonneg else "inapplicable"
    refined = lhs <= d + k
    if smooth and positive:
        refined_status = "holds" if refined else "VIOLATED"
    else:
        refined_status = "inapplicable"
    return PoincareReport(
        d, k, ds, values, nonneg, positive, smooth, lhs, d + k + 1, holds, status, d + k, refined, refined_status
    )
