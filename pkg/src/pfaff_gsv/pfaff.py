"""Pfaff systems, invariant complete intersections and singular components."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .errors import ComputationError, DimensionError, InvalidInput, ValidationError
from .forms import DiffForm, contract_euler, d, form_in_ideal_module, pullback, wedge
from .groebner import Ideal, exact_divide, ideal_quotient_stable, radical_membership
from .poly import Polynomial, jacobian_minor


@dataclass(frozen=True, eq=False)
class PfaffSystem:
    """A rank-k polynomial form, either on an affine chart or homogeneous on C^{n+1}."""

    form: DiffForm
    homogeneous: bool = False

    def __post_init__(self):
        if self.form.grade < 1:
            raise ValidationError("rank >= 1", "a Pfaff system is a form of positive grade")
        if self.form.is_zero():
            raise ValidationError("non-trivial", "the zero form is not a Pfaff system")
        if self.homogeneous:
            degs = {c.degree() for c in self.form.coefficients()}
            if len(degs) != 1 or not all(c.is_homogeneous() for c in self.form.coefficients()):
                raise ValidationError(
                    "homogeneous coefficients", "all coefficients must be homogeneous of one common degree"
                )
            if not contract_euler(self.form).is_zero():
                raise ValidationError(
                    "Euler descent", "the contraction with the radial field must vanish"
                )

    @property
    def rank(self) -> int:
        return self.form.grade

    @property
    def nvars(self) -> int:
        return self.form.nvars

    def coefficient(self, index) -> Polynomial:
        return self.form.coefficient(index)

    @property
    def degree(self) -> int:
        return pfaff_degree(self)


@dataclass(frozen=True, eq=False)
class CompleteIntersection:
    """V = {f_1 = ... = f_k = 0}."""

    equations: tuple
    homogeneous: bool = False
    _ideal: Ideal = field(init=False, repr=False)

    def __post_init__(self):
        eqs = tuple(self.equations)
        object.__setattr__(self, "equations", eqs)
        if not eqs:
            raise ValidationError("codim >= 1", "a complete intersection needs at least one equation")
        n = eqs[0].nvars
        if any(f.nvars != n for f in eqs):
            raise DimensionError("equations live in different rings")
        if any(f.is_zero() for f in eqs):
            raise ValidationError("nonzero equations", "an equation is identically zero")
        if self.homogeneous and not all(f.is_homogeneous() and f.degree() >= 1 for f in eqs):
            raise ValidationError("homogeneous equations", "projective equations must be homogeneous of positive degree")
        ideal = Ideal(eqs)
        object.__setattr__(self, "_ideal", ideal)
        if ideal.is_unit():
            raise ValidationError("proper ideal", "the equations have no common zero (1 is in the ideal)")

    @property
    def ideal(self) -> Ideal:
        return self._ideal

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def nvars(self) -> int:
        return self.equations[0].nvars

    @property
    def multidegree(self) -> tuple:
        return tuple(f.degree() for f in self.equations)

    def minor_indices(self):
        return list(combinations(range(self.nvars), self.codim))

    def minor(self, index) -> Polynomial:
        return jacobian_minor(self.equations, index)

    def minors(self) -> dict:
        return {I: self.minor(I) for I in self.minor_indices()}

    def contains_point(self, point) -> bool:
        return all(f.evaluate(point) == 0 for f in self.equations)


# -- components -----------------------------------------------------------

def _fractions(values) -> tuple:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class Point:
    """A rational point; projective when the problem is homogeneous."""

    coordinates: tuple
    chart: int | None = None
    degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coordinates", _fractions(self.coordinates))

    kind = "point"


@dataclass(frozen=True)
class DivisorOnV:
    """The component {h = 0} inside V (codimension one in V)."""

    h: Polynomial
    chart: int | None = None
    degree: int | None = None

    kind = "divisor"


@dataclass(frozen=True)
class ParametrizedPoint:
    """One analytic branch through ``center``, given by truncated series in t."""

    center: tuple
    param: tuple
    truncation: int = 32
    chart: int | None = None
    degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", _fractions(self.center))
        object.__setattr__(self, "param", tuple(self.param))
        if self.truncation < 1:
            raise ValidationError("truncation >= 1")
        for p in self.param:
            if not isinstance(p, Polynomial) or p.nvars != 1:
                raise ValidationError("univariate parametrization", "branch series must be polynomials in t")

    kind = "parametrized"


Component = Union[Point, DivisorOnV, ParametrizedPoint]


# -- invariance -----------------------------------------------------------

@dataclass(frozen=True)
class InvarianceCertificate:
    """theta[i][j] with omega ^ df_i = sum_j f_j theta[i][j]."""

    theta: tuple

    def check(self, omega: PfaffSystem, V: CompleteIntersection) -> bool:
        for f_i, row in zip(V.equations, self.theta):
            lhs = wedge(omega.form, d(f_i))
            rhs = DiffForm.zero(lhs.nvars, lhs.grade)
            for f_j, th in zip(V.equations, row):
                rhs = rhs + th * f_j
            if lhs != rhs:
                return False
        return True


@dataclass(frozen=True)
class InvarianceResult:
    invariant: bool
    certificate: InvarianceCertificate | None = None
    failed_equation: int | None = None
    failed_index: tuple | None = None

    def __bool__(self):
        return self.invariant


def _compatible(omega: PfaffSystem, V: CompleteIntersection):
    if omega.nvars != V.nvars:
        raise DimensionError(f"system lives in {omega.nvars} variables, variety in {V.nvars}")


def check_invariance(omega: PfaffSystem, V: CompleteIntersection) -> InvarianceResult:
    """Certify omega ^ df_i in (f_1..f_k) * Omega^{k+1} for every equation."""
    _compatible(omega, V)
    if omega.rank + 1 > omega.nvars:
        raise DimensionError("invariance test needs rank + 1 <= number of variables")
    rows = []
    for i, f in enumerate(V.equations):
        w = wedge(omega.form, d(f))
        mem = form_in_ideal_module(w, V.ideal)
        if not mem:
            return InvarianceResult(False, None, i, mem.failed_index)
        rows.append(mem.components)
    cert = InvarianceCertificate(tuple(rows))
    if not cert.check(omega, V):
        raise ComputationError("invariance certificate failed to re-expand")  # pragma: no cover
    return InvarianceResult(True, cert)


def singular_ideal(omega: PfaffSystem, V: CompleteIntersection) -> Ideal:
    """Ideal of Sing(omega) ∩ V: all coefficients of omega plus the equations."""
    _compatible(omega, V)
    return Ideal(tuple(omega.form.coefficients()) + V.equations)


def check_parametrization(S: ParametrizedPoint, V: CompleteIntersection) -> str | None:
    """Reason the branch is not on V, or None."""
    if len(S.param) != V.nvars or len(S.center) != V.nvars:
        return f"branch has {len(S.param)} series and {len(S.center)} center coordinates; V needs {V.nvars}"
    if tuple(p.evaluate([0]) for p in S.param) != S.center:
        return "param(0) differs from the center"
    for j, f in enumerate(V.equations):
        comp = f.subs(list(S.param), 1).truncate(0, S.truncation)
        if not comp.is_zero():
            return f"equation {j} does not vanish on the branch modulo t^{S.truncation}"
    return None


def component_failure(S, omega: PfaffSystem, V: CompleteIntersection) -> str | None:
    """Why S is not contained in Sing(omega) ∩ V, or None when it is."""
    _compatible(omega, V)
    gens = singular_ideal(omega, V).generators
    if isinstance(S, Point):
        if len(S.coordinates) != V.nvars:
            return f"point has {len(S.coordinates)} coordinates, expected {V.nvars}"
        if omega.homogeneous and not any(S.coordinates):
            return "the zero vector is not a projective point"
        if not V.contains_point(S.coordinates):
            return "point does not lie on V"
        for g in gens:
            if g.evaluate(S.coordinates) != 0:
                return "a coefficient of the system does not vanish at the point"
        return None
    if omega.homogeneous:
        raise InvalidInput("restrict homogeneous problems to a chart before checking non-point components")
    if isinstance(S, DivisorOnV):
        if S.h.nvars != V.nvars:
            return "divisor equation lives in the wrong ring"
        if radical_membership(S.h, V.ideal):
            return "h vanishes identically on V"
        J = V.ideal + S.h
        for g in gens:
            if not radical_membership(g, J):
                return "a coefficient of the system does not vanish along {h = 0}"
        return None
    if isinstance(S, ParametrizedPoint):
        reason = check_parametrization(S, V)
        if reason:
            return reason
        for g in gens:
            if g.evaluate(S.center) != 0:
                return "a coefficient of the system does not vanish at the center"
        return None
    raise InvalidInput(f"unknown component type {type(S).__name__}")


def verify_component(S, omega: PfaffSystem, V: CompleteIntersection) -> bool:
    return component_failure(S, omega, V) is None


# -- degree ----------------------------------------------------------------

def pfaff_degree(omega: PfaffSystem) -> int:
    """d with omega in H^0(P^n, Omega^k(d + k + 1)): the coefficient degree minus one."""
    if not omega.homogeneous:
        raise InvalidInput("the degree is defined for homogeneous (projective) systems")
    return omega.form.degree() - 1


def pfaff_degree_by_restriction(omega: PfaffSystem, linear_map: Sequence[Polynomial]) -> int:
    """Degree of the section i*omega on a linear P^k given by n+1 linear forms in k+1 variables.

    A descended k-form on C^{k+1} is G * i_R(dx_0 ^ ... ^ dx_k); the degree of
    the hypersurface {G = 0} is the degree of the system.
    """
    if not omega.homogeneous:
        raise InvalidInput("restriction degree needs a homogeneous system")
    k = omega.rank
    if any(not (p.is_homogeneous() and p.degree() == 1) for p in linear_map):
        raise InvalidInput("the embedding must be given by linear forms")
    if linear_map and linear_map[0].nvars != k + 1:
        raise DimensionError(f"a linear P^{k} needs {k + 1} homogeneous coordinates")
    pulled = pullback(omega.form, linear_map)
    if pulled.is_zero():
        raise ComputationError("the chosen linear subspace is invariant; pick a generic one")
    vol = contract_euler(DiffForm.basis(k + 1, tuple(range(k + 1))))
    # coefficient of dx_1^...^dx_k in vol is x_0
    top = tuple(range(1, k + 1))
    x0 = Polynomial.variable(k + 1, 0)
    G = exact_divide(pulled.coefficient(top), x0)
    if vol * G != pulled:
        raise ComputationError("restricted form is not a multiple of the Euler-contracted volume form")
    return G.degree()


# -- smoothness and reducedness ---------------------------------------------

def smooth_at(V: CompleteIntersection, point) -> bool:
    """Jacobian of the equations has full rank at ``point``."""
    return any(m.evaluate(point) != 0 for m in V.minors().values())


def is_smooth(V: CompleteIntersection) -> bool:
    """Smoothness of V everywhere (projectively when V is homogeneous)."""
    J = V.ideal + [m for m in V.minors().values() if not m.is_zero()]
    if not V.homogeneous:
        return J.is_unit()
    return all(radical_membership(Polynomial.variable(V.nvars, i), J) for i in range(V.nvars))


def reducedness_warnings(V: CompleteIntersection, seed: int = 0) -> list[str]:
    """Warnings when df_1^...^df_k looks identically zero on some component of V."""
    minors = [m for m in V.minors().values() if not m.is_zero()]
    if not minors:
        return ["every Jacobian minor vanishes identically: V is not reduced"]
    rng = random.Random(seed)
    g = Polynomial.zero(V.nvars)
    for m in minors:
        g = g + m * rng.randint(1, 97)
    if radical_membership(g, V.ideal):
        return ["all Jacobian minors vanish on V: V appears non-reduced"]
    if not ideal_quotient_stable(V.ideal, g):
        return [
            "a generic combination of Jacobian minors is a zero-divisor modulo I_V: "
            "V may be non-reduced along some component (or its equations do not generate a radical ideal)"
        ]
    return []


# -- problems --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PfaffProblem:
    omega: PfaffSystem
    variety: CompleteIntersection
    components: tuple = ()
    names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(self.omega.nvars)))
        check_rank_codim(self.omega, self.variety)

    @property
    def homogeneous(self) -> bool:
        return self.omega.homogeneous


def check_rank_codim(omega: PfaffSystem, V: CompleteIntersection):
    _compatible(omega, V)
    if omega.rank != V.codim:
        raise ValidationError(
            "rank ≠ codimension", f"system has rank {omega.rank} but V has {V.codim} equations"
        )
    if omega.homogeneous != V.homogeneous:
        raise ValidationError("homogeneity", "system and variety must both be affine or both projective")


def warn_if_nonreduced(V: CompleteIntersection):
    for msg in reducedness_warnings(V):
        warnings.warn(msg, stacklevel=2)
