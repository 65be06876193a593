"""Shared builders and seeded random instance generators for the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from pfaff_gsv.forms import DiffForm, d
from pfaff_gsv.order import order_at_smooth_point
from pfaff_gsv.pfaff import CompleteIntersection, PfaffSystem, Point
from pfaff_gsv.poly import Polynomial, parse_polynomial

# criterion name -> (passed, detail); filled by test_acceptance, printed by conftest
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def P(text: str, names="x y") -> Polynomial:
    return parse_polynomial(text, names.split())


def form(terms: dict, names="x y", grade=None) -> DiffForm:
    """form({"x": "y", "y": "x"}) is y dx + x dy; keys "x,y" give 2-forms."""
    vs = names.split()
    parsed = {}
    for key, coef in terms.items():
        idx = tuple(vs.index(v) for v in key.split(","))
        parsed[idx] = P(coef, names)
    if grade is None:
        grade = len(next(iter(terms)).split(","))
    return DiffForm(len(vs), grade, parsed)


def system(terms: dict, names="x y", homogeneous=False) -> PfaffSystem:
    return PfaffSystem(form(terms, names), homogeneous)


def variety(eqs, names="x y", homogeneous=False) -> CompleteIntersection:
    return CompleteIntersection(tuple(P(e, names) for e in eqs), homogeneous)


def cusp():
    return system({"x": "-3*y", "y": "2*x"}), variety(["y^2 - x^3"])


# -- random polynomials ------------------------------------------------------

def random_rational(rng: random.Random, span=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice([1, 1, 1, 2]))


def random_poly(rng: random.Random, nvars: int, degree: int, density=0.5, span=3) -> Polynomial:
    terms = {}
    for total in range(degree + 1):
        for mon in _monomials(nvars, total):
            if rng.random() < density:
                terms[mon] = rng.randint(-span, span)
    return Polynomial(nvars, terms)


def _monomials(nvars: int, total: int):
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _monomials(nvars - 1, total - first):
            yield (first,) + rest


def shifted(rng, point, degree, low=1, density=0.6) -> Polynomial:
    """Random polynomial in (x - p) with no terms below degree ``low``."""
    n = len(point)
    base = random_poly(rng, n, degree, density)
    terms = {m: c for m, c in base.items() if sum(m) >= low}
    q = Polynomial(n, terms)
    inverse = [Polynomial.variable(n, i) - point[i] for i in range(n)]
    return q.subs(inverse, n)


def random_invariant_instance(rng: random.Random):
    """omega = p df + f beta with V = {f = 0} smooth through a rational point P, p(P) = 0.

    Coefficient degrees stay <= 4 and P is a singular point of omega on V.
    """
    n = 2
    while True:
        pt = (random_rational(rng), random_rational(rng))
        X = [Polynomial.variable(n, i) - pt[i] for i in range(n)]
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
        if a == b == 0:
            continue
        f = X[0] * a + X[1] * b + shifted(rng, pt, rng.choice([1, 2]), low=2)
        p = shifted(rng, pt, 2, low=1)
        beta = DiffForm(n, 1, {(0,): random_poly(rng, n, 2), (1,): random_poly(rng, n, 2)})
        omega_form = d(f) * p + beta * f
        if omega_form.is_zero() or omega_form.degree() > 4:
            continue
        V = CompleteIntersection((f,))
        # P must be isolated in Sing(omega) on V: p may not vanish along the branch
        if order_at_smooth_point(p, V, pt).infinite:
            continue
        return PfaffSystem(omega_form), V, Point(pt)


def random_graph_instance(rng: random.Random):
    """V = {y = phi(x)}, a point on it, and f with a controlled order there."""
    n = 2
    x, y = Polynomial.variable(n, 0), Polynomial.variable(n, 1)
    phi = random_poly(rng, 1, rng.choice([1, 2, 3]))
    x0 = random_rational(rng)
    pt = (x0, phi.evaluate([x0]))
    g = y - phi.subs([x], n)
    m = rng.randint(0, 5)
    unit = shifted(rng, pt, 1, low=0)
    if unit.evaluate(pt) == 0:
        unit = unit + 1
    f = (x - x0) ** m * unit + g * random_poly(rng, n, 2)
    t = Polynomial.variable(1, 0)
    param = (t + x0, phi.subs([t + x0], 1))
    return f, CompleteIntersection((g,)), pt, param, m


# -- logarithmic families ---------------------------------------------------------
# (multidegree d_0..d_k, factors f_0..f_k, components of Sing(omega) on V = {f_1 = .. = f_k = 0})

P2_NAMES = "x0 x1 x2"
P3_NAMES = "x0 x1 x2 x3"

LOG_FAMILIES = [
    ((1, 1), P2_NAMES, ["x0", "x1"], [(0, 0, 1)]),
    ((2, 1), P2_NAMES, ["x0*x2", "x1"], [(1, 0, 0), (0, 0, 1)]),
    ((1, 2), P2_NAMES, ["x1", "x0*x2 - x1^2"], [(1, 0, 0), (0, 0, 1)]),
    ((2, 2), P2_NAMES, ["x1*(x1 - x0)", "x0*x2 - x1^2"], [(1, 0, 0), (0, 0, 1), (1, 1, 1)]),
    ((1, 1, 1), P3_NAMES, ["x0", "x1", "x2"], [(0, 0, 0, 1)]),
    ((2, 1, 1), P3_NAMES, ["x0*x3", "x1", "x2"], [(0, 0, 0, 1), (1, 0, 0, 0)]),
    ((1, 1, 2), P3_NAMES, ["x2", "x1", "x0*x3 - x2^2"], [(1, 0, 0, 0), (0, 0, 0, 1)]),
    ((2, 1, 2), P3_NAMES, ["x2*(x2 - x0)", "x1", "x0*x3 - x2^2"], [(1, 0, 0, 0), (0, 0, 0, 1), (1, 0, 1, 1)]),
    ((1, 2, 1), P3_NAMES, ["x2", "x0*x3 - x2^2", "x1"], [(1, 0, 0, 0), (0, 0, 0, 1)]),
    ((2, 2, 1), P3_NAMES, ["x2*(x2 - x0)", "x0*x3 - x2^2", "x1"], [(1, 0, 0, 0), (0, 0, 0, 1), (1, 0, 1, 1)]),
    ((1, 2, 2), P3_NAMES, ["x0", "x0^2 + x1^2 - x2^2", "2*x0^2 + x1^2 - x3^2"],
     [(0, 1, a, b) for a in (1, -1) for b in (1, -1)]),
    ((2, 2, 2), P3_NAMES, ["x0^2", "x0^2 + x1^2 - x2^2", "2*x0^2 + x1^2 - x3^2"],
     [(0, 1, a, b) for a in (1, -1) for b in (1, -1)]),
]


def log_family(entry):
    """(omega, V, components) for one LOG_FAMILIES row."""
    from pfaff_gsv.projective import logarithmic_example

    _, names, factors, points = entry
    fs = [P(f, names) for f in factors]
    omega = logarithmic_example(fs)
    V = CompleteIntersection(tuple(fs[1:]), homogeneous=True)
    return omega, V, [Point(p) for p in points]
