"""Ideals, reduced Groebner bases, and the membership questions built on them.

Buchberger's algorithm with the normal selection strategy and both of
Buchberger's pair criteria.  A basis can optionally carry *lifts*: for every
basis element, its expression as a combination of the ideal's original
generators.  Lifts are what turn a membership answer into a certificate in
terms of the user's equations.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from . import config
from .errors import ComputationError, DimensionError, InvalidInput, ResourceCapExceeded
from .poly import GREVLEX, MonomialOrder, Polynomial


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _axpy(p: dict, coef: Fraction, shift, g: dict):
    """p -= coef * x^shift * g, in place."""
    for m, c in g.items():
        mon = _add(m, shift)
        v = p.get(mon, 0) - coef * c
        if v:
            p[mon] = v
        else:
            p.pop(mon, None)


def _divide(p: dict, basis: Sequence[dict], lms: Sequence[tuple], key, want_quotients: bool):
    """Full multivariate division of ``p`` by ``basis`` (leading coefficients 1 or not).

    Returns (quotients, remainder) as term dicts; quotients is None when not
    requested.
    """
    p = dict(p)
    rem: dict = {}
    quots = [dict() for _ in basis] if want_quotients else None
    lcs = [g[lm] for g, lm in zip(basis, lms)]
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, lm in enumerate(lms):
            if _divides(lm, m):
                shift = _sub(m, lm)
                coef = c / lcs[i]
                if want_quotients:
                    q = quots[i]
                    v = q.get(shift, 0) + coef
                    if v:
                        q[shift] = v
                    else:
                        q.pop(shift, None)
                _axpy(p, coef, shift, basis[i])
                break
        else:
            rem[m] = c
            del p[m]
    return quots, rem


def _buchberger(gens: Sequence[Polynomial], order: MonomialOrder, tracked: bool, settings):
    n = gens[0].nvars
    r = len(gens)
    key = order.key
    G: list[dict] = []
    LM: list[tuple] = []
    lifts: list[list[Polynomial]] = []
    pairs: set[tuple[int, int]] = set()
    zero = Polynomial.zero(n)

    def combine(parts):
        # parts: iterable of (term dict, lift list) scaled sums -> lift list
        out = [zero] * r
        for mult, lift in parts:
            if mult.is_zero():
                continue
            out = [a + mult * b for a, b in zip(out, lift)]
        return out

    def add(poly: dict, lift):
        lm = max(poly, key=key)
        lc = poly[lm]
        if sum(lm) > settings.max_degree:
            raise ResourceCapExceeded(
                f"Groebner basis element of degree {sum(lm)} exceeds the degree cap {settings.max_degree}"
            )
        if lc != 1:
            inv = 1 / lc
            poly = {m: c * inv for m, c in poly.items()}
            if lift is not None:
                lift = [l * inv for l in lift]
        idx = len(G)
        G.append(poly)
        LM.append(lm)
        lifts.append(lift)
        pairs.update((i, idx) for i in range(idx))

    for j, g in enumerate(gens):
        unit = [Polynomial.constant(n, int(i == j)) for i in range(r)] if tracked else None
        add(dict(g._terms), unit)

    processed = 0
    while pairs:
        pair = min(pairs, key=lambda ij: (key(_lcm(LM[ij[0]], LM[ij[1]])), ij))
        pairs.discard(pair)
        processed += 1
        if processed > settings.max_pairs:
            raise ResourceCapExceeded(f"Buchberger pair budget {settings.max_pairs} exhausted")
        i, j = pair
        L = _lcm(LM[i], LM[j])
        if L == _add(LM[i], LM[j]):
            continue  # coprime leading monomials
        if any(
            k != i and k != j
            and _divides(LM[k], L)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        si, sj = _sub(L, LM[i]), _sub(L, LM[j])
        s = {_add(m, si): c for m, c in G[i].items()}
        _axpy(s, Fraction(1), sj, G[j])
        quots, rem = _divide(s, G, LM, key, tracked)
        if not rem:
            continue
        lift = None
        if tracked:
            parts = [(Polynomial.monomial(si), lifts[i]), (-Polynomial.monomial(sj), lifts[j])]
            parts += [(-Polynomial._raw(n, q), lifts[t]) for t, q in enumerate(quots) if q]
            lift = combine(parts)
        add(rem, lift)

    # minimalize, then inter-reduce tails
    keep = []
    for i, lm in enumerate(LM):
        if any(
            _divides(LM[j], lm) and (LM[j] != lm or j < i) for j in range(len(LM)) if j != i
        ):
            continue
        keep.append(i)
    basis, basis_lifts = [], []
    for i in keep:
        others = [j for j in keep if j != i]
        quots, rem = _divide(G[i], [G[j] for j in others], [LM[j] for j in others], key, tracked)
        basis.append(Polynomial._raw(n, rem))
        if tracked:
            parts = [(Polynomial.constant(n, 1), lifts[i])]
            parts += [(-Polynomial._raw(n, q), lifts[others[t]]) for t, q in enumerate(quots) if q]
            basis_lifts.append(combine(parts))
    idx = sorted(range(len(basis)), key=lambda t: key(order.leading_monomial(basis[t])), reverse=True)
    basis = [basis[t] for t in idx]
    basis_lifts = [tuple(basis_lifts[t]) for t in idx] if tracked else None
    return basis, basis_lifts, processed


@dataclass(frozen=True)
class CofactorCertificate:
    """``f = sum(quotients[i] * basis[i]) + remainder``."""

    quotients: tuple
    remainder: Polynomial
    basis: tuple

    def expand(self) -> Polynomial:
        total = self.remainder
        for q, g in zip(self.quotients, self.basis):
            total = total + q * g
        return total

    def check(self, f: Polynomial) -> bool:
        return self.expand() == f


class GroebnerBasis:
    """Reduced Groebner basis of ``source`` under ``order``."""

    def __init__(self, source: "Ideal", order: MonomialOrder, basis, lifts=None, pairs_processed=0):
        self.source = source
        self.order = order
        self.basis = tuple(basis)
        self.lifts = lifts
        self.pairs_processed = pairs_processed
        self._lms = [order.leading_monomial(g) for g in self.basis]

    @property
    def nvars(self) -> int:
        return self.source.nvars

    @property
    def leading_monomials(self) -> list[tuple]:
        return list(self._lms)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def reduce(self, f: Polynomial) -> CofactorCertificate:
        if f.nvars != self.nvars:
            raise DimensionError(f"ring dimension mismatch: {f.nvars} vs {self.nvars}")
        quots, rem = _divide(f._terms, [g._terms for g in self.basis], self._lms, self.order.key, True)
        n = self.nvars
        return CofactorCertificate(
            tuple(Polynomial._raw(n, q) for q in quots), Polynomial._raw(n, rem), self.basis
        )

    def normal_form(self, f: Polynomial) -> Polynomial:
        _, rem = _divide(f._terms, [g._terms for g in self.basis], self._lms, self.order.key, False)
        return Polynomial._raw(self.nvars, rem)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def lift(self, f: Polynomial) -> tuple | None:
        """Cofactors c with ``f = sum(c[j] * source.generators[j])``, or None if f is not a member."""
        if self.lifts is None:
            raise ValueError("basis was computed without lift tracking")
        cert = self.reduce(f)
        if not cert.remainder.is_zero():
            return None
        n = self.nvars
        out = [Polynomial.zero(n)] * len(self.source.generators)
        for q, lift in zip(cert.quotients, self.lifts):
            if q.is_zero():
                continue
            out = [a + q * b for a, b in zip(out, lift)]
        return tuple(out)

    def satisfies_buchberger_criterion(self) -> bool:
        for i, j in combinations(range(len(self.basis)), 2):
            a, b = self.basis[i], self.basis[j]
            L = _lcm(self._lms[i], self._lms[j])
            s = a.mul_term(_sub(L, self._lms[i]), 1 / a.coefficient(self._lms[i])) - b.mul_term(
                _sub(L, self._lms[j]), 1 / b.coefficient(self._lms[j])
            )
            if not self.normal_form(s).is_zero():
                return False
        return True

    def is_reduced(self) -> bool:
        for i, g in enumerate(self.basis):
            if g.coefficient(self._lms[i]) != 1:
                return False
            for m in g._terms:
                for j, lm in enumerate(self._lms):
                    if j != i and _divides(lm, m):
                        return False
        return True

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.basis]}, {self.order!r})"


class Ideal:
    """Finitely generated ideal of Q[x_0..x_{n-1}]."""

    def __init__(self, generators: Iterable[Polynomial], nvars: int | None = None):
        gens = tuple(generators)
        if not gens:
            raise InvalidInput("an ideal needs at least one generator")
        n = gens[0].nvars if nvars is None else nvars
        for g in gens:
            if not isinstance(g, Polynomial):
                raise TypeError("ideal generators must be Polynomials")
            if g.nvars != n:
                raise DimensionError("ideal generators live in different rings")
            if g.is_zero():
                raise InvalidInput("ideal generators must be nonzero")
        self.generators = gens
        self.nvars = n
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def of(cls, polys: Iterable[Polynomial], nvars: int) -> "Ideal":
        """Ideal of the nonzero entries of ``polys``; the zero ideal is represented by (0 -> dropped) error."""
        gens = [p for p in polys if not p.is_zero()]
        if not gens:
            raise InvalidInput("zero ideal has no nonzero generators")
        return cls(gens, nvars)

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            extra = other.generators
        elif isinstance(other, Polynomial):
            extra = (other,)
        else:
            extra = tuple(other)
        return Ideal(self.generators + tuple(g for g in extra if not g.is_zero()), self.nvars)

    def groebner(self, order: MonomialOrder | None = None, lifts: bool = False) -> GroebnerBasis:
        settings = config.current()
        order = order or settings.order
        cache_key = (order, lifts)
        gb = self._cache.get(cache_key)
        if gb is None and not lifts:
            gb = self._cache.get((order, True))
        if gb is None:
            basis, basis_lifts, processed = _buchberger(self.generators, order, lifts, settings)
            gb = GroebnerBasis(self, order, basis, basis_lifts, processed)
            with self._lock:
                gb = self._cache.setdefault(cache_key, gb)
        return gb

    def contains(self, f: Polynomial) -> bool:
        return f.is_zero() or self.groebner().contains(f)

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"


def groebner_basis(ideal: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    return ideal.groebner(order)


def reduce_with_cofactors(f: Polynomial, gb: GroebnerBasis) -> CofactorCertificate:
    return gb.reduce(f)


def ideal_membership(f: Polynomial, ideal: Ideal):
    """(True, certificate) if f is in the ideal, else (False, None)."""
    cert = ideal.groebner().reduce(f)
    if cert.remainder.is_zero():
        return True, cert
    return False, None


def radical_membership(f: Polynomial, ideal: Ideal) -> bool:
    """Whether f vanishes on the zero set of ``ideal`` (Rabinowitsch trick)."""
    if f.nvars != ideal.nvars:
        raise DimensionError("ring dimension mismatch")
    if f.is_zero() or ideal.is_unit() or ideal.contains(f):
        return True
    if f.is_constant():
        return False
    n = ideal.nvars
    t = Polynomial.variable(n + 1, n)
    gens = [g.extend(n + 1) for g in ideal.generators]
    gens.append(1 - t * f.extend(n + 1))
    return Ideal(gens).groebner(GREVLEX).is_unit()


def _elimination_order(n: int) -> MonomialOrder:
    # the auxiliary variable sits at index n and is eliminated first
    return MonomialOrder("lex", (n,) + tuple(range(n)))


def ideal_intersection(a: Ideal, b: Ideal) -> Ideal:
    """a ∩ b via t*a + (1-t)*b, eliminating t."""
    n = a.nvars
    t = Polynomial.variable(n + 1, n)
    gens = [t * g.extend(n + 1) for g in a.generators]
    gens += [(1 - t) * g.extend(n + 1) for g in b.generators]
    gb = Ideal(gens).groebner(_elimination_order(n))
    kept = [g for g in gb.basis if g.degree_in(n) <= 0]
    out = [Polynomial._raw(n, {m[:n]: c for m, c in g._terms.items()}) for g in kept]
    return Ideal(out, n)


def ideal_quotient(ideal: Ideal, h: Polynomial) -> Ideal:
    """Generators of (ideal : h)."""
    if h.is_zero():
        raise InvalidInput("cannot take the quotient by the zero polynomial")
    inter = ideal_intersection(ideal, Ideal([h]))
    return Ideal([exact_divide(g, h) for g in inter.generators], ideal.nvars)


def exact_divide(g: Polynomial, h: Polynomial) -> Polynomial:
    key = GREVLEX.key
    lm = GREVLEX.leading_monomial(h)
    quots, rem = _divide(g._terms, [h._terms], [lm], key, True)
    if rem:
        raise ComputationError("polynomial is not divisible")
    return Polynomial._raw(g.nvars, quots[0])


def ideal_quotient_stable(ideal: Ideal, h: Polynomial) -> bool:
    """True iff (ideal : h) == ideal, i.e. h is a non-zero-divisor modulo the ideal."""
    if ideal.is_unit():
        return True
    if ideal.contains(h):
        return False
    quotient = ideal_quotient(ideal, h)
    return all(ideal.contains(g) for g in quotient.generators)


# -- Hilbert function and projective degree -------------------------------

def _monomials_of_degree(nvars: int, deg: int):
    for combo in combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def monomial_ideal_dimension(lms: Sequence[tuple], nvars: int) -> int:
    """Krull dimension of Q[x]/(lms): the largest variable set supporting no generator."""
    if any(sum(m) == 0 for m in lms):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(nvars, -1, -1):
        for s in combinations(range(nvars), size):
            s = frozenset(s)
            if not any(sup <= s for sup in supports):
                return size
    return 0  # pragma: no cover


def hilbert_function(lms: Sequence[tuple], nvars: int, deg: int) -> int:
    """Number of degree-``deg`` monomials outside the monomial ideal (lms)."""
    return sum(
        1 for m in _monomials_of_degree(nvars, deg) if not any(_divides(lm, m) for lm in lms)
    )


def projective_point_degree(ideal: Ideal) -> int:
    """Degree of a zero-dimensional projective scheme cut out by a homogeneous ideal."""
    if not ideal.is_homogeneous():
        raise InvalidInput("projective degree needs a homogeneous ideal")
    gb = ideal.groebner(GREVLEX)
    n = ideal.nvars
    lms = gb.leading_monomials
    dim = monomial_ideal_dimension(lms, n)
    if dim != 1:
        raise InvalidInput(
            "projective zero set is empty" if dim <= 0 else f"projective zero set has dimension {dim - 1}"
        )
    top = max(sum(m) for m in lms)
    # the Hilbert function of a monomial ideal is polynomial beyond n*top
    m = n * top + 1
    a, b = hilbert_function(lms, n, m), hilbert_function(lms, n, m + 1)
    if a != b:
        raise ComputationError("Hilbert function did not stabilize")  # pragma: no cover
    return a


def point_ideal(coords: Sequence, nvars: int | None = None) -> Ideal:
    """Homogeneous ideal of the rational projective point ``coords``."""
    coords = [Fraction(c) for c in coords]
    n = len(coords) if nvars is None else nvars
    pivot = next((i for i, c in enumerate(coords) if c), None)
    if pivot is None:
        raise InvalidInput("the zero vector is not a projective point")
    xs = [Polynomial.variable(n, i) for i in range(n)]
    gens = [coords[pivot] * xs[i] - coords[i] * xs[pivot] for i in range(n) if i != pivot]
    return Ideal(gens, n)
