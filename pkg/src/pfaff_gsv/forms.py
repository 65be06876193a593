"""Polynomial differential forms on an affine chart."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionError
from .groebner import Ideal
from .poly import Polynomial


def _sort_sign(index: Sequence[int]):
    """(sorted index, sign of the sorting permutation), or (None, 0) on a repeat."""
    idx = list(index)
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return tuple(idx), sign


class DiffForm:
    """A q-form sum(a_I dZ_I) with polynomial coefficients, I strictly increasing."""

    __slots__ = ("nvars", "grade", "_terms", "_hash")

    def __init__(self, nvars: int, grade: int, terms: Mapping[Sequence[int], Polynomial] | None = None):
        if not 0 <= grade <= nvars:
            raise DimensionError(f"grade {grade} impossible on a chart of dimension {nvars}")
        self.nvars = nvars
        self.grade = grade
        clean: dict[tuple, Polynomial] = {}
        for index, coef in (terms or {}).items():
            if isinstance(coef, Polynomial):
                if coef.nvars != nvars:
                    raise DimensionError("coefficient lives in a different ring")
            else:
                coef = Polynomial.constant(nvars, coef)
            index = tuple(index)
            if len(index) != grade or any(not 0 <= i < nvars for i in index):
                raise DimensionError(f"malformed multi-index {index} for a {grade}-form in {nvars} variables")
            idx, sign = _sort_sign(index)
            if idx is None or coef.is_zero():
                continue
            total = clean.get(idx, Polynomial.zero(nvars)) + (coef if sign > 0 else -coef)
            if total.is_zero():
                clean.pop(idx, None)
            else:
                clean[idx] = total
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, grade, terms):
        f = object.__new__(cls)
        f.nvars, f.grade, f._terms, f._hash = nvars, grade, terms, None
        return f

    @classmethod
    def zero(cls, nvars: int, grade: int) -> "DiffForm":
        return cls(nvars, grade)

    @classmethod
    def function(cls, p: Polynomial) -> "DiffForm":
        return cls(p.nvars, 0, {(): p})

    @classmethod
    def basis(cls, nvars: int, index: Sequence[int]) -> "DiffForm":
        return cls(nvars, len(index), {tuple(index): Polynomial.constant(nvars, 1)})

    def items(self):
        return sorted(self._terms.items())

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, index: Sequence[int]) -> Polynomial:
        index = tuple(index)
        if len(index) != self.grade or any(not 0 <= i < self.nvars for i in index):
            raise DimensionError(f"malformed multi-index {index}")
        if list(index) != sorted(set(index)):
            raise DimensionError(f"multi-index {index} must be strictly increasing")
        return self._terms.get(index, Polynomial.zero(self.nvars))

    def coefficients(self) -> list[Polynomial]:
        return [c for _, c in self.items()]

    def degree(self) -> int:
        """Largest total degree of a coefficient (-1 for the zero form)."""
        return max((c.degree() for c in self._terms.values()), default=-1)

    def _same(self, other: "DiffForm"):
        if not isinstance(other, DiffForm):
            raise TypeError("expected a DiffForm")
        if (other.nvars, other.grade) != (self.nvars, self.grade):
            raise DimensionError("forms of different ring or grade")

    def __add__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        self._same(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            v = out.get(idx, Polynomial.zero(self.nvars)) + c
            if v.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = v
        return DiffForm._raw(self.nvars, self.grade, out)

    def __neg__(self):
        return DiffForm._raw(self.nvars, self.grade, {i: -c for i, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Multiplication by a function (Polynomial or rational scalar)."""
        if isinstance(other, DiffForm):
            return NotImplemented
        out = {}
        for idx, c in self._terms.items():
            v = c * other
            if not v.is_zero():
                out[idx] = v
        return DiffForm._raw(self.nvars, self.grade, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.nvars, self.grade, self._terms) == (other.nvars, other.grade, other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.grade, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for idx, c in self.items():
            basis = "^".join(f"d{names[i]}" for i in idx)
            parts.append(f"({c.to_str(names)})" + (f" {basis}" if basis else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffForm({self.nvars}, {self.grade}, {self.to_str()!r})"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.nvars != b.nvars:
        raise DimensionError("forms live on different charts")
    grade = a.grade + b.grade
    if grade > a.nvars:
        raise DimensionError(f"wedge of grades {a.grade} and {b.grade} overflows dimension {a.nvars}")
    out: dict[tuple, Polynomial] = {}
    for i1, c1 in a._terms.items():
        for i2, c2 in b._terms.items():
            idx, sign = _sort_sign(i1 + i2)
            if idx is None:
                continue
            term = c1 * c2
            if sign < 0:
                term = -term
            out[idx] = out[idx] + term if idx in out else term
    return DiffForm._raw(a.nvars, grade, {i: c for i, c in out.items() if not c.is_zero()})


def exterior_derivative(a: DiffForm) -> DiffForm:
    n = a.nvars
    if a.grade >= n:
        return DiffForm._raw(n, a.grade + 1, {})  # d of a top form vanishes
    out: dict[tuple, Polynomial] = {}
    for idx, c in a._terms.items():
        for v in range(n):
            if v in idx:
                continue
            dc = c.diff(v)
            if dc.is_zero():
                continue
            pos = sum(1 for i in idx if i < v)
            new = idx[:pos] + (v,) + idx[pos:]
            term = -dc if pos % 2 else dc
            out[new] = out[new] + term if new in out else term
    return DiffForm._raw(n, a.grade + 1, {i: c for i, c in out.items() if not c.is_zero()})


def d(p) -> DiffForm:
    """Exterior derivative of a function or a form."""
    if isinstance(p, Polynomial):
        p = DiffForm.function(p)
    return exterior_derivative(p)


def coefficient(a: DiffForm, index: Sequence[int]) -> Polynomial:
    return a.coefficient(index)


def wedge_all(forms: Sequence[DiffForm]) -> DiffForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def pullback(a: DiffForm, mapping: Sequence[Polynomial]) -> DiffForm:
    """Pull ``a`` back along z_i = mapping[i] (polynomials in m new variables)."""
    if len(mapping) != a.nvars:
        raise DimensionError(f"map has {len(mapping)} components, form lives in {a.nvars} variables")
    m = mapping[0].nvars if mapping else 0
    if any(p.nvars != m for p in mapping):
        raise DimensionError("map components live in different rings")
    if a.grade > m:
        # no nonzero forms of this grade exist on the target
        return DiffForm._raw(m, a.grade, {})
    differentials = [d(p) for p in mapping]
    out = DiffForm.zero(m, a.grade)
    for idx, c in a._terms.items():
        pulled = c.subs(list(mapping), m)
        if pulled.is_zero():
            continue
        if idx:
            piece = wedge_all([differentials[i] for i in idx]) * pulled
        else:
            piece = DiffForm.function(pulled)
        out = out + piece
    return out


def contract_euler(a: DiffForm) -> DiffForm:
    """Interior product with the radial field sum z_i d/dz_i."""
    if a.grade < 1:
        raise DimensionError("cannot contract a function")
    n = a.nvars
    xs = [Polynomial.variable(n, i) for i in range(n)]
    out: dict[tuple, Polynomial] = {}
    for idx, c in a._terms.items():
        for r, i in enumerate(idx):
            new = idx[:r] + idx[r + 1:]
            term = c * xs[i]
            if r % 2:
                term = -term
            out[new] = out[new] + term if new in out else term
    return DiffForm._raw(n, a.grade - 1, {i: c for i, c in out.items() if not c.is_zero()})


@dataclass(frozen=True)
class ModuleMembership:
    """Certificate for ``a = sum(generators[j] * components[j])``."""

    member: bool
    components: tuple = ()
    failed_index: tuple | None = None

    def __bool__(self):
        return self.member


def form_in_ideal_module(a: DiffForm, ideal: Ideal) -> ModuleMembership:
    """Is every coefficient of ``a`` in ``ideal``?  If so, assemble the eta_j."""
    if a.nvars != ideal.nvars:
        raise DimensionError("form and ideal live in different rings")
    gb = ideal.groebner(lifts=True)
    r = len(ideal.generators)
    per_gen: list[dict] = [dict() for _ in range(r)]
    for idx, c in a.items():
        lift = gb.lift(c)
        if lift is None:
            return ModuleMembership(False, (), idx)
        for j, q in enumerate(lift):
            if not q.is_zero():
                per_gen[j][idx] = q
    comps = tuple(DiffForm(a.nvars, a.grade, t) for t in per_gen)
    return ModuleMembership(True, comps)


def expand_module_element(generators: Sequence[Polynomial], components: Sequence[DiffForm], nvars: int, grade: int) -> DiffForm:
    total = DiffForm.zero(nvars, grade)
    for g, comp in zip(generators, components):
        total = total + comp * g
    return total
