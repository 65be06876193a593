"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, ParseError

Monomial = tuple  # tuple[int, ...] of exponents


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Polynomial:
    """Immutable polynomial in ``nvars`` variables over Q.

    Terms are held in a dict mapping exponent tuples to nonzero Fractions, so
    two polynomials are equal exactly when their term maps are equal.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise DimensionError("ring dimension must be non-negative")
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        for mon, c in (terms or {}).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != nvars or any(e < 0 for e in mon):
                raise DimensionError(f"monomial {mon} does not fit a ring of dimension {nvars}")
            c = _coerce(c)
            if c:
                clean[mon] = clean.get(mon, 0) + c
                if not clean[mon]:
                    del clean[mon]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical and owned by the result
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = _coerce(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise DimensionError(f"variable index {i} out of range for {nvars} variables")
        return cls._raw(nvars, {tuple(int(j == i) for j in range(nvars)): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def coefficient(self, mon: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mon), Fraction(0))

    def min_degree(self) -> int:
        """Lowest total degree of a term (the order at the origin); -1 for zero."""
        return min((sum(m) for m in self._terms), default=-1)

    def support(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars:
            raise DimensionError(f"ring dimension mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = _coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw(self.nvars, {m: c * v for m, v in self._terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only scalar division; polynomial division lives in the groebner module
        c = _coerce(other)
        if not c:
            raise ZeroDivisionError("polynomial divided by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, mon: Sequence[int], c) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mon)): c * v for m, v in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------

    def diff(self, var: int) -> "Polynomial":
        if not 0 <= var < self.nvars:
            raise DimensionError(f"variable index {var} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[var]
            if e:
                out[m[:var] + (e - 1,) + m[var + 1:]] = c * e
        return Polynomial._raw(self.nvars, out)

    def subs(self, assignment: Sequence["Polynomial"], nvars: int | None = None) -> "Polynomial":
        """Compose with ``assignment``: variable i is replaced by assignment[i]."""
        if len(assignment) != self.nvars:
            raise DimensionError(
                f"assignment has {len(assignment)} entries, polynomial has {self.nvars} variables"
            )
        if nvars is None:
            polys = [a for a in assignment if isinstance(a, Polynomial)]
            if not polys:
                raise DimensionError("target ring dimension required for scalar assignments")
            nvars = polys[0].nvars
        assignment = [
            a if isinstance(a, Polynomial) else Polynomial.constant(nvars, a) for a in assignment
        ]
        for a in assignment:
            if a.nvars != nvars:
                raise DimensionError("assignment entries do not share the target ring dimension")
        powers: list[list[Polynomial]] = [[Polynomial.constant(nvars, 1)] for _ in assignment]

        def power(i, e):
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * assignment[i])
            return cache[e]

        out = Polynomial.zero(nvars)
        for m, c in self._terms.items():
            term = Polynomial.constant(nvars, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        point = [_coerce(v) for v in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def translate(self, point: Sequence) -> "Polynomial":
        """p(x + point): moves ``point`` to the origin."""
        n = self.nvars
        return self.subs(
            [Polynomial.variable(n, i) + _coerce(v) for i, v in enumerate(point)], n
        )

    def extend(self, nvars: int, positions: Sequence[int] | None = None) -> "Polynomial":
        """Embed into a larger ring, sending variable i to ``positions[i]``."""
        positions = list(range(self.nvars)) if positions is None else list(positions)
        out = {}
        for m, c in self._terms.items():
            new = [0] * nvars
            for i, e in enumerate(m):
                new[positions[i]] += e
            out[tuple(new)] = c
        return Polynomial._raw(nvars, out)

    def truncate(self, var: int, bound: int) -> "Polynomial":
        """Drop every term whose exponent in ``var`` is >= bound."""
        return Polynomial._raw(self.nvars, {m: c for m, c in self._terms.items() if m[var] < bound})

    def homogeneous_part(self, deg: int) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: c for m, c in self._terms.items() if sum(m) == deg})

    # -- printing ---------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        order = MonomialOrder("grevlex")
        pieces = []
        for m in sorted(self._terms, key=order.key, reverse=True):
            c = self._terms[m]
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_str()!r})"


class MonomialOrder:
    """Lexicographic or graded-reverse-lexicographic order.

    ``perm`` lists variable indices from most to least significant; the
    default is x0 > x1 > ... > x_{n-1}.
    """

    KINDS = ("lex", "grevlex")

    __slots__ = ("kind", "perm")

    def __init__(self, kind: str = "grevlex", perm: Sequence[int] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.perm = tuple(perm) if perm is not None else None

    def key(self, mon: Sequence[int]):
        e = mon if self.perm is None else tuple(mon[i] for i in self.perm)
        if self.kind == "lex":
            return tuple(e)
        return (sum(e), tuple(-x for x in reversed(e)))

    def leading_monomial(self, p: Polynomial) -> Monomial:
        if p.is_zero():
            raise ValueError("zero polynomial has no leading monomial")
        return max(p._terms, key=self.key)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.perm) == (other.kind, other.perm)

    def __hash__(self):
        return hash((self.kind, self.perm))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.perm!r})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def partial_derivative(p: Polynomial, var: int) -> Polynomial:
    return p.diff(var)


def substitute(p: Polynomial, assignment: Sequence, nvars: int) -> Polynomial:
    return p.subs(assignment, nvars)


MAX_MINOR_RANK = 4


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Cofactor expansion along the first row, memoized on column subsets."""
    k = len(matrix)
    if k == 0:
        raise ValueError("empty matrix")
    if any(len(row) != k for row in matrix):
        raise ValueError("matrix is not square")
    memo: dict[tuple[int, tuple[int, ...]], Polynomial] = {}

    def det(row: int, cols: tuple[int, ...]) -> Polynomial:
        if row == k - 1:
            return matrix[row][cols[0]]
        key = (row, cols)
        if key not in memo:
            total = None
            for pos, c in enumerate(cols):
                entry = matrix[row][c]
                if entry.is_zero():
                    continue
                sub = det(row + 1, cols[:pos] + cols[pos + 1:])
                term = entry * sub
                if pos % 2:
                    term = -term
                total = term if total is None else total + term
            memo[key] = total if total is not None else Polynomial.zero(matrix[0][0].nvars)
        return memo[key]

    return det(0, tuple(range(k)))


def jacobian_minor(fs: Sequence[Polynomial], index: Sequence[int]) -> Polynomial:
    """det[d f_i / d z_{index[r]}] for the rows ``fs`` and selected columns."""
    k = len(fs)
    index = tuple(index)
    if k == 0 or len(index) != k:
        raise DimensionError("minor needs as many column indices as functions")
    if k > MAX_MINOR_RANK:
        raise DimensionError(f"minors of rank above {MAX_MINOR_RANK} are not supported")
    n = fs[0].nvars
    if any(f.nvars != n for f in fs):
        raise DimensionError("functions live in different rings")
    if len(set(index)) != k or any(not 0 <= i < n for i in index):
        raise DimensionError(f"invalid multi-index {index}")
    if list(index) != sorted(index):
        raise DimensionError(f"multi-index {index} must be strictly increasing")
    return determinant([[f.diff(i) for i in index] for f in fs])


# -- text grammar ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text=text, position=pos)
        num, ident, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", num, start))
        elif ident is not None:
            tokens.append(("id", ident, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.n = len(names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, text=self.text, position=tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a non-negative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            if "/" in val and int(val.split("/")[1]) == 0:
                self.fail("zero denominator in a rational literal", tok)
            return Polynomial.constant(self.n, Fraction(val))
        if kind == "id":
            if val not in self.names:
                self.fail(f"undeclared variable {val!r}", tok)
            return Polynomial.variable(self.n, self.names[val])
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.fail("expected ')'", self.tokens[self.i - 1])
            return p
        self.fail(f"unexpected token {val!r}" if val else "unexpected end of input", tok)


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse ``text`` in the ring whose variables are ``names``.

    >>> parse_polynomial("y^2 - x^3", ["x", "y"]).to_str(["x", "y"])
    '-x^3 + y^2'
    """
    if not isinstance(text, str):
        if isinstance(text, int):
            return Polynomial.constant(len(names), text)
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}", text=str(text))
    return _Parser(text, names).parse()


def variables(nvars: int) -> list[Polynomial]:
    return [Polynomial.variable(nvars, i) for i in range(nvars)]


def ring(names: str | Iterable[str]) -> list[Polynomial]:
    """Generators of the ring on ``names`` ("x,y,z" or a list)."""
    if isinstance(names, str):
        names = [s.strip() for s in names.split(",") if s.strip()]
    names = list(names)
    return variables(len(names))
