# -*- coding: utf-8 -*-
"""
Laurent polynomials over Q in d variables X1..Xd.

Terms are kept in graded lexicographic order (total degree descending,
then exponent vectors descending), which fixes the text and JSON forms.
Exact division and content gcds are delegated to sympy's dense
multivariate polynomials after the monomial part has been stripped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence

from sympy import QQ, Poly, Rational, symbols
from sympy.polys.polyerrors import ExactQuotientFailed

from .arith import format_rational, parse_rational
from .lattice import IntMatrix, lattice_invariants, snf

Exponent = tuple[int, ...]


class LaurentError(ValueError):
    """Dimension mismatch, division by zero, or an exponent outside the support."""


class LaurentParseError(ValueError):
    """Syntax error in polynomial text; `position` is the 0-based column."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _order_key(u: Exponent) -> tuple:
    return (-sum(u), tuple(-x for x in u))


@dataclass(frozen=True)
class LaurentPoly:
    dim: int
    terms: tuple[tuple[Exponent, Fraction], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[Exponent, Fraction] = {}
        for u, c in self.terms:
            u = tuple(int(x) for x in u)
            if len(u) != self.dim:
                raise LaurentError(f"exponent {u} does not have length {self.dim}")
            merged[u] = merged.get(u, Fraction(0)) + Fraction(c)
        ordered = tuple(
            (u, merged[u]) for u in sorted(merged, key=_order_key) if merged[u] != 0
        )
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def from_mapping(cls, dim: int, terms: Mapping[Exponent, Fraction | int]) -> "LaurentPoly":
        return cls(dim, tuple(terms.items()))

    @classmethod
    def zero(cls, dim: int) -> "LaurentPoly":
        return cls(dim, ())

    @classmethod
    def constant(cls, dim: int, c: Fraction | int) -> "LaurentPoly":
        return cls(dim, (((0,) * dim, Fraction(c)),))

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Fraction | int = 1) -> "LaurentPoly":
        return cls(len(exps), ((tuple(exps), Fraction(c)),))

    @classmethod
    def variable(cls, dim: int, i: int) -> "LaurentPoly":
        """X_{i+1} (0-based index)."""
        return cls.monomial(tuple(int(j == i) for j in range(dim)))

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return self.is_zero() or (self.is_monomial() and not any(self.terms[0][0]))

    def support(self) -> list[Exponent]:
        return [u for u, _ in self.terms]

    def coefficient(self, u: Sequence[int]) -> Fraction:
        return dict(self.terms).get(tuple(u), Fraction(0))

    def as_dict(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.dim
        return tuple(min(u[i] for u, _ in self.terms) for i in range(self.dim))

    def leading_coefficient(self) -> Fraction:
        return self.terms[0][1] if self.terms else Fraction(0)

    def smallest_exponent(self) -> Exponent:
        """Last exponent in graded lexicographic order."""
        if not self.terms:
            raise LaurentError("zero polynomial has no support")
        return self.terms[-1][0]

    # -- arithmetic -------------------------------------------------------

    def _check_dim(self, other: "LaurentPoly") -> None:
        if self.dim != other.dim:
            raise LaurentError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check_dim(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(self.dim, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.dim, tuple((u, -c) for u, c in self.terms))

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.dim, tuple((u, c * other) for u, c in self.terms))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(
            self.dim,
            tuple(
                (tuple(a + b for a, b in zip(u, v)), c * e)
                for u, c in self.terms
                for v, e in other.terms
            ),
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise LaurentError("negative power of a polynomial that is not a monomial")
            (u, c), = self.terms
            return LaurentPoly.monomial(tuple(x * k for x in u), c ** k)
        result = LaurentPoly.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, u: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial X^u."""
        if len(u) != self.dim:
            raise LaurentError(f"shift {tuple(u)} does not have length {self.dim}")
        return LaurentPoly(self.dim, tuple((tuple(a + b for a, b in zip(v, u)), c) for v, c in self.terms))

    def scale_variables(self, point: Sequence[Fraction]) -> "LaurentPoly":
        """F(c1*X1, ..., cd*Xd)."""
        if len(point) != self.dim:
            raise LaurentError(f"point of length {len(point)} for dimension {self.dim}")
        return LaurentPoly(self.dim, tuple((u, c * _monomial_value(point, u)) for u, c in self.terms))

    def evaluate(self, point: Sequence[Fraction | int]) -> Fraction:
        if len(point) != self.dim:
            raise LaurentError(f"point of length {len(point)} for dimension {self.dim}")
        point = [Fraction(x) for x in point]
        if any(x == 0 for x in point):
            raise LaurentError("coordinates must be nonzero")
        return sum((c * _monomial_value(point, u) for u, c in self.terms), Fraction(0))

    # -- normal forms -----------------------------------------------------

    def primitive_integer_form(self) -> "LaurentPoly":
        """Scale to coprime integer coefficients with a positive leading one."""
        if not self.terms:
            return self
        den = reduce(lcm, (c.denominator for _, c in self.terms), 1)
        nums = [int(c * den) for _, c in self.terms]
        g = reduce(gcd, nums, 0)
        if nums[0] < 0:
            g = -g
        return LaurentPoly(self.dim, tuple((u, Fraction(n, g)) for (u, _), n in zip(self.terms, nums)))

    def polynomial_part(self) -> "LaurentPoly":
        """X^(-m)·F where m is the componentwise minimum exponent."""
        return self.shift(tuple(-x for x in self.min_exponents()))

    def normalized(self) -> "LaurentPoly":
        """Representative of the divisor: no monomial factor, primitive integer coefficients."""
        return self.polynomial_part().primitive_integer_form()

    def is_associate(self, other: "LaurentPoly") -> bool:
        """Equal up to a monomial and a nonzero constant."""
        self._check_dim(other)
        return self.normalized() == other.normalized()

    # -- text and JSON ----------------------------------------------------

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (u, c) in enumerate(self.terms):
            mono = "*".join(
                f"X{i + 1}" if e == 1 else f"X{i + 1}^{e}" for i, e in enumerate(u) if e
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if idx == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def to_json(self) -> list[dict]:
        return [{"exponents": list(u), "coeff": format_rational(c)} for u, c in self.terms]

    @classmethod
    def from_json(cls, dim: int, data: Iterable[Mapping]) -> "LaurentPoly":
        return cls(dim, tuple((tuple(t["exponents"]), parse_rational(t["coeff"])) for t in data))

    # -- lattices ---------------------------------------------------------

    def support_lattice(self) -> IntMatrix:
        """Rows u - u0 for the support differences against the leading exponent."""
        if not self.terms:
            raise LaurentError("zero polynomial has no support lattice")
        u0 = self.terms[0][0]
        rows = [tuple(a - b for a, b in zip(u, u0)) for u, _ in self.terms[1:]]
        return IntMatrix.of(rows, self.dim)


def _monomial_value(point: Sequence[Fraction], u: Exponent) -> Fraction:
    value = Fraction(1)
    for x, e in zip(point, u):
        if e:
            value *= Fraction(x) ** e
    return value


# -- parsing -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+)"              # unsigned integer
    r"|X(?P<var>\d+)"            # variable X<index>
    r"|(?P<op>[-+*/^()])"        # operator
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise LaurentParseError(f"unexpected character {text[col]!r}", text, col)
        kind = match.lastgroup
        start = match.end() - len(match.group(0).lstrip())
        tokens.append((kind, match.group(kind), start, text[start:match.end()]))
        pos = match.end()
    tokens.append(("end", "", len(text), "end of input"))
    return tokens


class _Parser:
    def __init__(self, text: str, dim: int) -> None:
        self.text = text
        self.dim = dim
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int, str]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int, str]:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def error(self, message: str, position: Optional[int] = None) -> LaurentParseError:
        return LaurentParseError(message, self.text, self.peek()[2] if position is None else position)

    def accept(self, op: str) -> bool:
        kind, value = self.peek()[:2]
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def parse(self) -> LaurentPoly:
        result = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[3]!r}")
        return result

    def expr(self) -> LaurentPoly:
        result = self.unary()
        while True:
            if self.accept("+"):
                result = result + self.unary()
            elif self.accept("-"):
                result = result - self.unary()
            else:
                return result

    def unary(self) -> LaurentPoly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.term()

    def term(self) -> LaurentPoly:
        result = self.power()
        while True:
            if self.accept("*"):
                result = result * self.power()
            elif self.accept("/"):
                position = self.peek()[2]
                divisor = self.power()
                if not divisor.is_constant() or divisor.is_zero():
                    raise self.error("division only by nonzero constants", position)
                result = result * (1 / divisor.leading_coefficient())
            else:
                return result

    def power(self) -> LaurentPoly:
        base = self.atom()
        if not self.accept("^"):
            return base
        position = self.peek()[2]
        sign = 1
        parens = self.accept("(")
        if self.accept("-"):
            sign = -1
        elif self.accept("+"):
            pass
        kind, value = self.take()[:2]
        if kind != "num":
            raise self.error("expected integer exponent", position)
        if parens and not self.accept(")"):
            raise self.error("expected ')'")
        try:
            return base ** (sign * int(value))
        except LaurentError as exc:
            raise self.error(str(exc), position) from None

    def atom(self) -> LaurentPoly:
        kind, value, position, shown = self.take()
        if kind == "num":
            return LaurentPoly.constant(self.dim, int(value))
        if kind == "var":
            index = int(value)
            if not 1 <= index <= self.dim:
                raise self.error(f"variable X{index} out of range for dimension {self.dim}", position)
            return LaurentPoly.variable(self.dim, index - 1)
        if kind == "op" and value == "(":
            inner = self.expr()
            if not self.accept(")"):
                raise self.error("expected ')'")
            return inner
        if kind == "end":
            raise self.error("unexpected end of input", position)
        raise self.error(f"unexpected {shown!r}", position)


def parse(text: str, dim: int) -> LaurentPoly:
    """Parse text such as "X1*X2 - 1" or "X1^-1 + 3/2" in `dim` variables."""
    if dim < 1:
        raise LaurentError("dimension must be at least 1")
    return _Parser(text, dim).parse()


def evaluate(F: LaurentPoly, point: Sequence[Fraction | int]) -> Fraction:
    return F.evaluate(point)


# -- sympy bridge --------------------------------------------------------

def _gens(dim: int):
    # X_d first so that division runs in the last variable over the others
    return tuple(reversed(symbols(f"X1:{dim + 1}")))


def _to_sympy(F: LaurentPoly) -> Poly:
    if any(x < 0 for x in F.min_exponents()):
        raise LaurentError("negative exponents in a polynomial conversion")
    data = {tuple(reversed(u)): Rational(c.numerator, c.denominator) for u, c in F.terms}
    return Poly.from_dict(data, *_gens(F.dim), domain=QQ)


def _from_sympy(p: Poly, dim: int) -> LaurentPoly:
    terms = []
    for monom, c in p.as_dict().items():
        c = Rational(c)
        terms.append((tuple(reversed(monom)), Fraction(int(c.p), int(c.q))))
    return LaurentPoly(dim, tuple(terms))


# -- operations ----------------------------------------------------------

def exact_divide(F: LaurentPoly, G: LaurentPoly) -> Optional[LaurentPoly]:
    """Q with F = G·Q in the Laurent ring, or None when G does not divide F."""
    if G.is_zero():
        raise LaurentError("division by the zero polynomial")
    F._check_dim(G)
    if F.is_zero():
        return LaurentPoly.zero(F.dim)
    if F.dim == 0:
        return LaurentPoly.constant(0, F.leading_coefficient() / G.leading_coefficient())
    a, b = F.min_exponents(), G.min_exponents()
    try:
        q = _to_sympy(F.polynomial_part()).exquo(_to_sympy(G.polynomial_part()))
    except ExactQuotientFailed:
        return None
    return _from_sympy(q, F.dim).shift(tuple(x - y for x, y in zip(a, b)))


def monomial_substitute(F: LaurentPoly, A: IntMatrix) -> LaurentPoly:
    """F∘φ_A, where φ_A(y)_i = prod_j y_j^A[i][j]; exponent u maps to u·A."""
    if A.nrows != F.dim:
        raise LaurentError(f"matrix has {A.nrows} rows, polynomial has {F.dim} variables")
    return LaurentPoly(A.ncols, tuple((A.row_times(u), c) for u, c in F.terms))


def monomial_map(point: Sequence[Fraction], A: IntMatrix) -> tuple[Fraction, ...]:
    """φ_A(y): coordinate i is prod_j y_j^A[i][j]."""
    if len(point) != A.ncols:
        raise LaurentError(f"point of length {len(point)} for a matrix with {A.ncols} columns")
    return tuple(_monomial_value([Fraction(y) for y in point], row) for row in A.rows)


def reduce_at(F: LaurentPoly, u0: Sequence[int]) -> LaurentPoly:
    """X^(-u0)·F, so that u0 becomes the constant term."""
    u0 = tuple(u0)
    if u0 not in F.as_dict():
        raise LaurentError(f"exponent {u0} is not in the support of {F}")
    return F.shift(tuple(-x for x in u0))


@dataclass(frozen=True)
class StabilizerInfo:
    dimension: int
    invariant_factors: tuple[int, ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.dimension == 0

    @property
    def is_trivial(self) -> bool:
        return self.dimension == 0 and not self.invariant_factors

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "invariant_factors": list(self.invariant_factors)}

    def __str__(self) -> str:
        return f"({self.dimension}, {list(self.invariant_factors)})"


def stabilizer(F: LaurentPoly) -> StabilizerInfo:
    """Stabilizer of F = 0 in the torus, read off Z^d / (support differences)."""
    if F.is_zero():
        raise LaurentError("stabilizer of the zero polynomial")
    r, factors = lattice_invariants(F.support_lattice())
    return StabilizerInfo(F.dim - r, tuple(factors))


def omit_variables(F: LaurentPoly) -> Optional[tuple[IntMatrix, LaurentPoly]]:
    """
    Unimodular V such that F∘φ_V depends only on the first r variables up
    to a monomial, and that polynomial in r variables; None when the
    stabilizer is finite.
    """
    if F.is_zero():
        raise LaurentError("omit_variables of the zero polynomial")
    L = F.support_lattice()
    _, _, V = snf(L)
    r, _ = lattice_invariants(L)
    if r == F.dim:
        return None
    G = monomial_substitute(F, V)
    cols = V.to_lists()
    for j in range(r):
        if all(u[j] <= 0 for u in G.support()):
            for row in cols:
                row[j] = -row[j]
    V = IntMatrix.of(cols, F.dim)
    G = monomial_substitute(F, V).polynomial_part()
    reduced = LaurentPoly(r, tuple((u[:r], c) for u, c in G.terms))
    return V, reduced


def split_contents(F: LaurentPoly) -> list[LaurentPoly]:
    """
    Visible factors of F, normalized. Univariate input is factored over Q;
    otherwise factors come only from content gcds with respect to each
    variable, which is not a full factorization.
    """
    if F.is_zero():
        raise LaurentError("split_contents of the zero polynomial")
    base = F.polynomial_part()
    if base.is_constant():
        return []
    p = _to_sympy(base)
    if F.dim == 1:
        _, factors = p.factor_list()
        pieces = [f for f, mult in factors for _ in range(mult)]
    else:
        pieces = _split_by_content(p)
    result = [_from_sympy(f, F.dim).normalized() for f in pieces if f.total_degree() > 0]
    return sorted(result, key=lambda g: g.to_string())


def _split_by_content(p: Poly) -> list[Poly]:
    for x in p.gens:
        if p.degree(x) <= 0:
            continue
        idx = p.gens.index(x)
        slices: dict[int, dict] = {}
        for monom, c in p.as_dict().items():
            stripped = monom[:idx] + (0,) + monom[idx + 1:]
            slices.setdefault(monom[idx], {})[stripped] = c
        coeffs = [Poly.from_dict(data, *p.gens, domain=p.domain) for data in slices.values()]
        content = reduce(lambda a, b: a.gcd(b), coeffs)
        if content.total_degree() > 0:
            return _split_by_content(content) + _split_by_content(p.exquo(content))
    return [p]
