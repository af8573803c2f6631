# -*- coding: utf-8 -*-
"""
Power sums n -> sum b_i * alpha_i^n with rational coefficients and roots.

Relative to a torsion-free group basis u_1..u_r, the power sum n -> u^(v n)
corresponds to the monomial X^v, which turns power sums into Laurent
polynomials and lets divisibility be decided symbolically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import FactoredRational, format_rational, parse_rational
from .factor_engine import default_factorizer
from .laurent import LaurentPoly, exact_divide
from .multgroup import GroupBasis, express, group_basis

logger = logging.getLogger(__name__)


class RootNotInGroupError(ValueError):
    """A root of the power sum is not an element of the group."""


class TorsionError(ValueError):
    """The root group contains -1; subsample along residues first."""


class ZeroPowerSumError(ValueError):
    """The operation needs a nonzero power sum."""


@dataclass(frozen=True)
class PowerSum:
    """Terms (coeff, root), roots distinct and ascending, coefficients nonzero."""
    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[Fraction, Fraction] = {}
        for b, alpha in self.terms:
            alpha = Fraction(alpha)
            if alpha == 0:
                raise ValueError("power sum roots must be nonzero")
            merged[alpha] = merged.get(alpha, Fraction(0)) + Fraction(b)
        object.__setattr__(
            self, "terms", tuple((merged[a], a) for a in sorted(merged) if merged[a] != 0)
        )

    @classmethod
    def of(cls, pairs: Iterable[tuple[Fraction | int, Fraction | int]]) -> "PowerSum":
        return cls(tuple(pairs))

    @classmethod
    def constant(cls, c: Fraction | int) -> "PowerSum":
        return cls(((Fraction(c), Fraction(1)),))

    def is_zero(self) -> bool:
        return not self.terms

    def roots(self) -> list[Fraction]:
        return [a for _, a in self.terms]

    def evaluate(self, n: int) -> Fraction:
        """Exact value at n; negative n is allowed."""
        return sum((b * alpha ** n for b, alpha in self.terms), Fraction(0))

    __call__ = evaluate

    def scale(self, c: Fraction | int) -> "PowerSum":
        return PowerSum(tuple((b * c, a) for b, a in self.terms))

    def __add__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(self.terms + other.terms)

    def __neg__(self) -> "PowerSum":
        return self.scale(-1)

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        return self + (-other)

    def __mul__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(tuple((b * c, a * e) for b, a in self.terms for c, e in other.terms))

    def to_json(self) -> dict:
        return {
            "terms": [{"coeff": format_rational(b), "root": format_rational(a)} for b, a in self.terms]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PowerSum":
        return cls(tuple((parse_rational(t["coeff"]), parse_rational(t["root"])) for t in data["terms"]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b, a in reversed(self.terms):
            root = f"({format_rational(a)})^n" if a != 1 else ""
            coeff = format_rational(b)
            if root and abs(b) == 1:
                coeff = "-" if b < 0 else ""
            elif root:
                coeff += "*"
            parts.append(f"{coeff}{root}")
        return " + ".join(parts).replace("+ -", "- ")


def eval_at(f: PowerSum, n: int) -> Fraction:
    return f.evaluate(n)


def _factored(q: Fraction) -> FactoredRational:
    return default_factorizer().factor_rational(q)


def to_laurent(f: PowerSum, B: GroupBasis) -> LaurentPoly:
    """F with F(u_1^n, ..., u_r^n) = f(n) for the basis u of B."""
    terms = []
    for b, alpha in f.terms:
        x = _factored(alpha)
        if x.sign < 0 and B.torsion_order == 2:
            raise TorsionError(f"root {format_rational(alpha)} needs the torsion element -1")
        v = express(x, B)
        if v is None:
            raise RootNotInGroupError(
                f"root {format_rational(alpha)} is not in the group generated by "
                f"{[format_rational(u.value()) for u in B.basis]}"
            )
        terms.append((tuple(v), b))
    return LaurentPoly(B.rank, tuple(terms))


def from_laurent(F: LaurentPoly, B: GroupBasis) -> PowerSum:
    """Inverse of to_laurent: X^v becomes the root prod u_i^v_i."""
    if F.dim != B.rank:
        raise ValueError(f"polynomial in {F.dim} variables for a basis of rank {B.rank}")
    basis = [u.value() for u in B.basis]
    return from_torus_point(F, basis)


def from_torus_point(F: LaurentPoly, g: Sequence[Fraction]) -> PowerSum:
    """n -> F(g^n) as a power sum with roots g^u."""
    g = [Fraction(x) for x in g]
    if len(g) != F.dim:
        raise ValueError(f"point of length {len(g)} for dimension {F.dim}")
    terms = []
    for u, c in F.terms:
        root = Fraction(1)
        for x, e in zip(g, u):
            root *= x ** e
        terms.append((c, root))
    return PowerSum(tuple(terms))


def subsample(f: PowerSum, q: int, r: int) -> PowerSum:
    """n -> f(q n + r)."""
    if q < 1:
        raise ValueError("q must be at least 1")
    return PowerSum(tuple((b * alpha ** r, alpha ** q) for b, alpha in f.terms))


def roots_group(f: PowerSum) -> GroupBasis:
    if f.is_zero():
        raise ZeroPowerSumError("roots_group of the zero power sum")
    return group_basis([_factored(a) for a in f.roots()])


def common_basis(*sums: PowerSum) -> GroupBasis:
    return group_basis([_factored(a) for f in sums for a in f.roots()])


def divide(f2: PowerSum, f1: PowerSum) -> PowerSum | None:
    """g with f2 = f1·g identically, or None when no power-sum quotient exists."""
    if f1.is_zero():
        raise ZeroPowerSumError("division by the zero power sum")
    B = common_basis(f1, f2)
    if B.torsion_order == 2:
        raise TorsionError("the combined root group contains -1; subsample along residues first")
    q = exact_divide(to_laurent(f2, B), to_laurent(f1, B))
    if q is None:
        logger.debug("no Laurent quotient for (%s) / (%s)", f2, f1)
        return None
    return from_laurent(q, B)


def is_reduced(f: PowerSum) -> bool:
    return any(a == 1 for a in f.roots())
