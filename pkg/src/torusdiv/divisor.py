# -*- coding: utf-8 -*-
"""
Divisibility of F1(g1^n) and F2(g2^n) over the S-integers.

A ProblemInstance holds the points g1, g2 on two tori, the equations F1,
F2 of their divisors and the prime set S. This module scans n for ideal
and support inclusions, reduces an instance modulo torsion, checks the
structural hypotheses, and searches the divisor for torsion points.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from math import gcd
from pathlib import Path
from typing import Callable, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import Poly, Symbol, cyclotomic_poly

from .arith import (
    FactoredRational,
    PrimeSet,
    cyclotomic_parts,
    format_rational,
    parse_rational,
    s_divides_values,
    strip_s_part,
)
from .factor_engine import FactorizationError, Factorizer, default_factorizer
from .laurent import LaurentPoly, parse, split_contents, stabilizer
from .multgroup import group_basis, is_independent
from .powersum import PowerSum, from_torus_point

logger = logging.getLogger(__name__)


class InstanceError(ValueError):
    """Inconsistent problem instance."""


class MissingComponentsError(InstanceError):
    """F is visibly reducible in several variables but no components were supplied."""


class CyclotomicBoundError(ValueError):
    """Requested root-of-unity order exceeds the configured bound."""


class ScanError(RuntimeError):
    """A scan step failed; `hits` holds the hits strictly before `n`."""

    def __init__(self, n: int, hits: list[int], cause: Exception) -> None:
        super().__init__(f"scan stopped at n={n}: {cause}")
        self.n = n
        self.hits = hits
        self.cause = cause


# -- instance ------------------------------------------------------------

class InstanceFile(BaseModel):
    """JSON schema of an instance file."""
    model_config = ConfigDict(extra="forbid")

    s_primes: list[int] = Field(default_factory=list)
    g1: list[str] = Field(min_length=1)
    g2: list[str] = Field(min_length=1)
    F1: str
    F2: str
    components1: Optional[list[str]] = None
    components2: Optional[list[str]] = None

    @field_validator("s_primes")
    @classmethod
    def _primes(cls, value: list[int]) -> list[int]:
        return list(PrimeSet.of(value))

    @field_validator("g1", "g2", mode="before")
    @classmethod
    def _coordinates(cls, value):
        if not isinstance(value, list):
            raise ValueError("expected a list of rationals")
        coords = [parse_rational(str(x)) for x in value]
        if any(x == 0 for x in coords):
            raise ValueError("coordinates must be nonzero")
        return [format_rational(x) for x in coords]


def _normalize_components(components, F: LaurentPoly, label: str):
    if components is None:
        return None
    comps = tuple(c.primitive_integer_form() for c in components)
    for c in comps:
        if c.dim != F.dim:
            raise InstanceError(f"{label} component {c} has dimension {c.dim}, expected {F.dim}")
        if c.is_constant() or c.is_monomial():
            raise InstanceError(f"{label} component {c} is a unit")
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            if a.is_associate(b):
                raise InstanceError(f"{label} components {a} and {b} are associate")
    prod = LaurentPoly.constant(F.dim, 1)
    for c in comps:
        prod = prod * c
    if not prod.is_associate(F):
        raise InstanceError(f"product of {label} components differs from {F}")
    return comps


@dataclass(frozen=True)
class ProblemInstance:
    """
    The record (S, g1, F1, g2, F2). F1 and F2 are kept in primitive integer
    form, which generates the ideal of the divisor over the S-integers.
    """
    s_primes: PrimeSet
    g1: tuple[Fraction, ...]
    F1: LaurentPoly
    g2: tuple[Fraction, ...]
    F2: LaurentPoly
    components1: Optional[tuple[LaurentPoly, ...]] = None
    components2: Optional[tuple[LaurentPoly, ...]] = None

    def __post_init__(self) -> None:
        g1 = tuple(Fraction(x) for x in self.g1)
        g2 = tuple(Fraction(x) for x in self.g2)
        for label, g, F in (("1", g1, self.F1), ("2", g2, self.F2)):
            if not g:
                raise InstanceError(f"g{label} is empty")
            if any(x == 0 for x in g):
                raise InstanceError(f"g{label} has a zero coordinate")
            if F.dim != len(g):
                raise InstanceError(f"F{label} has {F.dim} variables but g{label} has {len(g)} coordinates")
            if F.is_zero():
                raise InstanceError(f"F{label} is zero")
        object.__setattr__(self, "g1", g1)
        object.__setattr__(self, "g2", g2)
        object.__setattr__(self, "F1", self.F1.primitive_integer_form())
        object.__setattr__(self, "F2", self.F2.primitive_integer_form())
        object.__setattr__(self, "components1", _normalize_components(self.components1, self.F1, "F1"))
        object.__setattr__(self, "components2", _normalize_components(self.components2, self.F2, "F2"))

    @property
    def d1(self) -> int:
        return len(self.g1)

    @property
    def d2(self) -> int:
        return len(self.g2)

    def f1(self) -> PowerSum:
        """n -> F1(g1^n)."""
        return from_torus_point(self.F1, self.g1)

    def f2(self) -> PowerSum:
        return from_torus_point(self.F2, self.g2)

    def values_at(self, n: int) -> tuple[Fraction, Fraction]:
        return self.f1().evaluate(n), self.f2().evaluate(n)

    @classmethod
    def from_json(cls, data: dict) -> "ProblemInstance":
        record = InstanceFile.model_validate(data)
        g1 = tuple(parse_rational(x) for x in record.g1)
        g2 = tuple(parse_rational(x) for x in record.g2)
        comps1 = tuple(parse(c, len(g1)) for c in record.components1) if record.components1 is not None else None
        comps2 = tuple(parse(c, len(g2)) for c in record.components2) if record.components2 is not None else None
        return cls(
            PrimeSet.of(record.s_primes),
            g1,
            parse(record.F1, len(g1)),
            g2,
            parse(record.F2, len(g2)),
            comps1,
            comps2,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ProblemInstance":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_json(json.load(f))

    def to_json(self) -> dict:
        data = {
            "s_primes": self.s_primes.to_json(),
            "g1": [format_rational(x) for x in self.g1],
            "g2": [format_rational(x) for x in self.g2],
            "F1": self.F1.to_string(),
            "F2": self.F2.to_string(),
        }
        if self.components1 is not None:
            data["components1"] = [c.to_string() for c in self.components1]
        if self.components2 is not None:
            data["components2"] = [c.to_string() for c in self.components2]
        return data


def missing_primes(instance: ProblemInstance, factorizer: Optional[Factorizer] = None) -> list[int]:
    """Primes of the coordinates of g1, g2 that are not yet in S."""
    factorizer = factorizer or default_factorizer()
    found = set()
    for x in instance.g1 + instance.g2:
        found.update(factorizer.factor_rational(x).primes)
    return sorted(p for p in found if p not in instance.s_primes)


def extend_s(instance: ProblemInstance, factorizer: Optional[Factorizer] = None) -> ProblemInstance:
    """Smallest enlargement of S making every coordinate of g1, g2 an S-unit."""
    added = missing_primes(instance, factorizer)
    if not added:
        return instance
    logger.info("extending S by %s", added)
    return replace(instance, s_primes=instance.s_primes.union(added))


def is_s_extended(instance: ProblemInstance) -> bool:
    return not missing_primes(instance)


# -- scans ---------------------------------------------------------------

def _run_scan(step: Callable[[int], bool], n_max: int, threads: int) -> list[int]:
    """Evaluate step(1..n_max) and return the hits in ascending n."""
    hits: list[int] = []
    if threads <= 1:
        for n in range(1, n_max + 1):
            try:
                ok = step(n)
            except FactorizationError as exc:
                raise ScanError(n, hits, exc) from exc
            if ok:
                hits.append(n)
        return hits
    n = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        try:
            for n, ok in zip(range(1, n_max + 1), pool.map(step, range(1, n_max + 1))):
                if ok:
                    hits.append(n)
        except FactorizationError as exc:
            pool.shutdown(wait=False, cancel_futures=True)
            raise ScanError(n + 1, hits, exc) from exc
    return hits


def scan_ideal_inclusion(instance: ProblemInstance, n_max: int, threads: int = 1) -> list[int]:
    """n in [1, n_max] where F1(g1^n) divides F2(g2^n) in O_S."""
    instance = extend_s(instance)
    f1, f2, S = instance.f1(), instance.f2(), instance.s_primes

    def step(n: int) -> bool:
        return s_divides_values(f1.evaluate(n), f2.evaluate(n), S)

    hits = _run_scan(step, n_max, threads)
    logger.info("ideal scan: %d/%d hits", len(hits), n_max)
    return hits


@dataclass(frozen=True)
class SupportStep:
    n: int
    holds: bool
    witness: Optional[int] = None  # prime dividing F1(g1^n) but not F2(g2^n)


class _SupportChecker:
    def __init__(self, instance: ProblemInstance, factorizer: Optional[Factorizer], extend: bool = False) -> None:
        self.instance = extend_s(instance, factorizer) if extend else instance
        self.S = self.instance.s_primes
        self.f1 = self.instance.f1()
        self.f2 = self.instance.f2()
        self.factorizer = factorizer or default_factorizer()
        self.binomial = _binomial_shape(self.f1)

    def support_of_f1(self, n: int, a: Fraction) -> list[int]:
        a_num = strip_s_part(a.numerator, self.S)
        if abs(a_num) == 1:
            return []
        if self.binomial is None:
            return list(self.factorizer.factor(a_num).primes)
        c, P, Q = self.binomial
        parts = [strip_s_part(c.numerator, self.S)]
        parts += [strip_s_part(x, self.S) for x in cyclotomic_parts(P, Q, n)]
        found = self.factorizer.factor_parts(p for p in parts if p)
        return [p for p in found.primes if a_num % p == 0]

    def step(self, n: int) -> SupportStep:
        a, b = self.f1.evaluate(n), self.f2.evaluate(n)
        if b == 0:
            return SupportStep(n, True)
        if a == 0:
            return SupportStep(n, False)
        for p in self.support_of_f1(n, a):
            if p not in self.S and b.numerator % p:
                return SupportStep(n, False, p)
        return SupportStep(n, True)


def _binomial_shape(f: PowerSum) -> Optional[tuple[Fraction, int, int]]:
    """(c, P, Q) when f(n) = c·(P^n - Q^n)/D^n for integers P, Q and some D."""
    if len(f.terms) != 2:
        return None
    (b0, beta), (b1, alpha) = f.terms
    if b0 != -b1:
        return None
    den = alpha.denominator * beta.denominator
    return b1, int(alpha * den), int(beta * den)


def support_inclusion_at(
    instance: ProblemInstance, n: int, factorizer: Optional[Factorizer] = None, extend: bool = False
) -> SupportStep:
    """One step of the support scan, with a witness prime when it fails."""
    return _SupportChecker(instance, factorizer, extend).step(n)


def scan_support_inclusion(
    instance: ProblemInstance,
    n_max: int,
    threads: int = 1,
    factorizer: Optional[Factorizer] = None,
    extend: bool = False,
) -> list[int]:
    """
    n in [1, n_max] where Supp F1(g1^n) is contained in Supp F2(g2^n) outside S.

    S is taken as given, so x = 2, y = 3 with S empty fails at n = 2 on the
    prime 3. With extend=True the primes of g1, g2 are added to S first.
    """
    checker = _SupportChecker(instance, factorizer, extend)
    hits = _run_scan(lambda n: checker.step(n).holds, n_max, threads)
    logger.info("support scan: %d/%d hits", len(hits), n_max)
    return hits


def first_support_violation(
    instance: ProblemInstance,
    n_max: int,
    factorizer: Optional[Factorizer] = None,
    extend: bool = False,
) -> tuple[Optional[SupportStep], int]:
    """
    Walk n = 1..n_max and stop at the first failing step.

    Returns (failing step or None, last n fully decided). A factorization
    failure ends the walk early; it is logged, not raised. The supports are
    compared over S as given, e.g. over Z for S empty, unless extend=True.
    """
    checker = _SupportChecker(instance, factorizer, extend)
    for n in range(1, n_max + 1):
        try:
            result = checker.step(n)
        except FactorizationError as exc:
            logger.warning("factorization gave up at n=%d: %s", n, exc)
            return None, n - 1
        if not result.holds:
            return result, n
    return None, n_max


# -- torsion -------------------------------------------------------------

@dataclass(frozen=True)
class TorsionReduction:
    """Residue r instance at m corresponds to the original instance at n = k·m + r."""
    k: int
    residues: tuple[ProblemInstance, ...]


def _factored(x: Fraction) -> FactoredRational:
    return default_factorizer().factor_rational(x)


def torsion_order(instance: ProblemInstance) -> int:
    return group_basis([_factored(x) for x in instance.g1 + instance.g2]).torsion_order


def torsion_reduce(instance: ProblemInstance) -> TorsionReduction:
    """Replace g_i by g_i^k and F_i(X) by F_i(g_i^r X) for each residue r mod k."""
    k = torsion_order(instance)
    if k == 1:
        return TorsionReduction(1, (instance,))
    residues = []
    for r in range(k):
        s1 = tuple(x ** r for x in instance.g1)
        s2 = tuple(x ** r for x in instance.g2)
        residues.append(
            ProblemInstance(
                instance.s_primes,
                tuple(x ** k for x in instance.g1),
                instance.F1.scale_variables(s1),
                tuple(x ** k for x in instance.g2),
                instance.F2.scale_variables(s2),
                _scaled(instance.components1, s1),
                _scaled(instance.components2, s2),
            )
        )
    logger.debug("torsion order %d, %d residue instances", k, len(residues))
    return TorsionReduction(k, tuple(residues))


def _scaled(components, point):
    if components is None:
        return None
    return tuple(c.scale_variables(point) for c in components)


# -- hypotheses ----------------------------------------------------------

@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    checks: tuple[HypothesisCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[HypothesisCheck]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def components_of(F: LaurentPoly, supplied: Optional[Sequence[LaurentPoly]], label: str) -> list[LaurentPoly]:
    """
    Irreducible components of F = 0: the supplied ones, a factorization over
    Q in one variable, or F itself when no visible splitting exists.
    """
    if supplied is not None:
        return list(supplied)
    visible = split_contents(F)
    if F.dim == 1:
        unique: list[LaurentPoly] = []
        for c in visible:
            if c not in unique:
                unique.append(c)
        return unique
    if len(visible) > 1:
        raise MissingComponentsError(
            f"{label} = {F} splits as {' * '.join(f'({c})' for c in visible)}; "
            f"supply components{label[-1]}"
        )
    return [F.normalized()]


def _squarefree_check(F: LaurentPoly, label: str) -> Optional[HypothesisCheck]:
    if F.dim != 1:
        return None
    visible = split_contents(F)
    repeated = sorted({c.to_string() for c in visible if visible.count(c) > 1})
    return HypothesisCheck(
        f"{label} reduced",
        not repeated,
        f"repeated factors {repeated}" if repeated else "squarefree over Q",
    )


def hypothesis_check(instance: ProblemInstance) -> HypothesisReport:
    """
    Finite stabilizer for every component of D1 and D2, trivial stabilizer
    for D2, and Zariski-dense orbits of g1 and g2.

    The density check is stricter than "any g": a coordinate equal to 1 or
    -1, or multiplicatively dependent coordinates, fail it, since {g^n} is
    then finite or lies in a proper subtorus. F1 = F2 = X - 1 with g = 2
    passes; with g = 1 it fails on density alone.
    """
    checks: list[HypothesisCheck] = []
    for label, g in (("g1", instance.g1), ("g2", instance.g2)):
        dense = is_independent([_factored(x) for x in g])
        checks.append(HypothesisCheck(
            f"{label} generates a Zariski-dense subgroup",
            dense,
            "coordinates multiplicatively independent" if dense else "coordinates multiplicatively dependent",
        ))
    for label, F, supplied in (
        ("F1", instance.F1, instance.components1),
        ("F2", instance.F2, instance.components2),
    ):
        sq = _squarefree_check(F, label)
        if sq is not None:
            checks.append(sq)
        for c in components_of(F, supplied, label):
            info = stabilizer(c)
            checks.append(HypothesisCheck(
                f"{label} component {c} has finite stabilizer",
                info.is_finite,
                f"stabilizer {info}",
            ))
    info2 = stabilizer(instance.F2)
    checks.append(HypothesisCheck("D2 has trivial stabilizer", info2.is_trivial, f"stabilizer {info2}"))
    report = HypothesisReport(tuple(checks))
    logger.info("hypothesis check: %s", "pass" if report.passed else "fail")
    return report


# -- torsion points ------------------------------------------------------

@dataclass(frozen=True)
class UnityPointsReport:
    """
    Points of F = 0 whose coordinates are roots of unity of order dividing
    order_bound; a coordinate t stands for exp(2*pi*i*t).
    """
    order_bound: int
    points: tuple[tuple[Fraction, ...], ...]
    family_components: tuple[LaurentPoly, ...] = ()

    @property
    def family_flag(self) -> bool:
        return bool(self.family_components)

    def rational_points(self) -> list[tuple[int, ...]]:
        """Points with all coordinates in {1, -1}, as integers."""
        out = []
        for p in self.points:
            if all(t in (0, Fraction(1, 2)) for t in p):
                out.append(tuple(1 if t == 0 else -1 for t in p))
        return out

    def to_json(self) -> dict:
        return {
            "order_bound": self.order_bound,
            "points": [[format_rational(t) for t in p] for p in self.points],
            "family_flag": self.family_flag,
            "family_components": [c.to_string() for c in self.family_components],
        }


_Z = Symbol("z")


def _vanishes_at(F: LaurentPoly, js: Sequence[int], M: int, phi: Poly) -> bool:
    coeffs = [Fraction(0)] * M
    for u, c in F.terms:
        coeffs[sum(a * j for a, j in zip(u, js)) % M] += c
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    if not any(ints):
        return True
    return Poly(list(reversed(ints)), _Z).rem(phi).is_zero


def unity_points_scan(F: LaurentPoly, order_bound: int, cyclotomic_bound: int = 12) -> UnityPointsReport:
    """
    Torsion points of order dividing M on F = 0, found by reducing F at the
    M-th roots of unity modulo the cyclotomic polynomial.
    """
    M = order_bound
    if M < 1:
        raise ValueError("order bound must be at least 1")
    if M > cyclotomic_bound:
        raise CyclotomicBoundError(f"order bound {M} exceeds the cyclotomic bound {cyclotomic_bound}")
    if F.is_zero():
        raise ValueError("unity points of the zero polynomial")
    phi = Poly(cyclotomic_poly(M, _Z), _Z) if M > 1 else Poly(_Z - 1, _Z)
    points = []
    for js in product(range(M), repeat=F.dim):
        if _vanishes_at(F, js, M, phi):
            points.append(js)
    fractions = tuple(tuple(Fraction(j, M) for j in js) for js in points)
    family = []
    for c in _visible_components(F):
        if stabilizer(c).dimension > 0 and any(_vanishes_at(c, js, M, phi) for js in points):
            family.append(c)
    return UnityPointsReport(M, fractions, tuple(family))


def _visible_components(F: LaurentPoly) -> list[LaurentPoly]:
    comps = split_contents(F)
    unique: list[LaurentPoly] = []
    for c in comps or [F.normalized()]:
        if c not in unique:
            unique.append(c)
    return unique


# -- reference instances -------------------------------------------------

def example_es() -> ProblemInstance:
    """g1 = 2, g2 = -2, F1 = F2 = X - 1: equal ideals for even n, no morphism with h = 1."""
    return ProblemInstance(
        PrimeSet.of([2]), (Fraction(2),), parse("X1 - 1", 1), (Fraction(-2),), parse("X1 - 1", 1)
    )


def example_es2() -> ProblemInstance:
    """g1 = 2, g2 = (2, 3), F2 = (X1 - 1)(X2 - 1): components with positive-dimensional stabilizers."""
    return ProblemInstance(
        PrimeSet.of([]),
        (Fraction(2),),
        parse("X1 - 1", 1),
        (Fraction(2), Fraction(3)),
        parse("(X1 - 1)*(X2 - 1)", 2),
        None,
        (parse("X1 - 1", 2), parse("X2 - 1", 2)),
    )


def example_es3() -> ProblemInstance:
    """g1 = 4, g2 = 2, F1 = X - 1, F2 = X^2 - 1: stabilizer {1, -1} on D2."""
    return ProblemInstance(
        PrimeSet.of([]), (Fraction(4),), parse("X1 - 1", 1), (Fraction(2),), parse("X1^2 - 1", 1)
    )


def erdos_instance(x: int, y: int, extend: bool = True) -> ProblemInstance:
    """Support problem for x^n - 1 and y^n - 1, with S the primes of x and y (empty when extend is False)."""
    if x < 2 or y < 2:
        raise InstanceError("x and y must be at least 2")
    inst = ProblemInstance(
        PrimeSet.of([]), (Fraction(x),), parse("X1 - 1", 1), (Fraction(y),), parse("X1 - 1", 1)
    )
    return extend_s(inst) if extend else inst
