# -*- coding: utf-8 -*-
"""
Exact rationals in factored form and divisibility in rings of S-integers.

A rational q is an S-integer when its valuation is >= 0 at every prime
outside S, and an S-unit when that valuation is exactly 0. The archimedean
place is always implicit in S.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from sympy import Poly, Symbol, cyclotomic_poly, divisors, isprime


class NotSIntegerError(ValueError):
    """Raised when an input that must be an S-integer is not one."""


class RationalParseError(ValueError):
    """Raised when a rational literal such as "-3/4" cannot be parsed."""


_RATIONAL_PATTERN = re.compile(
    r"^\s*([+-]?\d+)"        # 1: signed numerator
    r"(?:\s*/\s*(\d+))?\s*$"  # 2: optional denominator
)


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse the "p/q" wire format (optional sign, optional denominator)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_PATTERN.match(str(text))
    if not match:
        raise RationalParseError(f"not a rational literal: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise RationalParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction | int) -> str:
    """Format a rational as "p/q", or "p" when it is an integer."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PrimeSet:
    """The finite set S of rational primes (strictly ascending)."""
    primes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        primes = tuple(int(p) for p in self.primes)
        for p in primes:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError(f"prime set must be strictly ascending: {primes}")
        object.__setattr__(self, "primes", primes)

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        """Build from any iterable, sorting and removing duplicates."""
        return cls(tuple(sorted(set(int(p) for p in primes))))

    def __contains__(self, p: object) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def union(self, other: Iterable[int]) -> "PrimeSet":
        return PrimeSet.of((*self.primes, *other))

    def to_json(self) -> list[int]:
        return list(self.primes)


@dataclass(frozen=True)
class FactoredRational:
    """A nonzero rational (-1)^s * prod p^e, with no zero exponents stored."""
    sign: int = 1
    exponents: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        merged: dict[int, int] = {}
        for p, e in self.exponents:
            merged[int(p)] = merged.get(int(p), 0) + int(e)
        cleaned = tuple(sorted((p, e) for p, e in merged.items() if e != 0))
        object.__setattr__(self, "exponents", cleaned)

    @classmethod
    def from_mapping(cls, sign: int, exponents: Mapping[int, int]) -> "FactoredRational":
        return cls(sign, tuple(exponents.items()))

    @classmethod
    def one(cls) -> "FactoredRational":
        return cls(1, ())

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def value(self) -> Fraction:
        """Reconstruct the exact rational."""
        num, den = 1, 1
        for p, e in self.exponents:
            if e > 0:
                num *= p ** e
            else:
                den *= p ** (-e)
        return Fraction(self.sign * num, den)

    def valuation(self, p: int) -> int:
        return self.as_dict().get(p, 0)

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        return FactoredRational(self.sign * other.sign, self.exponents + other.exponents)

    def inverse(self) -> "FactoredRational":
        return FactoredRational(self.sign, tuple((p, -e) for p, e in self.exponents))

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FactoredRational":
        sign = self.sign if k % 2 else 1
        return FactoredRational(sign, tuple((p, e * k) for p, e in self.exponents))

    def __abs__(self) -> "FactoredRational":
        return FactoredRational(1, self.exponents)

    def __str__(self) -> str:
        return format_rational(self.value())


def valuation(q: FactoredRational, p: int) -> int:
    """Exponent of the prime p in q (0 if absent)."""
    return q.valuation(p)


def is_s_integer(q: FactoredRational, S: PrimeSet) -> bool:
    return all(e >= 0 for p, e in q.exponents if p not in S)


def is_s_unit(q: FactoredRational, S: PrimeSet) -> bool:
    return all(p in S for p in q.primes)


def _require_s_integer(q: FactoredRational, S: PrimeSet, name: str) -> None:
    if not is_s_integer(q, S):
        raise NotSIntegerError(f"{name}={q} is not an S-integer for S={list(S)}")


def s_divides(a: FactoredRational, b: FactoredRational, S: PrimeSet) -> bool:
    """a | b in O_S, i.e. the ideal (a) contains (b)."""
    _require_s_integer(a, S, "a")
    _require_s_integer(b, S, "b")
    va, vb = a.as_dict(), b.as_dict()
    return all(vb.get(p, 0) >= e for p, e in va.items() if p not in S)


def s_support(q: FactoredRational, S: PrimeSet) -> frozenset[int]:
    """Primes outside S dividing q: the maximal ideals containing (q)."""
    _require_s_integer(q, S, "q")
    return frozenset(p for p, e in q.exponents if p not in S and e >= 1)


def strip_s_part(n: int, S: PrimeSet) -> int:
    """Remove every prime of S from the integer n (sign kept)."""
    for p in S:
        if n == 0:
            break
        while n % p == 0:
            n //= p
    return n


def is_s_integral_value(q: Fraction, S: PrimeSet) -> bool:
    """Whether a plain rational is an S-integer, without factoring."""
    return strip_s_part(q.denominator, S) == 1


def s_divides_values(a: Fraction, b: Fraction, S: PrimeSet) -> bool:
    """a | b in O_S for plain rationals. The zero ideal is contained in every ideal."""
    if not is_s_integral_value(a, S):
        raise NotSIntegerError(f"a={format_rational(a)} is not an S-integer")
    if not is_s_integral_value(b, S):
        raise NotSIntegerError(f"b={format_rational(b)} is not an S-integer")
    if b == 0:
        return True
    if a == 0:
        return False
    return is_s_integral_value(b / a, S)


@lru_cache(maxsize=512)
def _homogeneous_cyclotomic_coeffs(d: int) -> tuple[int, ...]:
    x = Symbol("x")
    return tuple(int(c) for c in Poly(cyclotomic_poly(d, x), x).all_coeffs())


def cyclotomic_parts(p: int, q: int, n: int) -> list[int]:
    """
    Split p^n - q^n into its homogenized cyclotomic values Phi_d(p, q), d | n.

    The parts multiply back to p^n - q^n exactly; each is usually far smaller
    than the whole, which keeps rho factoring inside its budget.
    """
    if n < 1:
        raise ValueError("n must be positive")
    parts = []
    for d in divisors(n):
        coeffs = _homogeneous_cyclotomic_coeffs(d)
        deg = len(coeffs) - 1
        parts.append(sum(c * p ** (deg - k) * q ** k for k, c in enumerate(coeffs)))
    return parts


def content_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
