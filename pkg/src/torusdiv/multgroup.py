# -*- coding: utf-8 -*-
"""
Finitely generated subgroups of Q*.

A group is described by the exponent vectors of its generators over the
primes that occur in them, plus one sign bit per generator. The torsion
of Q* is {1, -1}, so the torsion order of a subgroup is 1 or 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import FactoredRational, format_rational
from .lattice import IntMatrix, hnf, kernel_basis, rank, saturation_index, solve_integral


@dataclass(frozen=True)
class GroupBasis:
    """
    Canonical basis of <gens>.

    When torsion_order is 1 a basis element may be negative, e.g. <-2> is
    kept as {-2}. When torsion_order is 2 the basis is positive and the
    generated group is <basis> x {1, -1}.
    """
    basis: tuple[FactoredRational, ...]
    torsion_order: int
    prime_index: tuple[int, ...]

    def __post_init__(self) -> None:
        assert self.torsion_order in (1, 2)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return IntMatrix.of([exponent_vector(b, self.prime_index) for b in self.basis], len(self.prime_index))

    def signs(self) -> tuple[int, ...]:
        return tuple(b.sign for b in self.basis)

    def to_json(self) -> dict:
        return {
            "basis": [format_rational(b.value()) for b in self.basis],
            "torsion_order": self.torsion_order,
        }


def exponent_vector(x: FactoredRational, primes: Sequence[int]) -> Optional[list[int]]:
    """Exponents of x over `primes`, or None if x involves another prime."""
    exps = x.as_dict()
    if any(p not in primes for p in exps):
        return None
    return [exps.get(p, 0) for p in primes]


def _prime_index(items: Sequence[FactoredRational]) -> tuple[int, ...]:
    return tuple(sorted({p for x in items for p in x.primes}))


def _exponent_matrix(gens: Sequence[FactoredRational], primes: Sequence[int]) -> IntMatrix:
    return IntMatrix.of([exponent_vector(g, primes) for g in gens], len(primes))


def _parity(v: Sequence[int], gens: Sequence[FactoredRational]) -> int:
    return sum(c for c, g in zip(v, gens) if g.sign < 0) % 2


def _product(gens: Sequence[FactoredRational], v: Sequence[int]) -> FactoredRational:
    result = FactoredRational.one()
    for g, c in zip(gens, v):
        if c:
            result = result * g ** c
    return result


def _odd_kernel_vector(gens: Sequence[FactoredRational], M: IntMatrix) -> Optional[tuple[int, ...]]:
    for v in kernel_basis(M).rows:
        if _parity(v, gens):
            return v
    return None


def group_basis(gens: Sequence[FactoredRational]) -> GroupBasis:
    """Basis from the HNF of the exponent matrix, torsion from kernel sign parity."""
    gens = list(gens)
    primes = _prime_index(gens)
    if not gens:
        return GroupBasis((), 1, primes)
    M = _exponent_matrix(gens, primes)
    H, U = hnf(M)
    torsion = 2 if _odd_kernel_vector(gens, M) is not None else 1
    basis = []
    for row, u in zip(H.rows, U.rows):
        if not any(row):
            break
        element = _product(gens, u)
        basis.append(abs(element) if torsion == 2 else element)
    return GroupBasis(tuple(basis), torsion, primes)


def express(x: FactoredRational, B: GroupBasis) -> Optional[list[int]]:
    """
    Exponents v with |x| = prod |basis_i|^v_i and matching sign.

    With torsion_order 2 a negative x is accepted and the factor -1 is
    implied. With torsion_order 1 the sign must come out of the basis.
    """
    w = exponent_vector(x, B.prime_index)
    if w is None:
        return None
    v = solve_integral(B.matrix(), w)
    if v is None:
        return None
    if B.torsion_order == 1 and _product(B.basis, v).sign != x.sign:
        return None
    return v


def express_in_generators(x: FactoredRational, gens: Sequence[FactoredRational]) -> Optional[list[int]]:
    """Exponents v with x = prod gens_i^v_i exactly, for a possibly dependent list."""
    gens = list(gens)
    primes = _prime_index(gens)
    w = exponent_vector(x, primes)
    if w is None:
        return None
    if not gens:
        return [] if x == FactoredRational.one() else None
    M = _exponent_matrix(gens, primes)
    v = solve_integral(M, w)
    if v is None:
        return None
    if _product(gens, v).sign == x.sign:
        return v
    odd = _odd_kernel_vector(gens, M)
    if odd is None:
        return None
    return [a + b for a, b in zip(v, odd)]


def is_independent(gens: Sequence[FactoredRational]) -> bool:
    gens = list(gens)
    if not gens:
        return True
    primes = _prime_index(gens)
    return rank(_exponent_matrix(gens, primes)) == len(gens)


def power_index(gamma: FactoredRational, gens: Sequence[FactoredRational]) -> Optional[int]:
    """Minimal d >= 1 with gamma^d in <gens>, or None when no power lies in it."""
    gens = list(gens)
    primes = _prime_index(gens)
    w = exponent_vector(gamma, primes)
    if w is None:
        return None
    if not gens:
        return 1 if gamma.sign > 0 else 2
    d = saturation_index(_exponent_matrix(gens, primes), w)
    if d is None:
        return None
    if express(gamma ** d, group_basis(gens)) is None:
        d *= 2
    return d
