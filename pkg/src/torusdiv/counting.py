# -*- coding: utf-8 -*-
"""
Counting functions of zero sets that are finite unions of translated lattices in C.

A part is a single point, offset + Z·w (rank 1) or offset + Z·w1 + Z·w2. All
points are simple, so the truncated counting function N_1 coincides with N:

    N(r) = ord_0 · log r + sum_{0 < |z| <= r} log(r / |z|)

Parameters are held as mpmath numbers at a chosen decimal precision and
rounded to float64 only for enumeration. Row bounds are rounded outward by
one lattice step and every candidate is filtered by its modulus, so no
point inside the disc is missed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import mpmath
import numpy as np

from .arith import RationalParseError, parse_rational

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 30
DEFAULT_POINT_BUDGET = 10 ** 9
_CHUNK_POINTS = 1 << 21
_MEMBER_TOL = 1e-8


class PointBudgetError(RuntimeError):
    def __init__(self, estimate: float, budget: float) -> None:
        super().__init__(f"enumeration needs about {estimate:.3g} points, budget is {budget:.3g}")
        self.estimate = estimate
        self.budget = budget


class DegenerateGridError(ValueError):
    """Radius grid too small or too narrow for a growth fit."""


def _to_mpf(value) -> mpmath.mpf:
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, (int, Fraction)):
        q = Fraction(value)
        return mpmath.mpf(q.numerator) / q.denominator
    if isinstance(value, str):
        try:
            q = parse_rational(value)
        except RationalParseError:
            return mpmath.mpf(value.strip())
        return mpmath.mpf(q.numerator) / q.denominator
    return mpmath.mpf(value)


def to_mpc(value) -> mpmath.mpc:
    """Complex number from a (re, im) pair, a complex, or a real given in any exact or decimal form."""
    if isinstance(value, mpmath.mpc):
        return value
    if isinstance(value, (tuple, list)):
        re, im = value
        return mpmath.mpc(_to_mpf(re), _to_mpf(im))
    if isinstance(value, complex):
        return mpmath.mpc(value.real, value.imag)
    return mpmath.mpc(_to_mpf(value), 0)


@dataclass(frozen=True)
class LatticePart:
    offset: mpmath.mpc
    periods: tuple[mpmath.mpc, ...]

    def __post_init__(self) -> None:
        if len(self.periods) > 2:
            raise ValueError("a lattice part has at most two periods")
        if any(w == 0 for w in self.periods):
            raise ValueError("periods must be nonzero")
        if len(self.periods) == 2 and mpmath.im(mpmath.conj(self.periods[0]) * self.periods[1]) == 0:
            raise ValueError("periods of a rank-2 part must be linearly independent over R")

    @property
    def rank(self) -> int:
        return len(self.periods)

    def to_json(self, digits: int) -> dict:
        def pair(z):
            return [mpmath.nstr(mpmath.re(z), digits), mpmath.nstr(mpmath.im(z), digits)]

        return {"offset": pair(self.offset), "periods": [pair(w) for w in self.periods]}


@dataclass(frozen=True)
class LatticeZeroSet:
    """Union of lattice parts; a point on several parts is one simple zero."""
    parts: tuple[LatticePart, ...]
    precision: int = DEFAULT_PRECISION

    @classmethod
    def of(cls, parts: Iterable[tuple[object, Sequence[object]]], precision: int = DEFAULT_PRECISION) -> "LatticeZeroSet":
        with mpmath.workdps(precision):
            built = tuple(LatticePart(to_mpc(o), tuple(to_mpc(w) for w in ws)) for o, ws in parts)
        return cls(built, precision)

    @classmethod
    def from_json(cls, data: Mapping, precision: int = DEFAULT_PRECISION) -> "LatticeZeroSet":
        return cls.of(((p["offset"], p["periods"]) for p in data["parts"]), precision)

    def to_json(self) -> dict:
        with mpmath.workdps(self.precision):
            return {"parts": [p.to_json(self.precision) for p in self.parts]}

    def union(self, other: "LatticeZeroSet") -> "LatticeZeroSet":
        return LatticeZeroSet(self.parts + other.parts, max(self.precision, other.precision))

    def rotated(self, unit) -> "LatticeZeroSet":
        """Image under z -> unit·z."""
        with mpmath.workdps(self.precision):
            u = to_mpc(unit)
            parts = tuple(LatticePart(u * p.offset, tuple(u * w for w in p.periods)) for p in self.parts)
        return LatticeZeroSet(parts, self.precision)

    def contains_origin(self) -> bool:
        return bool(_on_any(np.zeros(1, dtype=complex), _float_parts(self))[0])


# -- builders ------------------------------------------------------------

def integer_lattice(precision: int = DEFAULT_PRECISION) -> LatticeZeroSet:
    return LatticeZeroSet.of([(0, [1])], precision)


def gaussian_lattice(precision: int = DEFAULT_PRECISION) -> LatticeZeroSet:
    return LatticeZeroSet.of([(0, [1, (0, 1)])], precision)


def ce_zero_sets(tau=("1/2", "1"), precision: int = DEFAULT_PRECISION) -> tuple[LatticeZeroSet, LatticeZeroSet]:
    """
    Pull-backs of the origin under C -> C/Z and C -> C/(Z + τZ): Z and Z + τZ.
    """
    with mpmath.workdps(precision):
        t = to_mpc(tau)
        if mpmath.im(t) == 0:
            raise ValueError("tau must have a nonzero imaginary part")
    return integer_lattice(precision), LatticeZeroSet((LatticePart(mpmath.mpc(0), (mpmath.mpc(1), t)),), precision)


def ctex_zero_sets(alpha=None, precision: int = DEFAULT_PRECISION) -> tuple[LatticeZeroSet, LatticeZeroSet]:
    """
    Zero sets for z -> ([z], exp(2πα z)) and z -> ([z], [α z]) with the
    coordinate divisors: Z[i] ∪ (i/α)Z and Z[i] ∪ (1/α)Z[i]. α defaults to √2.
    """
    with mpmath.workdps(precision):
        a = mpmath.sqrt(2) if alpha is None else _to_mpf(alpha)
        if a == 0:
            raise ValueError("alpha must be nonzero")
        first = LatticePart(mpmath.mpc(0), (mpmath.mpc(0, 1) / a,))
        second = LatticePart(mpmath.mpc(0), (mpmath.mpc(1) / a, mpmath.mpc(0, 1) / a))
    square = gaussian_lattice(precision)
    return (
        square.union(LatticeZeroSet((first,), precision)),
        square.union(LatticeZeroSet((second,), precision)),
    )


# -- enumeration ---------------------------------------------------------

@dataclass(frozen=True)
class _FloatPart:
    offset: complex
    periods: tuple[complex, ...]


def _float_parts(Z: LatticeZeroSet) -> list[_FloatPart]:
    return [_FloatPart(complex(p.offset), tuple(complex(w) for w in p.periods)) for p in Z.parts]


def _on_part(z: np.ndarray, part: _FloatPart) -> np.ndarray:
    d = z - part.offset
    if not part.periods:
        return np.abs(d) < _MEMBER_TOL
    if len(part.periods) == 1:
        w = part.periods[0]
        proj = np.conj(w) * d / (abs(w) ** 2)
        t = proj.real
        return (np.abs(proj.imag) < _MEMBER_TOL) & (np.abs(t - np.round(t)) < _MEMBER_TOL)
    w1, w2 = part.periods
    det = (np.conj(w2) * w1).imag
    x = (np.conj(w2) * d).imag / det
    y = (np.conj(w1) * d).imag / -det
    return (np.abs(x - np.round(x)) < _MEMBER_TOL) & (np.abs(y - np.round(y)) < _MEMBER_TOL)


def _on_any(z: np.ndarray, parts: Sequence[_FloatPart]) -> np.ndarray:
    mask = np.zeros(z.shape, dtype=bool)
    for part in parts:
        mask |= _on_part(z, part)
    return mask


def _estimate(part: _FloatPart, R: float) -> float:
    if not part.periods:
        return 1
    if len(part.periods) == 1:
        return 2 * (R + abs(part.offset)) / abs(part.periods[0]) + 3
    w1, w2 = part.periods
    area = abs((np.conj(w1) * w2).imag)
    reach = R + abs(w1) + abs(w2)
    return math.pi * reach * reach / area + 2 * reach / min(abs(w1), abs(w2)) + 3


def estimate_points(Z: LatticeZeroSet, R: float) -> float:
    return sum(_estimate(p, R) for p in _float_parts(Z))


def _rows(part: _FloatPart, R: float) -> tuple[np.ndarray, complex]:
    """Row offsets c and the row period w, each row being c + Z·w."""
    if len(part.periods) == 1:
        return np.array([part.offset], dtype=complex), part.periods[0]
    w1, w2 = part.periods
    det = (np.conj(w2) * w1).imag
    shift = (np.conj(w2) * part.offset).imag
    lo, hi = sorted(((-abs(w2) * R - shift) / det, (abs(w2) * R - shift) / det))
    a = np.arange(math.floor(lo) - 1, math.ceil(hi) + 2, dtype=np.float64)
    return part.offset + a * w1, w2


def _row_bounds(c: np.ndarray, w: complex, R: float) -> tuple[np.ndarray, np.ndarray]:
    A = abs(w) ** 2
    B = (np.conj(c) * w).real
    C = np.abs(c) ** 2 - R * R
    disc = B * B - A * C
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    lo = np.floor((-B - root) / A) - 1
    hi = np.ceil((-B + root) / A) + 1
    counts = np.where(ok, hi - lo + 1, 0).astype(np.int64)
    return lo.astype(np.int64), counts


def _iter_points(part: _FloatPart, R: float) -> Iterator[np.ndarray]:
    if not part.periods:
        if abs(part.offset) <= R:
            yield np.array([part.offset], dtype=complex)
        return
    rows, w = _rows(part, R)
    lo, counts = _row_bounds(rows, w, R)
    limit = R * R * (1 + 1e-12)
    start = 0
    while start < len(rows):
        stop = start
        total = 0
        while stop < len(rows) and (total == 0 or total + counts[stop] <= _CHUNK_POINTS):
            total += int(counts[stop])
            stop += 1
        c, l, n = rows[start:stop], lo[start:stop], counts[start:stop]
        start = stop
        if total == 0:
            continue
        first = np.repeat(np.cumsum(n) - n, n)
        b = np.repeat(l, n) + (np.arange(total) - first)
        z = np.repeat(c, n) + b * w
        yield z[(z.real ** 2 + z.imag ** 2) <= limit]


def _iter_zero_set(Z: LatticeZeroSet, R: float, budget: float) -> Iterator[np.ndarray]:
    estimate = estimate_points(Z, R)
    if estimate > budget:
        raise PointBudgetError(estimate, budget)
    parts = _float_parts(Z)
    for j, part in enumerate(parts):
        for z in _iter_points(part, R):
            if j:
                z = z[~_on_any(z, parts[:j])]
            yield z


def enumerate_points(Z: LatticeZeroSet, R: float, budget: float = DEFAULT_POINT_BUDGET) -> np.ndarray:
    """All points with |z| <= R, each once, as a complex array."""
    chunks = list(_iter_zero_set(Z, R, budget))
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=complex)


def unreduced_count(Z: LatticeZeroSet, t: float, budget: float = DEFAULT_POINT_BUDGET) -> int:
    """n(t): number of points with |z| <= t."""
    if t <= 0:
        raise ValueError("t must be positive")
    return sum(int(np.count_nonzero(np.abs(z) <= t)) for z in _iter_zero_set(Z, t, budget))


def counting_functions(
    Z: LatticeZeroSet, radii: Sequence[float], budget: float = DEFAULT_POINT_BUDGET
) -> list[float]:
    """N(r) for every r in `radii` from one enumeration pass up to max(radii)."""
    radii = [float(r) for r in radii]
    if not radii:
        return []
    if min(radii) <= 1:
        raise ValueError("radii must exceed 1")
    order = sorted(range(len(radii)), key=radii.__getitem__)
    grid = np.array([radii[i] for i in order])
    k = len(grid)
    count_parts: list[list[int]] = [[] for _ in range(k)]
    log_parts: list[list[float]] = [[] for _ in range(k)]
    for z in _iter_zero_set(Z, grid[-1], budget):
        m = np.abs(z)
        m = m[m > 0]
        idx = np.searchsorted(grid, m, side="left")
        counts = np.bincount(idx, minlength=k + 1)
        logs = np.bincount(idx, weights=np.log(m), minlength=k + 1)
        for i in range(k):
            if counts[i]:
                count_parts[i].append(int(counts[i]))
                log_parts[i].append(float(logs[i]))
    ord0 = 1 if Z.contains_origin() else 0
    values = [0.0] * k
    n = 0
    logs_so_far: list[float] = []
    for i, r in enumerate(grid):
        n += sum(count_parts[i])
        logs_so_far.extend(log_parts[i])
        log_r = math.log(r)
        values[i] = math.fsum([(ord0 + n) * log_r] + [-x for x in logs_so_far])
    result = [0.0] * k
    for pos, i in enumerate(order):
        result[i] = values[pos]
    logger.debug("counting functions at %d radii, max %.3g", k, grid[-1])
    return result


def counting_function(Z: LatticeZeroSet, r: float, budget: float = DEFAULT_POINT_BUDGET) -> float:
    if r <= 1:
        raise ValueError("r must exceed 1")
    return counting_functions(Z, [r], budget)[0]


# -- growth --------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """log N(r) ≈ exponent·log r + c; coefficient is N(r_max)/r_max^order."""
    exponent: float
    coefficient: float
    order: int
    radii: tuple[float, ...] = field(default=(), repr=False)
    values: tuple[float, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "order": self.order,
            "radii": list(self.radii),
            "values": list(self.values),
        }


def geometric_grid(r_min: float, r_max: float, count: int) -> list[float]:
    return [float(r) for r in np.geomspace(r_min, r_max, count)]


def growth_fit(Z: LatticeZeroSet, radii: Sequence[float], budget: float = DEFAULT_POINT_BUDGET) -> GrowthFit:
    radii = sorted(float(r) for r in radii)
    if len(radii) < 10:
        raise DegenerateGridError(f"need at least 10 radii, got {len(radii)}")
    if radii[0] <= 1 or radii[-1] < 100 * radii[0]:
        raise DegenerateGridError("radii must exceed 1 and span at least two decades")
    values = counting_functions(Z, radii, budget)
    if min(values) <= 0:
        raise DegenerateGridError("N(r) vanishes on part of the grid")
    slope, _ = np.polyfit(np.log(radii), np.log(values), 1)
    order = int(round(slope))
    coefficient = values[-1] / radii[-1] ** order
    logger.info("growth fit: exponent %.4f, coefficient %.6f over %.3g..%.3g", slope, coefficient, radii[0], radii[-1])
    return GrowthFit(float(slope), float(coefficient), order, tuple(radii), tuple(values))


def growth_comparable(fit1: GrowthFit, fit2: GrowthFit, tolerance: float = 0.1) -> bool:
    """Whether N_1 and N_2 grow with the same exponent within `tolerance`."""
    return abs(fit1.exponent - fit2.exponent) <= tolerance


def germ_contains(
    Z_big: LatticeZeroSet,
    Z_small: LatticeZeroSet,
    r0: float,
    r: float,
    budget: float = DEFAULT_POINT_BUDGET,
) -> bool:
    """Z_small ∩ {r0 < |z| <= r} ⊆ Z_big."""
    big = _float_parts(Z_big)
    for z in _iter_zero_set(Z_small, r, budget):
        z = z[np.abs(z) > r0]
        outside = ~_on_any(z, big)
        if outside.any():
            logger.debug("germ inclusion fails at %s", z[outside][0])
            return False
    return True


def fit_pair(
    pair: tuple[LatticeZeroSet, LatticeZeroSet], radii: Sequence[float], budget: float = DEFAULT_POINT_BUDGET
) -> tuple[GrowthFit, GrowthFit]:
    return growth_fit(pair[0], radii, budget), growth_fit(pair[1], radii, budget)
