# -*- coding: utf-8 -*-
"""
Integer factorization engine.

Trial division by a cached prime table, then perfect-power detection and
Pollard rho (with p-1 and then ECM as further attempts) on what remains. A cofactor that
cannot be split within budget raises FactorizationError; there is no
probabilistic "probably done" answer.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Optional

from sympy import sieve
from sympy.ntheory import ecm, isprime, perfect_power, pollard_pm1, pollard_rho

from .arith import FactoredRational


class FactorizationError(RuntimeError):
    """Raised when a cofactor cannot be split within the configured budget."""

    def __init__(self, value: int, partial: FactoredRational, cofactor: int, reason: str) -> None:
        super().__init__(
            f"could not fully factor {value}: {reason}; "
            f"found {partial}, unfactored cofactor {cofactor}"
        )
        self.value = value
        self.partial = partial
        self.cofactor = cofactor
        self.reason = reason


@dataclass(frozen=True)
class FactorSettings:
    """Budgets for the factorization engine."""
    trial_limit: int = 10 ** 6
    bound: int = 2 ** 256  # largest cofactor handed to rho after trial division
    rho_retries: int = 5
    rho_max_steps: int = 2 * 10 ** 6
    pm1_bound: int = 10 ** 5
    ecm_curves: int = 200
    seed: int = 1234


@lru_cache(maxsize=None)
def _trial_primes(limit: int) -> tuple[int, ...]:
    return tuple(sieve.primerange(2, limit + 1))


class _Unsplittable(Exception):
    def __init__(self, cofactor: int, reason: str) -> None:
        super().__init__(reason)
        self.cofactor = cofactor
        self.reason = reason


def _ecm_divisor(c: int, settings: FactorSettings) -> Optional[int]:
    try:
        factors = ecm(c, max_curve=settings.ecm_curves, seed=settings.seed)
    except ValueError:
        return None
    proper = sorted(int(f) for f in factors if 1 < f < c)
    return proper[0] if proper else None


def _split_composite(c: int, settings: FactorSettings, found: dict[int, int], mult: int = 1) -> None:
    """Factor c > 1 (no prime below trial_limit divides it) into `found`."""
    if isprime(c):
        found[c] = found.get(c, 0) + mult
        return
    power = perfect_power(c)
    if power:
        base, e = power
        _split_composite(int(base), settings, found, mult * int(e))
        return
    if c > settings.bound:
        raise _Unsplittable(c, f"cofactor exceeds bound 2^{settings.bound.bit_length() - 1}")
    d = pollard_rho(
        c,
        retries=settings.rho_retries,
        seed=settings.seed,
        max_steps=settings.rho_max_steps,
    )
    if d is None or d in (1, c):
        d = pollard_pm1(c, B=settings.pm1_bound, seed=settings.seed)
    if d is None or d in (1, c):
        d = _ecm_divisor(c, settings)
    if d is None:
        raise _Unsplittable(c, "rho, p-1 and ecm exhausted their budget")
    d = int(d)
    _split_composite(d, settings, found, mult)
    _split_composite(c // d, settings, found, mult)


@lru_cache(maxsize=4096)
def _factor_positive(n: int, settings: FactorSettings) -> tuple[tuple[int, int], ...]:
    found: dict[int, int] = {}
    rest = n
    for p in _trial_primes(settings.trial_limit):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        if rest <= settings.trial_limit ** 2:
            found[rest] = found.get(rest, 0) + 1
        else:
            try:
                _split_composite(rest, settings, found)
            except _Unsplittable as exc:
                partial = FactoredRational(1, tuple(found.items()))
                raise FactorizationError(n, partial, exc.cofactor, exc.reason) from None
    return tuple(sorted(found.items()))


class Factorizer:
    """Trial division followed by Pollard rho, with explicit failure."""

    def __init__(
        self,
        settings: Optional[FactorSettings] = None,
        logger: Optional[Any] = None,
    ) -> None:
        self.settings = settings or FactorSettings()
        self._logger = logger
        self._lock = threading.Lock()
        self._initialized = False
        self._init_seconds: Optional[float] = None

    def initialize(self) -> float:
        """Build the trial-division prime table once and return elapsed seconds."""
        with self._lock:
            if self._initialized and self._init_seconds is not None:
                return self._init_seconds
            start = time.perf_counter()
            primes = _trial_primes(self.settings.trial_limit)
            self._initialized = True
            self._init_seconds = time.perf_counter() - start
        self._log_info(
            f"Factorizer initialized in {self._init_seconds:.3f}s ({len(primes)} trial primes)"
        )
        return self._init_seconds

    def factor(self, n: int) -> FactoredRational:
        """Factor a nonzero integer into sign and prime exponents."""
        if n == 0:
            raise ValueError("cannot factor zero")
        if not self._initialized:
            self.initialize()
        sign = -1 if n < 0 else 1
        start = time.perf_counter()
        try:
            exponents = _factor_positive(abs(n), self.settings)
        except FactorizationError as exc:
            self._log_warning(str(exc))
            raise
        elapsed = time.perf_counter() - start
        if elapsed > 1.0:
            self._log_info(f"factored a {abs(n).bit_length()}-bit integer in {elapsed:.2f}s")
        return FactoredRational(sign, exponents)

    def factor_rational(self, q: Fraction) -> FactoredRational:
        q = Fraction(q)
        if q == 0:
            raise ValueError("cannot factor zero")
        return self.factor(q.numerator) / self.factor(q.denominator)

    def factor_parts(self, parts: Iterable[int]) -> FactoredRational:
        """Factor a product that is handed over already split into parts."""
        result = FactoredRational.one()
        for part in parts:
            try:
                result = result * self.factor(part)
            except FactorizationError as exc:
                raise FactorizationError(
                    exc.value, result * exc.partial, exc.cofactor, exc.reason
                ) from None
        return result

    def _log_info(self, message: str) -> None:
        if self._logger is not None:
            try:
                self._logger.info(message)
            except Exception:
                pass

    def _log_warning(self, message: str) -> None:
        if self._logger is not None:
            try:
                self._logger.warning(message)
            except Exception:
                pass


_default: Optional[Factorizer] = None
_default_lock = threading.Lock()


def default_factorizer() -> Factorizer:
    global _default
    with _default_lock:
        if _default is None:
            _default = Factorizer()
        return _default


def configure_default(settings: FactorSettings, logger: Optional[Any] = None) -> Factorizer:
    """Replace the process-wide factorizer (used by the CLI for --seed)."""
    global _default
    with _default_lock:
        _default = Factorizer(settings, logger)
        return _default


def factor(n: int) -> FactoredRational:
    """Factor a nonzero integer with the process-wide factorizer."""
    return default_factorizer().factor(n)
