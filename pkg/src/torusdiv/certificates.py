# -*- coding: utf-8 -*-
"""
Certificates for divisibility between F1(g1^n) and F2(g2^n).

Three constructions:

* certify_morphism: an étale monomial map φ_A with φ_A(g1^h) = g2^h and
  F1 dividing F2∘φ_A.
* certify_gene: a torus G0 with maps φ_P, φ_Q and an equation F0 such that
  φ_P(g1^h) = φ_Q(g2^h), F1 | F0∘φ_P and F0∘φ_Q | F2.
* bbs_conclusion / erdos: from support inclusions, an exponent h and a
  matrix A with g2^h = φ_A(g1).

Every certificate carries a transcript of checks replayed from scratch.
A construction that cannot finish returns a Diagnostic instead of raising.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from sympy import divisors

from .arith import FactoredRational, format_rational, s_divides_values
from .divisor import (
    MissingComponentsError,
    ProblemInstance,
    ScanError,
    SupportStep,
    erdos_instance,
    extend_s,
    first_support_violation,
    hypothesis_check,
    scan_ideal_inclusion,
    scan_support_inclusion,
    torsion_reduce,
    unity_points_scan,
)
from .factor_engine import default_factorizer
from .laurent import LaurentPoly, exact_divide, monomial_map, monomial_substitute, reduce_at
from .lattice import IntMatrix, rank
from .multgroup import GroupBasis, express, express_in_generators, group_basis, is_independent, power_index
from .powersum import from_torus_point, roots_group, subsample, to_laurent

logger = logging.getLogger(__name__)


class DiagnosticCode(str, Enum):
    HYPOTHESIS = "HYPOTHESIS"
    TORSION = "TORSION"
    NO_SYMBOLIC_QUOTIENT = "NO_SYMBOLIC_QUOTIENT"
    RANK_DEFECT = "RANK_DEFECT"
    NOT_UNIMODULAR = "NOT_UNIMODULAR"
    VERIFY_FAIL = "VERIFY_FAIL"
    INDEX_INFINITE = "INDEX_INFINITE"
    SOLVE_FAIL = "SOLVE_FAIL"
    MEMBERSHIP_FAIL = "MEMBERSHIP_FAIL"
    INSUFFICIENT_EVIDENCE = "INSUFFICIENT_EVIDENCE"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Diagnostic:
    code: DiagnosticCode
    stage: str
    detail: str
    residue: Optional[int] = None
    candidate: Optional[object] = None

    def to_json(self) -> dict:
        data = {
            "code": self.code.value,
            "stage": self.stage,
            "detail": self.detail,
            "residue": self.residue,
        }
        if self.candidate is not None:
            data["candidate"] = self.candidate.to_json()
        return data


def _transcript_json(checks: Sequence[Check]) -> list[dict]:
    return [c.to_json() for c in checks]


def _factored(x: Fraction) -> FactoredRational:
    return default_factorizer().factor_rational(x)


def _power(point: Sequence[Fraction], h: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) ** h for x in point)


def _fmt_point(point: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in point) + ")"


# -- evidence ------------------------------------------------------------

def residue_evidence(hits: Sequence[int], n_max: int, k: int) -> dict[int, float]:
    """Share of n in [1, n_max] with n = r mod k that are hits, per residue r."""
    hit_set = set(hits)
    shares = {}
    for r in range(k):
        ns = [n for n in range(1, n_max + 1) if n % k == r]
        shares[r] = sum(1 for n in ns if n in hit_set) / len(ns) if ns else 0.0
    return shares


def _evidence_gate(instance: ProblemInstance, n_max: int, threshold: float, k: int, threads: int):
    try:
        hits = scan_ideal_inclusion(instance, n_max, threads)
    except ScanError as exc:
        return None, Diagnostic(DiagnosticCode.INSUFFICIENT_EVIDENCE, "evidence", str(exc))
    shares = residue_evidence(hits, n_max, k)
    admitted = [r for r, share in shares.items() if share >= threshold]
    logger.info("evidence per residue mod %d: %s", k, shares)
    if not admitted:
        best = max(shares.values()) if shares else 0.0
        return None, Diagnostic(
            DiagnosticCode.INSUFFICIENT_EVIDENCE,
            "evidence",
            f"best residue share {best:.2f} below threshold {threshold:.2f} over n <= {n_max}",
        )
    return admitted, None


def _hypothesis_gate(instance: ProblemInstance) -> Optional[Diagnostic]:
    try:
        report = hypothesis_check(instance)
    except MissingComponentsError as exc:
        return Diagnostic(DiagnosticCode.HYPOTHESIS, "hypothesis", str(exc))
    if report.passed:
        return None
    detail = "; ".join(f"{c.name}: {c.detail}" for c in report.failures())
    return Diagnostic(DiagnosticCode.HYPOTHESIS, "hypothesis", detail)


def _replay_ns(residue: int, h: int, count: int) -> list[int]:
    """n = residue + h·m, the values the certificate speaks about (m >= 1 for residue 0)."""
    start = 1 if residue == 0 else 0
    return [residue + h * m for m in range(start, start + count)]


def _replay(instance: ProblemInstance, ns: Sequence[int]) -> Check:
    f1, f2, S = instance.f1(), instance.f2(), instance.s_primes
    bad = [n for n in ns if not s_divides_values(f1.evaluate(n), f2.evaluate(n), S)]
    return Check(
        "replay of F1(g1^n) | F2(g2^n) over the S-integers",
        not bad,
        f"checked n = {ns[0]}..{ns[-1]} ({len(ns)} values)" if not bad else f"fails at n = {bad[:5]}",
    )


# -- morphism ------------------------------------------------------------

@dataclass(frozen=True)
class MorphismCertificate:
    """φ_A: G1 -> G2 with φ_A(g1^h) = g2^h and F1 | F2∘φ_A (residue-shifted when residue > 0)."""
    A: IntMatrix
    h: int
    quotient: LaurentPoly
    residue: int
    k: int
    etale: bool
    transcript: tuple[Check, ...] = field(default_factory=tuple)
    quotient_values: str = ""

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.transcript)

    def to_json(self) -> dict:
        return {
            "kind": "morphism",
            "A": self.A.to_json(),
            "h": self.h,
            "quotient": self.quotient.to_string(),
            "quotient_terms": self.quotient.to_json(),
            "quotient_power_sum": self.quotient_values,
            "residue": self.residue,
            "torsion_order": self.k,
            "etale": self.etale,
            "verification": _transcript_json(self.transcript),
        }


def _express_rows(points: Sequence[Fraction], B: GroupBasis) -> Optional[IntMatrix]:
    rows = []
    for x in points:
        v = express(_factored(x), B)
        if v is None:
            return None
        rows.append(v)
    return IntMatrix.of(rows, B.rank)


def _morphism_for_residue(
    sub: ProblemInstance, original: ProblemInstance, k: int, r: int, replay_count: int
) -> MorphismCertificate | Diagnostic:
    B = group_basis([_factored(x) for x in sub.g1 + sub.g2])
    if B.torsion_order != 1:
        return Diagnostic(DiagnosticCode.TORSION, "basis", "-1 lies in the group of coordinates", r)
    M1 = _express_rows(sub.g1, B)
    M2 = _express_rows(sub.g2, B)
    if M1 is None or M2 is None:
        return Diagnostic(DiagnosticCode.VERIFY_FAIL, "basis", "coordinate not expressible in the basis", r)
    G1 = monomial_substitute(sub.F1, M1)
    G2 = monomial_substitute(sub.F2, M2)
    symbolic = exact_divide(G2, G1)
    if symbolic is None:
        return Diagnostic(
            DiagnosticCode.NO_SYMBOLIC_QUOTIENT,
            "divide",
            f"numeric-only evidence, no certificate: {G1} does not divide {G2} over basis "
            f"{[format_rational(u.value()) for u in B.basis]}",
            r,
        )
    r1, r2 = rank(M1), rank(M2)
    if not (r1 == sub.d1 == B.rank and r2 == sub.d2 == B.rank):
        return Diagnostic(
            DiagnosticCode.RANK_DEFECT,
            "rank",
            f"rank(M1)={r1}, rank(M2)={r2}, d1={sub.d1}, d2={sub.d2}, basis rank={B.rank}",
            r,
        )
    det1 = M1.determinant()
    if abs(det1) != 1:
        return Diagnostic(DiagnosticCode.NOT_UNIMODULAR, "unimodular", f"det(M1) = {det1}", r)
    A = M2 @ M1.inverse_unimodular()

    checks = [Check("hypotheses", True, "finite component stabilizers, trivial Stab(D2)")]
    quotient = exact_divide(monomial_substitute(sub.F2, A), sub.F1)
    checks.append(Check(
        "F1 divides F2∘φ_A",
        quotient is not None and quotient * sub.F1 == monomial_substitute(sub.F2, A),
        f"quotient {quotient}" if quotient is not None else "no Laurent quotient",
    ))
    h = next((h for h in range(1, k + 1)
              if monomial_map(_power(original.g1, h), A) == _power(original.g2, h)), None)
    checks.append(Check(
        "φ_A(g1^h) = g2^h",
        h is not None,
        f"h = {h}: {_fmt_point(monomial_map(_power(original.g1, h), A))}" if h else "no h <= k",
    ))
    det = A.determinant() if A.is_square() else 0
    etale = A.is_square() and det != 0
    checks.append(Check("M1 unimodular", True, f"det(M1) = {det1}"))
    checks.append(Check("étale", etale, f"det(A) = {det}"))
    if h is not None:
        checks.append(_replay(original, _replay_ns(r, h, replay_count)))
    if quotient is None or h is None or not all(c.passed for c in checks):
        candidate = MorphismCertificate(
            A, h or k, quotient or LaurentPoly.zero(sub.d1), r, k, etale, tuple(checks)
        )
        failed = ", ".join(c.name for c in checks if not c.passed)
        return Diagnostic(DiagnosticCode.VERIFY_FAIL, "verify", f"failed: {failed}", r, candidate)
    return MorphismCertificate(
        A, h, quotient, r, k, etale, tuple(checks), str(from_torus_point(quotient, sub.g1))
    )


def certify_morphism(
    instance: ProblemInstance,
    n_max: Optional[int] = None,
    threshold: float = 0.8,
    threads: int = 1,
    replay_count: int = 50,
) -> MorphismCertificate | Diagnostic:
    """
    Run the étale-morphism construction. When n_max is given, the ideal scan
    must reach `threshold` on some residue class before anything is built.
    """
    instance = extend_s(instance)
    diag = _hypothesis_gate(instance)
    if diag is not None:
        return diag
    reduction = torsion_reduce(instance)
    k = reduction.k
    residues = list(range(k))
    if n_max is not None:
        residues, diag = _evidence_gate(instance, n_max, threshold, k, threads)
        if diag is not None:
            return diag
    first: Optional[Diagnostic] = None
    for r in residues:
        result = _morphism_for_residue(reduction.residues[r], instance, k, r, replay_count)
        if isinstance(result, MorphismCertificate):
            logger.info("morphism certificate at residue %d: A=%s h=%d", r, result.A, result.h)
            return result
        logger.info("residue %d: %s %s", r, result.code.value, result.detail)
        first = first or result
    return first


# -- gene ----------------------------------------------------------------

@dataclass(frozen=True)
class GeneCertificate:
    """G0 = G_m^r0, φ_P: G1 -> G0, φ_Q: G2 -> G0 and E = {F0 = 0}."""
    r0: int
    P: IntMatrix
    Q: IntMatrix
    F0: LaurentPoly
    h: int
    q_lcm: int
    residue: int = 0
    k: int = 1
    transcript: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.transcript)

    def to_json(self) -> dict:
        return {
            "kind": "gene",
            "r0": self.r0,
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "F0": self.F0.to_string(),
            "F0_terms": self.F0.to_json(),
            "h": self.h,
            "q_lcm": self.q_lcm,
            "residue": self.residue,
            "torsion_order": self.k,
            "verification": _transcript_json(self.transcript),
        }


def _gene_checks(sub, F1r, F0, P, Q, delta, h) -> list[Check]:
    left = monomial_map(_power(sub.g1, h), P)
    right = monomial_map(_power(sub.g2, h), Q)
    pulled1 = monomial_substitute(F0, P)
    pulled2 = monomial_substitute(F0, Q)
    return [
        Check(
            "φ_P(g1^h) = φ_Q(g2^h)",
            left == right == tuple(delta),
            f"{_fmt_point(left)} vs {_fmt_point(right)}",
        ),
        Check("F1 divides F0∘φ_P", exact_divide(pulled1, F1r) is not None, f"F0∘φ_P = {pulled1}"),
        Check("F0∘φ_Q divides F2", exact_divide(sub.F2, pulled2) is not None, f"F0∘φ_Q = {pulled2}"),
    ]


def _gene_for_residue(sub: ProblemInstance, k: int, r: int) -> GeneCertificate | Diagnostic:
    F1r = reduce_at(sub.F1, sub.F1.smallest_exponent())
    f1 = from_torus_point(F1r, sub.g1)
    f2 = sub.f2()
    roots2 = [_factored(a) for a in f2.roots()]
    q = 1
    for gamma in f1.roots():
        d = power_index(_factored(gamma), roots2)
        if d is None:
            return Diagnostic(
                DiagnosticCode.INDEX_INFINITE,
                "index",
                f"no power of root {format_rational(gamma)} lies in the group of roots of f2",
                r,
            )
        q = lcm(q, d)
    gamma_basis = roots_group(f1)
    delta_basis = GroupBasis(
        tuple(u ** q for u in gamma_basis.basis), gamma_basis.torsion_order, gamma_basis.prime_index
    )
    delta = [u.value() for u in delta_basis.basis]
    r0 = delta_basis.rank
    if delta_basis.torsion_order != 1:
        return Diagnostic(DiagnosticCode.TORSION, "basis", "-1 lies in the group of roots of f1", r)
    F0 = to_laurent(subsample(f1, q, 0), delta_basis)

    g1f = [_factored(x) for x in sub.g1]
    g2f = [_factored(x) for x in sub.g2]
    E1, E2 = [], []
    for d in delta_basis.basis:
        e1 = express_in_generators(d, g1f)
        e2 = express_in_generators(d, g2f)
        if e1 is None or e2 is None:
            return Diagnostic(
                DiagnosticCode.SOLVE_FAIL,
                "solve",
                f"{d} not in the group of g{'1' if e1 is None else '2'}",
                r,
            )
        E1.append(e1)
        E2.append(e2)

    g = 0
    for row in E1 + E2:
        for x in row:
            g = gcd(g, x)
    candidate: Optional[GeneCertificate] = None
    for h in divisors(g or 1):
        P = IntMatrix.of([[x // h for x in row] for row in E1], sub.d1)
        Q = IntMatrix.of([[x // h for x in row] for row in E2], sub.d2)
        checks = [Check("reduced representative", True, f"F1 = {F1r}, q = {q}")]
        checks += _gene_checks(sub, F1r, F0, P, Q, delta, h)
        cert = GeneCertificate(r0, P, Q, F0, h * k, q, r, k, tuple(checks))
        if cert.verified:
            return cert
        candidate = candidate or cert
    failed = ", ".join(c.name for c in candidate.transcript if not c.passed)
    return Diagnostic(DiagnosticCode.VERIFY_FAIL, "verify", f"failed: {failed}", r, candidate)


def certify_gene(
    instance: ProblemInstance,
    n_max: Optional[int] = None,
    threshold: float = 0.8,
    threads: int = 1,
) -> GeneCertificate | Diagnostic:
    """
    Build (G0, φ_P, φ_Q, F0). The reported h is in the original
    coordinates: φ_P(g1^h) = φ_Q(g2^h).
    """
    instance = extend_s(instance)
    reduction = torsion_reduce(instance)
    k = reduction.k
    residues = list(range(k))
    if n_max is not None:
        residues, diag = _evidence_gate(instance, n_max, threshold, k, threads)
        if diag is not None:
            return diag
    first: Optional[Diagnostic] = None
    for r in residues:
        result = _gene_for_residue(reduction.residues[r], k, r)
        if isinstance(result, GeneCertificate):
            logger.info("gene certificate at residue %d: r0=%d h=%d", r, result.r0, result.h)
            return result
        first = first or result
    return first


# -- support problems ----------------------------------------------------

@dataclass(frozen=True)
class BbsCertificate:
    """g2_i^h = prod_j g1_j^A[i][j] for every i."""
    h: int
    A: IntMatrix
    transcript: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.transcript)

    def to_json(self) -> dict:
        return {
            "kind": "bbs",
            "h": self.h,
            "A": self.A.to_json(),
            "verification": _transcript_json(self.transcript),
        }


def _contains_subtorus_translate(F: LaurentPoly, cyclotomic_bound: int) -> Optional[str]:
    for M in range(1, cyclotomic_bound + 1):
        report = unity_points_scan(F, M, cyclotomic_bound)
        if report.family_flag:
            return f"order {M}: {', '.join(c.to_string() for c in report.family_components)}"
    return None


def bbs_conclusion(
    instance: ProblemInstance,
    n_max: int,
    threshold: float = 1.0,
    cyclotomic_bound: int = 12,
    threads: int = 1,
) -> BbsCertificate | Diagnostic:
    """h and A with g2^h = φ_A(g1), after support-inclusion evidence."""
    instance = extend_s(instance)
    try:
        hits = scan_support_inclusion(instance, n_max, threads)
    except ScanError as exc:
        return Diagnostic(DiagnosticCode.INSUFFICIENT_EVIDENCE, "evidence", str(exc))
    share = len(hits) / n_max
    if share < threshold:
        return Diagnostic(
            DiagnosticCode.INSUFFICIENT_EVIDENCE,
            "evidence",
            f"support inclusion at {len(hits)}/{n_max} values of n, threshold {threshold:.2f}",
        )
    g1f = [_factored(x) for x in instance.g1]
    problems = []
    if instance.F1.evaluate((1,) * instance.d1) != 0:
        problems.append("D1 does not contain the origin")
    if not is_independent(g1f):
        problems.append("coordinates of g1 are multiplicatively dependent")
    family = _contains_subtorus_translate(instance.F2, cyclotomic_bound)
    if family is not None:
        problems.append(f"D2 contains a translate of a subtorus through torsion points ({family})")
    if problems:
        return Diagnostic(DiagnosticCode.HYPOTHESIS, "hypothesis", "; ".join(problems))

    h = 1
    for y in instance.g2:
        d = power_index(_factored(y), g1f)
        if d is None:
            return Diagnostic(
                DiagnosticCode.MEMBERSHIP_FAIL,
                "membership",
                f"no power of {format_rational(y)} lies in <{', '.join(format_rational(x) for x in instance.g1)}>, "
                f"although support inclusion held at {len(hits)}/{n_max} values of n",
            )
        h = lcm(h, d)
    rows = []
    for y in instance.g2:
        v = express_in_generators(_factored(y) ** h, g1f)
        if v is None:
            return Diagnostic(DiagnosticCode.MEMBERSHIP_FAIL, "membership", f"{format_rational(y)}^{h} not expressible")
        rows.append(v)
    A = IntMatrix.of(rows, instance.d1)
    image = monomial_map(instance.g1, A)
    checks = (
        Check("support evidence", True, f"{len(hits)}/{n_max}"),
        Check("F1(1, ..., 1) = 0", True),
        Check("g2^h = φ_A(g1)", image == _power(instance.g2, h), _fmt_point(image)),
    )
    cert = BbsCertificate(h, A, checks)
    if not cert.verified:
        return Diagnostic(DiagnosticCode.VERIFY_FAIL, "verify", "g2^h differs from φ_A(g1)", None, cert)
    return cert


@dataclass(frozen=True)
class ErdosReport:
    x: int
    y: int
    n_max: int
    bound_reached: int
    violation: Optional[SupportStep] = None
    k: Optional[int] = None

    @property
    def inclusion_holds(self) -> bool:
        return self.violation is None

    @property
    def complete(self) -> bool:
        return self.bound_reached == self.n_max

    def to_json(self) -> dict:
        data = {
            "kind": "erdos",
            "x": self.x,
            "y": self.y,
            "n_max": self.n_max,
            "bound_reached": self.bound_reached,
            "inclusion_holds": self.inclusion_holds,
            "k": self.k,
        }
        if self.violation is not None:
            data["violation"] = {"n": self.violation.n, "witness": self.violation.witness}
        return data


def erdos(x: int, y: int, n_max: int) -> ErdosReport:
    """
    Support inclusion for x^n - 1 and y^n - 1 over Z up to n_max, then
    y = x^k when it held throughout. A factorization give-up ends the scan
    early and is recorded as the bound reached.
    """
    instance = erdos_instance(x, y, extend=False)
    violation, reached = first_support_violation(instance, n_max, extend=False)
    if violation is not None:
        logger.info("erdos(%d, %d): violation at n=%d witness %s", x, y, violation.n, violation.witness)
        return ErdosReport(x, y, n_max, reached, violation)
    v = express(_factored(Fraction(y)), group_basis([_factored(Fraction(x))]))
    k = v[0] if v is not None and len(v) == 1 else None
    return ErdosReport(x, y, n_max, reached, None, k)
