import random
import unittest
from fractions import Fraction

import pytest

from torusdiv.arith import PrimeSet, s_divides_values
from torusdiv.certificates import (
    _replay_ns,
    BbsCertificate,
    DiagnosticCode,
    Diagnostic,
    GeneCertificate,
    MorphismCertificate,
    bbs_conclusion,
    certify_gene,
    certify_morphism,
    erdos,
    residue_evidence,
)
from torusdiv.divisor import ProblemInstance, example_es, example_es2, example_es3, extend_s, scan_ideal_inclusion
from torusdiv.lattice import IntMatrix
from torusdiv.laurent import LaurentPoly, monomial_map, monomial_substitute, parse, split_contents, stabilizer
from torusdiv.powersum import PowerSum, from_torus_point


def instance(g1, F1, g2, F2, s_primes=()):
    g1 = tuple(Fraction(x) for x in g1)
    g2 = tuple(Fraction(x) for x in g2)
    return ProblemInstance(PrimeSet.of(s_primes), g1, parse(F1, len(g1)), g2, parse(F2, len(g2)))


def morphism_instance_1d(rng: random.Random) -> tuple[ProblemInstance, int]:
    x = LaurentPoly.variable(1, 0)
    nonzero = [v for v in range(-4, 5) if v]
    while True:
        g = rng.choice([2, 3, 5, 6, 7, 10])
        k = rng.choice([-3, -2, -1, 1, 2, 3])
        P = x ** 2 + rng.randint(-4, 4) * x + rng.choice(nonzero)
        F2 = P * (x + rng.choice(nonzero)) if rng.random() < 0.7 else P
        parts = split_contents(F2)
        if len(set(parts)) != len(parts) or not stabilizer(F2).is_trivial:
            continue
        F1 = monomial_substitute(P, IntMatrix.of([[k]]))
        inst = ProblemInstance(PrimeSet.of([]), (Fraction(g),), F1, (Fraction(g) ** k,), F2)
        return inst, k


def morphism_instance_2d(rng: random.Random) -> tuple[ProblemInstance, IntMatrix]:
    nonzero = [v for v in range(-5, 6) if v]
    while True:
        A = IntMatrix.of([[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)])
        if A.determinant() == 0:
            continue
        g1 = tuple(Fraction(p) for p in rng.choice([(2, 3), (2, 5), (3, 7)]))
        g2 = monomial_map(g1, A)
        F2 = LaurentPoly.from_mapping(2, {
            (0, 0): rng.choice(nonzero), (1, 0): rng.choice(nonzero), (0, 1): rng.choice(nonzero),
        })
        F1 = monomial_substitute(F2, A)
        return ProblemInstance(PrimeSet.of([]), g1, F1, g2, F2), A


class TestEvidence(unittest.TestCase):

    def test_residue_evidence(self):
        hits = [1] + list(range(2, 11, 2))
        self.assertEqual(residue_evidence(hits, 10, 2), {0: 1.0, 1: 0.2})
        self.assertEqual(residue_evidence([1, 2, 3], 3, 1), {0: 1.0})


class TestMorphism(unittest.TestCase):

    def test_es_needs_h_two(self):
        cert = certify_morphism(example_es())
        self.assertIsInstance(cert, MorphismCertificate)
        self.assertTrue(cert.verified)
        self.assertEqual(cert.A.to_lists(), [[1]])
        self.assertEqual((cert.h, cert.residue, cert.k), (2, 0, 2))
        self.assertEqual(cert.quotient.to_string(), "1")
        self.assertTrue(cert.etale)

    def test_es_with_evidence(self):
        cert = certify_morphism(example_es(), n_max=50)
        self.assertIsInstance(cert, MorphismCertificate)
        self.assertEqual(cert.residue, 0)

    def test_cube_map(self):
        cert = certify_morphism(instance([2], "X1 - 1", [8], "X1 - 1"))
        self.assertIsInstance(cert, MorphismCertificate)
        self.assertEqual(cert.A.to_lists(), [[3]])
        self.assertEqual(cert.h, 1)
        self.assertEqual(cert.quotient.to_string(), "X1^2 + X1 + 1")
        self.assertEqual(from_torus_point(cert.quotient, (Fraction(2),)), PowerSum.of([(1, 4), (1, 2), (1, 1)]))
        self.assertEqual(cert.quotient_values, "(4)^n + (2)^n + 1")

    def test_certificate_json(self):
        data = certify_morphism(instance([2], "X1 - 1", [8], "X1 - 1")).to_json()
        self.assertEqual(data["kind"], "morphism")
        self.assertEqual(data["A"], [["3"]])
        self.assertTrue(all(c["passed"] for c in data["verification"]))
        names = [c["name"] for c in data["verification"]]
        self.assertIn("F1 divides F2∘φ_A", names)
        self.assertIn("replay of F1(g1^n) | F2(g2^n) over the S-integers", names)

    def test_hypothesis_failures(self):
        for inst in (example_es2(), example_es3()):
            diag = certify_morphism(inst)
            self.assertIsInstance(diag, Diagnostic)
            self.assertEqual(diag.code, DiagnosticCode.HYPOTHESIS)

    def test_insufficient_evidence(self):
        diag = certify_morphism(instance([2], "X1 - 1", [3], "X1 - 1"), n_max=20)
        self.assertEqual(diag.code, DiagnosticCode.INSUFFICIENT_EVIDENCE)

    def test_no_symbolic_quotient(self):
        diag = certify_morphism(instance([2], "X1 - 1", [3], "X1 - 1"))
        self.assertEqual(diag.code, DiagnosticCode.NO_SYMBOLIC_QUOTIENT)
        self.assertEqual(diag.to_json()["code"], "NO_SYMBOLIC_QUOTIENT")

    def test_not_unimodular(self):
        diag = certify_morphism(instance([4], "X1 - 1", [2], "(X1^2 - 1)*(X1 + 2)"))
        self.assertEqual(diag.code, DiagnosticCode.NOT_UNIMODULAR)
        self.assertIn("det(M1) = 2", diag.detail)

    def test_random_one_dimensional(self):
        rng = random.Random(17)
        for _ in range(10):
            inst, k = morphism_instance_1d(rng)
            cert = certify_morphism(inst)
            self.assertIsInstance(cert, MorphismCertificate, msg=inst.to_json())
            self.assertTrue(cert.verified)
            self.assertEqual(cert.A.to_lists(), [[k]])

    def test_random_two_dimensional(self):
        rng = random.Random(23)
        for _ in range(10):
            inst, A = morphism_instance_2d(rng)
            cert = certify_morphism(inst)
            self.assertIsInstance(cert, MorphismCertificate, msg=inst.to_json())
            self.assertEqual(cert.A, A)
            self.assertEqual(cert.h, 1)

    @pytest.mark.slow
    def test_certificates_are_sound(self):
        rng = random.Random(101)
        for i in range(100):
            inst, _ = morphism_instance_1d(rng) if i % 2 else morphism_instance_2d(rng)
            cert = certify_morphism(inst)
            self.assertIsInstance(cert, MorphismCertificate, msg=inst.to_json())
            self.assertTrue(cert.verified)
            extended = extend_s(inst)
            f1, f2 = extended.f1(), extended.f2()
            for n in rng.sample(range(1, 201), 50):
                self.assertTrue(s_divides_values(f1(n), f2(n), extended.s_primes), msg=(inst.to_json(), n))


class TestReplay(unittest.TestCase):
    """The replay walks the arithmetic progression the certificate covers."""

    def test_residue_zero_starts_at_h(self):
        self.assertEqual(_replay_ns(0, 2, 4), [2, 4, 6, 8])
        self.assertEqual(_replay_ns(0, 1, 3), [1, 2, 3])

    def test_positive_residue_starts_at_residue(self):
        self.assertEqual(_replay_ns(1, 2, 4), [1, 3, 5, 7])

    def test_step_is_h_not_torsion_order(self):
        self.assertEqual(_replay_ns(1, 4, 3), [1, 5, 9])

    def test_odd_residue_certificate(self):
        """(2^n + 1) | ((-2)^n - 1) exactly for odd n."""
        inst = instance([2], "X1 + 1", [-2], "X1 - 1")
        hits = scan_ideal_inclusion(inst, 50)
        self.assertEqual(residue_evidence(hits, 50, 2), {0: 0.0, 1: 1.0})

        cert = certify_morphism(inst, n_max=50)
        self.assertIsInstance(cert, MorphismCertificate)
        self.assertTrue(cert.verified)
        self.assertEqual((cert.residue, cert.k, cert.h), (1, 2, 2))
        self.assertEqual(cert.A.to_lists(), [[1]])
        replay = next(c for c in cert.transcript if c.name.startswith("replay"))
        self.assertTrue(replay.passed)
        self.assertIn("checked n = 1..99", replay.detail)

    def test_even_residue_replay_skips_zero(self):
        cert = certify_morphism(example_es())
        replay = next(c for c in cert.transcript if c.name.startswith("replay"))
        self.assertIn("checked n = 2..100", replay.detail)


class TestGene(unittest.TestCase):

    def test_es2(self):
        cert = certify_gene(example_es2())
        self.assertIsInstance(cert, GeneCertificate)
        self.assertTrue(cert.verified)
        self.assertEqual(cert.r0, 1)
        self.assertEqual(cert.P.to_lists(), [[1]])
        self.assertEqual(cert.Q.to_lists(), [[1, 0]])
        self.assertEqual(cert.F0.to_string(), "X1 - 1")
        self.assertEqual(cert.h, 1)

    def test_es3(self):
        cert = certify_gene(example_es3())
        self.assertIsInstance(cert, GeneCertificate)
        self.assertEqual(cert.P.to_lists(), [[1]])
        self.assertEqual(cert.Q.to_lists(), [[2]])

    def test_es_torsion(self):
        cert = certify_gene(example_es(), n_max=40)
        self.assertIsInstance(cert, GeneCertificate)
        self.assertEqual((cert.h, cert.residue, cert.k), (2, 0, 2))
        self.assertEqual(cert.to_json()["kind"], "gene")

    def test_index_infinite(self):
        diag = certify_gene(instance([3], "X1 - 1", [2], "X1 - 1"))
        self.assertEqual(diag.code, DiagnosticCode.INDEX_INFINITE)


class TestBbs(unittest.TestCase):

    def test_product_of_coordinates(self):
        cert = bbs_conclusion(instance([2, 3], "X1*X2 - 1", [6], "X1 - 1"), 12)
        self.assertIsInstance(cert, BbsCertificate)
        self.assertEqual(cert.h, 1)
        self.assertEqual(cert.A.to_lists(), [[1, 1]])

    def test_sign_needs_square(self):
        cert = bbs_conclusion(instance([2, 3], "X1*X2 - 1", [-6], "X1 - 1"), 10, threshold=0.5)
        self.assertIsInstance(cert, BbsCertificate)
        self.assertEqual(cert.h, 2)
        self.assertEqual(cert.A.to_lists(), [[2, 2]])

    def test_power(self):
        cert = bbs_conclusion(instance([2], "X1 - 1", [4], "X1 - 1"), 20)
        self.assertEqual((cert.h, cert.A.to_lists()), (1, [[2]]))
        self.assertEqual(cert.to_json()["kind"], "bbs")

    def test_insufficient_evidence(self):
        diag = bbs_conclusion(instance([2], "X1 - 1", [5], "X1 - 1"), 6)
        self.assertEqual(diag.code, DiagnosticCode.INSUFFICIENT_EVIDENCE)

    def test_membership_fail(self):
        diag = bbs_conclusion(instance([2], "X1 - 1", [5], "X1 - 1"), 6, threshold=0.5)
        self.assertEqual(diag.code, DiagnosticCode.MEMBERSHIP_FAIL)

    def test_origin_required(self):
        diag = bbs_conclusion(instance([2], "X1 + 1", [4], "X1 - 1"), 10)
        self.assertEqual(diag.code, DiagnosticCode.HYPOTHESIS)
        self.assertIn("origin", diag.detail)


class TestErdos(unittest.TestCase):

    def test_power_pair(self):
        report = erdos(2, 4, 30)
        self.assertTrue(report.inclusion_holds)
        self.assertTrue(report.complete)
        self.assertEqual(report.k, 2)

    def test_violation(self):
        report = erdos(2, 3, 100)
        self.assertFalse(report.inclusion_holds)
        self.assertEqual((report.violation.n, report.violation.witness), (2, 3))
        self.assertEqual(report.to_json()["violation"], {"n": 2, "witness": 3})

    def test_equal_bases(self):
        self.assertEqual(erdos(8, 8, 10).k, 1)


if __name__ == "__main__":
    unittest.main(verbosity=2)
