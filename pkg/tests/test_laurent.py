# -*- coding: utf-8 -*-
import unittest
from fractions import Fraction

from torusdiv.lattice import IntMatrix
from torusdiv.laurent import (
    LaurentError,
    LaurentParseError,
    LaurentPoly,
    exact_divide,
    monomial_map,
    monomial_substitute,
    omit_variables,
    parse,
    reduce_at,
    split_contents,
    stabilizer,
)


class TestParse(unittest.TestCase):

    def test_round_trip_text(self):
        for text, dim in (("X1*X2 - 1", 2), ("X1^2 + 2*X1 + 1", 1), ("-X1 + 3/2", 1)):
            self.assertEqual(parse(text, dim).to_string(), text)

    def test_negative_exponents(self):
        F = parse("X1^-1 + 3/2", 1)
        self.assertEqual(F.as_dict(), {(-1,): Fraction(1), (0,): Fraction(3, 2)})
        self.assertEqual(F.to_string(), "3/2 + X1^-1")
        self.assertEqual(parse("X1^(-2)", 1).support(), [(-2,)])

    def test_grouping_and_powers(self):
        F = parse("(X1 - 1)^2 * (X2 + 1)", 2)
        G = parse("X1^2*X2 - 2*X1*X2 + X2 + X1^2 - 2*X1 + 1", 2)
        self.assertEqual(F, G)

    def test_errors_report_position(self):
        cases = [
            ("X3", 2, 0),
            ("  X3", 2, 2),
            ("X1 + X3", 2, 5),
            ("X1*X0", 2, 3),
            ("X1 + ", 1, 5),
            ("X1 $ 2", 1, 3),
            ("(X1 - 1)/X1", 1, 9),
            ("X1^X1", 1, 3),
            ("(X1 + 1", 1, 7),
        ]
        for text, dim, position in cases:
            with self.assertRaises(LaurentParseError, msg=text) as ctx:
                parse(text, dim)
            self.assertEqual(ctx.exception.position, position, msg=text)

    def test_negative_power_of_sum(self):
        with self.assertRaises(LaurentParseError):
            parse("(X1 + 1)^-1", 1)

    def test_dimension_required(self):
        with self.assertRaises(LaurentError):
            parse("1", 0)


class TestArithmetic(unittest.TestCase):

    def test_ring_operations(self):
        x = LaurentPoly.variable(1, 0)
        self.assertEqual((x - 1) * (x + 1), x ** 2 - 1)
        self.assertEqual(x ** -2, LaurentPoly.monomial((-2,)))
        self.assertEqual(2 - x, -(x - 2))
        self.assertTrue((x - x).is_zero())

    def test_dimension_mismatch(self):
        with self.assertRaises(LaurentError):
            LaurentPoly.variable(1, 0) + LaurentPoly.variable(2, 0)

    def test_evaluate(self):
        F = parse("X1*X2^-1 - 1", 2)
        self.assertEqual(F.evaluate([Fraction(3), Fraction(2)]), Fraction(1, 2))
        with self.assertRaises(LaurentError):
            F.evaluate([0, 1])

    def test_normal_forms(self):
        self.assertEqual(parse("-2*X1 + 4", 1).primitive_integer_form().to_string(), "X1 - 2")
        self.assertEqual(parse("X1^3 - X1^2", 1).normalized().to_string(), "X1 - 1")
        self.assertTrue(parse("X1 - 1", 1).is_associate(parse("-3*X1^-1 + 3*X1^-2", 1)))

    def test_json(self):
        F = parse("X1*X2^-1 - 1/3", 2)
        self.assertEqual(LaurentPoly.from_json(2, F.to_json()), F)


class TestDivision(unittest.TestCase):

    def test_exact_divide(self):
        self.assertEqual(exact_divide(parse("X1^2 - 1", 1), parse("X1 - 1", 1)), parse("X1 + 1", 1))
        self.assertIsNone(exact_divide(parse("X1^2 + 1", 1), parse("X1 - 1", 1)))

    def test_laurent_quotient(self):
        F = parse("X1^-1 - X1", 1)
        G = parse("X1 - 1", 1)
        Q = exact_divide(F, G)
        self.assertEqual(Q, parse("-1 - X1^-1", 1))
        self.assertEqual(Q * G, F)

    def test_monomials_are_units(self):
        F = parse("X1*X2 - 1", 2)
        Q = exact_divide(F, LaurentPoly.monomial((2, -1), 3))
        self.assertEqual(Q * LaurentPoly.monomial((2, -1), 3), F)

    def test_zero_divisor(self):
        with self.assertRaises(LaurentError):
            exact_divide(parse("X1", 1), LaurentPoly.zero(1))


class TestMonomialMaps(unittest.TestCase):

    def test_substitute(self):
        self.assertEqual(monomial_substitute(parse("X1 - 1", 1), IntMatrix.of([[3]])), parse("X1^3 - 1", 1))
        G = monomial_substitute(parse("X1 + X2", 2), IntMatrix.of([[1, 1], [0, -1]]))
        self.assertEqual(G, parse("X1*X2 + X2^-1", 2))

    def test_map_matches_substitute(self):
        F = parse("X1^2 - 3*X2 + 1", 2)
        A = IntMatrix.of([[1, 2], [-1, 1]])
        y = (Fraction(2), Fraction(3, 5))
        self.assertEqual(F.evaluate(monomial_map(y, A)), monomial_substitute(F, A).evaluate(y))
        self.assertEqual(monomial_map((Fraction(2), Fraction(3)), IntMatrix.of([[1, 1]])), (Fraction(6),))

    def test_reduce_at(self):
        F = parse("X1 + 2", 1)
        self.assertEqual(reduce_at(F, (0,)), F)
        self.assertEqual(reduce_at(F, (1,)), parse("1 + 2*X1^-1", 1))
        with self.assertRaises(LaurentError):
            reduce_at(F, (5,))


class TestStabilizer(unittest.TestCase):

    def test_finite_nontrivial(self):
        info = stabilizer(parse("X1^2 - 1", 1))
        self.assertEqual((info.dimension, info.invariant_factors), (0, (2,)))
        self.assertEqual(str(info), "(0, [2])")
        self.assertTrue(info.is_finite)
        self.assertFalse(info.is_trivial)

    def test_positive_dimension(self):
        self.assertEqual(stabilizer(parse("X1 - 1", 2)).dimension, 1)

    def test_trivial(self):
        self.assertTrue(stabilizer(parse("X1 + X2 + 1", 2)).is_trivial)

    def test_omit_variables(self):
        V, reduced = omit_variables(parse("X1*X2 - 1", 2))
        self.assertIn(V.determinant(), (1, -1))
        self.assertEqual(reduced.dim, 1)
        self.assertEqual(reduced.to_string(), "X1 - 1")
        self.assertIsNone(omit_variables(parse("X1 + X2 + 1", 2)))


class TestSplitContents(unittest.TestCase):

    def test_univariate_factorization(self):
        parts = split_contents(parse("X1^2 - 1", 1))
        self.assertEqual([p.to_string() for p in parts], ["X1 + 1", "X1 - 1"])

    def test_content_split(self):
        parts = split_contents(parse("(X1 - 1)*(X2 - 1)", 2))
        self.assertEqual([p.to_string() for p in parts], ["X1 - 1", "X2 - 1"])

    def test_monomial_has_no_components(self):
        self.assertEqual(split_contents(parse("3*X1^2", 1)), [])

    def test_irreducible_trinomial(self):
        parts = split_contents(parse("X1 + X2 + 1", 2))
        self.assertEqual([p.to_string() for p in parts], ["X1 + X2 + 1"])


if __name__ == "__main__":
    unittest.main(verbosity=2)
