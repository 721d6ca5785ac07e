from django.test import SimpleTestCase

from sympy import Matrix

from raag_stabilisers.exceptions import InputError, PreconditionError
from raag_stabilisers.graphs import Graph
from raag_stabilisers.lattice import enumerate_lattice
from raag_stabilisers.matrices import (
    StabMatrix, block_det, factor_unimodular, is_member, max_pattern_check, multiply_moves, pattern_of, sample,
    unimodular_inverse,
)

from .utils import path3, triangle


class PatternTest(SimpleTestCase):

    def setUp(self):
        self.lattice = enumerate_lattice(path3())
        self.order = self.lattice.build_total_order(['a', 'b', 'c'])
        self.pattern = pattern_of(self.lattice, self.order, path3().full)

    def test_pattern(self):
        self.assertEqual(self.pattern.names, ('a', 'c', 'b'))
        self.assertEqual(self.pattern.blocks, ((0, 1), (1, 2), (2, 3)))
        self.assertEqual(self.pattern.off_block, ((0, 2), (1, 2)))
        self.assertEqual(len(pattern_of(self.lattice, self.order, ['b'])), 1)

    def test_one_class_pattern(self):
        lattice = enumerate_lattice(triangle())
        pattern = pattern_of(lattice, lattice.build_total_order(), triangle().full)
        self.assertEqual(pattern.blocks, ((0, 3),))
        self.assertEqual(len(pattern.allowed), 9)

    def test_closed_set_required(self):
        with self.assertRaises(InputError):
            pattern_of(self.lattice, self.order, ['a', 'c'])

    def test_membership(self):
        self.assertTrue(is_member([[1, 0, 0], [0, 1, 0], [0, 0, 1]], self.pattern))
        self.assertTrue(is_member([[1, 0, 5], [0, -1, 2], [0, 0, 1]], self.pattern))
        self.assertFalse(is_member([[1, 1, 0], [0, 1, 0], [0, 0, 1]], self.pattern))
        self.assertFalse(is_member([[2, 0, 0], [0, 1, 0], [0, 0, 1]], self.pattern))
        with self.assertRaises(InputError):
            is_member([[1, 0], [0, 1]], self.pattern)
        with self.assertRaises(PreconditionError):
            self.pattern.matrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]])


class StabMatrixTest(SimpleTestCase):

    def setUp(self):
        self.lattice = enumerate_lattice(path3())
        self.order = self.lattice.build_total_order(['a', 'b', 'c'])
        self.pattern = pattern_of(self.lattice, self.order, path3().full)

    def matrix(self, rows):
        return self.pattern.matrix(rows)

    def test_product_and_inverse(self):
        product = self.matrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]]) * self.matrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
        self.assertEqual(product.rows, [[1, 0, 1], [0, 1, 1], [0, 0, 1]])
        first = self.matrix([[-1, 0, 3], [0, 1, -1], [0, 0, 1]])
        self.assertTrue((first * first.inverse()).is_identity())
        self.assertEqual(first.det(), -1)
        self.assertEqual(first[0, 2], 3)

    def test_different_patterns(self):
        other = pattern_of(self.lattice, self.order, ['a', 'b']).identity()
        with self.assertRaises(InputError):
            self.pattern.identity() * other

    def test_minor(self):
        first = self.matrix([[1, 0, 5], [0, -1, 2], [0, 0, 1]])
        self.assertEqual(first.minor(path3().full), first)
        self.assertEqual(first.minor(['b']).rows, [[1]])
        self.assertEqual(first.minor(['a', 'b']).rows, [[1, 5], [0, 1]])

    def test_embed(self):
        small = pattern_of(self.lattice, self.order, ['a', 'b']).matrix([[1, 5], [0, 1]])
        self.assertEqual(small.embed(path3().full).rows, [[1, 0, 5], [0, 1, 0], [0, 0, 1]])
        self.assertTrue(self.pattern.identity().embed(path3().full).is_identity())
        with self.assertRaises(InputError):
            self.pattern.identity().embed(['a', 'b'])

    def test_split_semidirect(self):
        unipotent, diagonal = self.matrix([[-1, 0, 3], [0, 1, 0], [0, 0, 1]]).split_semidirect()
        self.assertEqual(unipotent.rows, [[1, 0, 3], [0, 1, 0], [0, 0, 1]])
        self.assertEqual(diagonal.rows, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
        unipotent, diagonal = self.matrix([[1, 0, 3], [0, 1, 0], [0, 0, 1]]).split_semidirect()
        self.assertTrue(diagonal.is_identity())
        unipotent, diagonal = self.matrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]).split_semidirect()
        self.assertTrue(unipotent.is_identity())

    def test_semidirect_parts(self):
        identity = self.pattern.identity()
        self.assertEqual((identity.is_in_DY(), identity.is_in_UY()), (True, True))
        unipotent = self.matrix([[1, 0, 3], [0, 1, 0], [0, 0, 1]])
        self.assertEqual((unipotent.is_in_DY(), unipotent.is_in_UY()), (False, True))
        diagonal = self.matrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
        self.assertEqual((diagonal.is_in_DY(), diagonal.is_in_UY()), (True, False))

    def test_max_pattern_check(self):
        self.assertTrue(max_pattern_check([[1, 0, 0], [0, 1, 0], [0, 0, 1]], self.lattice, self.order))
        self.assertTrue(max_pattern_check([[1, 0, 4], [0, 1, 0], [0, 0, 1]], self.lattice, self.order))
        self.assertFalse(max_pattern_check([[1, 0, 0], [0, 1, 0], [1, 0, 1]], self.lattice, self.order))

    def test_sample(self):
        first = sample(self.pattern, 5, seed=11)
        self.assertEqual(first, sample(self.pattern, 5, seed=11))
        self.assertTrue(is_member(first.entries, self.pattern))
        self.assertTrue(sample(self.pattern, 0, seed=11).is_identity())
        with self.assertRaises(InputError):
            sample(self.pattern, -1)

    def test_as_dict(self):
        self.assertEqual(
            self.pattern.as_dict(),
            {
                'closed_set': ['a', 'c', 'b'],
                'blocks': [['a'], ['c'], ['b']],
                'allowed_off_block': [['a', 'b'], ['c', 'b']],
            },
        )


class UnimodularTest(SimpleTestCase):

    def test_factor(self):
        cases = [
            [[0, 1], [1, 0]],
            [[2, 1], [1, 1]],
            [[0, -1], [1, 0]],
            [[1, 0, 0], [3, 1, 0], [0, 0, 1]],
            [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            [[-1]],
        ]
        for rows in cases:
            moves = factor_unimodular(rows)
            self.assertEqual([list(row) for row in multiply_moves(len(rows), moves)], rows)

    def test_not_unimodular(self):
        with self.assertRaises(PreconditionError):
            factor_unimodular([[2, 0], [0, 1]])

    def test_stab_matrix_checks_integers(self):
        lattice = enumerate_lattice(triangle())
        pattern = pattern_of(lattice, lattice.build_total_order(), triangle().full)
        with self.assertRaises(InputError):
            StabMatrix(pattern, [[1, 0, 0], [0, 1, 0], [0, 0, 0.5]])


class ClosureTest(SimpleTestCase):
    """Products, inverses and minors of members are built without the membership test."""

    def setUp(self):
        self.graph = Graph.from_edges(
            ['a', 'b', 'c', 'd', 'e'], [('a', 'b'), ('b', 'c'), ('a', 'c'), ('c', 'd'), ('d', 'e')],
        )
        self.lattice = enumerate_lattice(self.graph)
        self.order = self.lattice.build_total_order()

    def test_inverse_matches_rational_inverse(self):
        for closed in self.lattice.closed_sets:
            pattern = pattern_of(self.lattice, self.order, closed)
            for seed in range(5):
                matrix = sample(pattern, 3, seed=seed)
                inverse = matrix.inverse()
                self.assertEqual(inverse.rows, Matrix(matrix.rows).inv().tolist() if matrix.rows else [])
                self.assertTrue(is_member(inverse.entries, pattern))
                self.assertTrue((inverse * matrix).is_identity())
                self.assertEqual(matrix.det(), Matrix(matrix.rows).det() if matrix.rows else 1)

    def test_minor_and_embed_are_members(self):
        whole = pattern_of(self.lattice, self.order, self.graph.full)
        matrix = sample(whole, 4, seed=3)
        for closed in self.lattice.closed_sets:
            minor = matrix.minor(closed)
            self.assertTrue(is_member(minor.entries, minor.pattern))
            self.assertTrue(is_member(minor.embed(self.graph.full).entries, whole))

    def test_patterns_are_cached(self):
        self.assertIs(
            pattern_of(self.lattice, self.order, ['a', 'b', 'c']),
            pattern_of(self.lattice, self.order, ['c', 'b', 'a']),
        )

    def test_block_helpers(self):
        self.assertEqual(block_det(((2, 1), (1, 1))), 1)
        self.assertEqual(block_det(((-1,),)), -1)
        self.assertEqual(unimodular_inverse(((2, 1), (1, 1))), ((1, -1), (-1, 2)))
        with self.assertRaises(PreconditionError):
            unimodular_inverse(((2, 0), (0, 1)))

    def test_entries_are_ints(self):
        matrix = sample(pattern_of(self.lattice, self.order, self.graph.full), 2, seed=1)
        self.assertTrue(all(type(entry) is int for row in matrix.entries for entry in row))
        self.assertEqual(matrix[0, 0], matrix.entries[0][0])
        with self.assertRaises(InputError):
            is_member([[True]], pattern_of(self.lattice, self.order, ['c']))
