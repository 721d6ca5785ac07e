from django.test import SimpleTestCase

from raag_stabilisers.exceptions import InputError, PreconditionError
from raag_stabilisers.words import PartiallyCommutativeGroup, parse_literal

from .utils import names, path3, triangle


class NormalFormTest(SimpleTestCase):

    def setUp(self):
        self.group = PartiallyCommutativeGroup(path3())

    def word(self, literal):
        return self.group.word(literal)

    def test_normalize(self):
        self.assertEqual(str(self.word('a b a^-1')), 'b')
        self.assertEqual(str(self.word('a c')), 'a c')
        self.assertEqual(str(self.word('c a')), 'c a')
        self.assertEqual(str(self.word('c b')), 'b c')
        self.assertEqual(str(self.word('a a a')), 'a^3')

    def test_from_exponents(self):
        self.assertEqual(self.group.from_exponents({'b': -1, 'a': 2}), self.word('a^2 b^-1'))
        self.assertEqual(str(self.group.from_exponents({2: 1, 0: 1, 1: 0})), 'a c')
        self.assertTrue(self.group.from_exponents({'a': 0}).is_identity)
        with self.assertRaises(InputError):
            self.group.from_exponents({'z': 1})

    def test_ranking_decides_representative(self):
        group = PartiallyCommutativeGroup(path3(), ['a', 'c', 'b'])
        self.assertEqual(str(group.word('b a')), 'a b')
        self.assertEqual(str(group.word('b c')), 'c b')
        self.assertEqual(group.word('b c'), group.word('c b'))

    def test_equal_traces_are_equal(self):
        self.assertEqual(self.word('a b c b^-1'), self.word('a c'))
        self.assertNotEqual(self.word('a c'), self.word('c a'))

    def test_products(self):
        self.assertEqual(self.word('a c') * self.group.identity, self.word('a c'))
        self.assertEqual(str(self.word('a c') * self.word('c^-1')), 'a')
        self.assertEqual(str(self.word('a c').inverse()), 'c^-1 a^-1')
        self.assertEqual(str(self.word('a c') ** 2), 'a c a c')
        self.assertEqual(self.word('a c') ** -1, self.word('a c').inverse())
        self.assertTrue((self.word('a c') ** 0).is_identity)
        self.assertEqual(str(self.word('c').conjugate(self.word('a'))), 'a^-1 c a')

    def test_length_and_support(self):
        self.assertEqual(len(self.group.identity), 0)
        self.assertEqual(self.group.identity.alpha, self.group.graph.vertex_set([]))
        self.assertEqual(self.word('a b c').length, 3)
        self.assertEqual(names(self.group.graph, self.word('a b c').alpha), {'a', 'b', 'c'})
        self.assertEqual(self.word('a b a^-1').length, 1)
        self.assertEqual(names(self.group.graph, self.word('a b a^-1').alpha), {'b'})

    def test_cyclic_reduce(self):
        conjugator, core = self.word('a^-1 c a').cyclic_reduce()
        self.assertEqual(str(conjugator), 'a')
        self.assertEqual(str(core), 'c')
        self.assertEqual(core.conjugate(conjugator), self.word('a^-1 c a'))
        conjugator, core = self.word('a^-1 b a').cyclic_reduce()
        self.assertTrue(conjugator.is_identity)
        self.assertEqual(str(core), 'b')
        self.assertTrue(self.word('a c').is_cyclically_minimal())

    def test_blocks(self):
        self.assertEqual([str(block) for block in self.word('a b').blocks()], ['a', 'b'])
        self.assertEqual([str(block) for block in self.word('a c').blocks()], ['a c'])
        self.assertEqual([str(block) for block in self.word('c').blocks()], ['c'])
        with self.assertRaises(PreconditionError):
            self.word('a^-1 c a').blocks()

    def test_in_parabolic(self):
        self.assertTrue(self.word('a b').in_parabolic(['a', 'b']))
        self.assertFalse(self.word('c').in_parabolic(['a', 'b']))
        self.assertTrue(self.group.identity.in_parabolic([]))

    def test_divisors(self):
        graph = self.group.graph
        self.assertEqual(
            self.word('a c b').left_divisors(),
            {graph.index('a'): 1, graph.index('b'): 1},
        )
        self.assertEqual(self.word('a^-1 c').right_divisors(), {graph.index('c'): 1})

    def test_strip_left_divisors(self):
        prefix, rest = self.word('b c').strip_left_divisors(['b'])
        self.assertEqual((str(prefix), str(rest)), ('b', 'c'))
        prefix, rest = self.word('c a').strip_left_divisors(['a'])
        self.assertEqual((str(prefix), str(rest)), ('1', 'c a'))
        prefix, rest = self.word('a c').strip_left_divisors(['b'])
        self.assertTrue(prefix.is_identity)

    def test_abelian_exponents(self):
        graph = self.group.graph
        a, b = graph.index('a'), graph.index('b')
        self.assertEqual(self.word('a b^-2').abelian_exponents(['a', 'b']), {a: 1, b: -2})
        self.assertEqual(self.word('b a').abelian_exponents(['a', 'b']), {a: 1, b: 1})
        self.assertEqual(self.group.identity.abelian_exponents(['a', 'b']), {a: 0, b: 0})
        with self.assertRaises(PreconditionError):
            self.word('a').abelian_exponents(['a', 'c'])
        with self.assertRaises(PreconditionError):
            self.word('c').abelian_exponents(['a', 'b'])

    def test_substitute(self):
        images = [self.word('a b'), self.word('b'), self.word('c')]
        self.assertEqual(str(self.word('a^-1 c').substitute(images)), 'a^-1 b^-1 c')

    def test_subgroup(self):
        subgroup = self.group.subgroup(['a', 'c'])
        self.assertEqual(subgroup.graph.names, ('a', 'c'))
        self.assertEqual(str(subgroup.translate(self.word('c a'))), 'c a')
        with self.assertRaises(InputError):
            subgroup.translate(self.word('b'))

    def test_input_errors(self):
        with self.assertRaises(InputError):
            self.word('z')
        with self.assertRaises(InputError):
            self.word('a^x')
        with self.assertRaises(InputError):
            self.word('a') * PartiallyCommutativeGroup(triangle()).word('a')
        with self.assertRaises(InputError):
            PartiallyCommutativeGroup(path3(), ['a', 'b'])

    def test_parse_literal(self):
        self.assertEqual(parse_literal('a b^-1 c^3'), [('a', 1), ('b', -1), ('c', 3)])
        self.assertEqual(parse_literal('1'), [])
        self.assertEqual(parse_literal('a^0'), [])
