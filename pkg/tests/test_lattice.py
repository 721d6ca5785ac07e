from django.test import SimpleTestCase

from raag_stabilisers.exceptions import InputError
from raag_stabilisers.graphs import Graph
from raag_stabilisers.lattice import Comparison, enumerate_lattice

from .utils import edgeless, names, path3, triangle


def closed_names(lattice):
    return {frozenset(lattice.graph.names_of(closed)) for closed in lattice.closed_sets}


class ClosureLatticeTest(SimpleTestCase):

    def setUp(self):
        self.graph = path3()
        self.lattice = enumerate_lattice(self.graph)

    def test_closed_sets(self):
        self.assertEqual(
            closed_names(self.lattice),
            {frozenset('b'), frozenset('ab'), frozenset('bc'), frozenset('abc')},
        )
        self.assertEqual(closed_names(enumerate_lattice(triangle())), {frozenset('abc')})
        self.assertEqual(
            closed_names(enumerate_lattice(edgeless())),
            {frozenset(), frozenset('a'), frozenset('b'), frozenset('c'), frozenset('abc')},
        )

    def test_closed_sets_are_orthogonal_complements(self):
        for closed in self.lattice:
            self.assertEqual(self.graph.closure(closed), closed)
        self.assertTrue(self.lattice.is_closed(['a', 'b']))
        self.assertFalse(self.lattice.is_closed(['a']))
        with self.assertRaises(InputError):
            self.lattice.closed(['a', 'c'])

    def test_classes(self):
        self.assertEqual(names(self.graph, self.lattice.equiv_class('a')), {'a'})
        self.assertEqual(self.lattice.n1, self.graph.full)
        lattice = enumerate_lattice(triangle())
        self.assertEqual(lattice.equiv_class('a'), triangle().full)
        self.assertEqual(lattice.n2, triangle().full)
        edge = enumerate_lattice(Graph.from_edges(['a', 'b'], [('a', 'b')]))
        self.assertEqual(len(edge.equiv_class('a')), 2)

    def test_l_compare(self):
        self.assertEqual(self.lattice.l_compare('b', 'a'), Comparison.LESS)
        self.assertEqual(self.lattice.l_compare('a', 'b'), Comparison.GREATER)
        self.assertEqual(self.lattice.l_compare('a', 'a'), Comparison.EQUAL)
        self.assertEqual(self.lattice.l_compare('a', 'c'), Comparison.INCOMPARABLE)

    def test_maximal_closures(self):
        self.assertEqual(
            [names(self.graph, closed) for closed in self.lattice.l_max_sets()],
            [{'a', 'b'}, {'b', 'c'}],
        )
        self.assertEqual(enumerate_lattice(triangle()).l_max_sets(), [triangle().full])
        lattice = enumerate_lattice(edgeless())
        self.assertEqual([names(lattice.graph, closed) for closed in lattice.l_max_sets()], [{'a'}, {'b'}, {'c'}])

    def test_max_support(self):
        self.assertEqual(names(self.graph, self.lattice.max_support('b')), {'a', 'c'})
        self.assertEqual(names(self.graph, self.lattice.max_support('a')), {'a'})
        self.assertEqual(enumerate_lattice(triangle()).max_support('a'), triangle().full)
        self.assertEqual(names(self.graph, self.lattice.max_envelope('b')), {'b'})
        self.assertEqual(names(self.graph, self.lattice.max_envelope('a')), {'a', 'b'})

    def test_total_order(self):
        order = self.lattice.build_total_order(['a', 'b', 'c'])
        self.assertEqual(order.names, ('a', 'c', 'b'))
        self.assertEqual(self.lattice.heights, (1, 0, 1))
        self.assertEqual(
            [[names(self.graph, cls) for cls in stage] for stage in self.lattice.stages],
            [[{'b'}], [{'a'}, {'c'}]],
        )
        self.assertEqual(self.lattice.build_total_order(['c', 'b', 'a']).names, ('c', 'a', 'b'))
        self.assertTrue(order.precedes('a', 'b'))
        self.assertEqual(order.least(['b', 'c']), self.graph.index('c'))

    def test_total_order_without_relations(self):
        lattice = enumerate_lattice(triangle())
        self.assertEqual(lattice.build_total_order().names, ('a', 'b', 'c'))
        self.assertEqual(lattice.heights, (0, 0, 0))
        lattice = enumerate_lattice(edgeless())
        self.assertEqual(lattice.build_total_order(['b', 'c', 'a']).names, ('b', 'c', 'a'))
        self.assertEqual(set(lattice.heights), {0})

    def test_invalid_tie_break(self):
        with self.assertRaises(InputError):
            self.lattice.build_total_order(['a', 'b'])
        with self.assertRaises(InputError):
            self.lattice.build_total_order(['a', 'b', 'z'])

    def test_meet_and_join(self):
        first, second = self.graph.vertex_set(['a', 'b']), self.graph.vertex_set(['b', 'c'])
        self.assertEqual(names(self.graph, self.lattice.meet(first, second)), {'b'})
        self.assertEqual(self.lattice.join(first, second), self.graph.full)

    def test_hasse(self):
        covers = {
            (frozenset(self.graph.names_of(self.lattice.closed_sets[low])),
             frozenset(self.graph.names_of(self.lattice.closed_sets[high])))
            for low, high in self.lattice.hasse
        }
        self.assertEqual(covers, {
            (frozenset('b'), frozenset('ab')),
            (frozenset('b'), frozenset('bc')),
            (frozenset('ab'), frozenset('abc')),
            (frozenset('bc'), frozenset('abc')),
        })
        self.assertIn('Y0 -> Y1', self.lattice.to_dot())

    def test_sublattices(self):
        members = self.graph.vertex_set(['a', 'b'])
        self.assertEqual(
            [names(self.graph, closed) for closed in self.lattice.sublattice(members)],
            [{'b'}, {'a', 'b'}],
        )
        self.assertEqual(
            [names(self.graph, closed) for closed in self.lattice.lattice_of_subgraph(members)],
            [{'a', 'b'}],
        )

    def test_least_class_members(self):
        order = self.lattice.build_total_order()
        self.assertEqual(self.lattice.x_min(order), self.graph.full)
        self.assertEqual(names(self.graph, self.lattice.y_min(['a', 'b'], order)), {'a', 'b'})

    def test_as_dict(self):
        data = self.lattice.as_dict()
        self.assertEqual(len(data['closed_sets']), 4)
        self.assertEqual(data['vertices']['a'], {'class': ['a'], 'height': 1, 'closure': ['a', 'b']})
        self.assertEqual(data['l_max'], [['a', 'b'], ['b', 'c']])
        self.assertEqual(data['l_x'], [['b'], ['a', 'b'], ['b', 'c']])

    def test_lx_sets(self):
        self.assertEqual(
            [names(self.graph, closed) for closed in self.lattice.lx_sets], [{'b'}, {'a', 'b'}, {'b', 'c'}],
        )
        self.assertTrue(all(closed in self.lattice for closed in self.lattice.lx_sets))
        self.assertEqual(enumerate_lattice(triangle()).lx_sets, (triangle().full,))
