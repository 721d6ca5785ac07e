import io
import json
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .utils import path3


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.graph = self.write('p3.json', path3().as_dict())

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as handle:
            json.dump(data, handle)
        return path

    def call(self, name, *args):
        out = io.StringIO()
        call_command(name, *args, stdout=out)
        return out.getvalue()

    def json(self, name, *args):
        return json.loads(self.call(name, '--graph', self.graph, '--format', 'json', *args))


class StructureCommandsTest(CommandTestCase):

    def test_lattice(self):
        output = self.call('raag_lattice', '--graph', self.graph)
        self.assertIn('4 closed sets:', output)
        self.assertIn('L_X: ', output)
        self.assertEqual(len(self.json('raag_lattice')['closed_sets']), 4)
        self.assertIn('digraph L', self.call('raag_lattice', '--graph', self.graph, '--format', 'dot'))

    def test_order(self):
        output = self.call('raag_order', '--graph', self.graph)
        self.assertIn('order: a < c < b', output)
        data = self.json('raag_order', '--tie-break', 'c,b,a')
        self.assertEqual(data['order'], ['c', 'a', 'b'])
        self.assertEqual(data['heights'], {'c': 1, 'a': 1, 'b': 0})

    def test_generators(self):
        data = self.json('raag_generators')
        self.assertEqual(data['J'], ['a', 'c', 'b'])
        self.assertEqual(data['V'], [])
        self.assertEqual(data['Tr'], [['a', 'b'], ['c', 'b']])
        dot = self.call('raag_generators', '--graph', self.graph, '--format', 'dot')
        self.assertEqual([line for line in dot.splitlines() if line.startswith('graph ')], ['graph raag {'])
        self.assertIn('subgraph cluster_Delta', dot)

    def test_pattern(self):
        data = self.json('raag_pattern', '--closed-set', 'a,b')
        self.assertEqual(data['closed_set'], ['a', 'b'])
        self.assertEqual(data['allowed_off_block'], [['a', 'b']])
        output = self.call('raag_pattern', '--graph', self.graph)
        self.assertIn('blocks: {a}, {c}, {b}', output)

    def test_dot_rejected(self):
        with self.assertRaises(CommandError) as cm:
            self.call('raag_pattern', '--graph', self.graph, '--format', 'dot')
        self.assertEqual(cm.exception.returncode, 2)

    def test_missing_graph(self):
        with self.assertRaises(CommandError) as cm:
            self.call('raag_lattice')
        self.assertEqual(cm.exception.returncode, 2)
        with self.assertRaises(CommandError) as cm:
            self.call('raag_lattice', '--graph', os.path.join(self.tmp.name, 'missing.json'))
        self.assertEqual(cm.exception.returncode, 2)

    def test_out(self):
        target = os.path.join(self.tmp.name, 'lattice.dot')
        output = self.call('raag_lattice', '--graph', self.graph, '--format', 'dot', '--out', target)
        self.assertIn('Wrote', output)
        with open(target) as handle:
            self.assertIn('digraph L', handle.read())


class AutomorphismCommandsTest(CommandTestCase):

    def test_decompose(self):
        order = ['a', 'c', 'b']
        identity = self.write('identity.json', {'closed_set': order, 'rows': [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
        self.assertEqual(self.json('raag_decompose', '--matrix', identity), [])
        matrix = self.write('matrix.json', {'closed_set': order, 'rows': [[1, 0, 2], [0, 1, 0], [0, 0, 1]]})
        self.assertEqual(self.json('raag_decompose', '--matrix', matrix), [{'tr': ['a', 'b'], 'e': 2}])

    def test_decompose_rejects_non_members(self):
        rows = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
        matrix = self.write('matrix.json', {'closed_set': ['a', 'c', 'b'], 'rows': rows})
        with self.assertRaises(CommandError) as cm:
            self.call('raag_decompose', '--graph', self.graph, '--matrix', matrix)
        self.assertEqual(cm.exception.returncode, 2)

    def test_word(self):
        data = self.json('raag_word', '--word', 'a^-1 c a')
        self.assertEqual(data['normal_form'], 'a^-1 c a')
        self.assertEqual(data['cyclic'], {'conjugator': 'a', 'core': 'c'})
        self.assertEqual(data['blocks'], ['c'])
        self.assertEqual(data['length'], 3)

    def test_apply(self):
        generators = self.write('generators.json', [{'tr': ['a', 'b'], 'e': 2}, {'flip': 'c'}])
        output = self.call('raag_apply', '--graph', self.graph, '--generators', generators, '--word', 'a c')
        self.assertEqual(output.strip(), 'a c^-1 b^2')

    def test_factor(self):
        composition = self.write('theta.json', [{'conj': 'a', 'component': ['c']}, {'tr': ['a', 'b']}])
        data = self.json('raag_factor', '--composition', composition)
        self.assertEqual(data['tau'], {'a': 'a', 'b': 'b', 'c': 'a^-1 c a'})
        self.assertEqual(data['phi'], [{'tr': ['a', 'b'], 'e': 1}])
        self.assertEqual(data['check'], 'pass')

    def test_factor_free_group(self):
        graph = self.write('free.json', {'vertices': ['a', 'b'], 'edges': []})
        composition = self.write('theta.json', [{'inner': 'a'}, {'flip': 'b'}])
        output = self.call('raag_factor', '--graph', graph, '--composition', composition)
        self.assertIn('check: pass', output)


class VerifyCommandTest(CommandTestCase):

    def test_verify_graph(self):
        output = self.call('raag_verify', '--graph', self.graph, '--samples', '2', '--seed', '3')
        self.assertIn('semidirect_factorization', output)
        self.assertIn('1 graphs, seed 3', output)
        self.assertNotIn('FAIL', output)

    def test_verify_corpus_json(self):
        data = json.loads(self.call(
            'raag_verify', '--max-vertices', '3', '--exhaustive', '--random-graphs', '1', '--samples', '1',
            '--format', 'json',
        ))
        self.assertTrue(data['ok'])
        self.assertEqual(data['graphs'], 1 + 2 + 8 + 1)

    def test_verify_bound_and_workers(self):
        output = self.call(
            'raag_verify', '--graph', self.graph, '--samples', '1', '--bound', '2', '--workers', '1',
        )
        self.assertNotIn('FAIL', output)

    def test_bound_only_on_verify(self):
        with self.assertRaises(CommandError):
            self.call('raag_lattice', '--graph', self.graph, '--bound', '3')

    def test_negative_workers(self):
        with self.assertRaises(CommandError) as raised:
            self.call('raag_verify', '--graph', self.graph, '--samples', '1', '--workers', '-1')
        self.assertEqual(raised.exception.returncode, 2)
