"""
JSON and DOT formats read and written by the management commands.
"""
import json
import logging

import graphviz

from .automorphisms import Atom, ClassMove, GeneratorWord, SignFlip, Transvection
from .conjugation import ElementaryConjugation, InnerConjugation
from .exceptions import InputError
from .graphs import Graph
from .lattice import ClosureLattice, TotalOrder
from .matrices import StabMatrix, pattern_of


logger = logging.getLogger(__name__)


def read_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as er:
        raise InputError(f'Cannot read "{path}": {er.strerror}')
    except json.JSONDecodeError as er:
        raise InputError(f'"{path}" is not valid JSON: {er}')


def dumps(data):
    return json.dumps(data, indent=2)


def load_graph(path) -> Graph:
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError('Graph JSON must be an object with "vertices" and "edges".')
    graph = Graph.from_dict(data)
    logger.debug('Loaded %s from %s', graph, path)
    return graph


def matrix_from_json(data, lattice: ClosureLattice, order: TotalOrder) -> StabMatrix:
    """
    ``{"closed_set": [...], "rows": [[...], ...]}``; the closed set lists the
    row order, which has to be the total order restricted to it.
    """
    try:
        names, rows = data['closed_set'], data['rows']
    except (KeyError, TypeError):
        raise InputError('Matrix JSON needs "closed_set" and "rows".')
    pattern = pattern_of(lattice, order, names)
    if list(pattern.names) != list(names):
        raise InputError('closed_set must list its vertices in the order {}.'.format(', '.join(pattern.names)))
    return StabMatrix(pattern, rows)


def load_matrix(path, lattice, order) -> StabMatrix:
    return matrix_from_json(read_json(path), lattice, order)


def atom_from_json(item) -> Atom:
    if not isinstance(item, dict):
        raise InputError(f'Cannot read generator {item!r}.')
    try:
        if 'tr' in item:
            source, target = item['tr']
            return Transvection(source, target, item.get('e', 1))
        if 'flip' in item:
            return SignFlip(item['flip'])
        if 'class_move' in item:
            move = item['class_move']
            return ClassMove(tuple(move['class']), tuple(tuple(row) for row in move['rows']))
        if 'conj' in item:
            return ElementaryConjugation(item['conj'], tuple(item['component']), item.get('direction', 1))
        if 'inner' in item:
            return InnerConjugation.from_literal(item['inner'])
    except (KeyError, TypeError, ValueError) as er:
        raise InputError(f'Malformed generator {item!r}: {er}')
    raise InputError(f'Unknown generator kind in {item!r}.')


def word_from_json(data, lattice: ClosureLattice, conjugations=True) -> GeneratorWord:
    if not isinstance(data, list):
        raise InputError('A generator word is a JSON list of generators.')
    word = GeneratorWord(tuple(atom_from_json(item) for item in data))
    if not conjugations and not word.is_stabiliser:
        raise InputError('Only sign flips, class moves and transvections are allowed here.')
    word.validate(lattice)
    return word


def load_word(path, lattice, conjugations=True) -> GeneratorWord:
    return word_from_json(read_json(path), lattice, conjugations)


def graph_and_dual_dot(graph: Graph) -> str:
    """Gamma and its complement Delta as two clusters of one undirected DOT graph."""
    dot = graphviz.Graph(name='raag')
    for name, current in (('G', graph), ('Delta', graph.non_commutation_graph())):
        with dot.subgraph(name=f'cluster_{name}') as cluster:
            cluster.attr(label=name)
            current.draw(cluster, prefix=f'{name}_')
    return dot.source
