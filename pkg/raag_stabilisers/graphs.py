"""
Commutation graphs, vertex sets and the closure operator Y -> Y^perp^perp.

Vertex sets are bitmasks over the fixed input order of the vertices, so the
set algebra used by the lattice and matrix layers costs a few integer
operations.
"""
import itertools
import logging
import math
import random
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

from django.utils.functional import cached_property

import graphviz
import networkx as nx

from .exceptions import InputError


logger = logging.getLogger(__name__)


class Vertex(NamedTuple):
    name: str
    index: int


@dataclass(frozen=True)
class VertexSet:
    bits: int = 0

    @classmethod
    def from_indices(cls, indices):
        bits = 0
        for index in indices:
            bits |= 1 << index
        return cls(bits)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        index = 0
        while bits:
            if bits & 1:
                yield index
            bits >>= 1
            index += 1

    def __len__(self):
        return bin(self.bits).count('1')

    def __bool__(self):
        return self.bits != 0

    def __contains__(self, index):
        return bool(self.bits >> index & 1)

    def __and__(self, other):
        return VertexSet(self.bits & other.bits)

    def __or__(self, other):
        return VertexSet(self.bits | other.bits)

    def __sub__(self, other):
        return VertexSet(self.bits & ~other.bits)

    def __le__(self, other):
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def isdisjoint(self, other):
        return self.bits & other.bits == 0

    def __repr__(self):
        return f'VertexSet({sorted(self)})'


VertexLike = Union[str, int]
SetLike = Union[VertexSet, Iterable[VertexLike]]


@dataclass(frozen=True)
class Graph:
    """
    A finite simple undirected graph; ``neighbours[i]`` is the bitmask of
    vertices adjacent to vertex ``i``.
    """
    names: Tuple[str, ...]
    neighbours: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise InputError('Vertex names must be unique.')
        if len(self.neighbours) != len(self.names):
            raise InputError('Adjacency does not match the vertex list.')
        for index, mask in enumerate(self.neighbours):
            if mask >> index & 1:
                raise InputError(f'Self-loop at vertex "{self.names[index]}".')
            if mask >> len(self.names):
                raise InputError(f'Vertex "{self.names[index]}" has a neighbour outside the graph.')
            for other in VertexSet(mask):
                if not self.neighbours[other] >> index & 1:
                    raise InputError('Adjacency must be symmetric.')

    def __reduce__(self):
        # cached views, the frozen networkx graph among them, are rebuilt on demand
        return Graph, (self.names, self.neighbours)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Iterable[str]]):
        names = tuple(str(name) for name in vertices)
        position = {name: index for index, name in enumerate(names)}
        if len(position) != len(names):
            raise InputError('Vertex names must be unique.')
        neighbours = [0] * len(names)
        seen = set()
        for edge in edges:
            edge = tuple(edge)
            if len(edge) != 2:
                raise InputError(f'Edge {edge!r} does not have two endpoints.')
            try:
                i, j = (position[str(name)] for name in edge)
            except KeyError as er:
                raise InputError(f'Edge {edge!r} mentions unknown vertex {er}.')
            if i == j:
                raise InputError(f'Self-loop at vertex "{names[i]}".')
            key = frozenset((i, j))
            if key in seen:
                raise InputError(f'Edge {edge!r} is listed twice.')
            seen.add(key)
            neighbours[i] |= 1 << j
            neighbours[j] |= 1 << i
        return cls(names, tuple(neighbours))

    @classmethod
    def from_dict(cls, data):
        try:
            return cls.from_edges(data['vertices'], data.get('edges', []))
        except (KeyError, TypeError, AttributeError) as er:
            raise InputError(f'Graph JSON needs "vertices" and "edges": {er}')

    @classmethod
    def from_networkx(cls, nx_graph, names=None):
        nodes = list(nx_graph.nodes)
        if names is None:
            names = [str(node) for node in nodes]
        label = dict(zip(nodes, names))
        return cls.from_edges(names, [(label[u], label[v]) for u, v in nx_graph.edges])

    def as_dict(self):
        return {
            'vertices': list(self.names),
            'edges': [[self.names[i], self.names[j]] for i, j in self.edges],
        }

    def __len__(self):
        return len(self.names)

    def __str__(self):
        return 'Graph({})'.format(', '.join(
            f'{self.names[i]}-{self.names[j]}' for i, j in self.edges
        ) or ' '.join(self.names))

    @cached_property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(Vertex(name, index) for index, name in enumerate(self.names))

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(
            (i, j)
            for i in range(len(self))
            for j in VertexSet(self.neighbours[i])
            if i < j
        )

    @cached_property
    def full(self) -> VertexSet:
        return VertexSet((1 << len(self)) - 1)

    @cached_property
    def _positions(self):
        return {name: index for index, name in enumerate(self.names)}

    @cached_property
    def _balls(self):
        return tuple(VertexSet(mask | 1 << index) for index, mask in enumerate(self.neighbours))

    @cached_property
    def nx_graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self)))
        graph.add_edges_from(self.edges)
        return nx.freeze(graph)

    def to_networkx(self):
        """A mutable networkx copy labelled by vertex name."""
        return nx.relabel_nodes(nx.Graph(self.nx_graph), dict(enumerate(self.names)))

    def index(self, vertex: VertexLike) -> int:
        if isinstance(vertex, int) and not isinstance(vertex, bool):
            if 0 <= vertex < len(self):
                return vertex
            raise InputError(f'Vertex index {vertex} is out of range.')
        try:
            return self._positions[vertex]
        except (KeyError, TypeError):
            raise InputError(f'Unknown vertex "{vertex}".')

    def vertex_set(self, members: SetLike) -> VertexSet:
        if isinstance(members, VertexSet):
            if not members <= self.full:
                raise InputError(f'{members!r} is not a subset of the vertices.')
            return members
        if isinstance(members, str):
            members = [members]
        return VertexSet.from_indices(self.index(member) for member in members)

    def names_of(self, members: SetLike) -> Tuple[str, ...]:
        return tuple(self.names[index] for index in self.vertex_set(members))

    def adjacent(self, x: VertexLike, y: VertexLike) -> bool:
        return bool(self.neighbours[self.index(x)] >> self.index(y) & 1)

    def commute(self, x: VertexLike, y: VertexLike) -> bool:
        return self.index(x) == self.index(y) or self.adjacent(x, y)

    def ball(self, x: VertexLike) -> VertexSet:
        """{x} together with its neighbours; equal to orth({x})."""
        return self._balls[self.index(x)]

    def distance(self, x: VertexLike, y: VertexLike):
        source, target = self.index(x), self.index(y)
        try:
            return nx.shortest_path_length(self.nx_graph, source, target)
        except nx.NetworkXNoPath:
            return math.inf

    def orth(self, members: SetLike) -> VertexSet:
        result = self.full
        for index in self.vertex_set(members):
            result &= self._balls[index]
        return result

    def closure(self, members: SetLike) -> VertexSet:
        return self.orth(self.orth(members))

    def is_simplex(self, members: SetLike) -> bool:
        members = self.vertex_set(members)
        return all(members <= self._balls[index] for index in members)

    def full_subgraph(self, members: SetLike) -> 'Graph':
        members = self.vertex_set(members)
        indices = list(members)
        return Graph.from_edges(
            [self.names[index] for index in indices],
            [(self.names[i], self.names[j]) for i, j in self.edges if i in members and j in members],
        )

    def non_commutation_graph(self) -> 'Graph':
        full = self.full.bits
        return Graph(
            self.names,
            tuple(full & ~(mask | 1 << index) for index, mask in enumerate(self.neighbours)),
        )

    def components_minus(self, removed: SetLike) -> List[VertexSet]:
        remaining = self.full - self.vertex_set(removed)
        subgraph = self.nx_graph.subgraph(list(remaining))
        components = [VertexSet.from_indices(component) for component in nx.connected_components(subgraph)]
        return sorted(components, key=lambda component: min(component))

    @cached_property
    def _ball_components(self) -> Tuple[Tuple[VertexSet, ...], ...]:
        return tuple(tuple(self.components_minus(ball)) for ball in self._balls)

    def ball_components(self, x: VertexLike) -> Tuple[VertexSet, ...]:
        """Components of Gamma minus x^perp, ordered by least vertex."""
        return self._ball_components[self.index(x)]

    def draw(self, dot, prefix=''):
        """Add vertices and edges to a graphviz graph, node ids prefixed and labelled by name."""
        for vertex in self.names:
            dot.node(prefix + vertex, vertex)
        for i, j in self.edges:
            dot.edge(prefix + self.names[i], prefix + self.names[j])

    def to_dot(self, name='G'):
        dot = graphviz.Graph(name=name)
        self.draw(dot)
        return dot.source


def default_names(count):
    if count <= len(string.ascii_lowercase):
        return list(string.ascii_lowercase[:count])
    return [f'x{index}' for index in range(count)]


def all_graphs(count: int, names: Optional[List[str]] = None) -> Iterator[Graph]:
    """Every labelled simple graph on ``count`` vertices, no isomorphism reduction."""
    names = names or default_names(count)
    pairs = list(itertools.combinations(range(count), 2))
    for mask in range(1 << len(pairs)):
        edges = [(names[i], names[j]) for bit, (i, j) in enumerate(pairs) if mask >> bit & 1]
        yield Graph.from_edges(names, edges)


def random_graph(count: int, probability: Optional[float] = None, seed=None) -> Graph:
    rng = random.Random(seed)
    if probability is None:
        probability = rng.uniform(0.2, 0.8)
    logger.debug('Random graph on %d vertices, edge probability %.2f', count, probability)
    nx_graph = nx.gnp_random_graph(count, probability, seed=rng.randrange(2 ** 32))
    return Graph.from_networkx(nx_graph, default_names(count))
