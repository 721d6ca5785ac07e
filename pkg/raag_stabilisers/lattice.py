"""
The lattice L of closed sets of a graph, the preorder <_L it induces on the
vertices, and the stratified total order used to index stabiliser matrices.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from django.utils.functional import cached_property

import graphviz

from .exceptions import InputError
from .graphs import Graph, SetLike, VertexLike, VertexSet


logger = logging.getLogger(__name__)


class Comparison(enum.Enum):
    LESS = 'less'
    EQUAL = 'equal'
    GREATER = 'greater'
    INCOMPARABLE = 'incomparable'


@dataclass(frozen=True)
class TotalOrder:
    """
    The order x_1 < ... < x_k on the vertices, stored as vertex indices.
    ``tie_break`` is the externally supplied order that fixed every free
    choice made while building it.
    """
    graph: Graph = field(repr=False)
    sequence: Tuple[int, ...]
    tie_break: Tuple[int, ...]

    @cached_property
    def positions(self) -> Dict[int, int]:
        return {vertex: position for position, vertex in enumerate(self.sequence)}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.graph.names[index] for index in self.sequence)

    def position(self, vertex: VertexLike) -> int:
        return self.positions[self.graph.index(vertex)]

    def precedes(self, x: VertexLike, y: VertexLike) -> bool:
        return self.position(x) < self.position(y)

    def sort(self, members: SetLike) -> Tuple[int, ...]:
        members = self.graph.vertex_set(members)
        return tuple(sorted(members, key=self.positions.__getitem__))

    def least(self, members: SetLike) -> int:
        return self.sort(members)[0]


@dataclass(frozen=True)
class ClosureLattice:
    graph: Graph = field(repr=False)
    closed_sets: Tuple[VertexSet, ...]
    lx: Tuple[int, ...]
    classes: Tuple[VertexSet, ...]
    heights: Tuple[int, ...]

    @cached_property
    def _index(self) -> Dict[VertexSet, int]:
        return {closed: index for index, closed in enumerate(self.closed_sets)}

    def __len__(self):
        return len(self.closed_sets)

    def __iter__(self):
        return iter(self.closed_sets)

    def __contains__(self, members):
        return members in self._index

    def is_closed(self, members: SetLike) -> bool:
        return self.graph.vertex_set(members) in self._index

    def closed(self, members: SetLike) -> VertexSet:
        """``members`` as a VertexSet, which must be closed."""
        members = self.graph.vertex_set(members)
        if members not in self._index:
            raise InputError('{{{}}} is not a closed set.'.format(', '.join(self.graph.names_of(members))))
        return members

    def cl(self, x: VertexLike) -> VertexSet:
        return self.closed_sets[self.lx[self.graph.index(x)]]

    @cached_property
    def lx_sets(self) -> Tuple[VertexSet, ...]:
        """L_X: the distinct closures of single vertices."""
        return tuple(sorted({self.cl(x) for x in range(len(self.graph))}, key=_set_key))

    def meet(self, first: VertexSet, second: VertexSet) -> VertexSet:
        return self.closed(first) & self.closed(second)

    def join(self, first: VertexSet, second: VertexSet) -> VertexSet:
        return self.graph.closure(self.closed(first) | self.closed(second))

    @cached_property
    def hasse(self) -> Tuple[Tuple[int, int], ...]:
        """Covering pairs (i, j): closed_sets[i] is covered by closed_sets[j]."""
        below = [
            [i for i, lower in enumerate(self.closed_sets) if lower < upper]
            for upper in self.closed_sets
        ]
        covers = []
        for j, lower_indices in enumerate(below):
            for i in lower_indices:
                between = any(
                    self.closed_sets[i] < self.closed_sets[k] for k in lower_indices if k != i
                )
                if not between:
                    covers.append((i, j))
        return tuple(covers)

    def equiv_class(self, x: VertexLike) -> VertexSet:
        x = self.graph.index(x)
        return next(cls for cls in self.classes if x in cls)

    @cached_property
    def n1(self) -> VertexSet:
        return VertexSet.from_indices(x for cls in self.classes if len(cls) == 1 for x in cls)

    @cached_property
    def n2(self) -> VertexSet:
        return self.graph.full - self.n1

    def l_less(self, x: VertexLike, y: VertexLike) -> bool:
        return self.cl(x) < self.cl(y)

    def l_compare(self, x: VertexLike, y: VertexLike) -> Comparison:
        first, second = self.cl(x), self.cl(y)
        if first == second:
            return Comparison.EQUAL
        if first < second:
            return Comparison.LESS
        if second < first:
            return Comparison.GREATER
        return Comparison.INCOMPARABLE

    def below(self, x: VertexLike) -> VertexSet:
        """All y with y <_L x."""
        cl_x = self.cl(x)
        return VertexSet.from_indices(y for y in range(len(self.graph)) if self.cl(y) < cl_x)

    def boundary_class(self, x: VertexLike) -> VertexSet:
        """cl(x) minus the closures of everything strictly below x."""
        result = self.cl(x)
        for y in self.below(x):
            result -= self.cl(y)
        return result

    def is_l_minimal(self, x: VertexLike) -> bool:
        return not self.below(x)

    def is_l_maximal(self, x: VertexLike) -> bool:
        cl_x = self.cl(x)
        return not any(cl_x < self.cl(y) for y in range(len(self.graph)))

    @cached_property
    def l_maximal(self) -> VertexSet:
        return VertexSet.from_indices(x for x in range(len(self.graph)) if self.is_l_maximal(x))

    @cached_property
    def l_minimal(self) -> VertexSet:
        return VertexSet.from_indices(x for x in range(len(self.graph)) if self.is_l_minimal(x))

    def l_max_sets(self) -> List[VertexSet]:
        return sorted({self.cl(x) for x in self.l_maximal}, key=_set_key)

    def max_support(self, x: VertexLike) -> VertexSet:
        """
        The L-maximal z with x <=_L z. The strict reading of the definition
        would drop x itself when x is L-maximal, although images of x then
        still lie in G(cl(x)).
        """
        cl_x = self.cl(x)
        return VertexSet.from_indices(z for z in self.l_maximal if cl_x <= self.cl(z))

    def max_envelope(self, x: VertexLike) -> VertexSet:
        """Intersection of cl(z) over max_support(x): where images of x can live."""
        result = self.graph.full
        for z in self.max_support(x):
            result &= self.cl(z)
        return result

    @cached_property
    def stages(self) -> Tuple[Tuple[VertexSet, ...], ...]:
        """The classes of height 0, 1, 2, ... grouped by height."""
        grouped = {}
        for cls in self.classes:
            grouped.setdefault(self.heights[min(cls)], []).append(cls)
        return tuple(tuple(grouped[height]) for height in sorted(grouped))

    def sublattice(self, members: SetLike) -> List[VertexSet]:
        """L(Y): the closed sets contained in Y."""
        members = self.graph.vertex_set(members)
        return [closed for closed in self.closed_sets if closed <= members]

    def lattice_of_subgraph(self, members: SetLike) -> List[VertexSet]:
        """L(Gamma(Y)) re-indexed into the ambient vertex numbering."""
        members = self.graph.vertex_set(members)
        indices = list(members)
        local = enumerate_lattice(self.graph.full_subgraph(members))
        return [VertexSet.from_indices(indices[i] for i in closed) for closed in local.closed_sets]

    def build_total_order(self, tie_break: Optional[Iterable[VertexLike]] = None) -> TotalOrder:
        """
        Stage B_0 holds the closures of L-minimal vertices; B_{i+1} the
        closures all of whose strict predecessors are already placed. Each
        class is put in front of everything ordered so far, so later stages
        come first and classes stay intervals.
        """
        tie_break = self._tie_break(tie_break)
        rank = {vertex: position for position, vertex in enumerate(tie_break)}
        sequence = []
        for stage in self.stages:
            placed = []
            # classes of one stage read in increasing tie-break order
            for cls in sorted(stage, key=lambda cls: min(rank[x] for x in cls)):
                placed.extend(sorted(cls, key=rank.__getitem__))
            sequence = placed + sequence
            logger.debug('Order stage placed %s', [self.graph.names[x] for x in placed])
        return TotalOrder(self.graph, tuple(sequence), tie_break)

    def _tie_break(self, tie_break):
        if tie_break is None:
            return tuple(range(len(self.graph)))
        indices = tuple(self.graph.index(vertex) for vertex in tie_break)
        if sorted(indices) != list(range(len(self.graph))):
            raise InputError('The tie-break must list every vertex exactly once.')
        return indices

    def x_min(self, order: TotalOrder) -> VertexSet:
        return VertexSet.from_indices(order.least(cls) for cls in self.classes)

    def y_min(self, members: SetLike, order: TotalOrder) -> VertexSet:
        return self.x_min(order) & self.graph.vertex_set(members)

    def as_dict(self):
        names_of = self.graph.names_of
        return {
            'closed_sets': [list(names_of(closed)) for closed in self.closed_sets],
            'vertices': {
                self.graph.names[x]: {
                    'class': list(names_of(self.equiv_class(x))),
                    'height': self.heights[x],
                    'closure': list(names_of(self.cl(x))),
                }
                for x in range(len(self.graph))
            },
            'l_x': [list(names_of(closed)) for closed in self.lx_sets],
            'l_max': [list(names_of(closed)) for closed in self.l_max_sets()],
        }

    def to_dot(self, name='L'):
        dot = graphviz.Digraph(name=name)
        dot.attr(rankdir='BT')
        for index, closed in enumerate(self.closed_sets):
            dot.node(f'Y{index}', '{' + ','.join(self.graph.names_of(closed)) + '}')
        for lower, upper in self.hasse:
            dot.edge(f'Y{lower}', f'Y{upper}')
        return dot.source


def _set_key(members: VertexSet):
    return (len(members), members.bits)


def enumerate_lattice(graph: Graph) -> ClosureLattice:
    """
    Closed sets are exactly the intersections of unit balls x^perp, the empty
    intersection being X itself; they are found by a worklist that intersects
    every new set with every ball.
    """
    balls = [graph.ball(x) for x in range(len(graph))]
    found = {graph.full}
    pending = [graph.full]
    while pending:
        current = pending.pop()
        for ball in balls:
            candidate = current & ball
            if candidate not in found:
                found.add(candidate)
                pending.append(candidate)
    closed_sets = tuple(sorted(found, key=_set_key))
    index = {closed: position for position, closed in enumerate(closed_sets)}
    lx = tuple(index[graph.closure([x])] for x in range(len(graph)))

    by_orth = {}
    for x, ball in enumerate(balls):
        by_orth.setdefault(ball, []).append(x)
    classes = tuple(sorted(
        (VertexSet.from_indices(members) for members in by_orth.values()),
        key=lambda cls: min(cls),
    ))

    heights = _heights(graph, closed_sets, lx)
    logger.debug('Lattice of %s has %d closed sets and %d classes', graph, len(closed_sets), len(classes))
    return ClosureLattice(graph, closed_sets, lx, classes, heights)


def _heights(graph, closed_sets, lx):
    remaining = set(lx)
    placed = set()
    heights = {}
    height = 0
    while remaining:
        stage = {
            closure for closure in remaining
            if all(
                lx[y] in placed
                for y in range(len(graph))
                if closed_sets[lx[y]] < closed_sets[closure]
            )
        }
        for closure in stage:
            heights[closure] = height
        placed |= stage
        remaining -= stage
        height += 1
    return tuple(heights[lx[x]] for x in range(len(graph)))
