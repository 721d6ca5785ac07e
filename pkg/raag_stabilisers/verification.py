"""
Brute-force and property checks of the whole library over corpora of small
graphs. Every randomised check draws from a ``random.Random`` seeded from the
run seed and the graph's position in the corpus, so a failure can be re-run.

Structural checks run on every graph of the corpus. The sampled checks run
once per isomorphism type; ``Sizes.pairs`` is shared by all types with the
same number of vertices, the other counts apply to each type.
"""
import itertools
import logging
import math
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Set

import networkx as nx

from .automorphisms import (
    GeneratorWord, SignFlip, ambient_group, automap_of, decompose, enumerate_generators,
    general_transvection_pairs, matrix_of, random_generator_word, stabilizes_L, stabilizes_L_exhaustive,
    transvection_pairs,
)
from .conjugation import (
    ElementaryConjugation, conj_stab_witness, conjugation_atoms, elementary_conj, elementary_conjugations,
    factor_semidirect, is_conjugating, is_normal_conjugate, random_composition,
)
from .exceptions import RaagError
from .graphs import Graph, VertexSet, all_graphs, random_graph
from .lattice import ClosureLattice, TotalOrder, enumerate_lattice
from .matrices import is_member, max_pattern_check, pattern_of, sample


logger = logging.getLogger(__name__)

# failures kept per check for the report
KEEP_FAILURES = 5

# elementary conjugation witnesses are checked on graphs up to this size
WITNESS_MAX_VERTICES = 6

# the known-factor rebuild of semidirect_factorization runs on every n-th theta
REBUILD_EVERY = 4


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def record(self, ok: bool, message: Callable[[], str]):
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if len(self.failures) < KEEP_FAILURES:
            self.failures.append(message())

    def merge(self, other: 'CheckResult'):
        self.passed += other.passed
        self.failed += other.failed
        self.failures.extend(other.failures[:KEEP_FAILURES - len(self.failures)])
        self.seconds += other.seconds


@dataclass
class Report:
    seed: int
    graphs: int = 0
    results: Dict[str, CheckResult] = field(default_factory=dict)

    def check(self, name: str) -> CheckResult:
        return self.results.setdefault(name, CheckResult(name))

    def merge(self, other: 'Report'):
        self.graphs += other.graphs
        for name, result in other.results.items():
            self.check(name).merge(result)

    @property
    def ok(self) -> bool:
        return all(result.failed == 0 for result in self.results.values())

    @property
    def seconds(self) -> float:
        return sum(result.seconds for result in self.results.values())

    def rows(self):
        return [
            (result.name, result.passed, result.failed, 'pass' if not result.failed else 'FAIL')
            for result in self.results.values()
        ]

    def table(self) -> str:
        """Timings are summed over workers, so they are CPU seconds."""
        width = max([len(name) for name in self.results] + [5])
        lines = [f'{"check":<{width}}  {"passed":>8}  {"failed":>8}  {"seconds":>8}  result']
        for name, passed, failed, verdict in self.rows():
            seconds = self.results[name].seconds
            lines.append(f'{name:<{width}}  {passed:>8}  {failed:>8}  {seconds:>8.1f}  {verdict}')
        for result in self.results.values():
            for failure in result.failures:
                lines.append(f'  {result.name}: {failure}')
        return '\n'.join(lines)

    def as_dict(self):
        return {
            'seed': self.seed,
            'graphs': self.graphs,
            'checks': [
                {'name': name, 'passed': passed, 'failed': failed, 'failures': self.results[name].failures}
                for name, passed, failed, _ in self.rows()
            ],
            'ok': self.ok,
        }


@dataclass
class Sizes:
    """How much random work the sampled checks do."""
    pairs: int = 1000
    words: int = 500
    matrices: int = 500
    thetas: int = 200
    bound: int = 5
    word_length: int = 12
    composition_length: int = 6
    restriction_words: int = 4
    witness_length_factor: int = 2
    witness_search_limit: int = 5000

    @classmethod
    def uniform(cls, samples: int, **kwargs) -> 'Sizes':
        """Every sample count set to ``samples``, for quick runs."""
        return cls(pairs=samples, words=samples, matrices=samples, thetas=samples, **kwargs)

    @property
    def word_pairs(self) -> int:
        return max(1, self.words // 2)

    @property
    def splits(self) -> int:
        return max(1, self.matrices // 10)


def corpus(
    max_vertices: int, exhaustive: bool, random_graphs: int, random_max_vertices: int, seed: int,
) -> Iterator[Graph]:
    """Every graph on at most ``max_vertices`` vertices when exhaustive, then the random graphs."""
    if exhaustive:
        for count in range(1, max_vertices + 1):
            yield from all_graphs(count)
    rng = random.Random(seed)
    for _ in range(random_graphs):
        yield random_graph(rng.randint(1, random_max_vertices), seed=rng.randrange(2 ** 32))


def subsets(graph: Graph) -> Iterator[VertexSet]:
    return (VertexSet(bits) for bits in range(1 << len(graph)))


def representatives(graphs: Sequence[Graph]) -> Set[int]:
    """Positions of the first graph of each isomorphism type."""
    buckets: Dict[tuple, List[nx.Graph]] = {}
    chosen = set()
    for position, graph in enumerate(graphs):
        unlabelled = nx.Graph()
        unlabelled.add_nodes_from(range(len(graph)))
        unlabelled.add_edges_from(graph.edges)
        key = (len(graph), len(graph.edges), nx.weisfeiler_lehman_graph_hash(unlabelled))
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(unlabelled, other) for other in bucket):
            continue
        bucket.append(unlabelled)
        chosen.add(position)
    return chosen


class GraphChecks:
    """All checks on one graph, sharing its lattice and order."""

    STRUCTURAL = (
        'closure_axioms', 'lattice_enumeration', 'lattice_laws', 'boundary_classes', 'total_order',
        'subgraph_lattices', 'transvection_sets', 'generators_stabilise', 'elementary_witnesses',
    )
    SAMPLED = (
        'pattern_algebra', 'max_support_pattern', 'matrix_homomorphism', 'decomposition',
        'restriction_diagram', 'vertex_splits', 'conjugating_normal', 'semidirect_factorization',
    )

    def __init__(self, graph: Graph, report: Report, rng: random.Random, sizes: Sizes, pairs: int = 0):
        self.graph = graph
        self.report = report
        self.rng = rng
        self.sizes = sizes
        self.pairs = pairs
        self.lattice: ClosureLattice = enumerate_lattice(graph)
        tie_break = list(range(len(graph)))
        rng.shuffle(tie_break)
        self.order: TotalOrder = self.lattice.build_total_order(tie_break)
        self.group = ambient_group(self.lattice, self.order)
        self.pattern = pattern_of(self.lattice, self.order, graph.full)
        self.inventory = enumerate_generators(self.lattice, self.order)
        self.stabilisers = self.inventory.atoms()
        self.conjugations = conjugation_atoms(graph)

    def names(self, members) -> str:
        return '{' + ','.join(self.graph.names_of(members)) + '}'

    def record(self, check: str, ok: bool, message: Callable[[], str]):
        self.report.check(check).record(ok, lambda: f'{self.graph}: {message()}')

    def run(self, sampled: bool = True):
        names = self.STRUCTURAL + (self.SAMPLED if sampled else ())
        for name in names:
            started = time.perf_counter()
            try:
                getattr(self, name)()
            except RaagError as er:
                self.record(name, False, lambda: f'raised {er.__class__.__name__}: {er}')
            self.report.check(name).seconds += time.perf_counter() - started

    def closure_axioms(self):
        graph = self.graph
        for members in subsets(graph):
            orth = graph.orth(members)
            closure = graph.closure(members)
            ok = (
                members <= closure
                and graph.orth(graph.orth(orth)) == orth
                and graph.closure(orth) == orth
                and graph.closure(closure) == closure
            )
            for vertex in range(len(graph)):
                larger = members | VertexSet.from_indices([vertex])
                ok = ok and closure <= graph.closure(larger) and graph.orth(larger) <= orth
            self.record('closure_axioms', ok, lambda: f'Y={self.names(members)}')
        for vertex in range(len(graph)):
            self.record(
                'closure_axioms', graph.is_simplex(graph.closure([vertex])),
                lambda: f'cl({graph.names[vertex]}) is not a simplex',
            )

    def lattice_enumeration(self):
        brute = {self.graph.orth(members) for members in subsets(self.graph)}
        self.record(
            'lattice_enumeration', brute == set(self.lattice.closed_sets),
            lambda: f'{len(brute)} sets by brute force, {len(self.lattice)} enumerated',
        )

    def lattice_laws(self):
        lattice = self.lattice
        for first, second in itertools.combinations_with_replacement(lattice.closed_sets, 2):
            ok = (first & second) in lattice and self.graph.closure(first | second) in lattice
            self.record('lattice_laws', ok, lambda: f'{self.names(first)}, {self.names(second)}')
        for closed in lattice.closed_sets:
            union = VertexSet()
            for y in closed:
                union |= lattice.cl(y)
            self.record('lattice_laws', union == closed, lambda: f'{self.names(closed)} is not a union of closures')

    def boundary_classes(self):
        lattice = self.lattice
        for x in range(len(self.graph)):
            self.record(
                'boundary_classes', lattice.equiv_class(x) == lattice.boundary_class(x),
                lambda: f'[{self.graph.names[x]}] differs from its boundary description',
            )
        partition = [lattice.equiv_class(x) for x in lattice.x_min(self.order)]
        covered = VertexSet()
        disjoint = True
        for cls in partition:
            disjoint = disjoint and covered.isdisjoint(cls)
            covered |= cls
        self.record(
            'boundary_classes', disjoint and covered == self.graph.full, lambda: 'X^min classes do not partition X',
        )
        for closed in lattice.closed_sets:
            ok = all(lattice.equiv_class(y) <= closed for y in closed)
            self.record('boundary_classes', ok, lambda: f'{self.names(closed)} is not a union of classes')

    def total_order(self):
        lattice, order = self.lattice, self.order
        size = len(self.graph)
        for x, y in itertools.permutations(range(size), 2):
            if lattice.l_less(x, y):
                self.record(
                    'total_order', order.precedes(y, x),
                    lambda: '{0} <_L {1} but {1} is not before {0}'.format(self.graph.names[x], self.graph.names[y]),
                )
        sequence = order.sequence
        for low, high in itertools.combinations(range(size), 2):
            if lattice.equiv_class(sequence[low]) == lattice.equiv_class(sequence[high]):
                ok = all(
                    lattice.equiv_class(sequence[middle]) == lattice.equiv_class(sequence[low])
                    for middle in range(low, high)
                )
                self.record(
                    'total_order', ok, lambda: f'class of {self.graph.names[sequence[low]]} is not an interval',
                )
        again = enumerate_lattice(self.graph).build_total_order(order.tie_break)
        self.record('total_order', again == order, lambda: 'rebuilding the order gave a different sequence')
        for height, stage in enumerate(lattice.stages):
            for cls in stage:
                for x in cls:
                    below_placed = all(lattice.heights[y] < height for y in lattice.below(x))
                    self.record('total_order', below_placed, lambda: f'height of {self.graph.names[x]}')

    def subgraph_lattices(self):
        for closed in self.lattice.closed_sets:
            inside = set(self.lattice.sublattice(closed))
            ok = all(member in inside for member in self.lattice.lattice_of_subgraph(closed))
            self.record('subgraph_lattices', ok, lambda: f'L(Gamma({self.names(closed)})) not in L(Y)')

    def transvection_sets(self):
        general = set(general_transvection_pairs(self.graph))
        ok = set(transvection_pairs(self.lattice)) <= general
        self.record('transvection_sets', ok, lambda: 'a stabilising transvection is not a transvection')

    def generators_stabilise(self):
        for atom in self.stabilisers:
            phi = atom.automap(self.group)
            ok = stabilizes_L(phi, self.lattice) and stabilizes_L_exhaustive(phi, self.lattice)
            self.record('generators_stabilise', ok, lambda: f'{atom}')
        if len(self.lattice.classes) == len(self.graph) and not transvection_pairs(self.lattice):
            # trivial <_L and singleton classes: only sign changes survive
            matrix = self._sample(self.pattern)
            ok = all(isinstance(atom, SignFlip) for atom in decompose(matrix))
            self.record('generators_stabilise', ok, lambda: f'A={matrix.rows} needs more than sign flips')

    def _sample(self, pattern):
        return sample(pattern, self.sizes.bound, self.rng.randrange(2 ** 32))

    def pattern_algebra(self):
        lattice = self.lattice
        closed_sets = lattice.closed_sets
        for number in range(self.pairs):
            closed = closed_sets[number % len(closed_sets)]
            pattern = pattern_of(lattice, self.order, closed)
            first, second = self._sample(pattern), self._sample(pattern)
            product = first * second
            inverse = first.inverse()
            ok = (
                is_member(product.entries, pattern)
                and is_member(inverse.entries, pattern)
                and (first * inverse).is_identity()
                and (inverse * first).is_identity()
                and abs(product.det()) == 1
            )
            unipotent, diagonal = product.split_semidirect()
            ok = ok and unipotent.is_in_UY() and diagonal.is_in_DY() and unipotent * diagonal == product
            ok = ok and product.block_diagonal() == first.block_diagonal() * second.block_diagonal()
            sub = self.rng.choice(lattice.sublattice(closed))
            ok = ok and product.minor(sub) == first.minor(sub) * second.minor(sub)
            ok = ok and is_member(product.minor(sub).entries, pattern.restrict(sub))
            small = self._sample(pattern.restrict(sub))
            ok = ok and small.embed(closed).minor(sub) == small
            ok = ok and (small * small).embed(closed) == small.embed(closed) * small.embed(closed)
            whole = first.embed(self.graph.full)
            ok = ok and whole.minor(sub) == whole.minor(closed).minor(sub)
            self.record(
                'pattern_algebra', ok,
                lambda: f'Y={self.names(closed)} A={first.rows} B={second.rows} Z={self.names(sub)}',
            )

    def max_support_pattern(self):
        for _ in range(self.sizes.matrices):
            matrix = self._sample(self.pattern)
            self.record(
                'max_support_pattern', max_pattern_check(matrix.entries, self.lattice, self.order),
                lambda: f'A={matrix.rows}',
            )

    def _random_word(self) -> GeneratorWord:
        return random_generator_word(self.inventory, self.rng.randint(0, self.sizes.word_length), self.rng)

    def matrix_homomorphism(self):
        if not self.stabilisers:
            return
        for _ in range(self.sizes.word_pairs):
            first, second = self._random_word(), self._random_word()
            phi, psi = first.automap(self.group), second.automap(self.group)
            ok = (
                matrix_of(phi.compose(psi), self.lattice, self.order)
                == matrix_of(phi, self.lattice, self.order) * matrix_of(psi, self.lattice, self.order)
                and matrix_of(phi, self.lattice, self.order) == first.matrix(self.pattern)
                and stabilizes_L(phi, self.lattice)
            )
            self.record('matrix_homomorphism', ok, lambda: f'words {first} and {second}')

    def decomposition(self):
        for _ in range(self.sizes.matrices):
            matrix = self._sample(self.pattern)
            word = decompose(matrix)
            phi = automap_of(matrix)
            ok = (
                word.matrix(self.pattern) == matrix
                and matrix_of(word.automap(self.group), self.lattice, self.order) == matrix
                and matrix_of(phi, self.lattice, self.order) == matrix
                and automap_of(matrix_of(phi, self.lattice, self.order)) == phi
            )
            self.record('decomposition', ok, lambda: f'A={matrix.rows} word={word}')

    def restriction_diagram(self):
        if not self.stabilisers:
            return
        lattice = self.lattice
        for _ in range(self.sizes.restriction_words):
            word = self._random_word()
            phi = word.automap(self.group)
            matrix = matrix_of(phi, lattice, self.order)
            for closed in lattice.closed_sets:
                restricted = phi.restrict(closed)
                ok = matrix_of(restricted, lattice, self.order) == matrix.minor(closed)
                for sub in lattice.sublattice(closed):
                    ok = ok and matrix.minor(closed).minor(sub) == matrix.minor(sub)
                    ok = ok and restricted.restrict(self.graph.names_of(sub)).as_dict() == phi.restrict(sub).as_dict()
                self.record('restriction_diagram', ok, lambda: f'{word} on {self.names(closed)}')

    def vertex_splits(self):
        for _ in range(self.sizes.splits):
            matrix = self._sample(self.pattern)
            for x in range(len(self.graph)):
                minor = matrix.minor(self.lattice.cl(x))
                unipotent, diagonal = minor.split_semidirect()
                ok = unipotent.is_in_UY() and diagonal.is_in_DY() and unipotent * diagonal == minor
                self.record('vertex_splits', ok, lambda: f'A={matrix.rows} at {self.graph.names[x]}')

    def elementary_witnesses(self):
        if len(self.graph) > WITNESS_MAX_VERTICES:
            return
        for spec in elementary_conjugations(self.graph):
            phi = elementary_conj(self.group, spec)
            allowed = {
                self.group.identity, self.group.generator(spec.vertex), self.group.generator(spec.vertex, -1),
            }
            ok = is_conjugating(phi)
            for closed in self.lattice.closed_sets:
                witness = conj_stab_witness(
                    phi, closed, self.lattice, self.sizes.witness_length_factor, self.sizes.witness_search_limit,
                )
                ok = ok and witness is not None and witness.conjugator in allowed
            self.record('elementary_witnesses', ok, lambda: f'{ElementaryConjugation(*spec)}')

    def _random_theta(self):
        length = self.rng.randint(0, self.sizes.composition_length)
        word = random_composition(
            self.lattice, self.order, length, self.rng, self.stabilisers, self.conjugations,
        )
        return word, word.automap(self.group)

    def conjugating_normal(self):
        conjugations = elementary_conjugations(self.graph)
        if not conjugations:
            return
        for _ in range(self.sizes.thetas):
            word, theta = self._random_theta()
            spec = self.rng.choice(conjugations)
            ok = is_normal_conjugate(theta, elementary_conj(self.group, spec))
            self.record('conjugating_normal', ok, lambda: f'theta={word} spec={spec}')

    def semidirect_factorization(self):
        length = self.sizes.composition_length
        for number in range(self.sizes.thetas):
            word, theta = self._random_theta()
            factors = factor_semidirect(theta, self.lattice, self.order)
            ok = (
                factors.tau.compose(factors.phi) == theta
                and is_conjugating(factors.tau)
                and stabilizes_L(factors.phi, self.lattice)
                and factors.check
            )
            alone = factor_semidirect(factors.phi, self.lattice, self.order)
            ok = ok and alone.tau.is_identity() and alone.phi == factors.phi
            if number % REBUILD_EVERY == 0:
                known_tau = _random_atoms(self.conjugations, self.rng, length).automap(self.group)
                known_phi = _random_atoms(self.stabilisers, self.rng, length).automap(self.group)
                rebuilt = factor_semidirect(known_tau.compose(known_phi), self.lattice, self.order)
                ok = ok and rebuilt.tau == known_tau and rebuilt.phi == known_phi
            self.record('semidirect_factorization', ok, lambda: f'theta={word}')


def _random_atoms(atoms, rng, length) -> GeneratorWord:
    if not atoms:
        return GeneratorWord()
    return GeneratorWord(tuple(rng.choice(atoms) for _ in range(rng.randint(0, length))))


class GraphTask(NamedTuple):
    """One graph of a run; ``pairs`` is 0 for graphs that only get the structural checks."""
    graph: Graph
    seed: int
    sizes: Sizes
    sampled: bool
    pairs: int


def check_graph(task: GraphTask) -> Report:
    """The checks of one graph as a report of its own; runs in worker processes."""
    report = Report(task.seed, graphs=1)
    logger.debug('Checking %s with seed %d', task.graph, task.seed)
    GraphChecks(task.graph, report, random.Random(task.seed), task.sizes, task.pairs).run(task.sampled)
    return report


def plan(graphs: Sequence[Graph], seed: int, sizes: Sizes) -> List[GraphTask]:
    sampled = representatives(graphs)
    families = Counter(len(graphs[position]) for position in sampled)
    return [
        GraphTask(
            graph,
            seed * 1000003 + position,
            sizes,
            position in sampled,
            math.ceil(sizes.pairs / families[len(graph)]) if position in sampled else 0,
        )
        for position, graph in enumerate(graphs)
    ]


def verify(graphs, seed: int, sizes: Optional[Sizes] = None, workers: int = 1) -> Report:
    """
    Run every check over ``graphs``. ``workers`` processes share the graphs,
    0 meaning one per CPU; partial reports are merged in corpus order, so
    the result does not depend on the number of workers.
    """
    sizes = sizes or Sizes()
    graphs = list(graphs)
    tasks = plan(graphs, seed, sizes)
    report = Report(seed)
    logger.info(
        'Verification run with seed %d over %d graphs, %d isomorphism types',
        seed, len(tasks), sum(task.sampled for task in tasks),
    )
    started = time.perf_counter()
    if workers == 1 or len(tasks) < 2:
        partials = [check_graph(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers or None) as executor:
            partials = list(executor.map(check_graph, tasks, chunksize=max(1, len(tasks) // 256)))
    for partial in partials:
        report.merge(partial)
    for result in report.results.values():
        if result.failed:
            logger.warning('%s failed %d times', result.name, result.failed)
    logger.info('Verified %d graphs in %.1f s', report.graphs, time.perf_counter() - started)
    return report
