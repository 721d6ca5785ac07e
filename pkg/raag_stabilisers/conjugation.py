"""
Conjugating automorphisms and the splitting of a conjugate-stabilising
automorphism into a conjugating part followed by a stabilising part.
"""
import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from .automorphisms import (
    Atom, AutMap, GeneratorWord, ambient_group, decompose, enumerate_generators, invert_stabiliser,
    matrix_of, stabilizes_L,
)
from .conf import get_witness_length_factor, get_witness_search_limit
from .exceptions import ConsistencyError, DomainError, IllegalAtomError, NotAStabiliserError
from .graphs import Graph, SetLike, VertexSet
from .lattice import ClosureLattice, TotalOrder
from .words import PartiallyCommutativeGroup, PCWord, parse_literal


logger = logging.getLogger(__name__)


class ElemConjSpec(NamedTuple):
    """Conjugate every generator of ``component`` by vertex^direction."""
    vertex: str
    component: Tuple[str, ...]
    direction: int = 1

    def validate(self, graph: Graph):
        members = graph.vertex_set(self.component)
        if self.direction not in (1, -1):
            raise IllegalAtomError(f'Direction must be 1 or -1, got {self.direction!r}.')
        if members not in graph.ball_components(self.vertex):
            raise IllegalAtomError(
                '{{{}}} is not a component of the graph minus {}^perp.'.format(', '.join(self.component), self.vertex)
            )

    def inverse(self) -> 'ElemConjSpec':
        return self._replace(direction=-self.direction)


def elementary_conjugations(graph: Graph) -> List[ElemConjSpec]:
    specs = []
    for x in range(len(graph)):
        for component in graph.ball_components(x):
            for direction in (1, -1):
                specs.append(ElemConjSpec(graph.names[x], graph.names_of(component), direction))
    return specs


def elementary_conj(group: PartiallyCommutativeGroup, spec: ElemConjSpec) -> AutMap:
    spec.validate(group.graph)

    def images(direction):
        by = group.generator(spec.vertex, direction)
        return AutMap.from_images(group, {y: group.generator(y).conjugate(by) for y in spec.component}).images

    return AutMap(group, images(spec.direction), images(-spec.direction))


def inner(group: PartiallyCommutativeGroup, word: PCWord) -> AutMap:
    """x -> word^-1 x word"""
    group.check(word)

    def images(by):
        return tuple(group.generator(x).conjugate(by) for x in range(len(group.graph)))

    return AutMap(group, images(word), images(word.inverse()))


@dataclass(frozen=True)
class ElementaryConjugation(Atom):
    vertex: str
    component: Tuple[str, ...]
    direction: int = 1

    @property
    def spec(self) -> ElemConjSpec:
        return ElemConjSpec(self.vertex, tuple(self.component), self.direction)

    def validate(self, lattice):
        self.spec.validate(lattice.graph)

    def automap(self, group):
        return elementary_conj(group, self.spec)

    def inverse(self):
        return ElementaryConjugation(self.vertex, self.component, -self.direction)

    def as_dict(self):
        return {'conj': self.vertex, 'component': list(self.component), 'direction': self.direction}

    def __str__(self):
        return 'conj({}; {})^{}'.format(self.vertex, ','.join(self.component), self.direction)


@dataclass(frozen=True)
class InnerConjugation(Atom):
    """Conjugation by a fixed element, stored as (name, exponent) pairs."""
    letters: Tuple[Tuple[str, int], ...]

    @classmethod
    def from_literal(cls, literal: str) -> 'InnerConjugation':
        return cls(tuple(parse_literal(literal)))

    def validate(self, lattice):
        for name, _ in self.letters:
            lattice.graph.index(name)

    def automap(self, group):
        return inner(group, group.word(self.letters))

    def inverse(self):
        return InnerConjugation(tuple((name, -exponent) for name, exponent in reversed(self.letters)))

    @property
    def literal(self) -> str:
        return ' '.join(name if exponent == 1 else f'{name}^{exponent}' for name, exponent in self.letters) or '1'

    def as_dict(self):
        return {'inner': self.literal}

    def __str__(self):
        return f'inner({self.literal})'


def is_conjugating(phi: AutMap) -> bool:
    """Every generator is sent to a conjugate of itself."""
    group = phi.group
    return all(
        image.cyclic_reduce().core == group.generator(x)
        for x, image in enumerate(phi.images)
    )


def is_normal_conjugate(theta: AutMap, phi: AutMap) -> bool:
    """theta^-1 phi theta is again conjugating."""
    return is_conjugating(theta.inverse().compose(phi).compose(theta))


class ConjWitness(NamedTuple):
    """G(Y)^phi = G(Y)^conjugator, i.e. conjugator * phi(y) * conjugator^-1 lies in G(Y) for y in Y."""
    closed_set: VertexSet
    conjugator: PCWord
    onto_checked: bool


def _candidates(
    group: PartiallyCommutativeGroup, conjugators: Sequence[PCWord], members: VertexSet, bound: int,
) -> List[PCWord]:
    found = {group.identity}
    orth = group.graph.orth(members)
    for conjugator in conjugators:
        letters = conjugator.letters
        pieces = {conjugator}
        for cut in range(1, len(letters)):
            pieces.add(PCWord(group, group.normalize(letters[cut:])))
            pieces.add(PCWord(group, group.normalize(letters[:cut])))
        for piece in list(pieces):
            pieces.add(_strip_to_fixpoint(piece, members, orth))
        found.update(piece for piece in pieces if len(piece) <= bound)
    return sorted(found, key=lambda word: (len(word), [group.letter_key(letter) for letter in word.letters]))


def _letter_search(
    group: PartiallyCommutativeGroup, conjugators: Sequence[PCWord], bound: int, limit: int,
) -> Iterator[PCWord]:
    """
    Normal forms over the letters of the conjugators, both signs, shortest
    first and at most ``limit`` of them. Products of pieces taken from
    different generators only turn up here.
    """
    letters: Set = set()
    for conjugator in conjugators:
        for index, sign in conjugator.letters:
            letters.update({(index, sign), (index, -sign)})
    steps = [PCWord(group, (letter,)) for letter in sorted(letters, key=group.letter_key)]
    seen = {()}
    frontier = [group.identity]
    for _ in range(bound):
        extended = []
        for word in frontier:
            for step in steps:
                candidate = word * step
                if candidate.letters in seen or len(candidate) <= len(word):
                    continue
                if len(seen) > limit:
                    return
                seen.add(candidate.letters)
                extended.append(candidate)
                yield candidate
        frontier = extended


def _strip_to_fixpoint(word: PCWord, first: SetLike, second: SetLike) -> PCWord:
    while True:
        stripped, word = word.strip_left_divisors(first)
        commuting, word = word.strip_left_divisors(second)
        if stripped.is_identity and commuting.is_identity:
            return word


def conj_stab_witness(
    phi: AutMap, members: SetLike, lattice: ClosureLattice,
    length_factor: Optional[int] = None, search_limit: Optional[int] = None,
) -> Optional[ConjWitness]:
    """
    Look for g with G(Y)^phi = G(Y)^g no longer than ``length_factor`` times
    the longest image of Y. Pieces of the conjugators that cyclically reduce
    the images of Y are tried first, then words in their letters in order of
    length; None when nothing within the bound passes.
    """
    members = lattice.closed(members)
    group = phi.group
    if not members:
        return ConjWitness(members, group.identity, True)
    factor = length_factor or get_witness_length_factor()
    limit = search_limit or get_witness_search_limit()
    bound = factor * max(len(phi.images[y]) for y in members)
    conjugators = [phi.images[y].cyclic_reduce().conjugator for y in members]
    backward = phi.inverse() if phi.has_inverse else None

    def passes(candidate):
        inverse = candidate.inverse()
        if not all(phi.images[y].conjugate(inverse).in_parabolic(members) for y in members):
            return False
        return backward is None or all(
            backward(group.generator(y).conjugate(candidate)).in_parabolic(members) for y in members
        )

    tried = set()
    pieces = _candidates(group, conjugators, members, bound)
    for candidate in itertools.chain(pieces, _letter_search(group, conjugators, bound, limit)):
        if candidate.letters in tried:
            continue
        tried.add(candidate.letters)
        if passes(candidate):
            logger.debug('Witness %s for %s found among %d candidates', candidate, members, len(tried))
            return ConjWitness(members, candidate, phi.has_inverse)
    logger.warning(
        'No conjugator of length at most %d carries G(%s) onto its image (%d candidates tried)',
        bound, ','.join(group.graph.names_of(members)), len(tried),
    )
    return None


def in_conjugate_stabiliser(
    phi: AutMap, lattice: ClosureLattice,
    length_factor: Optional[int] = None, search_limit: Optional[int] = None,
) -> bool:
    """Witnesses exist for every closed set."""
    return all(
        conj_stab_witness(phi, closed, lattice, length_factor, search_limit) is not None
        for closed in lattice.closed_sets
    )


class Factorization(NamedTuple):
    """theta = tau then phi, with tau conjugating and phi stabilising."""
    tau: AutMap
    phi: AutMap
    conjugators: Dict[str, PCWord]
    stabiliser_word: GeneratorWord
    check: bool

    def as_dict(self):
        return {
            'tau': self.tau.as_dict(),
            'phi': self.stabiliser_word.as_list(),
            'phi_images': self.phi.as_dict(),
            'conjugators': {name: str(word) for name, word in self.conjugators.items()},
            'check': 'pass' if self.check else 'fail',
        }


def factor_semidirect(theta: AutMap, lattice: ClosureLattice, order: TotalOrder) -> Factorization:
    """
    Write theta(x) = g_x^-1 u_x g_x with u_x in G(cl(x)) and g_x free of left
    divisors in G(cl(x)) and in G(x^perp); phi sends x to u_x and tau is
    theta followed by phi^-1.

    theta lies in the conjugate-stabiliser exactly when every u_x lands in
    G(cl(x)) and phi is a stabilising automorphism, so those are the checks
    that raise DomainError.
    """
    group = theta.group
    graph = group.graph
    cores, conjugators = [], {}
    for x, image in enumerate(theta.images):
        closure = lattice.cl(x)
        conjugator, core = image.cyclic_reduce()
        if not core.in_parabolic(closure):
            raise DomainError(f'{graph.names[x]} -> {image} is not conjugate into G(cl({graph.names[x]})).')
        cores.append(core)
        conjugators[graph.names[x]] = _strip_to_fixpoint(conjugator, closure, graph.ball(x))

    phi = AutMap(group, tuple(cores))
    if not phi.is_endomorphism() or not stabilizes_L(phi, lattice):
        raise DomainError(f'The map {phi} read off the cyclic cores is not in St(L).')
    phi_inverse = invert_stabiliser(phi, lattice, order)
    phi = phi_inverse.inverse()
    tau = theta.compose(phi_inverse)

    if tau.compose(phi) != theta:
        raise ConsistencyError('tau followed by phi does not give back theta.')
    if not is_conjugating(tau):
        raise ConsistencyError(f'The conjugating part {tau} is not conjugating.')
    try:
        stabiliser_word = decompose(matrix_of(phi, lattice, order))
    except NotAStabiliserError as er:
        raise ConsistencyError(str(er))
    logger.info('Factored %s into a conjugating part and %d stabiliser atoms', theta, len(stabiliser_word))
    return Factorization(tau, phi, conjugators, stabiliser_word, True)


def conjugation_atoms(graph: Graph) -> List[ElementaryConjugation]:
    return [ElementaryConjugation(*spec) for spec in elementary_conjugations(graph)]


def random_composition(
    lattice: ClosureLattice, order: TotalOrder, length: int, rng: random.Random,
    stabilisers: Optional[Sequence[Atom]] = None, conjugations: Optional[Sequence[Atom]] = None,
) -> GeneratorWord:
    """
    Stabiliser atoms, elementary conjugations and inner conjugations by
    single letters, mixed. The atom pools are enumerated when not given.
    """
    if stabilisers is None:
        stabilisers = enumerate_generators(lattice, order).atoms()
    if conjugations is None:
        conjugations = conjugation_atoms(lattice.graph)
    names = lattice.graph.names
    atoms = []
    for _ in range(length):
        roll = rng.random()
        if conjugations and roll < 0.35:
            atoms.append(rng.choice(conjugations))
        elif roll < 0.45:
            atoms.append(InnerConjugation(((rng.choice(names), rng.choice((1, -1))),)))
        else:
            atom = rng.choice(stabilisers)
            atoms.append(atom.inverse() if rng.random() < 0.5 else atom)
    return GeneratorWord(tuple(atoms))


def composition_automap(word: GeneratorWord, lattice: ClosureLattice, order: TotalOrder) -> AutMap:
    word.validate(lattice)
    return word.automap(ambient_group(lattice, order))

