"""
Automorphisms of G(Gamma) as maps on the generators, the generating atoms of
the stabiliser St(L), and the passage between stabilisers and matrices.

Automorphisms act on the right: ``phi.compose(psi)`` applies phi first, and
a GeneratorWord [A1, ..., An] is the automorphism A1 ... An, whose matrix is
the product [A1] ... [An].
"""
import functools
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from django.utils.functional import cached_property

from .exceptions import (
    ConsistencyError, IllegalAtomError, InputError, NotAStabiliserError, PreconditionError,
)
from .graphs import Graph, SetLike
from .lattice import ClosureLattice, TotalOrder
from .matrices import (
    StabMatrix, StabPattern, block_det, factor_unimodular, identity_rows, pattern_of, unimodular_inverse,
)
from .words import PartiallyCommutativeGroup, PCWord, identity_images


logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=256)
def ambient_group(lattice: ClosureLattice, order: Optional[TotalOrder] = None) -> PartiallyCommutativeGroup:
    return PartiallyCommutativeGroup(lattice.graph, order)


@dataclass(frozen=True)
class AutMap:
    """
    An endomorphism given by the images of the generators. ``inverse_images``
    is filled in whenever the map was built from invertible pieces.
    """
    group: PartiallyCommutativeGroup = field(repr=False)
    images: Tuple[PCWord, ...]
    inverse_images: Optional[Tuple[PCWord, ...]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.images) != len(self.group.graph):
            raise InputError('An automorphism needs one image per generator.')
        for image in self.images:
            self.group.check(image)

    @classmethod
    def identity(cls, group: PartiallyCommutativeGroup) -> 'AutMap':
        images = tuple(identity_images(group))
        return cls(group, images, images)

    @classmethod
    def from_images(cls, group: PartiallyCommutativeGroup, mapping: Dict) -> 'AutMap':
        """Generators missing from ``mapping`` are fixed."""
        images = list(identity_images(group))
        for vertex, image in mapping.items():
            images[group.graph.index(vertex)] = image if isinstance(image, PCWord) else group.word(image)
        return cls(group, tuple(images))

    @property
    def graph(self) -> Graph:
        return self.group.graph

    def image(self, vertex) -> PCWord:
        return self.images[self.graph.index(vertex)]

    def __call__(self, word) -> PCWord:
        if not isinstance(word, PCWord):
            word = self.group.word(word)
        self.group.check(word)
        return word.substitute(self.images)

    @property
    def has_inverse(self) -> bool:
        return self.inverse_images is not None

    def inverse(self) -> 'AutMap':
        if self.inverse_images is None:
            raise PreconditionError('The inverse of this map is not known.')
        return AutMap(self.group, self.inverse_images, self.images)

    @cached_property
    def moved(self) -> int:
        """Bitmask of the generators not sent to themselves."""
        return _moved(self.images)

    @cached_property
    def inverse_moved(self) -> int:
        return _moved(self.inverse_images)

    def compose(self, other: 'AutMap') -> 'AutMap':
        """Apply self, then other."""
        self.group.check(other.group.identity)
        images = tuple(_apply(image, other.images, other.moved) for image in self.images)
        inverse_images = None
        if self.has_inverse and other.has_inverse:
            inverse_images = tuple(
                _apply(image, self.inverse_images, self.inverse_moved) for image in other.inverse_images
            )
        return AutMap(self.group, images, inverse_images)

    def is_identity(self) -> bool:
        return all(image.letters == ((index, 1),) for index, image in enumerate(self.images))

    def is_endomorphism(self) -> bool:
        """Images of commuting generators commute."""
        return all(
            self.images[x] * self.images[y] == self.images[y] * self.images[x]
            for x, y in self.graph.edges
        )

    def restrict(self, members: SetLike) -> 'AutMap':
        """The map on G(Y), which it must leave invariant."""
        members = self.graph.vertex_set(members)
        subgroup = self.group.subgroup(members)
        names = self.graph.names

        def local(images):
            result = []
            for vertex in members:
                image = images[vertex]
                if not image.in_parabolic(members):
                    raise NotAStabiliserError(f'{names[vertex]} -> {image} leaves G(Y).')
                result.append(subgroup.translate(image))
            return tuple(result)

        inverse_images = None
        if self.has_inverse:
            try:
                inverse_images = local(self.inverse_images)
            except NotAStabiliserError:
                inverse_images = None
        return AutMap(subgroup, local(self.images), inverse_images)

    def as_dict(self):
        return {name: str(image) for name, image in zip(self.graph.names, self.images)}

    def __str__(self):
        return ', '.join(f'{name} -> {image}' for name, image in self.as_dict().items())


def _moved(images: Tuple[PCWord, ...]) -> int:
    return sum(1 << index for index, image in enumerate(images) if image.letters != ((index, 1),))


def _apply(word: PCWord, images: Tuple[PCWord, ...], moved: int) -> PCWord:
    if not word.alpha.bits & moved:
        return word
    return word.substitute(images)


def _eye(pattern: StabPattern) -> List[List[int]]:
    return [list(row) for row in identity_rows(len(pattern))]


class Atom:
    """A generator of one of the kinds composable into automorphisms."""

    def validate(self, lattice: ClosureLattice):
        raise NotImplementedError

    def automap(self, group: PartiallyCommutativeGroup) -> AutMap:
        raise NotImplementedError

    def inverse(self) -> 'Atom':
        raise NotImplementedError

    def as_dict(self):
        raise NotImplementedError

    @property
    def is_stabiliser(self) -> bool:
        return False

    def matrix(self, pattern: StabPattern) -> StabMatrix:
        raise IllegalAtomError(f'{self} has no stabiliser matrix.')


@dataclass(frozen=True)
class SignFlip(Atom):
    vertex: str

    def validate(self, lattice):
        lattice.graph.index(self.vertex)

    def automap(self, group):
        images = AutMap.from_images(group, {self.vertex: group.generator(self.vertex, -1)}).images
        return AutMap(group, images, images)

    def inverse(self):
        return self

    @property
    def is_stabiliser(self):
        return True

    def matrix(self, pattern):
        entries = _eye(pattern)
        position = pattern.position(self.vertex)
        entries[position][position] = -1
        return StabMatrix(pattern, entries)

    def as_dict(self):
        return {'flip': self.vertex}

    def __str__(self):
        return f'flip({self.vertex})'


@dataclass(frozen=True)
class ClassMove(Atom):
    """A unimodular change of basis of one class [x] of size at least two."""
    members: Tuple[str, ...]
    rows: Tuple[Tuple[int, ...], ...]

    def validate(self, lattice):
        graph = lattice.graph
        members = graph.vertex_set(self.members)
        if len(members) != len(self.members) or len(members) < 2:
            raise IllegalAtomError('A class move needs at least two distinct vertices.')
        if lattice.equiv_class(self.members[0]) != members:
            raise IllegalAtomError('{{{}}} is not an equivalence class.'.format(', '.join(self.members)))
        size = len(self.members)
        if len(self.rows) != size or any(len(row) != size for row in self.rows):
            raise IllegalAtomError(f'A class move on {size} vertices needs a {size}x{size} matrix.')
        if not all(isinstance(entry, int) and not isinstance(entry, bool) for row in self.rows for entry in row):
            raise IllegalAtomError('Class move entries must be integers.')
        if abs(block_det(tuple(tuple(row) for row in self.rows))) != 1:
            raise IllegalAtomError(f'{[list(row) for row in self.rows]} is not invertible over the integers.')

    def _images(self, group, rows):
        return {
            member: group.word(list(zip(self.members, row)))
            for member, row in zip(self.members, rows)
        }

    def automap(self, group):
        forward = AutMap.from_images(group, self._images(group, self.rows))
        backward = AutMap.from_images(group, self._images(group, self.inverse().rows))
        return AutMap(group, forward.images, backward.images)

    def inverse(self):
        return ClassMove(self.members, unimodular_inverse(tuple(tuple(row) for row in self.rows)))

    @property
    def is_stabiliser(self):
        return True

    def matrix(self, pattern):
        entries = _eye(pattern)
        positions = [pattern.position(member) for member in self.members]
        for i, row in zip(positions, self.rows):
            for j, entry in zip(positions, row):
                entries[i][j] = entry
        return StabMatrix(pattern, entries)

    def as_dict(self):
        return {'class_move': {'class': list(self.members), 'rows': [list(row) for row in self.rows]}}

    def __str__(self):
        return 'move({}: {})'.format(','.join(self.members), [list(row) for row in self.rows])


@dataclass(frozen=True)
class Transvection(Atom):
    """source -> source * target^exponent, legal when source^perp is a proper subset of target^perp."""
    source: str
    target: str
    exponent: int = 1

    def validate(self, lattice):
        graph = lattice.graph
        if not is_transvection_pair(graph, self.source, self.target):
            raise IllegalAtomError(
                f'tr({self.source}, {self.target}) is not a stabilising transvection: '
                f'{self.source}^perp is not a proper subset of {self.target}^perp.'
            )
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise IllegalAtomError(f'Transvection exponent {self.exponent!r} is not an integer.')

    def automap(self, group):
        def images(exponent):
            return {self.source: group.word([(self.source, 1), (self.target, exponent)])}
        forward = AutMap.from_images(group, images(self.exponent))
        backward = AutMap.from_images(group, images(-self.exponent))
        return AutMap(group, forward.images, backward.images)

    def inverse(self):
        return Transvection(self.source, self.target, -self.exponent)

    @property
    def is_stabiliser(self):
        return True

    def matrix(self, pattern):
        entries = _eye(pattern)
        entries[pattern.position(self.source)][pattern.position(self.target)] = self.exponent
        return StabMatrix(pattern, entries)

    def as_dict(self):
        return {'tr': [self.source, self.target], 'e': self.exponent}

    def __str__(self):
        return f'tr({self.source}, {self.target})^{self.exponent}'


@dataclass(frozen=True)
class GeneratorWord:
    atoms: Tuple[Atom, ...] = ()

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __add__(self, other: 'GeneratorWord') -> 'GeneratorWord':
        return GeneratorWord(self.atoms + other.atoms)

    def validate(self, lattice: ClosureLattice):
        for atom in self.atoms:
            atom.validate(lattice)

    @property
    def is_stabiliser(self) -> bool:
        return all(atom.is_stabiliser for atom in self.atoms)

    def inverse(self) -> 'GeneratorWord':
        return GeneratorWord(tuple(atom.inverse() for atom in reversed(self.atoms)))

    def automap(self, group: PartiallyCommutativeGroup) -> AutMap:
        result = AutMap.identity(group)
        for atom in self.atoms:
            result = result.compose(atom.automap(group))
        return result

    def matrix(self, pattern: StabPattern) -> StabMatrix:
        result = pattern.identity()
        for atom in self.atoms:
            result = result * atom.matrix(pattern)
        return result

    def as_list(self):
        return [atom.as_dict() for atom in self.atoms]

    def __str__(self):
        return ' . '.join(str(atom) for atom in self.atoms) or 'id'


def is_transvection_pair(graph: Graph, x, y) -> bool:
    """x^perp is a proper subset of y^perp."""
    return graph.ball(x) < graph.ball(y)


def is_general_transvection_pair(graph: Graph, x, y) -> bool:
    """x != y and x^perp minus x lies in y^perp: tr(x, y) is an automorphism."""
    x, y = graph.index(x), graph.index(y)
    return x != y and graph.ball(x) - graph.vertex_set([x]) <= graph.ball(y)


def transvection_pairs(lattice: ClosureLattice, order: Optional[TotalOrder] = None) -> List[Tuple[int, int]]:
    graph = lattice.graph
    pairs = [
        (x, y)
        for x in range(len(graph))
        for y in range(len(graph))
        if is_transvection_pair(graph, x, y)
    ]
    if order is not None:
        pairs.sort(key=lambda pair: (order.positions[pair[0]], order.positions[pair[1]]))
    return pairs


def general_transvection_pairs(graph: Graph) -> List[Tuple[int, int]]:
    return [
        (x, y)
        for x in range(len(graph))
        for y in range(len(graph))
        if is_general_transvection_pair(graph, x, y)
    ]


class ClassGenerators(NamedTuple):
    members: Tuple[str, ...]
    moves: Tuple[ClassMove, ...]


class GeneratorInventory(NamedTuple):
    flips: Tuple[SignFlip, ...]
    classes: Tuple[ClassGenerators, ...]
    transvections: Tuple[Transvection, ...]

    def atoms(self) -> List[Atom]:
        return [
            *self.flips,
            *(move for generators in self.classes for move in generators.moves),
            *self.transvections,
        ]

    def as_dict(self):
        return {
            'J': [flip.vertex for flip in self.flips],
            'V': [
                {'class': list(generators.members), 'moves': [move.as_dict() for move in generators.moves]}
                for generators in self.classes
            ],
            'Tr': [[tr.source, tr.target] for tr in self.transvections],
        }


def class_generators(members: Sequence[str]) -> Tuple[ClassMove, ...]:
    """A generating set of GL(n, Z) acting on one class: transvection, swap, sign and, for n >= 3, a cycle."""
    size = len(members)

    def rows(entries):
        matrix = [[int(i == j) for j in range(size)] for i in range(size)]
        for (i, j), value in entries.items():
            matrix[i][j] = value
        return tuple(tuple(row) for row in matrix)

    moves = [
        rows({(0, 1): 1}),
        rows({(0, 0): 0, (1, 1): 0, (0, 1): 1, (1, 0): 1}),
        rows({(0, 0): -1}),
    ]
    if size >= 3:
        cycle = {(i, i): 0 for i in range(size)}
        cycle.update({(i, (i + 1) % size): 1 for i in range(size)})
        moves.append(rows(cycle))
    return tuple(ClassMove(tuple(members), move) for move in moves)


def enumerate_generators(lattice: ClosureLattice, order: TotalOrder) -> GeneratorInventory:
    names = lattice.graph.names
    classes = sorted(
        (cls for cls in lattice.classes if len(cls) >= 2),
        key=lambda cls: order.positions[order.least(cls)],
    )
    return GeneratorInventory(
        flips=tuple(SignFlip(names[x]) for x in order.sequence),
        classes=tuple(
            ClassGenerators(
                tuple(names[x] for x in order.sort(cls)),
                class_generators([names[x] for x in order.sort(cls)]),
            )
            for cls in classes
        ),
        transvections=tuple(
            Transvection(names[x], names[y]) for x, y in transvection_pairs(lattice, order)
        ),
    )


def random_generator_word(inventory: GeneratorInventory, length: int, rng: random.Random) -> GeneratorWord:
    atoms = inventory.atoms()
    word = []
    for _ in range(length):
        atom = rng.choice(atoms)
        word.append(atom.inverse() if rng.random() < 0.5 else atom)
    return GeneratorWord(tuple(word))


def _exponent_row(lattice: ClosureLattice, group: PartiallyCommutativeGroup, vertex: int, image: PCWord):
    closure = lattice.cl(vertex)
    try:
        return group.translate(image).abelian_exponents(closure)
    except (PreconditionError, InputError):
        raise NotAStabiliserError(
            f'The image {image} of {lattice.graph.names[vertex]} does not lie in G(cl({lattice.graph.names[vertex]})).'
        )


def matrix_of(phi: AutMap, lattice: ClosureLattice, order: TotalOrder) -> StabMatrix:
    """
    [phi] over the closed set spanned by phi's generators: row y holds the
    exponents of phi(y) in the free abelian group G(cl(y)).
    """
    graph = lattice.graph
    group = ambient_group(lattice, order)
    members = graph.vertex_set(phi.graph.names)
    pattern = pattern_of(lattice, order, members)
    entries = [[0] * len(pattern) for _ in range(len(pattern))]
    for name, image in zip(phi.graph.names, phi.images):
        vertex = graph.index(name)
        row = pattern.position(vertex)
        for column_vertex, exponent in _exponent_row(lattice, group, vertex, image).items():
            if exponent and column_vertex not in members:
                raise NotAStabiliserError(f'The image of {name} leaves the closed set.')
            if exponent:
                entries[row][pattern.position(column_vertex)] = exponent
    try:
        return StabMatrix(pattern, entries)
    except PreconditionError as er:
        raise NotAStabiliserError(f'The map is not invertible on G(cl(x)): {er}')


def automap_of(matrix: StabMatrix) -> AutMap:
    """x_i -> prod_j x_j^a_ij, read in the total order."""
    pattern = matrix.pattern
    group = ambient_group(pattern.lattice, pattern.order)
    if pattern.closed_set != group.graph.full:
        group = group.subgroup(pattern.closed_set)
    names = pattern.names

    def images(entries):
        return tuple(group.from_exponents(dict(zip(names, row))) for row in entries)

    forward, backward = images(matrix.entries), images(matrix.inverse().entries)
    positions = [pattern.position(name) for name in group.graph.names]
    return AutMap(
        group,
        tuple(forward[position] for position in positions),
        tuple(backward[position] for position in positions),
    )


def invert_stabiliser(phi: AutMap, lattice: ClosureLattice, order: TotalOrder) -> AutMap:
    if phi.has_inverse:
        return phi.inverse()
    inverse = automap_of(matrix_of(phi, lattice, order).inverse())
    return AutMap(phi.group, tuple(phi.group.translate(image) for image in inverse.images), phi.images)


def stabilizes_L(phi: AutMap, lattice: ClosureLattice) -> bool:
    """
    St(L) = St(L_X): it is enough that every G(cl(x)) is mapped into itself
    and the induced integer matrix is invertible. Row x is supported on
    cl(x), so the determinant is the product over the classes of their
    diagonal blocks.
    """
    group = ambient_group(lattice)
    rows = []
    for vertex, image in enumerate(phi.images):
        try:
            exponents = _exponent_row(lattice, group, vertex, image)
        except NotAStabiliserError:
            return False
        rows.append(exponents)
    for cls in lattice.classes:
        block = tuple(tuple(rows[x].get(y, 0) for y in cls) for x in cls)
        if abs(block_det(block)) != 1:
            return False
    return True


def stabilizes_L_exhaustive(phi: AutMap, lattice: ClosureLattice) -> bool:
    """G(Y)^phi = G(Y) checked directly for every closed Y."""
    for closed in lattice.closed_sets:
        if not all(phi.images[y].in_parabolic(closed) for y in closed):
            return False
        if phi.has_inverse and not all(phi.inverse_images[y].in_parabolic(closed) for y in closed):
            return False
    return True


def restrict(phi: AutMap, members: SetLike, lattice: ClosureLattice) -> AutMap:
    return phi.restrict(lattice.closed(members))


def decompose(matrix: StabMatrix) -> GeneratorWord:
    """
    A word in sign flips, class moves and transvections with product
    ``matrix``: split off the block diagonal part, peel transvections from
    the unipotent part starting at the last row, then factor each diagonal
    block by row reduction.
    """
    pattern = matrix.pattern
    if pattern.closed_set != pattern.graph.full:
        raise InputError('Only matrices over the whole vertex set can be decomposed.')
    unipotent, diagonal = matrix.split_semidirect()
    word = GeneratorWord(tuple(_peel_transvections(unipotent)) + tuple(_factor_blocks(diagonal)))
    if word.matrix(pattern) != matrix:
        raise ConsistencyError(f'Decomposition of {matrix.rows} does not multiply back.')
    logger.debug('Decomposed %s into %d atoms', matrix.rows, len(word))
    return word


def _peel_transvections(unipotent: StabMatrix) -> List[Transvection]:
    pattern = unipotent.pattern
    names = pattern.names
    current = unipotent.rows
    atoms = []
    while True:
        pivots = [(row, column) for row, column in pattern.off_block if current[row][column]]
        if not pivots:
            return atoms
        row, column = max(pivots)
        exponent = current[row][column]
        # right multiplication by tr^-exponent: column c -= exponent * column r
        for line in current:
            line[column] -= exponent * line[row]
        atoms.insert(0, Transvection(names[row], names[column], exponent))


def _factor_blocks(diagonal: StabMatrix) -> List[Atom]:
    pattern = diagonal.pattern
    names = pattern.names
    atoms = []
    for start, stop in pattern.blocks:
        members = names[start:stop]
        block = tuple(row[start:stop] for row in diagonal.entries[start:stop])
        if len(members) == 1:
            if block[0][0] == -1:
                atoms.append(SignFlip(members[0]))
            continue
        for move in factor_unimodular(block):
            if move.is_sign:
                atoms.append(SignFlip(members[move.row]))
            else:
                atoms.append(ClassMove(members, move.matrix(len(members))))
    return atoms
