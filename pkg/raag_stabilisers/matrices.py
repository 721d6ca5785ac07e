"""
Integer matrices of stabilising automorphisms.

Rows and columns of a matrix over a closed set Y are indexed by the members of
Y listed in the total order. Row x holds the exponents of the image of x, so
the matrix of "apply phi then psi" is [phi] * [psi].

Entries are tuples of int rows. Members of S_Y are block upper triangular in
this indexing, so products, inverses, minors and embeddings of members are
members again and are built without repeating the membership test.
"""
import functools
import logging
import random
from dataclasses import dataclass, field
from typing import FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from django.utils.functional import cached_property

from sympy import Matrix

from .exceptions import ConsistencyError, InputError, PreconditionError
from .graphs import Graph, SetLike, VertexSet
from .lattice import ClosureLattice, TotalOrder


logger = logging.getLogger(__name__)

Rows = Tuple[Tuple[int, ...], ...]


def _entry(value) -> int:
    if isinstance(value, bool) or not (isinstance(value, int) or getattr(value, 'is_Integer', False)):
        raise InputError(f'Matrix entries must be integers, got {value!r}.')
    return int(value)


def to_rows(rows, size: Optional[int] = None) -> Rows:
    """Read a square integer matrix given as a sequence of rows."""
    try:
        result = tuple(tuple(_entry(value) for value in row) for row in rows)
    except TypeError as er:
        raise InputError(f'Cannot read matrix: {er}')
    if size is None:
        size = len(result)
    if len(result) != size or any(len(row) != size for row in result):
        raise InputError(f'Expected a {size}x{size} matrix.')
    return result


def identity_rows(size: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def multiply_rows(first: Rows, second: Rows) -> Rows:
    columns = tuple(zip(*second))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, column)) for column in columns)
        for row in first
    )


def _block(entries: Rows, start: int, stop: int) -> Rows:
    return tuple(row[start:stop] for row in entries[start:stop])


@functools.lru_cache(maxsize=4096)
def block_det(block: Rows) -> int:
    if len(block) == 1:
        return block[0][0]
    return int(Matrix([list(row) for row in block]).det())


@functools.lru_cache(maxsize=4096)
def unimodular_inverse(block: Rows) -> Rows:
    """The integer inverse of a square block with determinant +-1."""
    if abs(block_det(block)) != 1:
        raise PreconditionError(f'{[list(row) for row in block]} is not invertible over the integers.')
    if len(block) == 1:
        return block
    inverse = Matrix([list(row) for row in block]).inv()
    return tuple(tuple(int(entry) for entry in row) for row in inverse.tolist())


@dataclass(frozen=True)
class StabPattern:
    """
    Where a member of S_Y may be nonzero. ``blocks`` are half-open index
    ranges, one per class contained in Y, in order; ``allowed`` holds the
    diagonal-block positions and every (i, j) with u_j <_L u_i.
    """
    lattice: ClosureLattice = field(repr=False, compare=False)
    order: TotalOrder = field(repr=False, compare=False)
    graph: Graph = field(repr=False)
    closed_set: VertexSet
    vertices: Tuple[int, ...]
    blocks: Tuple[Tuple[int, int], ...]
    allowed: FrozenSet[Tuple[int, int]] = field(repr=False)

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def positions(self):
        return {vertex: position for position, vertex in enumerate(self.vertices)}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.graph.names[vertex] for vertex in self.vertices)

    def position(self, vertex) -> int:
        vertex = self.graph.index(vertex)
        try:
            return self.positions[vertex]
        except KeyError:
            raise InputError(f'Vertex "{self.graph.names[vertex]}" is not in the closed set.')

    @cached_property
    def block_index(self) -> Tuple[int, ...]:
        index = []
        for number, (start, stop) in enumerate(self.blocks):
            index.extend([number] * (stop - start))
        return tuple(index)

    def same_block(self, i: int, j: int) -> bool:
        return self.block_index[i] == self.block_index[j]

    @cached_property
    def off_block(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(pair for pair in self.allowed if not self.same_block(*pair)))

    def restrict(self, members: SetLike) -> 'StabPattern':
        members = self.lattice.closed(members)
        if not members <= self.closed_set:
            raise InputError('The restriction must be to a closed subset.')
        return pattern_of(self.lattice, self.order, members)

    def identity(self) -> 'StabMatrix':
        return StabMatrix.trusted(self, identity_rows(len(self)))

    def matrix(self, rows) -> 'StabMatrix':
        return StabMatrix(self, rows)

    def as_dict(self):
        names = self.names
        return {
            'closed_set': list(names),
            'blocks': [list(names[start:stop]) for start, stop in self.blocks],
            'allowed_off_block': [[names[i], names[j]] for i, j in self.off_block],
        }


def pattern_of(lattice: ClosureLattice, order: TotalOrder, members: SetLike) -> StabPattern:
    return _pattern_of(lattice, order, lattice.closed(members))


@functools.lru_cache(maxsize=1024)
def _pattern_of(lattice: ClosureLattice, order: TotalOrder, members: VertexSet) -> StabPattern:
    vertices = order.sort(members)
    blocks = []
    start = 0
    for position in range(1, len(vertices) + 1):
        if position == len(vertices) or (
            lattice.equiv_class(vertices[position]) != lattice.equiv_class(vertices[start])
        ):
            blocks.append((start, position))
            start = position
    block_of = {}
    for number, (start, stop) in enumerate(blocks):
        for position in range(start, stop):
            block_of[position] = number
    allowed = set()
    for i, u_i in enumerate(vertices):
        for j, u_j in enumerate(vertices):
            if block_of[i] == block_of[j] or (i < j and lattice.l_less(u_j, u_i)):
                allowed.add((i, j))
    return StabPattern(lattice, order, lattice.graph, members, vertices, tuple(blocks), frozenset(allowed))


def is_member(rows, pattern: StabPattern) -> bool:
    return _is_member(to_rows(rows, len(pattern)), pattern)


def _is_member(entries: Rows, pattern: StabPattern) -> bool:
    allowed = pattern.allowed
    for i, row in enumerate(entries):
        for j, value in enumerate(row):
            if value and (i, j) not in allowed:
                return False
    return all(abs(block_det(_block(entries, start, stop))) == 1 for start, stop in pattern.blocks)


@dataclass(frozen=True)
class StabMatrix:
    """
    A member of S_Y. Building one from outside checks membership; the
    results of operations on members are built with ``trusted``.
    """
    pattern: StabPattern
    entries: Rows

    def __post_init__(self):
        entries = to_rows(self.entries, len(self.pattern))
        if not _is_member(entries, self.pattern):
            raise PreconditionError(f'Matrix {[list(row) for row in entries]} is not in S_Y for this pattern.')
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def trusted(cls, pattern: StabPattern, entries: Rows) -> 'StabMatrix':
        matrix = object.__new__(cls)
        object.__setattr__(matrix, 'pattern', pattern)
        object.__setattr__(matrix, 'entries', entries)
        return matrix

    @property
    def rows(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def _check_pattern(self, other):
        if other.pattern is not self.pattern and other.pattern != self.pattern:
            raise InputError('Matrices have different patterns.')

    def __mul__(self, other: 'StabMatrix') -> 'StabMatrix':
        self._check_pattern(other)
        return StabMatrix.trusted(self.pattern, multiply_rows(self.entries, other.entries))

    def inverse(self) -> 'StabMatrix':
        """Block back substitution from the last class upwards."""
        entries = self.entries
        size = len(entries)
        result = [[0] * size for _ in range(size)]
        for start, stop in reversed(self.pattern.blocks):
            block = unimodular_inverse(_block(entries, start, stop))
            width = stop - start
            for a in range(width):
                result[start + a][start:stop] = block[a]
            for column in range(stop, size):
                partial = [
                    sum(entries[row][k] * result[k][column] for k in range(stop, size))
                    for row in range(start, stop)
                ]
                for a in range(width):
                    result[start + a][column] = -sum(block[a][b] * partial[b] for b in range(width))
        return StabMatrix.trusted(self.pattern, tuple(tuple(row) for row in result))

    def det(self) -> int:
        return functools.reduce(
            lambda total, span: total * block_det(_block(self.entries, *span)), self.pattern.blocks, 1,
        )

    def is_identity(self) -> bool:
        return self.entries == identity_rows(len(self.pattern))

    def minor(self, members: SetLike) -> 'StabMatrix':
        """Keep the rows and columns of the closed subset Z."""
        sub = self.pattern.restrict(members)
        keep = [self.pattern.position(vertex) for vertex in sub.vertices]
        return StabMatrix.trusted(sub, tuple(tuple(self.entries[i][j] for j in keep) for i in keep))

    def embed(self, members: SetLike) -> 'StabMatrix':
        """The matrix over the closed superset Y that acts as self on Z and trivially elsewhere."""
        lattice = self.pattern.lattice
        members = lattice.closed(members)
        if not self.pattern.closed_set <= members:
            raise InputError('Can only embed into a closed superset.')
        target = pattern_of(lattice, self.pattern.order, members)
        keep = [target.position(vertex) for vertex in self.pattern.vertices]
        entries = [list(row) for row in identity_rows(len(target))]
        for i, row in enumerate(keep):
            for j, column in enumerate(keep):
                entries[row][column] = self.entries[i][j]
        return StabMatrix.trusted(target, tuple(tuple(row) for row in entries))

    def block_diagonal(self) -> 'StabMatrix':
        size = len(self.pattern)
        entries = [[0] * size for _ in range(size)]
        for start, stop in self.pattern.blocks:
            for row in range(start, stop):
                entries[row][start:stop] = self.entries[row][start:stop]
        return StabMatrix.trusted(self.pattern, tuple(tuple(row) for row in entries))

    def split_semidirect(self) -> Tuple['StabMatrix', 'StabMatrix']:
        """self = U * D with D block diagonal and U unipotent."""
        diagonal = self.block_diagonal()
        unipotent = self * diagonal.inverse()
        return unipotent, diagonal

    def is_in_DY(self) -> bool:
        return all(self.entries[i][j] == 0 for i, j in self.pattern.off_block)

    def is_in_UY(self) -> bool:
        return all(
            _block(self.entries, start, stop) == identity_rows(stop - start)
            for start, stop in self.pattern.blocks
        )

    def as_dict(self):
        return {'closed_set': list(self.pattern.names), 'rows': self.rows}


def max_pattern_check(rows, lattice: ClosureLattice, order: TotalOrder) -> bool:
    """
    Row x may only be nonzero on the vertices every L-maximal z above x has
    in its closure.

    The envelope is the intersection of cl(z) over all of max_support(x),
    not the closure of a single maximal vertex: on the path a - b - c row a
    may be nonzero in column b, and this is the reading every member of S_X
    passes.
    """
    entries = to_rows(rows, len(lattice.graph))
    for i, x in enumerate(order.sequence):
        envelope = lattice.max_envelope(x)
        for j, y in enumerate(order.sequence):
            if entries[i][j] and y not in envelope:
                return False
    return True


class ElementaryMove(NamedTuple):
    """I + exponent * E(row, column), or the sign change of ``row`` when column is None."""
    row: int
    column: Optional[int]
    exponent: int

    @property
    def is_sign(self):
        return self.column is None

    def matrix(self, size) -> Rows:
        entries = [list(row) for row in identity_rows(size)]
        if self.is_sign:
            entries[self.row][self.row] = -1
        else:
            entries[self.row][self.column] = self.exponent
        return tuple(tuple(row) for row in entries)


def sign_move(row):
    return ElementaryMove(row, None, -1)


def factor_unimodular(rows) -> List[ElementaryMove]:
    """
    Elementary moves whose product, in order, is the given matrix over the
    integers. The matrix is row reduced to the identity by Euclid's algorithm
    on each column; row swaps are spelled out as three transvections and a
    sign change.
    """
    matrix = to_rows(rows)
    size = len(matrix)
    if not size:
        return []
    if abs(block_det(matrix)) != 1:
        raise PreconditionError(f'{[list(row) for row in matrix]} is not invertible over the integers.')
    work = [list(row) for row in matrix]
    applied = []

    def add(target, source, exponent):
        work[target] = [a + exponent * b for a, b in zip(work[target], work[source])]
        applied.append(ElementaryMove(target, source, exponent))

    def negate(target):
        work[target] = [-a for a in work[target]]
        applied.append(sign_move(target))

    for column in range(size):
        while True:
            nonzero = [row for row in range(column, size) if work[row][column] != 0]
            pivot = min(nonzero, key=lambda row: abs(work[row][column]))
            others = [row for row in nonzero if row != pivot]
            if not others:
                break
            for row in others:
                add(row, pivot, -(work[row][column] // work[pivot][column]))
        if pivot != column:
            # swap(column, pivot) = sign(pivot) add(column, pivot, 1) add(pivot, column, -1) add(column, pivot, 1)
            add(column, pivot, 1)
            add(pivot, column, -1)
            add(column, pivot, 1)
            negate(pivot)
        if work[column][column] == -1:
            negate(column)
        for row in range(column):
            if work[row][column]:
                add(row, column, -work[row][column])

    if tuple(tuple(row) for row in work) != identity_rows(size):
        raise ConsistencyError(f'Row reduction of {[list(row) for row in matrix]} did not reach the identity.')
    logger.debug('Row reduced %s in %d moves', matrix, len(applied))
    # E_k ... E_1 M = I, so M = E_1^-1 ... E_k^-1
    return [move if move.is_sign else move._replace(exponent=-move.exponent) for move in applied]


def multiply_moves(size: int, moves: Sequence[ElementaryMove]) -> Rows:
    """The product of the move matrices, each applied as a column operation."""
    product = [list(row) for row in identity_rows(size)]
    for move in moves:
        for row in product:
            if move.is_sign:
                row[move.row] = -row[move.row]
            else:
                row[move.column] += move.exponent * row[move.row]
    return tuple(tuple(row) for row in product)


def sample(pattern: StabPattern, bound: int, seed=None) -> StabMatrix:
    """
    A member of S_Y: each diagonal block is a product of at most ``bound``
    elementary or sign moves, off-block entries are drawn from
    [-bound, bound]. The same seed gives the same matrix.
    """
    if bound < 0:
        raise InputError('The sample bound must not be negative.')
    rng = random.Random(seed)
    entries = [list(row) for row in identity_rows(len(pattern))]
    for start, stop in pattern.blocks:
        size = stop - start
        moves = []
        for _ in range(rng.randint(0, bound)):
            row = rng.randrange(size)
            if size == 1 or rng.random() < 0.3:
                moves.append(sign_move(row))
            else:
                column = rng.choice([other for other in range(size) if other != row])
                moves.append(ElementaryMove(row, column, rng.choice((-1, 1))))
        block = multiply_moves(size, moves)
        for a in range(size):
            entries[start + a][start:stop] = block[a]
    for i, j in pattern.off_block:
        entries[i][j] = rng.randint(-bound, bound)
    return StabMatrix.trusted(pattern, tuple(tuple(row) for row in entries))
