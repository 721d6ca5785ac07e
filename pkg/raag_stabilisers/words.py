"""
Elements of the partially commutative group G(Gamma) in normal form.

Reduction works on piles: every letter pushes
onto its own pile and leaves a spacer on the pile of each letter it does not
commute with, and a letter cancels exactly when the top of its pile is its
inverse. Reading the piles back, always taking the least available letter in
the ambient ranking, gives the lexicographically least representative of the
trace, which is the canonical form.
"""
import functools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple

from django.utils.functional import cached_property

import networkx as nx

from .exceptions import InputError, PreconditionError
from .graphs import Graph, SetLike, VertexLike, VertexSet


Letter = Tuple[int, int]

TOKEN = re.compile(r'^(?P<name>[^\s^]+)(?:\^(?P<exponent>[+-]?\d+))?$')


@dataclass(frozen=True)
class PartiallyCommutativeGroup:
    """
    G(Gamma) together with the ranking of its generators that decides which
    representative of a trace is canonical.
    """
    graph: Graph
    ranking: Tuple[int, ...] = None

    def __post_init__(self):
        if self.ranking is None:
            ranking = tuple(range(len(self.graph)))
        elif hasattr(self.ranking, 'sequence'):
            ranking = tuple(self.ranking.sequence)
        else:
            ranking = tuple(self.graph.index(vertex) for vertex in self.ranking)
        if sorted(ranking) != list(range(len(self.graph))):
            raise InputError('The ranking must list every vertex exactly once.')
        object.__setattr__(self, 'ranking', ranking)

    @cached_property
    def rank(self) -> Dict[int, int]:
        return {vertex: position for position, vertex in enumerate(self.ranking)}

    @cached_property
    def _noncommuting(self) -> Tuple[Tuple[int, ...], ...]:
        full = self.graph.full.bits
        return tuple(
            tuple(VertexSet(full & ~(mask | 1 << index)))
            for index, mask in enumerate(self.graph.neighbours)
        )

    @cached_property
    def _blocking(self) -> Tuple[int, ...]:
        # letters a given letter cannot be commuted past, itself included
        full = self.graph.full.bits
        return tuple(full & ~mask for mask in self.graph.neighbours)

    @cached_property
    def identity(self) -> 'PCWord':
        return PCWord(self, ())

    @cached_property
    def generators(self) -> Tuple['PCWord', ...]:
        return tuple(PCWord(self, ((index, 1),)) for index in range(len(self.graph)))

    def generator(self, vertex, exponent=1) -> 'PCWord':
        if exponent == 1:
            return self.generators[self.graph.index(vertex)]
        return self.word([(vertex, exponent)])

    def check(self, word: 'PCWord'):
        if word.group is not self and word.group != self:
            raise InputError('Words belong to different groups.')

    def letter_key(self, letter: Letter):
        return (self.rank[letter[0]], 0 if letter[1] > 0 else 1)

    def word(self, raw) -> 'PCWord':
        """
        Build an element from a literal such as ``"a b^-1 c^2"`` or from an
        iterable of ``(vertex, exponent)`` pairs.
        """
        if isinstance(raw, PCWord):
            return self.translate(raw)
        if isinstance(raw, str):
            raw = parse_literal(raw)
        letters = []
        for vertex, exponent in raw:
            index = self.graph.index(vertex)
            if not isinstance(exponent, int):
                raise InputError(f'Exponent {exponent!r} is not an integer.')
            sign = 1 if exponent > 0 else -1
            letters.extend([(index, sign)] * abs(exponent))
        return PCWord(self, self.normalize(letters))

    def translate(self, word: 'PCWord') -> 'PCWord':
        """The same word read in this group, matching generators by name."""
        if word.group is self or word.group == self:
            return word
        names = word.group.graph.names
        return self.word([(names[index], sign) for index, sign in word.letters])

    def normalize(self, letters: Iterable[Letter]) -> Tuple[Letter, ...]:
        piles, count = self._pile(letters)
        return self._depile(piles, count)

    def _pile(self, letters):
        piles = [[] for _ in self.graph.names]
        count = 0
        for index, sign in letters:
            pile = piles[index]
            if pile and pile[-1] == -sign:
                pile.pop()
                for other in self._noncommuting[index]:
                    piles[other].pop()
                count -= 1
            else:
                pile.append(sign)
                for other in self._noncommuting[index]:
                    piles[other].append(0)
                count += 1
        return piles, count

    def _depile(self, piles, count):
        starts = [0] * len(piles)
        letters = []
        while len(letters) < count:
            for index in self.ranking:
                pile = piles[index]
                if starts[index] < len(pile) and pile[starts[index]]:
                    break
            else:
                raise AssertionError('Piling left letters that cannot be read back.')
            letters.append((index, pile[starts[index]]))
            starts[index] += 1
            for other in self._noncommuting[index]:
                starts[other] += 1
        return tuple(letters)

    def subgroup(self, members: SetLike) -> 'PartiallyCommutativeGroup':
        """G(Y) as a group in its own right, ranked as in this group."""
        return _subgroup(self, self.graph.vertex_set(members))

    def from_exponents(self, exponents: Dict[VertexLike, int]) -> 'PCWord':
        """The product of x^e over ``exponents``, read in the ranking."""
        exponents = {self.graph.index(vertex): exponent for vertex, exponent in exponents.items()}
        return self.word([
            (index, exponent)
            for index, exponent in sorted(exponents.items(), key=lambda item: self.rank[item[0]])
            if exponent
        ])


@functools.lru_cache(maxsize=1024)
def _subgroup(group: PartiallyCommutativeGroup, members: VertexSet) -> PartiallyCommutativeGroup:
    names = group.graph.names
    return PartiallyCommutativeGroup(
        group.graph.full_subgraph(members),
        tuple(names[index] for index in group.ranking if index in members),
    )


class CyclicDecomposition(NamedTuple):
    """``word = conjugator^-1 * core * conjugator`` with no cancellation."""
    conjugator: 'PCWord'
    core: 'PCWord'


@dataclass(frozen=True)
class PCWord:
    group: PartiallyCommutativeGroup = field(repr=False)
    letters: Tuple[Letter, ...]

    def _check_group(self, other):
        self.group.check(other)

    def __mul__(self, other: 'PCWord') -> 'PCWord':
        self._check_group(other)
        if not other.letters:
            return self
        if not self.letters:
            return other
        return PCWord(self.group, self.group.normalize(self.letters + other.letters))

    def inverse(self) -> 'PCWord':
        return PCWord(
            self.group,
            self.group.normalize((index, -sign) for index, sign in reversed(self.letters)),
        )

    def __pow__(self, exponent: int) -> 'PCWord':
        base = self if exponent >= 0 else self.inverse()
        return PCWord(self.group, self.group.normalize(base.letters * abs(exponent)))

    def conjugate(self, by: 'PCWord') -> 'PCWord':
        """by^-1 * self * by"""
        self._check_group(by)
        return PCWord(self.group, self.group.normalize(
            tuple((index, -sign) for index, sign in reversed(by.letters)) + self.letters + by.letters
        ))

    def __len__(self):
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @cached_property
    def alpha(self) -> VertexSet:
        return VertexSet.from_indices(index for index, _ in self.letters)

    def in_parabolic(self, members: SetLike) -> bool:
        return self.alpha <= self.group.graph.vertex_set(members)

    def left_divisors(self) -> Dict[int, int]:
        """Letters x^e with self = x^e o rest, as {x: e}."""
        return _front_letters(self.letters, self.group._blocking)

    def right_divisors(self) -> Dict[int, int]:
        return _front_letters(reversed(self.letters), self.group._blocking)

    def drop_first(self, index: int) -> 'PCWord':
        """Remove the first occurrence of generator ``index``, which must be a left divisor."""
        position = next(n for n, (vertex, _) in enumerate(self.letters) if vertex == index)
        return PCWord(self.group, self.group.normalize(self.letters[:position] + self.letters[position + 1:]))

    def drop_last(self, index: int) -> 'PCWord':
        position = max(n for n, (vertex, _) in enumerate(self.letters) if vertex == index)
        return PCWord(self.group, self.group.normalize(self.letters[:position] + self.letters[position + 1:]))

    def cyclic_reduce(self) -> CyclicDecomposition:
        group = self.group
        conjugator, core = group.identity, self
        while True:
            right = core.right_divisors()
            candidates = [
                (index, sign) for index, sign in core.left_divisors().items()
                if right.get(index) == -sign
            ]
            if not candidates:
                return CyclicDecomposition(conjugator, core)
            index, sign = min(candidates, key=group.letter_key)
            core = core.drop_first(index).drop_last(index)
            conjugator = group.generator(index, -sign) * conjugator

    def is_cyclically_minimal(self) -> bool:
        return self.cyclic_reduce().conjugator.is_identity

    def blocks(self) -> List['PCWord']:
        if not self.is_cyclically_minimal():
            raise PreconditionError(f'{self} is not cyclically minimal.')
        if not self.letters:
            return []
        dual = self.group.graph.non_commutation_graph().nx_graph.subgraph(list(self.alpha))
        rank = self.group.rank
        components = sorted(nx.connected_components(dual), key=lambda component: min(rank[x] for x in component))
        return [
            PCWord(self.group, self.group.normalize(letter for letter in self.letters if letter[0] in component))
            for component in components
        ]

    def strip_left_divisors(self, members: SetLike) -> Tuple['PCWord', 'PCWord']:
        """
        Split ``self = prefix o rest`` with ``prefix`` in G(Y) as long as
        possible, taking the least available letter each time; ``rest`` then
        has no left divisor in G(Y).
        """
        members = self.group.graph.vertex_set(members)
        prefix, rest = [], self
        while True:
            options = [letter for letter in rest.left_divisors().items() if letter[0] in members]
            if not options:
                return PCWord(self.group, self.group.normalize(prefix)), rest
            letter = min(options, key=self.group.letter_key)
            prefix.append(letter)
            rest = rest.drop_first(letter[0])

    def abelian_exponents(self, members: SetLike) -> Dict[int, int]:
        """Exponent sums over a simplex S containing alpha(self), keyed by vertex index."""
        graph = self.group.graph
        members = graph.vertex_set(members)
        if not graph.is_simplex(members):
            raise PreconditionError('{{{}}} is not a simplex.'.format(', '.join(graph.names_of(members))))
        if not self.alpha <= members:
            raise PreconditionError(f'{self} does not lie in the parabolic subgroup of the simplex.')
        exponents = {index: 0 for index in members}
        for index, sign in self.letters:
            exponents[index] += sign
        return exponents

    def substitute(self, images: Sequence['PCWord']) -> 'PCWord':
        """The image of self under the endomorphism x_i -> images[i]."""
        if not self.letters:
            return images[0].group.identity if images else self
        target = images[self.letters[0][0]].group
        letters = []
        for index, sign in self.letters:
            image = images[index]
            if sign > 0:
                letters.extend(image.letters)
            else:
                letters.extend((vertex, -exponent) for vertex, exponent in reversed(image.letters))
        return PCWord(target, target.normalize(letters))

    def __str__(self):
        return format_letters(self.group.graph, self.letters)


def _front_letters(letters, blocking) -> Dict[int, int]:
    blocked = 0
    found = {}
    for index, sign in letters:
        if not blocked >> index & 1:
            found[index] = sign
        blocked |= blocking[index]
    return found


def parse_literal(text: str) -> List[Tuple[str, int]]:
    """``"a b^-1 c^3"`` -> [('a', 1), ('b', -1), ('c', 3)]; ``"1"`` is the identity."""
    raw = []
    for token in text.split():
        if token == '1':
            continue
        match = TOKEN.match(token)
        if not match:
            raise InputError(f'Cannot read word token "{token}".')
        exponent = int(match.group('exponent') or 1)
        if exponent:
            raw.append((match.group('name'), exponent))
    return raw


def format_letters(graph: Graph, letters: Sequence[Letter]) -> str:
    tokens = []
    runs: List[List[int]] = []
    for index, sign in letters:
        if runs and runs[-1][0] == index and (runs[-1][1] > 0) == (sign > 0):
            runs[-1][1] += sign
        else:
            runs.append([index, sign])
    for index, exponent in runs:
        name = graph.names[index]
        tokens.append(name if exponent == 1 else f'{name}^{exponent}')
    return ' '.join(tokens) or '1'


def identity_images(group: PartiallyCommutativeGroup) -> List[PCWord]:
    return list(group.generators)
