"""
One entry point per management command: build the lattice and order of the
input graph, do the work, and render text, JSON or DOT.
"""
import enum
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from . import conf
from .automorphisms import ambient_group, decompose, enumerate_generators
from .conjugation import factor_semidirect
from .exceptions import InputError
from .formats import dumps, graph_and_dual_dot, load_graph, load_matrix, load_word
from .graphs import Graph
from .lattice import enumerate_lattice
from .matrices import pattern_of
from .verification import Sizes, corpus, verify


logger = logging.getLogger(__name__)


class CommandName(enum.Enum):
    LATTICE = 'lattice'
    ORDER = 'order'
    GENERATORS = 'generators'
    PATTERN = 'pattern'
    DECOMPOSE = 'decompose'
    WORD = 'word'
    APPLY = 'apply'
    FACTOR = 'factor'
    VERIFY = 'verify'


class OutputFormat(enum.Enum):
    TEXT = 'text'
    JSON = 'json'
    DOT = 'dot'


DOT_COMMANDS = {CommandName.LATTICE, CommandName.ORDER, CommandName.GENERATORS}


@dataclass
class RunConfig:
    command: CommandName
    graph_path: Optional[str] = None
    tie_break: Optional[Tuple[str, ...]] = None
    seed: Optional[int] = None
    bound: Optional[int] = None
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.TEXT
    closed_set: Optional[Tuple[str, ...]] = None
    matrix_path: Optional[str] = None
    word: Optional[str] = None
    generators_path: Optional[str] = None
    composition_path: Optional[str] = None
    max_vertices: Optional[int] = None
    exhaustive: bool = False
    random_graphs: Optional[int] = None
    samples: Optional[int] = None
    workers: Optional[int] = None

    def __post_init__(self):
        self.command = CommandName(self.command)
        self.format = OutputFormat(self.format)
        if self.format is OutputFormat.DOT and self.command not in DOT_COMMANDS:
            raise InputError(f'The {self.command.value} command has no DOT output.')
        if self.command is not CommandName.VERIFY and not self.graph_path:
            raise InputError('A graph file is required (--graph).')


class RunResult(NamedTuple):
    status: int
    text: str


class Session:
    """The graph of a run with its lattice, order and group."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.graph: Graph = load_graph(cfg.graph_path)
        self.lattice = enumerate_lattice(self.graph)
        self.order = self.lattice.build_total_order(cfg.tie_break)
        self.group = ambient_group(self.lattice, self.order)

    def names(self, members):
        return '{' + ', '.join(self.graph.names_of(members)) + '}'


def run(cfg: RunConfig) -> RunResult:
    logger.debug('Running %s on %s', cfg.command.value, cfg.graph_path or 'the corpus')
    if cfg.command is CommandName.VERIFY:
        return run_verify(cfg)
    session = Session(cfg)
    handler = HANDLERS[cfg.command]
    data, text, dot = handler(session)
    if cfg.format is OutputFormat.JSON:
        return RunResult(0, dumps(data))
    if cfg.format is OutputFormat.DOT:
        return RunResult(0, dot)
    return RunResult(0, text)


def run_lattice(session: Session):
    lattice = session.lattice
    lines = [f'{len(lattice)} closed sets:']
    lines.extend(f'  {session.names(closed)}' for closed in lattice.closed_sets)
    lines.append('classes:')
    for cls in lattice.classes:
        x = min(cls)
        lines.append(f'  {session.names(cls)} height {lattice.heights[x]} closure {session.names(lattice.cl(x))}')
    lines.append('L_X: ' + ', '.join(session.names(closed) for closed in lattice.lx_sets))
    lines.append('L^max: ' + ', '.join(session.names(closed) for closed in lattice.l_max_sets()))
    return lattice.as_dict(), '\n'.join(lines), lattice.to_dot()


def run_order(session: Session):
    lattice, order = session.lattice, session.order
    data = {
        'order': list(order.names),
        'heights': {session.graph.names[x]: lattice.heights[x] for x in order.sequence},
        'stages': [[list(session.graph.names_of(cls)) for cls in stage] for stage in lattice.stages],
    }
    lines = ['order: ' + ' < '.join(order.names)]
    for height, stage in enumerate(lattice.stages):
        lines.append(f'  B_{height}: ' + ', '.join(session.names(cls) for cls in stage))
    return data, '\n'.join(lines), graph_and_dual_dot(session.graph)


def run_generators(session: Session):
    inventory = enumerate_generators(session.lattice, session.order)
    lines = ['J: ' + ', '.join(flip.vertex for flip in inventory.flips)]
    lines.append('V: ' + (', '.join(
        '{' + ', '.join(generators.members) + f'}} GL({len(generators.members)}, Z)'
        for generators in inventory.classes
    ) or 'none'))
    lines.append('Tr: ' + (', '.join(f'({tr.source}, {tr.target})' for tr in inventory.transvections) or 'none'))
    return inventory.as_dict(), '\n'.join(lines), graph_and_dual_dot(session.graph)


def run_pattern(session: Session):
    members = session.cfg.closed_set or session.graph.names
    pattern = pattern_of(session.lattice, session.order, members)
    names = pattern.names
    width = max([len(name) for name in names] + [1])
    lines = [' ' * width + ' ' + ' '.join(f'{name:>{width}}' for name in names)]
    for i, name in enumerate(names):
        cells = ['*' if (i, j) in pattern.allowed else '.' for j in range(len(pattern))]
        lines.append(f'{name:>{width}} ' + ' '.join(f'{cell:>{width}}' for cell in cells))
    lines.append('blocks: ' + ', '.join('{' + ', '.join(names[start:stop]) + '}' for start, stop in pattern.blocks))
    return pattern.as_dict(), '\n'.join(lines), None


def run_decompose(session: Session):
    if not session.cfg.matrix_path:
        raise InputError('A matrix file is required (--matrix).')
    matrix = load_matrix(session.cfg.matrix_path, session.lattice, session.order)
    word = decompose(matrix)
    text = '\n'.join([str(atom) for atom in word] + [f'{len(word)} generators'])
    return word.as_list(), text, None


def run_word(session: Session):
    if session.cfg.word is None:
        raise InputError('A word is required (--word).')
    word = session.group.word(session.cfg.word)
    conjugator, core = word.cyclic_reduce()
    blocks = core.blocks()
    data = {
        'normal_form': str(word),
        'length': len(word),
        'alpha': list(session.graph.names_of(word.alpha)),
        'cyclic': {'conjugator': str(conjugator), 'core': str(core)},
        'blocks': [str(block) for block in blocks],
    }
    text = '\n'.join([
        f'normal form: {word}',
        f'length: {len(word)}',
        f'alpha: {session.names(word.alpha)}',
        f'cyclic: ({conjugator})^-1 ({core}) ({conjugator})',
        'blocks: ' + ' | '.join(str(block) for block in blocks),
    ])
    return data, text, None


def run_apply(session: Session):
    cfg = session.cfg
    if not cfg.generators_path or cfg.word is None:
        raise InputError('Both --generators and --word are required.')
    generators = load_word(cfg.generators_path, session.lattice)
    image = generators.automap(session.group)(session.group.word(cfg.word))
    return {'image': str(image)}, str(image), None


def run_factor(session: Session):
    if not session.cfg.composition_path:
        raise InputError('A composition file is required (--composition).')
    composition = load_word(session.cfg.composition_path, session.lattice)
    theta = composition.automap(session.group)
    factors = factor_semidirect(theta, session.lattice, session.order)
    text = '\n'.join([
        f'tau: {factors.tau}',
        f'phi: {factors.stabiliser_word}',
        'check: ' + ('pass' if factors.check else 'fail'),
    ])
    return factors.as_dict(), text, None


def verify_sizes(cfg: RunConfig) -> Sizes:
    common = dict(
        bound=cfg.bound or conf.get_sample_bound(),
        word_length=conf.get_setting('RAAG_WORD_LENGTH'),
        composition_length=conf.get_setting('RAAG_COMPOSITION_LENGTH'),
        witness_length_factor=conf.get_witness_length_factor(),
        witness_search_limit=conf.get_witness_search_limit(),
    )
    if cfg.samples:
        return Sizes.uniform(cfg.samples, **common)
    return Sizes(
        pairs=conf.get_setting('RAAG_VERIFY_PAIRS'),
        words=conf.get_setting('RAAG_VERIFY_WORDS'),
        matrices=conf.get_setting('RAAG_VERIFY_MATRICES'),
        thetas=conf.get_setting('RAAG_VERIFY_THETAS'),
        **common,
    )


def run_verify(cfg: RunConfig) -> RunResult:
    seed = conf.get_seed() if cfg.seed is None else cfg.seed
    sizes = verify_sizes(cfg)
    workers = conf.get_setting('RAAG_VERIFY_WORKERS') if cfg.workers is None else cfg.workers
    if workers < 0:
        raise InputError('The number of workers must not be negative.')
    if cfg.graph_path:
        graphs = [load_graph(cfg.graph_path)]
    else:
        random_graphs = cfg.random_graphs
        if random_graphs is None:
            random_graphs = conf.get_setting('RAAG_VERIFY_RANDOM_GRAPHS')
        graphs = corpus(
            cfg.max_vertices or conf.get_setting('RAAG_VERIFY_MAX_VERTICES'),
            cfg.exhaustive,
            random_graphs,
            conf.get_setting('RAAG_VERIFY_RANDOM_MAX_VERTICES'),
            seed,
        )
    report = verify(graphs, seed, sizes, workers)
    text = report.table() + f'\n{report.graphs} graphs, seed {seed}'
    if cfg.format is OutputFormat.JSON:
        text = dumps(report.as_dict())
    return RunResult(0 if report.ok else 1, text)


HANDLERS = {
    CommandName.LATTICE: run_lattice,
    CommandName.ORDER: run_order,
    CommandName.GENERATORS: run_generators,
    CommandName.PATTERN: run_pattern,
    CommandName.DECOMPOSE: run_decompose,
    CommandName.WORD: run_word,
    CommandName.APPLY: run_apply,
    CommandName.FACTOR: run_factor,
}
