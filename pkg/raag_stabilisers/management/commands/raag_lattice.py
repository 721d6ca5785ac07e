from ._base import RaagCommand


class Command(RaagCommand):
    help = 'List the closed sets of the graph, its classes with heights and the Hasse diagram'
    command = 'lattice'
