from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Print the total order on the vertices built stage by stage from the closure lattice'
    command = 'order'
