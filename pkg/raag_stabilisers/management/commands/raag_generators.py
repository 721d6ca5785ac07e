from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Enumerate the sign flips, class moves and transvections generating the stabiliser of the lattice'
    command = 'generators'
