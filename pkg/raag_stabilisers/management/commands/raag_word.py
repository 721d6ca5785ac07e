from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Normal form, support, cyclic reduction and blocks of a group element'
    command = 'word'

    def add_command_arguments(self, parser):
        parser.add_argument('--word', help='Word literal such as "a b^-1 c^2"')
