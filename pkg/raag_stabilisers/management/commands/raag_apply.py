from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Apply a word in the generators to a group element'
    command = 'apply'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--generators',
            dest='generators_path',
            help='JSON list of generators, applied first to last',
        )
        parser.add_argument('--word', help='Word literal such as "a b^-1 c^2"')
