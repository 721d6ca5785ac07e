from ._base import RaagCommand, comma_list


class Command(RaagCommand):
    help = 'Show which matrix entries may be nonzero for the stabiliser of a closed set'
    command = 'pattern'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--closed-set',
            type=comma_list,
            help='Comma separated closed set; defaults to every vertex',
        )
