from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Factor a stabiliser matrix into sign flips, class moves and transvections'
    command = 'decompose'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--matrix',
            dest='matrix_path',
            help='Matrix JSON file: {"closed_set": [...], "rows": [[...], ...]}',
        )
