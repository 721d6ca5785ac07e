from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Split a conjugate-stabilising automorphism into a conjugating part and a stabilising part'
    command = 'factor'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--composition',
            dest='composition_path',
            help='JSON list of generators, conjugations allowed',
        )
