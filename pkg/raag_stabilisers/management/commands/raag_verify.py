from ._base import RaagCommand


class Command(RaagCommand):
    help = 'Run the property checks over a corpus of graphs and report per-check counts'
    command = 'verify'

    def add_command_arguments(self, parser):
        parser.add_argument('--max-vertices', type=int, help='Largest graph of the exhaustive corpus')
        parser.add_argument(
            '--exhaustive',
            action='store_true',
            help='Check every labelled graph up to --max-vertices',
        )
        parser.add_argument('--random-graphs', type=int, help='Number of random graphs to check')
        parser.add_argument(
            '--samples',
            type=int,
            help='Use this many matrix pairs, words, matrices and compositions instead of the settings',
        )
        parser.add_argument('--bound', type=int, help='Entry bound of sampled matrices')
        parser.add_argument('--workers', type=int, help='Worker processes; 0 starts one per CPU')
