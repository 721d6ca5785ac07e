from django.core.management.base import BaseCommand, CommandError

from raag_stabilisers.exceptions import ConsistencyError, DomainError, InputError, PreconditionError, RaagError
from raag_stabilisers.runner import CommandName, OutputFormat, RunConfig, run


def comma_list(value):
    return tuple(item.strip() for item in value.split(',') if item.strip())


class RaagCommand(BaseCommand):
    """Common flags and error handling of the raag_* commands."""
    command = None

    def add_arguments(self, parser):
        parser.add_argument(
            '--graph',
            dest='graph_path',
            help='Graph JSON file: {"vertices": [...], "edges": [[u, v], ...]}',
        )
        parser.add_argument(
            '--tie-break',
            type=comma_list,
            help='Comma separated vertex order fixing every free choice of the total order',
        )
        parser.add_argument('--seed', type=int, help='Seed of randomised work')
        parser.add_argument(
            '--format',
            default=OutputFormat.TEXT.value,
            choices=[output.value for output in OutputFormat],
            help='Output format; dot only for raag_lattice, raag_order and raag_generators',
        )
        parser.add_argument('--out', dest='output', help='Write the output to this file instead of stdout')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def config(self, options) -> RunConfig:
        fields = RunConfig.__dataclass_fields__
        values = {key: value for key, value in options.items() if key in fields and value is not None}
        values['command'] = CommandName(self.command)
        return RunConfig(**values)

    def handle(self, *args, **options):
        verbosity = options['verbosity']
        try:
            cfg = self.config(options)
            result = run(cfg)
        except (InputError, PreconditionError, DomainError) as er:
            raise CommandError(str(er), returncode=2)
        except ConsistencyError as er:
            raise CommandError(f'Internal check failed: {er}', returncode=1)
        except RaagError as er:
            raise CommandError(str(er), returncode=1)

        if cfg.output:
            try:
                with open(cfg.output, 'w') as handle:
                    handle.write(result.text + '\n')
            except OSError as er:
                raise CommandError(f'Cannot write "{cfg.output}": {er.strerror}', returncode=2)
            if verbosity >= 1:
                self.stdout.write(self.style.SUCCESS(f'Wrote {cfg.output}'))
        else:
            self.stdout.write(result.text)

        if result.status:
            raise CommandError('Some checks failed.', returncode=result.status)
