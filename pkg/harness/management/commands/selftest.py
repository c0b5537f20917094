import json

from django.core.management.base import CommandError

from mutate.corpus import load_corpus

from harness.oracles import CHECKS, run_all

from ..base import ToolchainCommand


class Command(ToolchainCommand):
    help = 'Run the oracle and property checks; exits with 1 when any of them fails.'

    def add_command_arguments(self, parser):
        parser.add_argument('--corpus', default=None, help='default: VARMAP_CORPUS_DIR')
        parser.add_argument('--skip', action='append', choices=tuple(CHECKS), default=[])
        parser.add_argument('--budget', type=float, default=None, help='repair seconds per program')
        self.add_workers_argument(parser)

    def run(self, **options):
        results = run_all(
            load_corpus(self.setting('CORPUS_DIR', options['corpus'])),
            seed=self.setting('SEED', options['seed']),
            budget=self.setting('REPAIR_BUDGET', options['budget']),
            workers=self.setting('WORKERS', options['workers']),
            progress=not options['quiet'],
            skip=options['skip'],
        )
        self.emit({'checks': [r.to_dict() for r in results], 'passed': all(r.passed for r in results)})
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(json.dumps({'error': f"failed: {', '.join(failed)}", 'kind': 'SelfTestFailure'}),
                               returncode=1)
