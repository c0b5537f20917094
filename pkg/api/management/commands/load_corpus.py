from django.db import transaction

from mutate.corpus import load_corpus

from api.models import Assignment, ReferenceSolution, SuiteCase
from harness.management.base import ToolchainCommand


class Command(ToolchainCommand):
    help = 'Fill the assignment, test case and reference tables from the reference corpus.'

    def add_command_arguments(self, parser):
        parser.add_argument('--corpus', default=None, help='default: VARMAP_CORPUS_DIR')

    @transaction.atomic
    def run(self, **options):
        created = {'assignments': 0, 'cases': 0, 'references': 0}
        for entry in load_corpus(self.setting('CORPUS_DIR', options['corpus'])):
            assignment, new = Assignment.objects.get_or_create(slug=entry.ipa_id, defaults={'title': entry.ipa_id})
            created['assignments'] += new
            if new:
                for position, case in enumerate(entry.suite.cases, start=1):
                    SuiteCase.objects.create(
                        assignment=assignment, position=position, stdin=case.stdin, expected_stdout=case.expected,
                    )
                    created['cases'] += 1
            label = entry.program_id.split('/', 1)[1]
            _, new = ReferenceSolution.objects.get_or_create(
                assignment=assignment, label=label, defaults={'source': entry.source},
            )
            created['references'] += new
        self.emit(created)
