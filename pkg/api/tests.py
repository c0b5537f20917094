import io
import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.test import override_settings
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from graphs.vocab import VOCAB
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT, PRINT_TO_N_SUITE
from mapper.model import init_params
from nn.checkpoint import Checkpoint, save_checkpoint

from .models import Assignment, ReferenceSolution, Submission, SuiteCase
from .services import MappingService

PRINT_TO_N_ASSIGNMENT = {
    'slug': 'ipa05',
    'title': 'Print 1 to N',
    'description': 'Read N and print the numbers from 1 to N, one per line.',
    'cases': [
        {'position': index, 'stdin': case.stdin, 'expected_stdout': case.expected}
        for index, case in enumerate(PRINT_TO_N_SUITE.cases, start=1)
    ],
    'references': [{'label': 'v1', 'source': PRINT_TO_N}],
}


def varmap(**overrides):
    return override_settings(VARMAP={**settings.VARMAP, **overrides})


class ServiceTestCase(APITestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.checkpoint = Path(self.tmp.name) / 'model.ckpt'
        overrides = varmap(CHECKPOINT_PATH=self.checkpoint, STEP_LIMIT=10 ** 4, REPAIR_BUDGET=60.0, SCRATCH_DIR=None)
        overrides.enable()
        self.addCleanup(overrides.disable)
        MappingService.reset()
        self.addCleanup(MappingService.reset)

    def write_checkpoint(self, hidden_dim=4):
        params = init_params(len(VOCAB), hidden_dim, seed=0)
        save_checkpoint(Checkpoint(params, VOCAB.kinds, '01234', hidden_dim), self.checkpoint)

    def create_assignment(self):
        response = self.client.post(reverse('create-list-assignment'), PRINT_TO_N_ASSIGNMENT, format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED, response.data)
        return response.data['id']

    def submit(self, assignment_id, source):
        url = reverse('create-list-submission', kwargs={'assignment_id': assignment_id})
        return self.client.post(url, {'source': source}, format='json')


class AssignmentTests(ServiceTestCase):
    def test_create_with_cases_and_references(self):
        assignment_id = self.create_assignment()
        assignment = Assignment.objects.get(id=assignment_id)
        self.assertEqual(assignment.cases.count(), 3)
        self.assertEqual(assignment.references.get().label, 'v1')
        self.assertEqual(assignment.test_suite(), PRINT_TO_N_SUITE)

    def test_list_and_retrieve(self):
        assignment_id = self.create_assignment()
        listed = self.client.get(reverse('create-list-assignment'))
        self.assertEqual([a['slug'] for a in listed.data], ['ipa05'])
        retrieved = self.client.get(reverse('retrieve-assignment', kwargs={'assignment_id': assignment_id}))
        self.assertEqual(retrieved.data['cases'][0]['stdin'], '3')

    def test_bulk_create(self):
        second = {**PRINT_TO_N_ASSIGNMENT, 'slug': 'ipa05b'}
        response = self.client.post(reverse('create-list-assignment'), [PRINT_TO_N_ASSIGNMENT, second], format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(Assignment.objects.count(), 2)

    def test_reference_must_parse(self):
        payload = {**PRINT_TO_N_ASSIGNMENT, 'references': [{'label': 'v1', 'source': 'int main( {'}]}
        response = self.client.post(reverse('create-list-assignment'), payload, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('references', response.data)
        self.assertFalse(Assignment.objects.exists())

    def test_cases_are_required(self):
        payload = {**PRINT_TO_N_ASSIGNMENT, 'cases': []}
        response = self.client.post(reverse('create-list-assignment'), payload, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class SubmissionTests(ServiceTestCase):
    def test_passing_submission_is_correct(self):
        response = self.submit(self.create_assignment(), PRINT_TO_N)
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['status'], Submission.CORRECT)
        self.assertEqual(response.data['tests_passed'], 3)

    def test_unparsable_submission_is_invalid(self):
        response = self.submit(self.create_assignment(), 'int main() { return 0 }')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['status'], Submission.INVALID)
        self.assertTrue(response.data['message'])

    def test_missing_initialisation_is_repaired_without_a_checkpoint(self):
        response = self.submit(self.create_assignment(), PRINT_TO_N_MISSING_INIT)
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['status'], Submission.FIXED)
        self.assertIn('j = 1;', response.data['repaired_source'])
        self.assertEqual(response.data['reference'], 'ipa05/v1')
        self.assertEqual(sorted(response.data['mapping']), ['loop.j', 'loop.l', 'main.j', 'main.l'])
        self.assertGreaterEqual(response.data['mappings_tried'], 1)

    def test_missing_initialisation_is_repaired_with_a_checkpoint(self):
        self.write_checkpoint()
        response = self.submit(self.create_assignment(), PRINT_TO_N_MISSING_INIT)
        self.assertEqual(response.data['status'], Submission.FIXED)

    def test_source_is_required(self):
        response = self.submit(self.create_assignment(), '')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data, {'error': 'source is required'})

    def test_unknown_assignment(self):
        self.assertEqual(self.submit(999, PRINT_TO_N).status_code, status.HTTP_404_NOT_FOUND)

    def test_list_and_retrieve(self):
        assignment_id = self.create_assignment()
        submission_id = self.submit(assignment_id, PRINT_TO_N).data['id']
        url = reverse('create-list-submission', kwargs={'assignment_id': assignment_id})
        self.assertEqual(url, f'/api/assignments/{assignment_id}/submissions')
        listed = self.client.get(url)
        self.assertEqual(listed.status_code, status.HTTP_200_OK)
        self.assertEqual([s['id'] for s in listed.data], [submission_id])
        retrieved = self.client.get(reverse('retrieve-submission', kwargs={'submission_id': submission_id}))
        self.assertEqual(retrieved.data['assignment'], 'ipa05')


class MappingTests(ServiceTestCase):
    def post(self, buggy, correct):
        return self.client.post(
            reverse('map-variables'), {'buggy_source': buggy, 'correct_source': correct}, format='json',
        )

    def test_without_a_checkpoint(self):
        response = self.post(PRINT_TO_N_MISSING_INIT, PRINT_TO_N)
        self.assertEqual(response.status_code, status.HTTP_503_SERVICE_UNAVAILABLE)
        self.assertIn('error', response.data)

    def test_mapping(self):
        self.write_checkpoint()
        response = self.post(PRINT_TO_N_MISSING_INIT, PRINT_TO_N)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(sorted(response.data['mapping']), ['loop.j', 'loop.l', 'main.j', 'main.l'])
        self.assertTrue(set(response.data['mapping'].values()) <= {'n', 'i'})
        self.assertEqual(len(response.data['probabilities']), 4)
        for row in response.data['probabilities']:
            self.assertAlmostEqual(sum(row), 1.0)

    def test_sources_must_parse(self):
        response = self.post('int main( {', PRINT_TO_N)
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('buggy_source', response.data)


class LoadCorpusTests(APITestCase):
    def load(self):
        out = io.StringIO()
        call_command('load_corpus', stdout=out)
        return json.loads(out.getvalue())

    def test_load_is_idempotent(self):
        first = self.load()
        self.assertEqual(first['assignments'], 10)
        self.assertEqual(Assignment.objects.count(), 10)
        self.assertGreaterEqual(ReferenceSolution.objects.count(), 30)
        self.assertEqual(first['cases'], SuiteCase.objects.count())
        self.assertEqual(self.load(), {'assignments': 0, 'cases': 0, 'references': 0})
