import csv
import io
import json
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from graphs.vocab import VOCAB
from lang.suites import TestCase, TestSuite, dump_suite
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT, PRINT_TO_N_SUITE
from mapper.inference import Mapper
from mapper.model import init_params
from mutate.bugs import ME, WCO
from mutate.corpus import load_corpus
from nn.checkpoint import Checkpoint, save_checkpoint
from repair.engine import FIXED

from .benchmark import GNN, ORACLE, UNIFORM, cactus_rows, evaluate_repair, write_cactus_csv
from .metrics import ALL, mapping_summary, overlap_coefficient, seconds_summary, without_timings
from .oracles import enumeration_oracle, gradient_check, mutation_preservation, rgcn_dense_oracle, run_oracle

FAST = 10 ** 4

MISSING_INIT_RECORD = {
    'correct_source': PRINT_TO_N,
    'buggy_source': PRINT_TO_N_MISSING_INIT,
    'mapping': {'loop.j': 'i', 'loop.l': 'n', 'main.j': 'i', 'main.l': 'n'},
    'bug_type': ME,
    'bug_site': 0,
    'bug_description': 'removed i = 1;',
    'mutation_config_id': 0,
    'ipa_id': 'ipa05',
    'program_id': 'ipa05/v1',
    'split': 'eval',
}

SUITES = {'ipa05': PRINT_TO_N_SUITE}

CONSTANT_COMPARISON = """\
int main(){
    if (1 < 2) {
        printf("yes\\n");
    }
    return 0;
}
"""


def small_mapper(hidden_dim=4):
    return Mapper(init_params(len(VOCAB), hidden_dim, seed=0))


def small_checkpoint(path, hidden_dim=4):
    save_checkpoint(Checkpoint(init_params(len(VOCAB), hidden_dim, seed=0), VOCAB.kinds, '01234', hidden_dim), path)


class MetricTests(SimpleTestCase):
    def test_overlap_coefficient(self):
        self.assertEqual(overlap_coefficient({'n': 'l', 'i': 'j'}, {'n': 'l', 'i': 'j'}), 1.0)
        self.assertEqual(overlap_coefficient({'n': 'l', 'i': 'j'}, {'n': 'l', 'i': 'k'}), 0.5)
        self.assertEqual(overlap_coefficient({'n': 'l'}, {'n': 'k'}), 0.0)
        self.assertEqual(overlap_coefficient({}, {}), 1.0)

    def test_overlap_uses_the_smaller_mapping(self):
        self.assertEqual(overlap_coefficient({'a': 'x'}, {'a': 'x', 'b': 'y'}), 1.0)

    def test_overlap_with_an_empty_mapping(self):
        with self.assertRaises(ValueError):
            overlap_coefficient({}, {'n': 'l'})

    def test_seconds_summary(self):
        self.assertEqual(seconds_summary([]), {'mean': None, 'min': None, 'max': None})
        self.assertEqual(seconds_summary([1, 2, 6]), {'mean': 3.0, 'min': 1.0, 'max': 6.0})

    def test_mapping_summary_groups_by_variable_count(self):
        rows = [
            {'variables': 2, 'exact': True, 'overlap': 1.0, 'seconds': 0.1},
            {'variables': 2, 'exact': False, 'overlap': 0.5, 'seconds': 0.3},
            {'variables': 3, 'exact': True, 'overlap': 1.0, 'seconds': 0.2},
        ]
        summary = mapping_summary(rows)
        self.assertEqual(summary['exact'], 2)
        self.assertAlmostEqual(summary['mean_overlap'], 2.5 / 3)
        self.assertEqual(summary['by_variable_count'], {'2': {'pairs': 2, 'exact': 1}, '3': {'pairs': 1, 'exact': 1}})
        self.assertIsNone(mapping_summary([])['exact_rate'])

    def test_without_timings(self):
        report = {'all': {'pairs': 1, 'mapping_seconds': {'mean': 0.1}}, 'timing': 'note'}
        self.assertEqual(without_timings(report), {'all': {'pairs': 1}})


class BenchmarkTests(SimpleTestCase):
    def run_method(self, method, mapper=None):
        return evaluate_repair([MISSING_INIT_RECORD], SUITES, method, mapper, step_limit=FAST)

    def test_oracle_mapping_fixes_with_one_mapping(self):
        report, cactus = self.run_method(ORACLE)
        self.assertEqual(report[ALL]['counts'][FIXED], 1)
        self.assertEqual(report[ALL]['fixed_first_mapping'], 1)
        self.assertEqual(report['by_bug_type'][ME]['pairs'], 1)
        self.assertEqual(report['by_bug_type'][WCO]['pairs'], 0)
        self.assertIsNone(report['by_bug_type'][WCO]['rates'][FIXED])
        self.assertEqual([row[:2] for row in cactus], [('ipa05/v1#0', ORACLE)])

    def test_uniform_baseline_eventually_fixes(self):
        report, _ = self.run_method(UNIFORM)
        self.assertEqual(report[ALL]['counts'][FIXED], 1)
        self.assertGreaterEqual(report[ALL]['mappings_used']['min'], 1)

    def test_untrained_mapper_stream_fixes(self):
        report, _ = self.run_method(GNN, small_mapper())
        self.assertEqual(report[ALL]['counts'][FIXED], 1)
        self.assertIsNotNone(report[ALL]['mapping_seconds']['mean'])

    def test_programs_without_variables_still_get_repaired(self):
        record = {
            **MISSING_INIT_RECORD,
            'correct_source': CONSTANT_COMPARISON,
            'buggy_source': CONSTANT_COMPARISON.replace('1 < 2', '1 > 2'),
            'mapping': {},
            'bug_type': WCO,
            'ipa_id': 'constant',
            'program_id': 'constant/v1',
        }
        suites = {'constant': TestSuite((TestCase('', 'yes\n'),))}
        for method, mapper in ((UNIFORM, None), (GNN, small_mapper()), (ORACLE, None)):
            report, _ = evaluate_repair([record], suites, method, mapper, step_limit=FAST)
            with self.subTest(method=method):
                self.assertEqual(report[ALL]['counts'][FIXED], 1)
                self.assertEqual(report[ALL]['fixed_first_mapping'], 1)

    def test_gnn_needs_a_mapper(self):
        with self.assertRaises(ValueError):
            self.run_method(GNN)
        with self.assertRaises(ValueError):
            self.run_method('random')

    def test_cactus_rows_are_sorted_fixed_pairs(self):
        rows = [
            {'program_id': 'a', 'status': FIXED, 'seconds': 2.0},
            {'program_id': 'b', 'status': 'timeout', 'seconds': 9.0},
            {'program_id': 'c', 'status': FIXED, 'seconds': 1.0},
        ]
        self.assertEqual(cactus_rows(rows, GNN), [('c#2', GNN, 1.0), ('a#0', GNN, 2.0)])
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'cactus.csv'
            write_cactus_csv(cactus_rows(rows, GNN), path)
            with path.open() as fh:
                lines = list(csv.reader(fh))
        self.assertEqual(lines[0], ['program_id', 'method', 'seconds'])
        self.assertEqual(lines[1], ['c#2', GNN, '1.000000'])


class OracleTests(SimpleTestCase):
    def test_dense_encoder_agrees(self):
        passed, summary = rgcn_dense_oracle(instances=6)
        self.assertTrue(passed, summary)

    def test_gradient_check(self):
        passed, summary = gradient_check(instances=2, coordinates=8)
        self.assertTrue(passed, summary)

    def test_enumeration_matches_brute_force(self):
        passed, summary = enumeration_oracle(instances=20)
        self.assertTrue(passed, summary)

    def test_mutations_preserve_behaviour(self):
        corpus = [entry for entry in load_corpus() if entry.ipa_id == 'ipa05']
        passed, summary = mutation_preservation(corpus)
        self.assertTrue(passed, summary)
        self.assertEqual(summary['mutants'], 31 * len(corpus))

    def test_failing_check_is_reported(self):
        result = run_oracle('broken', lambda: 1 / 0)
        self.assertFalse(result.passed)
        self.assertEqual(result.summary['kind'], 'ZeroDivisionError')


class CommandTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)

    def write(self, name, text):
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        return str(path)

    def call(self, *args, **options):
        out = io.StringIO()
        call_command(*args, stdout=out, quiet=True, **options)
        return json.loads(out.getvalue())

    def test_map_reports_every_variable(self):
        checkpoint = self.root / 'model.ckpt'
        small_checkpoint(checkpoint)
        result = self.call(
            'map', self.write('buggy.c', PRINT_TO_N_MISSING_INIT), self.write('correct.c', PRINT_TO_N),
            checkpoint=str(checkpoint),
        )
        self.assertEqual(sorted(result['mapping']), ['loop.j', 'loop.l', 'main.j', 'main.l'])
        self.assertEqual(result['correct_variables'], ['n', 'i'])
        self.assertEqual(len(result['probabilities']), 4)

    def test_errors_are_reported_as_json(self):
        with self.assertRaises(CommandError) as caught:
            self.call('map', str(self.root / 'missing.c'), str(self.root / 'missing.c'))
        self.assertEqual(json.loads(str(caught.exception))['kind'], 'FileNotFoundError')
        with self.assertRaises(CommandError) as caught:
            self.call('map', self.write('bad.c', 'int main( {'), self.write('good.c', PRINT_TO_N))
        self.assertEqual(json.loads(str(caught.exception))['kind'], 'ParseError')

    def test_missing_checkpoint(self):
        buggy, correct = self.write('buggy.c', PRINT_TO_N), self.write('correct.c', PRINT_TO_N)
        with self.assertRaises(CommandError) as caught:
            self.call('map', buggy, correct, checkpoint=str(self.root / 'none.ckpt'))
        self.assertEqual(json.loads(str(caught.exception))['kind'], 'CheckpointError')

    def test_repair_command(self):
        dump_suite(PRINT_TO_N_SUITE, self.root / 'suite')
        result = self.call(
            'repair', self.write('buggy.c', PRINT_TO_N_MISSING_INIT), self.write('correct.c', PRINT_TO_N),
            str(self.root / 'suite'), method=UNIFORM, step_limit=FAST,
        )
        self.assertEqual(result['status'], FIXED)
        self.assertIn('j = 1;', result['fixed_source'])

    def test_generate_train_and_evaluate(self):
        corpus = self.root / 'corpus' / 'ipa05'
        self.write('corpus/ipa05/solutions/v1.c', PRINT_TO_N)
        dump_suite(PRINT_TO_N_SUITE, corpus / 'suite')
        dataset = self.root / 'dataset.jsonl'
        first = self.call('gen', corpus=str(self.root / 'corpus'), out=str(dataset), step_limit=FAST, seed=1)
        digest = first['sha256']
        self.assertGreater(first['records'], 0)
        self.assertTrue((self.root / 'dataset.jsonl.manifest.json').exists())
        again = self.call('gen', corpus=str(self.root / 'corpus'), out=str(dataset), step_limit=FAST, seed=1)
        self.assertEqual(again['sha256'], digest)

        checkpoint = self.root / 'model.ckpt'
        trained = self.call('train', dataset=str(dataset), out=str(checkpoint), epochs=1, hidden_dim=4)
        self.assertEqual(trained['steps'], first['records'])
        history = json.loads((self.root / 'model.ckpt.history.json').read_text())
        self.assertEqual(len(history['epochs']), 1)

        report = self.call(
            'eval_map', dataset=str(dataset), split='train', checkpoint=str(checkpoint),
            out=str(self.root / 'report.json'), no_timings=True,
        )
        self.assertEqual(report['all']['pairs'], first['records'])
        self.assertNotIn('mapping_seconds', report['all'])

    def test_selftest_runs_the_selected_checks(self):
        result = self.call(
            'selftest', skip=['rgcn-dense', 'gradient-check', 'mutation-preservation', 'repair-closure'],
        )
        self.assertTrue(result['passed'])
        self.assertEqual([check['name'] for check in result['checks']], ['enumeration'])
