import itertools
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from lang.parser import parse, parse_expression
from lang.printer import pretty_print
from lang.rename import rename_variables
from lang.scope import variables
from lang.suites import run_test_suite
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT, PRINT_TO_N_SUITE
from mapper.mapping import VariableMapping
from mutate.bugs import ground_truth, inject_me, inject_vm, inject_wco
from mutate.corpus import load_corpus

from .comparisons import CmpMultiset, comparison_key, mirrored_expression
from .engine import EXHAUSTED, FIXED, TIMEOUT, repair
from .strategies import missing_snippets, repair_me, repair_vm, repair_wco

FAST = 10 ** 4

# loop.j -> i, loop.l -> n, main.j -> i, main.l -> n
MISSING_INIT_MAPPING = (1, 0, 1, 0)


def mapping_for(buggy, correct, choice):
    return VariableMapping.from_choice(choice, variables(buggy), variables(correct))


def identity(program):
    return mapping_for(program, program, range(len(variables(program))))


def passes(program):
    return run_test_suite(program, PRINT_TO_N_SUITE, FAST).all_passed


class ComparisonTests(SimpleTestCase):
    def test_mirrored_expression(self):
        self.assertEqual(mirrored_expression(parse_expression('i <= n')), parse_expression('n >= i'))
        self.assertEqual(mirrored_expression(parse_expression('a == b')), parse_expression('b == a'))
        for source in ('i < n', 'x + 1 != y', 'a >= b * 2'):
            cmp = parse_expression(source)
            self.assertEqual(mirrored_expression(mirrored_expression(cmp)), cmp)

    def test_only_comparisons_can_be_mirrored(self):
        with self.assertRaises(ValueError):
            mirrored_expression(parse_expression('a + b'))

    def test_mirrors_share_a_key(self):
        self.assertEqual(comparison_key(parse_expression('i <= n')), comparison_key(parse_expression('n >= i')))
        self.assertNotEqual(comparison_key(parse_expression('i < n')), comparison_key(parse_expression('i <= n')))
        program = parse('int main(){ int i = 0, n = 1; if (i <= n) { i = 1; } if (n >= i) { i = 2; } return 0; }')
        counts = CmpMultiset.of(program)
        self.assertEqual(list(counts.values()), [2])


class StrategyTests(SimpleTestCase):
    def test_wrong_operator_is_fixed_against_a_mirrored_reference(self):
        buggy = parse(PRINT_TO_N.replace('i <= n', 'i < n'))
        correct = parse(PRINT_TO_N.replace('i <= n', 'n >= i'))
        candidates = list(repair_wco(buggy, correct, mapping_for(buggy, correct, (0, 1))))
        self.assertEqual(len(candidates), 1)
        self.assertIn('i <= n', pretty_print(candidates[0]))
        self.assertTrue(passes(candidates[0]))

    def test_identical_programs_give_no_candidates(self):
        program = parse(PRINT_TO_N)
        mapping = identity(program)
        for strategy in (repair_wco, repair_vm, repair_me):
            self.assertEqual(list(strategy(program, program, mapping)), [])

    def test_variable_misuse_is_fixed(self):
        correct = parse(PRINT_TO_N)
        for buggy, _ in inject_vm(correct, PRINT_TO_N_SUITE, step_limit=FAST):
            mapping = ground_truth(buggy, correct)
            candidates = list(repair_vm(buggy, correct, mapping))
            self.assertTrue(any(passes(c) for c in candidates))

    def test_missing_initialisation_is_inserted(self):
        buggy, correct = parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N)
        mapping = mapping_for(buggy, correct, MISSING_INIT_MAPPING)
        renamed = rename_variables(buggy, mapping)
        self.assertEqual([pretty_print(s) for s in missing_snippets(renamed, correct)], ['i = 1;'])
        candidates = list(repair_me(buggy, correct, mapping))
        fixes = [c for c in candidates if passes(c)]
        self.assertTrue(fixes)
        self.assertIn('j = 1;', pretty_print(fixes[0]))
        for candidate in candidates:
            self.assertEqual(parse(pretty_print(candidate)), candidate)
            self.assertLessEqual({v.name for v in variables(candidate)}, {'j', 'l'})

    def test_prefix_and_postfix_increments_count_as_one_statement(self):
        program = parse(PRINT_TO_N)
        reference = parse(PRINT_TO_N.replace('i++', '++i'))
        self.assertEqual(missing_snippets(program, reference), [])


class RepairTests(SimpleTestCase):
    def test_classic_missing_initialisation(self):
        buggy, correct = parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N)
        stream = [mapping_for(buggy, correct, MISSING_INIT_MAPPING)]
        outcome = repair(buggy, correct, stream, PRINT_TO_N_SUITE, step_limit=FAST)
        self.assertEqual(outcome.status, FIXED)
        self.assertEqual(outcome.mappings_tried, 1)
        self.assertEqual(outcome.strategy, 'me')
        self.assertTrue(passes(parse(outcome.fixed_source)))

    def test_injected_bugs_are_fixed_with_the_ground_truth(self):
        for entry in load_corpus():
            if entry.ipa_id not in ('ipa02', 'ipa05', 'ipa07'):
                continue
            for inject in (inject_wco, inject_vm, inject_me):
                found = inject(entry.program, entry.suite, seed=0, step_limit=FAST)[:1]
                for buggy, bug in found:
                    outcome = repair(
                        buggy, entry.program, [ground_truth(buggy, entry.program)], entry.suite, step_limit=FAST,
                    )
                    with self.subTest(program=entry.program_id, bug=bug.description):
                        self.assertEqual(outcome.status, FIXED)
                        self.assertTrue(run_test_suite(parse(outcome.fixed_source), entry.suite, FAST).all_passed)

    def test_nothing_to_try_is_exhausted(self):
        program = parse(PRINT_TO_N)
        outcome = repair(program, program, [identity(program)] * 3, PRINT_TO_N_SUITE, step_limit=FAST)
        self.assertEqual(outcome.status, EXHAUSTED)
        self.assertEqual(outcome.mappings_tried, 3)
        self.assertEqual(outcome.candidates_tried, 0)
        self.assertEqual(repair(program, program, [], PRINT_TO_N_SUITE).status, EXHAUSTED)

    def test_repeated_candidates_are_tested_once(self):
        buggy = parse(PRINT_TO_N.replace('i <= n', 'i < n').replace('i++', 'i = i + 2'))
        correct = parse(PRINT_TO_N.replace('i++', 'i = i + 1'))
        mapping = mapping_for(buggy, correct, (0, 1))
        once = repair(buggy, correct, [mapping], PRINT_TO_N_SUITE, step_limit=FAST)
        twice = repair(buggy, correct, [mapping, mapping], PRINT_TO_N_SUITE, step_limit=FAST)
        self.assertEqual(once.status, EXHAUSTED)
        self.assertEqual(twice.candidates_tried, once.candidates_tried)
        self.assertEqual(twice.mappings_tried, 2)

    def test_timeout(self):
        ticks = itertools.count()
        buggy, correct = parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N)
        stream = [mapping_for(buggy, correct, MISSING_INIT_MAPPING)]
        outcome = repair(buggy, correct, stream, PRINT_TO_N_SUITE, budget=0.5, clock=lambda: next(ticks))
        self.assertEqual(outcome.status, TIMEOUT)
        self.assertGreaterEqual(outcome.elapsed, 0.5)

    def test_budget_must_be_positive(self):
        program = parse(PRINT_TO_N)
        with self.assertRaises(ValueError):
            repair(program, program, [], PRINT_TO_N_SUITE, budget=0)

    def test_candidates_are_written_to_the_scratch_directory(self):
        buggy = parse(PRINT_TO_N.replace('i <= n', 'i < n'))
        correct = parse(PRINT_TO_N)
        with tempfile.TemporaryDirectory() as tmp:
            outcome = repair(buggy, correct, [identity(buggy)], PRINT_TO_N_SUITE, step_limit=FAST, scratch_dir=tmp)
            self.assertEqual(outcome.status, FIXED)
            self.assertEqual(outcome.candidates_tried, 1)
            self.assertEqual((Path(tmp) / '1.c').read_text(), outcome.fixed_source)
