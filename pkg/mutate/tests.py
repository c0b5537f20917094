import json
import random
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from lang.parser import parse
from lang.printer import pretty_print
from lang.rename import rename_variables
from lang.scope import variables
from lang.suites import TestCase, TestSuite, run_test_suite
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT, PRINT_TO_N_SUITE

from . import transforms as t
from .bugs import (
    ME, VM, WCO, ground_truth, inject_me, inject_vm, inject_wco, make_pair, me_candidates, vm_candidates, wco_candidates,
)
from .corpus import CorpusProgram, load_corpus
from .dataset import (
    EVAL, TRAIN, VALID, CorpusError, assign_splits, generate_dataset, load_dataset, manifest, record_labels,
    training_example, write_dataset,
)

IF_ELSE = """\
int main(){
    int a, b;
    scanf("%d %d", &a, &b);
    if (a > b) {
        printf("first\\n");
    } else {
        printf("second\\n");
    }
    return 0;
}
"""

IF_ELSE_SUITE = TestSuite((TestCase('2 1', 'first\n'), TestCase('1 2', 'second\n'), TestCase('3 3', 'second\n')))

PRINT_TO_N_WITH_HELPER = """\
void loop(int j, int l){
    while (l >= j) {
        printf("%d\\n", j);
        ++j;
    }
}

int main(){
    int j, l;
    scanf("%d", &l);
    j = 1;
    loop(j, l);
    return 0;
}
"""

FAST = 10 ** 4


def outputs(program, suite):
    return [r.stdout for r in run_test_suite(program, suite, FAST).results]


class MutationConfigTests(SimpleTestCase):
    def test_thirty_one_configurations(self):
        configs = t.MutationConfig.all()
        self.assertEqual(len(configs), 31)
        self.assertEqual(len({c.families for c in configs}), 31)
        self.assertTrue(all(c.families for c in configs))

    def test_families_follow_canonical_order(self):
        self.assertEqual(t.MutationConfig(1).families, (t.MIRROR_COMPARISONS,))
        self.assertEqual(t.MutationConfig(31).families, t.CANONICAL_ORDER)
        self.assertEqual(t.MutationConfig(0b10001).families, (t.MIRROR_COMPARISONS, t.FOR_TO_WHILE))

    def test_ids_out_of_range(self):
        for bad in (0, 32):
            with self.assertRaises(ValueError):
                t.MutationConfig(bad)


class TransformTests(SimpleTestCase):
    def test_mirror_comparisons(self):
        result = t.mirror_comparisons(parse(PRINT_TO_N))
        self.assertEqual(result.applied, (t.MIRROR_COMPARISONS,))
        self.assertIn('n >= i', pretty_print(result.program))
        self.assertEqual(t.mirror_comparisons(result.program).program, parse(PRINT_TO_N))

    def test_side_effects_block_mirroring(self):
        program = parse('int main(){ int i = 0; if (i++ < 1) { printf("x"); } return 0; }')
        self.assertFalse(t.mirror_comparisons(program).changed)

    def test_swap_if_else(self):
        program = parse(IF_ELSE)
        result = t.swap_if_else(program)
        text = pretty_print(result.program)
        self.assertIn('if (!(a > b)) {', text)
        self.assertLess(text.index('second'), text.index('first'))
        self.assertEqual(outputs(result.program, IF_ELSE_SUITE), outputs(program, IF_ELSE_SUITE))
        self.assertEqual(t.swap_if_else(result.program).program, program)

    def test_mirror_incdec_only_at_statement_position(self):
        result = t.mirror_incdec(parse(PRINT_TO_N))
        self.assertIn('for (i = 1; i <= n; ++i) {', pretty_print(result.program))
        program = parse('int main(){ int i = 0, x; x = i++; printf("%d %d", x, i); return 0; }')
        self.assertFalse(t.mirror_incdec(program).changed)

    def test_reorder_decls(self):
        result = t.reorder_decls(parse(PRINT_TO_N), seed=3)
        self.assertEqual([v.name for v in variables(result.program)], ['i', 'n'])
        self.assertTrue(run_test_suite(result.program, PRINT_TO_N_SUITE).all_passed)

    def test_reorder_keeps_dependent_initialisers(self):
        program = parse('int main(){ int a = 1, b = a; printf("%d", b); return 0; }')
        result = t.reorder_decls(program, seed=0)
        self.assertFalse(result.changed)
        self.assertIs(result.program, program)

    def test_for_to_while(self):
        result = t.for_to_while(parse(PRINT_TO_N))
        text = pretty_print(result.program)
        self.assertNotIn('for', text)
        self.assertIn('i = 1;\n    while (i <= n) {', text)
        self.assertTrue(run_test_suite(result.program, PRINT_TO_N_SUITE).all_passed)

    def test_for_to_while_refuses_continue(self):
        source = 'int main(){ int i, s = 0; for (i = 0; i < 5; i++) { if (i == 2) { continue; } s += i; } printf("%d", s); return 0; }'
        self.assertFalse(t.for_to_while(parse(source)).changed)
        nested = 'int main(){ int i, j; for (i = 0; i < 2; i++) { j = 0; while (j < 3) { j++; if (j == 1) { continue; } } } return 0; }'
        self.assertTrue(t.for_to_while(parse(nested)).changed)

    def test_for_to_while_refuses_a_body_shadowing_the_update(self):
        source = 'int main(){ int i; for (i = 0; i < 3; i++) { int i = 5; printf("%d", i); } return 0; }'
        program = parse(source)
        result = t.for_to_while(program)
        self.assertFalse(result.changed)
        self.assertIs(result.program, program)

    def test_for_declarations_stay_scoped(self):
        source = """
        int main(){
            int s = 0;
            for (int i = 0; i < 3; i++) { s += i; }
            for (int i = 0; i < 2; i++) { s += i; }
            printf("%d\\n", s);
            return 0;
        }
        """
        suite = TestSuite((TestCase('', '4\n'),))
        result = t.for_to_while(parse(source))
        self.assertTrue(result.changed)
        self.assertTrue(run_test_suite(result.program, suite).all_passed)

    def test_nothing_to_mutate(self):
        program = parse('int main(){return 0;}')
        for family in t.CANONICAL_ORDER:
            result = t.mutate(program, family)
            self.assertFalse(result.changed)
            self.assertIs(result.program, program)
        self.assertEqual(t.apply_config(program, t.MutationConfig(31)).applied, ())

    def test_random_site_selection(self):
        source = """
        int main(){
            int a, b, c, d;
            scanf("%d %d %d %d", &a, &b, &c, &d);
            if (a < b) { printf("1"); }
            if (b < c) { printf("2"); }
            if (c < d) { printf("3"); }
            return 0;
        }
        """
        program = parse(source)
        self.assertEqual(pretty_print(t.mirror_comparisons(program).program).count(' > '), 3)
        seen = set()
        for seed in range(20):
            mirrored = pretty_print(t.mirror_comparisons(program, random.Random(seed)).program).count(' > ')
            self.assertGreaterEqual(mirrored, 1)
            self.assertLessEqual(mirrored, 3)
            seen.add(mirrored)
        self.assertGreater(len(seen), 1)

    def test_every_configuration_preserves_corpus_behaviour(self):
        for entry in load_corpus():
            for config in t.MutationConfig.all():
                mutated = t.apply_config(entry.program, config, rng=random.Random(config.id)).program
                with self.subTest(program=entry.program_id, config=config.id):
                    self.assertTrue(run_test_suite(mutated, entry.suite).all_passed)
                    self.assertEqual(parse(pretty_print(mutated)), mutated)


class BugTests(SimpleTestCase):
    def test_wco_one_candidate_per_comparison(self):
        candidates = list(wco_candidates(parse(PRINT_TO_N), random.Random(0)))
        self.assertEqual(len(candidates), 1)
        self.assertNotIn('<=', pretty_print(candidates[0][0]))

    def test_injected_wco_fails_the_suite(self):
        found = inject_wco(parse(PRINT_TO_N), PRINT_TO_N_SUITE, seed=1, step_limit=FAST)
        self.assertEqual(len(found), 1)
        buggy, bug = found[0]
        self.assertEqual(bug.type, WCO)
        self.assertFalse(run_test_suite(buggy, PRINT_TO_N_SUITE, FAST).all_passed)

    def test_no_comparison_no_wco(self):
        program = parse('int main(){ int x; scanf("%d", &x); printf("%d\\n", x); return 0; }')
        suite = TestSuite((TestCase('1', '1\n'),))
        self.assertEqual(inject_wco(program, suite), [])
        self.assertEqual(inject_vm(program, suite), [])

    def test_variable_misuse(self):
        found = inject_vm(parse(PRINT_TO_N), PRINT_TO_N_SUITE, seed=0, step_limit=FAST)
        self.assertEqual(len(found), 3)
        for buggy, bug in found:
            self.assertEqual(bug.type, VM)
            self.assertFalse(run_test_suite(buggy, PRINT_TO_N_SUITE, FAST).all_passed)
            pair = make_pair(parse(PRINT_TO_N), buggy, bug)
            self.assertEqual(pair.mapping_dict(), {'n': 'n', 'i': 'i'})

    def test_variable_misuse_respects_types(self):
        program = parse('int main(){ int i; float f, g; scanf("%d %f %f", &i, &f, &g); printf("%d %f\\n", i, f); return 0; }')
        self.assertEqual([bug.description for _, bug in vm_candidates(program)], ['f -> g'])

    def test_missing_initialisation_reproduces_the_classic_bug(self):
        found = inject_me(parse(PRINT_TO_N_WITH_HELPER), PRINT_TO_N_SUITE, step_limit=FAST)
        self.assertIn(parse(PRINT_TO_N_MISSING_INIT), [buggy for buggy, _ in found])

    def test_missing_expression_candidates(self):
        found = inject_me(parse(PRINT_TO_N), PRINT_TO_N_SUITE, step_limit=FAST)
        self.assertEqual(sorted(bug.description for _, bug in found), ['removed i = 1;', 'removed i++;'])
        self.assertTrue(all(bug.type == ME for _, bug in found))
        self.assertEqual(inject_me(parse('int main(){ return 0; }'), PRINT_TO_N_SUITE), [])

    def test_deleted_loop_clauses_leave_a_while_loop(self):
        found = {bug.description: buggy for buggy, bug in inject_me(parse(PRINT_TO_N), PRINT_TO_N_SUITE, step_limit=FAST)}
        without_update = pretty_print(found['removed i++;'])
        self.assertNotIn('for', without_update)
        self.assertIn('i = 1;\n    while (i <= n) {', without_update)
        self.assertNotIn('i++', without_update)
        without_init = pretty_print(found['removed i = 1;'])
        self.assertNotIn('for', without_init)
        self.assertNotIn('i = 1', without_init)
        self.assertIn('i++;', without_init)

    def test_deleted_loop_declaration_keeps_the_variable(self):
        source = 'int main(){ int n; scanf("%d", &n); for (int i = 1; i <= n; i++) { printf("%d\\n", i); } return 0; }'
        program = parse(source)
        found = {bug.description: buggy for buggy, bug in inject_me(program, PRINT_TO_N_SUITE, step_limit=FAST)}
        self.assertIn('removed i = ...', found)
        self.assertEqual([v.key for v in variables(found['removed i = ...'])], [v.key for v in variables(program)])
        self.assertNotIn('for', pretty_print(found['removed i = ...']))

    def test_loops_that_cannot_become_while_loops_keep_their_clauses(self):
        source = 'int main(){ int n, i; scanf("%d", &n); for (i = 1; i <= n; i++) { if (i == 2) { continue; } printf("%d\\n", i); } return 0; }'
        candidates = [bug.description for _, bug in me_candidates(parse(source))]
        self.assertNotIn('removed i++;', candidates)
        self.assertNotIn('removed i = 1;', candidates)

    def test_ground_truth_with_shadowing(self):
        source = 'int main(){ int x = 1; { int x = 2; printf("%d", x); } printf("%d", x); return 0; }'
        program = parse(source)
        mapping = ground_truth(program, program)
        self.assertEqual([(b.decl, c.decl) for b, c in mapping], [(0, 0), (1, 1)])

    def test_random_renaming_updates_the_ground_truth(self):
        correct = parse(PRINT_TO_N)
        buggy, bug = inject_wco(correct, PRINT_TO_N_SUITE, step_limit=FAST)[0]
        pair = make_pair(correct, buggy, bug, rename_rng=random.Random(4))
        renamed_back = rename_variables(pair.buggy, pair.mapping)
        self.assertEqual([v.name for v in variables(renamed_back)], ['n', 'i'])
        self.assertEqual(outputs(pair.buggy, PRINT_TO_N_SUITE), outputs(buggy, PRINT_TO_N_SUITE))


class CorpusTests(SimpleTestCase):
    def test_bundled_corpus(self):
        corpus = load_corpus()
        self.assertEqual(len({e.ipa_id for e in corpus}), 10)
        self.assertGreaterEqual(len(corpus), 30)
        held_out = [e.program_id for e in corpus if e.held_out]
        self.assertEqual(len(held_out), 10)
        self.assertTrue(all(p.endswith('/v3') for p in held_out))

    def test_every_reference_solution_passes(self):
        for entry in load_corpus():
            with self.subTest(program=entry.program_id):
                self.assertTrue(run_test_suite(entry.program, entry.suite).all_passed)

    def test_missing_directory(self):
        with self.assertRaises(FileNotFoundError):
            load_corpus('/nonexistent/corpus')


class DatasetTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.corpus = [e for e in load_corpus() if e.ipa_id == 'ipa05']
        cls.records = generate_dataset(cls.corpus, seed=0, valid_fraction=0.5, step_limit=FAST)

    def test_splits(self):
        splits = assign_splits(self.corpus, seed=0, valid_fraction=0.5)
        self.assertEqual(splits['ipa05/v3'], EVAL)
        self.assertEqual(sorted(splits[p] for p in ('ipa05/v1', 'ipa05/v2')), [TRAIN, VALID])
        self.assertEqual({r['split'] for r in self.records}, {TRAIN, VALID, EVAL})

    def test_record_count_is_bounded(self):
        self.assertGreater(len(self.records), 0)
        self.assertLessEqual(len(self.records), len(self.corpus) * 31 * 3)

    def test_buggy_side_fails_and_correct_side_passes(self):
        suite = self.corpus[0].suite
        for r in self.records[::7]:
            self.assertTrue(run_test_suite(parse(r['correct_source']), suite, FAST).all_passed)
            self.assertFalse(run_test_suite(parse(r['buggy_source']), suite, FAST).all_passed)

    def test_correct_side_is_the_unmutated_program(self):
        originals = {e.program_id: pretty_print(e.program) for e in self.corpus}
        for r in self.records:
            self.assertEqual(r['correct_source'], originals[r['program_id']])
        for_loop = [r for r in self.records if r['program_id'] == 'ipa05/v1']
        self.assertTrue(any('while' in r['buggy_source'] for r in for_loop))
        self.assertTrue(all('while' not in r['correct_source'] for r in for_loop))

    def test_labels_point_at_same_named_variables(self):
        for r in self.records[::11]:
            buggy, correct = parse(r['buggy_source']), parse(r['correct_source'])
            labels = record_labels(r)
            correct_vars = variables(correct)
            self.assertEqual([correct_vars[c].name for c in labels], [v.name for v in variables(buggy)])
        example = training_example(self.records[0])
        self.assertEqual(len(example.labels), len(example.buggy.var_nodes))

    def test_same_seed_gives_identical_files(self):
        again = generate_dataset(self.corpus, seed=0, valid_fraction=0.5, step_limit=FAST)
        with tempfile.TemporaryDirectory() as tmp:
            first, second = Path(tmp) / 'a.jsonl', Path(tmp) / 'b.jsonl'
            write_dataset(self.records, first)
            write_dataset(again, second)
            self.assertEqual(first.read_bytes(), second.read_bytes())
            self.assertEqual(load_dataset(first), json.loads('[' + ','.join(first.read_text().split('\n')[:-1]) + ']'))
            self.assertEqual(len(load_dataset(first, split=EVAL)), sum(r['split'] == EVAL for r in self.records))

    def test_manifest(self):
        data = manifest(self.corpus, self.records, 0, 1, False, False, 0.5)
        self.assertEqual(set(data['corpus']), {'ipa05/v1', 'ipa05/v2', 'ipa05/v3'})
        total = sum(sum(by_bug.values()) for by_bug in data['counts'].values())
        self.assertEqual(total, len(self.records))

    def test_program_failing_its_suite_is_rejected(self):
        broken = CorpusProgram('ipa05', 'ipa05/broken', PRINT_TO_N_MISSING_INIT, PRINT_TO_N_SUITE)
        with self.assertRaises(CorpusError) as raised:
            generate_dataset([broken])
        self.assertEqual(raised.exception.failures[0][0], 'ipa05/broken')
