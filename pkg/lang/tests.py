import random
import tempfile

from django.test import SimpleTestCase

from . import nodes as n
from . import edits, suites
from .exceptions import ParseError, RenameError, ScopeError
from .interpreter import RUNTIME_ERROR, STEP_LIMIT_EXCEEDED, interpret
from .parser import parse
from .printer import pretty_print
from .rename import REVERSE, rename_variables
from .scope import variables

PRINT_TO_N = """\
int main(){
    int n, i;
    scanf("%d", &n);
    for(i = 1; i <= n; i++){
        printf("%d\\n", i);
    }
    return 0;
}
"""

PRINT_TO_N_MISSING_INIT = """\
void loop(int j, int l){
  while (l >= j){
    printf("%d\\n", j);
    ++j;
  }
}
int main(){
  int j, l;
  scanf("%d", &l);
  loop(j, l);
  return 0;
}
"""

PRINT_TO_N_SUITE = suites.TestSuite((
    suites.TestCase('3', '1\n2\n3\n'),
    suites.TestCase('1\n', '1\n'),
    suites.TestCase('0', ''),
))


def run(source, stdin=''):
    return interpret(parse(source), stdin)


class ParseTests(SimpleTestCase):
    def test_print_to_n_has_one_function_and_two_variables(self):
        program = parse(PRINT_TO_N)
        self.assertEqual([fn.name for fn in program.functions], ['main'])
        self.assertEqual([v.name for v in variables(program)], ['n', 'i'])

    def test_minimal_program_has_no_variables(self):
        self.assertEqual(variables(parse('int main(){return 0;}')), ())

    def test_helper_function_variables_are_per_scope(self):
        program = parse(PRINT_TO_N_MISSING_INIT)
        self.assertEqual([fn.name for fn in program.functions], ['loop', 'main'])
        found = variables(program)
        self.assertEqual([v.key for v in found], ['loop.j', 'loop.l', 'main.j', 'main.l'])
        self.assertEqual(len({v.decl for v in found}), 4)

    def test_occurrences_resolve_to_their_declaration(self):
        program = parse(PRINT_TO_N_MISSING_INIT)
        loop, main = program.functions
        decls = {node.decl for node in n.walk(main) if isinstance(node, n.Var) and node.name == 'j'}
        self.assertEqual(decls, {2})
        decls = {node.decl for node in n.walk(loop) if isinstance(node, n.Var) and node.name == 'j'}
        self.assertEqual(decls, {0})

    def test_syntax_error_reports_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse('int main(){\n  int x = ;\n}')
        self.assertEqual((ctx.exception.line, ctx.exception.col), (2, 11))

    def test_unexpected_character(self):
        with self.assertRaises(ParseError):
            parse('int main(){ int a @ 1; return 0; }')

    def test_scope_errors(self):
        for source in (
            'int main(){ x = 1; return 0; }',
            'int main(){ int a; int a; return 0; }',
            'int f(){ return 0; }',
            'int main(){ return g(1); }',
        ):
            with self.subTest(source=source), self.assertRaises(ScopeError):
                parse(source)

    def test_shadowing_in_nested_block_is_allowed(self):
        program = parse('int main(){ int a = 1; { int a = 2; printf("%d", a); } printf("%d", a); return 0; }')
        self.assertEqual(len(variables(program)), 2)
        self.assertEqual(interpret(program, '').stdout, '21')


class PrettyPrintTests(SimpleTestCase):
    def assertRoundTrips(self, program):
        text = pretty_print(program)
        self.assertEqual(parse(text), program)
        self.assertEqual(pretty_print(parse(text)), text)

    def test_minimal_program(self):
        program = parse('int main(){return 0;}')
        self.assertEqual(pretty_print(program), 'int main() {\n    return 0;\n}\n')
        self.assertRoundTrips(program)

    def test_sample_programs(self):
        self.assertRoundTrips(parse(PRINT_TO_N))
        self.assertRoundTrips(parse(PRINT_TO_N_MISSING_INIT))

    def test_else_if_chain_and_unbraced_bodies(self):
        source = """
        int main(){
            int x;
            scanf("%d", &x);
            if (x < 0) printf("neg\\n");
            else if (x == 0) printf("zero\\n");
            else { if (x > 100) printf("big\\n"); else printf("pos\\n"); }
            for (;;) break;
            return 0;
        }
        """
        program = parse(source)
        self.assertRoundTrips(program)
        self.assertIn('} else if (x == 0) {', pretty_print(program))

    def test_overflowing_float_literal(self):
        program = parse('int main(){ float f = 1e400; printf("%f", f); return 0; }')
        self.assertIn('float f = 1e999;', pretty_print(program))
        self.assertRoundTrips(program)
        self.assertRoundTrips(parse('int main(){ float f = 1e308, g = 0.000125; printf("%f %f", f, g); return 0; }'))

    def test_parentheses_follow_precedence(self):
        program = parse('int main(){ int a = 1, b = 2; printf("%d", (a - (b - 1)) * -(a + b)); return 0; }')
        self.assertIn('(a - (b - 1)) * -(a + b)', pretty_print(program))
        self.assertRoundTrips(program)

    def test_random_programs_round_trip(self):
        rng = random.Random(7)
        for _ in range(1000):
            program = random_program(rng)
            self.assertEqual(parse(pretty_print(program)), program)


def random_expression(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        choice = rng.randrange(4)
        if choice == 0:
            return n.IntLit(rng.randrange(100))
        if choice == 1:
            return n.FloatLit(rng.choice([0.5, 2.25, 10.0]))
        if choice == 2:
            return n.IncDec(rng.choice(n.INCDEC_OPS), rng.random() < 0.5, n.Var(rng.choice('ab')))
        return n.Var(rng.choice('ab'))
    if rng.random() < 0.25:
        return n.Unary(rng.choice(n.UNARY_OPS), random_expression(rng, depth - 1))
    return n.Binary(rng.choice(n.BINARY_OPS), random_expression(rng, depth - 1), random_expression(rng, depth - 1))


def random_statement(rng, depth):
    choice = rng.randrange(6 if depth else 3)
    if choice == 0:
        return n.Assign(n.Var(rng.choice('ab')), rng.choice(n.ASSIGN_OPS), random_expression(rng, 3))
    if choice == 1:
        return n.Printf('%d\n', (random_expression(rng, 3),))
    if choice == 2:
        return n.ExprStmt(n.IncDec('++', True, n.Var('a')))
    body = n.Block(tuple(random_statement(rng, depth - 1) for _ in range(rng.randrange(3))))
    if choice == 3:
        orelse = None
        if rng.random() < 0.5:
            orelse = n.Block(tuple(random_statement(rng, depth - 1) for _ in range(rng.randrange(3))))
        return n.If(random_expression(rng, 2), body, orelse)
    if choice == 4:
        return n.While(random_expression(rng, 2), body)
    return n.For(n.Assign(n.Var('a'), '=', n.IntLit(0)), random_expression(rng, 2), n.ExprStmt(n.IncDec('++', False, n.Var('a'))), body)


def random_program(rng):
    declaration = n.Declaration(n.INT, (n.Declarator('a', n.IntLit(1)), n.Declarator('b', n.IntLit(2))))
    statements = (declaration,) + tuple(random_statement(rng, 2) for _ in range(rng.randrange(1, 4))) + (n.Return(n.IntLit(0)),)
    return n.Program((n.FunctionDef(n.INT, 'main', (), n.Block(statements)),))


class InterpretTests(SimpleTestCase):
    def test_prints_one_to_n(self):
        result = run(PRINT_TO_N, '3')
        self.assertTrue(result.ok)
        self.assertEqual(result.stdout, '1\n2\n3\n')
        self.assertFalse(result.uninitialized_read)

    def test_empty_program_prints_nothing(self):
        self.assertEqual(run('int main(){return 0;}').stdout, '')

    def test_infinite_loop_hits_step_limit(self):
        result = interpret(parse('int main(){ while(1){} }'), '', step_limit=10 ** 6)
        self.assertEqual(result.status, STEP_LIMIT_EXCEEDED)

    def test_uninitialized_read_is_flagged(self):
        result = run(PRINT_TO_N_MISSING_INIT, '3')
        self.assertTrue(result.ok)
        self.assertEqual(result.stdout, '')
        self.assertTrue(result.uninitialized_read)

    def test_division_by_zero(self):
        result = run('int main(){ int a = 0; printf("before\\n"); printf("%d", 1 / a); return 0; }')
        self.assertEqual(result.status, RUNTIME_ERROR)
        self.assertEqual(result.error_kind, 'division-by-zero')
        self.assertEqual(result.stdout, 'before\n')

    def test_exhausted_input(self):
        result = run(PRINT_TO_N, '')
        self.assertEqual((result.status, result.error_kind), (RUNTIME_ERROR, 'input-exhausted'))

    def test_integer_semantics(self):
        result = run("""
        int main(){
            int a = 2147483647;
            a = a + 1;
            printf("%d %d %d\\n", a, -7 / 2, -7 % 2);
            return 0;
        }""")
        self.assertEqual(result.stdout, '-2147483648 -3 -1\n')

    def test_float_formatting_and_conversion(self):
        result = run("""
        int main(){
            float x = 1.5;
            int t = 7.9;
            printf("%.2f %f %d\\n", x / 2, x, t);
            printf("%5d|%-3d|%05.2f|100%%\\n", 42, 7, 3.14159);
            return 0;
        }""")
        self.assertEqual(result.stdout, '0.75 1.500000 7\n   42|7  |03.14|100%\n')

    def test_loops_with_break_continue_and_compound_assignment(self):
        result = run("""
        int main(){
            int s = 0;
            for (int i = 0; i < 10; i++) {
                if (i % 2 == 0) continue;
                if (i > 7) break;
                s += i;
            }
            for (int k = 0; k < 3; k++) printf("%d", k);
            printf(" %d\\n", s);
            return 0;
        }""")
        self.assertEqual(result.stdout, '012 16\n')

    def test_recursion(self):
        result = run("""
        int fact(int x){ if (x <= 1) return 1; return x * fact(x - 1); }
        int main(){ printf("%d\\n", fact(5)); return 0; }
        """)
        self.assertEqual(result.stdout, '120\n')

    def test_unbounded_recursion_is_a_runtime_error(self):
        result = run('int f(int x){ return f(x + 1); } int main(){ f(0); return 0; }')
        self.assertEqual((result.status, result.error_kind), (RUNTIME_ERROR, 'stack-overflow'))

    def test_deterministic(self):
        program = parse(PRINT_TO_N)
        self.assertEqual(interpret(program, '25'), interpret(program, '25'))


class SuiteTests(SimpleTestCase):
    def test_correct_program_passes(self):
        report = suites.run_test_suite(parse(PRINT_TO_N), PRINT_TO_N_SUITE)
        self.assertEqual((report.passed, report.total), (3, 3))
        self.assertTrue(report.all_passed)

    def test_missing_initialisation_fails(self):
        report = suites.run_test_suite(parse(PRINT_TO_N_MISSING_INIT), PRINT_TO_N_SUITE)
        self.assertLess(report.passed, report.total)

    def test_empty_suite_is_rejected(self):
        with self.assertRaises(ValueError):
            suites.TestSuite(())

    def test_trailing_whitespace_is_ignored(self):
        self.assertEqual(suites.normalize_output('1 \n2\t\n\n'), '1\n2')

    def test_printing_nan_fails(self):
        program = parse('int main(){ float x; printf("%f\\n", x); return 0; }')
        report = suites.run_test_suite(program, suites.TestSuite((suites.TestCase('', 'nan\n'),)))
        self.assertEqual(report.passed, 0)

    def test_dump_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            suites.dump_suite(PRINT_TO_N_SUITE, tmp)
            self.assertEqual(suites.load_suite(tmp), PRINT_TO_N_SUITE)


class RenameTests(SimpleTestCase):
    def test_rename_to_reference_names_and_back(self):
        program = parse(PRINT_TO_N_MISSING_INIT)
        targets = {'loop.j': 'i', 'loop.l': 'n', 'main.j': 'i', 'main.l': 'n'}
        pairs = [(v, targets[v.key]) for v in variables(program)]
        renamed = rename_variables(program, pairs)
        text = pretty_print(renamed)
        self.assertIn('void loop(int i, int n) {', text)
        self.assertIn('int i, n;', text)
        self.assertNotIn('j', text)
        self.assertEqual(rename_variables(renamed, pairs, REVERSE), program)

    def test_identity_mapping_leaves_program_unchanged(self):
        program = parse(PRINT_TO_N)
        self.assertEqual(rename_variables(program, [(v, v) for v in variables(program)]), program)

    def test_non_injective_mapping_is_disambiguated(self):
        program = parse('int main(){ int a = 1; int b = 2; printf("%d %d\\n", a, b); return 0; }')
        pairs = [(v, 'x') for v in variables(program)]
        renamed = rename_variables(program, pairs)
        self.assertIn('int x_1 = 2;', pretty_print(renamed))
        self.assertEqual(interpret(renamed, '').stdout, '1 2\n')
        self.assertEqual(rename_variables(renamed, pairs, REVERSE), program)

    def test_fresh_bijective_renaming_preserves_behaviour(self):
        program = parse(PRINT_TO_N)
        renamed = rename_variables(program, [(v, f'v{v.decl}') for v in variables(program)])
        self.assertEqual(suites.run_test_suite(renamed, PRINT_TO_N_SUITE).passed, 3)

    def test_mapping_must_cover_every_variable(self):
        program = parse(PRINT_TO_N)
        with self.assertRaises(RenameError):
            rename_variables(program, [(variables(program)[0], 'x')])


class EditTests(SimpleTestCase):
    def test_reads_exclude_written_targets(self):
        program = parse(PRINT_TO_N)
        self.assertEqual([v.name for v in edits.read_sites(program)], ['i', 'n', 'i'])

    def test_replace_one_read(self):
        program = parse(PRINT_TO_N)
        edited = edits.replace_read(program, 2, 'n')
        self.assertIn('printf("%d\\n", n);', pretty_print(edited))
        self.assertIn('i <= n', pretty_print(edited))

    def test_edit_site_can_drop_a_statement(self):
        program = parse(PRINT_TO_N)
        matches = lambda node: isinstance(node, n.ExprStmt)
        self.assertEqual(len(edits.find_sites(program, matches)), 1)
        edited = edits.edit_site(program, matches, 0, lambda node: None)
        self.assertIn('for (i = 1; i <= n;) {', pretty_print(edited))
