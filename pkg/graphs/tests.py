from django.test import SimpleTestCase

from lang.parser import parse
from lang.rename import rename_variables
from lang.scope import variables
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT

from .builder import (
    CHILD_BACK, CHILD_FWD, CHRONO, READ_FWD, SIBLING, WRITE_FWD, EdgeSetConfig, build_graph,
)
from .serialization import GraphDecodeError, deserialize_graph, serialize_graph
from .vocab import VOCAB

SUBTRACT = 'int main(){ int a, b; a = a - b; return 0; }'


def count(graph, relation, dst=None):
    return sum(1 for s, d, r in graph.edges if r == relation and (dst is None or d == dst))


class BuildGraphTests(SimpleTestCase):
    def test_assignment_snippet(self):
        graph = build_graph(parse(SUBTRACT))
        a, b = graph.var_nodes
        self.assertEqual([v.name for v in graph.variables], ['a', 'b'])
        self.assertEqual(count(graph, WRITE_FWD, a), 1)
        self.assertEqual(count(graph, READ_FWD, a), 1)
        self.assertEqual(count(graph, READ_FWD, b), 1)
        self.assertEqual(count(graph, WRITE_FWD, b), 0)
        self.assertEqual(count(graph, CHRONO), 1)

    def test_single_use_has_no_chrono_edges(self):
        graph = build_graph(parse('int main(){ int x; scanf("%d", &x); return 0; }'))
        self.assertEqual(count(graph, CHRONO), 0)
        self.assertEqual(count(graph, WRITE_FWD), 1)

    def test_loop_counter_occurrences(self):
        graph = build_graph(parse(PRINT_TO_N))
        n_node, i_node = graph.var_nodes
        self.assertEqual(count(graph, WRITE_FWD, i_node), 2)
        self.assertEqual(count(graph, READ_FWD, i_node), 2)
        chrono_i = [(s, d) for s, d, r in graph.edges if r == CHRONO and s in self.ids_of(graph, i_node)]
        self.assertEqual(len(chrono_i), 3)
        self.assertEqual(count(graph, WRITE_FWD, n_node), 1)

    @staticmethod
    def ids_of(graph, var_node):
        return {s for s, d, r in graph.edges if d == var_node and r in (WRITE_FWD, READ_FWD)}

    def test_one_var_node_per_declaration(self):
        program = parse(PRINT_TO_N_MISSING_INIT)
        graph = build_graph(program)
        self.assertEqual(len(graph.var_nodes), len(variables(program)))
        self.assertEqual(set(graph.var_nodes), set(range(graph.num_nodes - 4, graph.num_nodes)))
        id_nodes = [i for i, kind in enumerate(graph.nodes) if kind == VOCAB.index('ID')]
        self.assertEqual(count(graph, WRITE_FWD) + count(graph, READ_FWD), len(id_nodes))

    def test_bidirectional_pairs_are_inverse(self):
        graph = build_graph(parse(PRINT_TO_N_MISSING_INIT))
        for fwd in (CHILD_FWD, WRITE_FWD, READ_FWD):
            forward = {(s, d) for s, d in graph.edges_of(fwd)}
            backward = {(d, s) for s, d in graph.edges_of(fwd + 1)}
            self.assertEqual(forward, backward)

    def test_sibling_edges_chain_children(self):
        graph = build_graph(parse(SUBTRACT))
        children = {}
        for s, d in graph.edges_of(CHILD_FWD):
            children.setdefault(s, []).append(d)
        expected = sum(len(c) - 1 for c in children.values())
        self.assertEqual(count(graph, SIBLING), expected)

    def test_kinds_within_vocabulary(self):
        graph = build_graph(parse(PRINT_TO_N_MISSING_INIT))
        self.assertTrue(all(0 <= kind < len(VOCAB) for kind in graph.nodes))

    def test_identifier_blind(self):
        program = parse(PRINT_TO_N_MISSING_INIT)
        renamed = rename_variables(program, [(v, f'q{v.decl}') for v in variables(program)])
        self.assertEqual(build_graph(program), build_graph(renamed))

    def test_disabled_families_are_omitted(self):
        graph = build_graph(parse(PRINT_TO_N), EdgeSetConfig.from_mask('0,1'))
        self.assertEqual({r for _, _, r in graph.edges}, {CHILD_FWD, CHILD_BACK, SIBLING})
        graph = build_graph(parse(PRINT_TO_N), EdgeSetConfig.from_mask('4'))
        self.assertEqual({r for _, _, r in graph.edges}, {CHRONO})


class EdgeSetConfigTests(SimpleTestCase):
    def test_mask_round_trip(self):
        self.assertEqual(EdgeSetConfig.from_mask('024').mask, '024')
        self.assertEqual(EdgeSetConfig().mask, '01234')

    def test_at_least_one_family(self):
        with self.assertRaises(ValueError):
            EdgeSetConfig.from_mask('')
        with self.assertRaises(ValueError):
            EdgeSetConfig.from_mask('7')


class SerializationTests(SimpleTestCase):
    def test_round_trip(self):
        for source in (SUBTRACT, 'int main(){return 0;}', PRINT_TO_N_MISSING_INIT):
            graph = build_graph(parse(source))
            data = serialize_graph(graph)
            decoded = deserialize_graph(data)
            self.assertEqual(decoded, graph)
            self.assertEqual(decoded.variables, graph.variables)
            self.assertEqual(serialize_graph(decoded), data)

    def test_stable_bytes(self):
        self.assertEqual(serialize_graph(build_graph(parse(PRINT_TO_N))), serialize_graph(build_graph(parse(PRINT_TO_N))))

    def test_malformed_payloads(self):
        for data in (b'garbage', b'[]', b'{"version": 99}', b'{"version": 1, "nodes": [0]}',
                     b'{"version":1,"nodes":[0],"edges":[[0,5,0]],"var_nodes":[],"variables":[]}'):
            with self.subTest(data=data), self.assertRaises(GraphDecodeError):
                deserialize_graph(data)
