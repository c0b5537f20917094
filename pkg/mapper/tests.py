import itertools

import numpy as np
from django.test import SimpleTestCase

from graphs.builder import ProgramGraph, build_graph
from graphs.vocab import VOCAB
from lang.parser import parse
from lang.rename import rename_variables
from lang.scope import variables
from lang.tests import PRINT_TO_N, PRINT_TO_N_MISSING_INIT
from nn import functional as F
from nn.checkpoint import dumps_checkpoint
from nn.tensor import Tensor

from .enumeration import best_first_assignments, enumerate_mappings, uniform_assignments, uniform_mappings
from .inference import Mapper, predict_mapping
from .model import NUM_STEPS, init_params, rgcn_encode, score_mapping
from .training import EmptyDatasetError, TrainConfig, TrainingExample, train


def example(buggy_source, correct_source, labels):
    return TrainingExample(build_graph(parse(buggy_source)), build_graph(parse(correct_source)), tuple(labels))


# loop.j -> i, loop.l -> n, main.j -> i, main.l -> n
MISSING_INIT_LABELS = (1, 0, 1, 0)


class EnumerationTests(SimpleTestCase):
    def test_single_row(self):
        self.assertEqual([c for c, _ in best_first_assignments([[0.9, 0.1]])], [(0,), (1,)])

    def test_two_rows_in_probability_order(self):
        stream = list(best_first_assignments([[0.6, 0.4], [0.7, 0.3]]))
        self.assertEqual([c for c, _ in stream], [(0, 0), (1, 0), (0, 1), (1, 1)])
        np.testing.assert_allclose([np.exp(s) for _, s in stream], [0.42, 0.28, 0.18, 0.12])

    def test_uniform_matrix_yields_every_assignment(self):
        stream = [c for c, _ in best_first_assignments(np.full((2, 2), 0.5))]
        self.assertEqual(sorted(stream), list(itertools.product(range(2), repeat=2)))
        self.assertEqual(stream, [c for c, _ in best_first_assignments(np.full((2, 2), 0.5))])

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        for rows in range(1, 4):
            for cols in range(1, 4):
                probs = F.softmax_rows(Tensor(rng.normal(size=(rows, cols)))).data
                stream = list(best_first_assignments(probs))
                columns = [c for c, _ in stream]
                self.assertEqual(len(columns), cols ** rows)
                self.assertEqual(len(set(columns)), len(columns))
                scores = [s for _, s in stream]
                self.assertTrue(all(a >= b for a, b in zip(scores, scores[1:])))
                self.assertEqual(columns[0], tuple(np.argmax(probs, axis=1)))
                best = max(itertools.product(range(cols), repeat=rows),
                           key=lambda c: np.prod([probs[i, j] for i, j in enumerate(c)]))
                self.assertAlmostEqual(scores[0], np.log(np.prod([probs[i, j] for i, j in enumerate(best)])))

    def test_enumerate_mappings_names_variables(self):
        buggy, correct = ('a1',), ('b1', 'b2')
        stream = list(enumerate_mappings([[0.9, 0.1]], buggy, correct))
        self.assertEqual([m.pairs for m in stream], [(('a1', 'b1'),), (('a1', 'b2'),)])
        self.assertAlmostEqual(stream[0].probability, 0.9)

    def test_no_buggy_variables_gives_one_empty_assignment(self):
        self.assertEqual(list(best_first_assignments(np.zeros((0, 3)))), [((), 0.0)])
        self.assertEqual(list(best_first_assignments(np.zeros((2, 0)))), [])
        self.assertEqual(list(uniform_assignments(0, 3)), [()])
        self.assertEqual(list(uniform_assignments(2, 0)), [])

    def test_uniform_streams(self):
        self.assertEqual(list(uniform_assignments(1, 1)), [(0,)])
        self.assertEqual(len(set(uniform_assignments(2, 2, seed=5))), 4)
        stream = list(uniform_assignments(3, 3, seed=1))
        self.assertEqual(len(stream), 27)
        self.assertEqual(len(set(stream)), 27)
        self.assertEqual(stream, list(uniform_assignments(3, 3, seed=1)))
        self.assertNotEqual(stream, list(uniform_assignments(3, 3, seed=2)))

    def test_uniform_mappings_carry_uniform_probabilities(self):
        stream = list(uniform_mappings(('x', 'y'), ('p', 'q', 'r'), seed=0))
        self.assertEqual(len(stream), 9)
        self.assertAlmostEqual(stream[0].probability, 1 / 9)


class EncoderTests(SimpleTestCase):
    def setUp(self):
        self.params = init_params(len(VOCAB), 4, seed=0)

    def test_isolated_node_uses_only_the_root_weights(self):
        kind = VOCAB.index('var')
        graph = ProgramGraph(nodes=(kind,), edges=(), var_nodes=(0,))
        x = self.params['embedding'][[kind]]
        for step in range(NUM_STEPS):
            h = x @ self.params[f'buggy.{step}.root']
            mean = h.mean(axis=1, keepdims=True)
            x = np.maximum((h - mean) / np.sqrt(h.var(axis=1, keepdims=True) + 1e-5), 0.0)
        np.testing.assert_allclose(rgcn_encode(graph, 'buggy', self.params).data, x, atol=1e-12)

    def test_permuting_nodes_permutes_states(self):
        graph = build_graph(parse(PRINT_TO_N))
        rng = np.random.default_rng(1)
        perm = rng.permutation(graph.num_nodes)  # new position of every old node
        nodes = [0] * graph.num_nodes
        for old, new in enumerate(perm):
            nodes[new] = graph.nodes[old]
        permuted = ProgramGraph(
            nodes=tuple(nodes),
            edges=tuple((int(perm[s]), int(perm[d]), r) for s, d, r in graph.edges),
            var_nodes=tuple(int(perm[v]) for v in graph.var_nodes),
        )
        original = rgcn_encode(graph, 'correct', self.params).data
        moved = rgcn_encode(permuted, 'correct', self.params).data
        np.testing.assert_allclose(moved[perm], original, atol=1e-10)

    def test_score_mapping(self):
        vecs = Tensor(np.eye(3) * 5)
        _, probs = score_mapping(vecs, vecs)
        self.assertEqual(tuple(np.argmax(probs.data, axis=1)), (0, 1, 2))
        scores, probs = score_mapping(Tensor(np.ones((2, 4))), Tensor(np.arange(12.0).reshape(3, 4)))
        self.assertEqual(scores.shape, (2, 3))
        np.testing.assert_allclose(probs.data.sum(axis=1), 1.0)


class TrainingTests(SimpleTestCase):
    def test_memorizes_a_single_pair(self):
        pair = example(PRINT_TO_N_MISSING_INIT, PRINT_TO_N, MISSING_INIT_LABELS)
        model = train([pair], TrainConfig(epochs=300, lr=0.01, hidden_dim=16, seed=0))
        self.assertLess(model.history[-1]['loss'], model.history[0]['loss'])
        mapping = predict_mapping(parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N), model.params)
        self.assertEqual(mapping.choice, MISSING_INIT_LABELS)
        self.assertEqual(mapping.as_dict(), {'loop.j': 'i', 'loop.l': 'n', 'main.j': 'i', 'main.l': 'n'})

    def test_single_pair_loss_never_increases(self):
        pair = example(PRINT_TO_N_MISSING_INIT, PRINT_TO_N, MISSING_INIT_LABELS)
        model = train([pair], TrainConfig(epochs=50, hidden_dim=8, seed=0))
        losses = [entry['loss'] for entry in model.history]
        self.assertEqual(len(losses), 50)
        for step, (before, after) in enumerate(zip(losses, losses[1:]), start=1):
            self.assertLessEqual(after, before + 1e-9, f'loss went up at step {step}')

    def test_trivial_pair_is_learned_to_a_small_loss(self):
        pair = example(PRINT_TO_N, PRINT_TO_N, (0, 1))
        model = train([pair], TrainConfig(epochs=400, lr=0.02, hidden_dim=8, seed=0))
        self.assertLess(model.history[-1]['loss'], 1e-3)
        mapping = predict_mapping(parse(PRINT_TO_N), parse(PRINT_TO_N), model.params)
        self.assertEqual(mapping.choice, (0, 1))

    def test_same_seed_gives_identical_checkpoints(self):
        pairs = [example(PRINT_TO_N_MISSING_INIT, PRINT_TO_N, MISSING_INIT_LABELS)]
        cfg = TrainConfig(epochs=2, hidden_dim=4, seed=11)
        first = dumps_checkpoint(train(pairs, cfg).checkpoint())
        second = dumps_checkpoint(train(pairs, cfg).checkpoint())
        self.assertEqual(first, second)

    def test_validation_accuracy_is_recorded(self):
        pair = example(PRINT_TO_N, PRINT_TO_N, (0, 1))
        model = train([pair], TrainConfig(epochs=2, hidden_dim=4), validation=[pair])
        self.assertEqual(len(model.history), 2)
        self.assertIn(model.history[-1]['validation_exact_match'], (0.0, 1.0))

    def test_empty_dataset(self):
        with self.assertRaises(EmptyDatasetError):
            train([])
        no_vars = example('int main(){return 0;}', PRINT_TO_N, ())
        with self.assertRaises(EmptyDatasetError):
            train([no_vars])

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            TrainConfig(epochs=0)


class PredictTests(SimpleTestCase):
    def setUp(self):
        self.params = init_params(len(VOCAB), 8, seed=2)

    def test_single_variable_programs(self):
        one = parse('int main(){ int x; scanf("%d", &x); printf("%d", x); return 0; }')
        mapping = predict_mapping(one, one, self.params)
        self.assertEqual(mapping.choice, (0,))
        self.assertAlmostEqual(mapping.probability, 1.0)

    def test_prediction_ignores_names(self):
        buggy, correct = parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N)
        renamed = rename_variables(buggy, [(v, f'w{v.decl}') for v in variables(buggy)])
        self.assertEqual(
            predict_mapping(buggy, correct, self.params).choice,
            predict_mapping(renamed, correct, self.params).choice,
        )
        np.testing.assert_allclose(
            predict_mapping(buggy, correct, self.params).probabilities,
            predict_mapping(renamed, correct, self.params).probabilities,
        )

    def test_programs_without_variables_give_an_empty_mapping(self):
        mapping = predict_mapping(parse('int main(){return 0;}'), parse(PRINT_TO_N), self.params)
        self.assertTrue(mapping.empty)
        self.assertEqual(mapping.pairs, ())
        stream = list(Mapper(self.params).mappings(parse('int main(){return 0;}'), parse(PRINT_TO_N)))
        self.assertEqual([m.pairs for m in stream], [()])
        self.assertEqual(list(Mapper(self.params).mappings(parse(PRINT_TO_N), parse('int main(){return 0;}'))), [])

    def test_stream_starts_with_the_prediction(self):
        mapper = Mapper(self.params)
        buggy, correct = parse(PRINT_TO_N_MISSING_INIT), parse(PRINT_TO_N)
        stream = list(mapper.mappings(buggy, correct))
        self.assertEqual(len(stream), 2 ** 4)
        self.assertEqual(stream[0].choice, mapper.predict(buggy, correct).choice)
