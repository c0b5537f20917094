import numpy as np
from django.test import SimpleTestCase

from . import functional as F
from .checkpoint import Checkpoint, CheckpointError, dumps_checkpoint, loads_checkpoint
from .optim import Adam, AdamState, adam_step
from .tensor import ShapeError, Tensor


def numeric_gradient(loss_of, array, eps=1e-5):
    grad = np.zeros_like(array)
    for index in np.ndindex(array.shape):
        saved = array[index]
        array[index] = saved + eps
        upper = loss_of()
        array[index] = saved - eps
        lower = loss_of()
        array[index] = saved
        grad[index] = (upper - lower) / (2 * eps)
    return grad


def relative_error(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a) + np.abs(b), 1e-8)))


class GradientCheckMixin:
    def assertGradientMatches(self, build_loss, *arrays):
        tensors = [Tensor(a, requires_grad=True) for a in arrays]
        build_loss(*tensors).backward()
        for tensor in tensors:
            numeric = numeric_gradient(lambda: build_loss(*tensors).item(), tensor.data)
            self.assertLess(relative_error(tensor.grad, numeric), 1e-4)


class OperationTests(GradientCheckMixin, SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)
        self.weights = self.rng.normal(size=(4, 1))

    def project(self, t):
        return F.total(F.matmul(t, Tensor(self.weights)))

    def test_softmax_of_equal_scores_is_uniform(self):
        out = F.softmax_rows(Tensor(np.full((2, 5), 3.0)))
        np.testing.assert_allclose(out.data, np.full((2, 5), 0.2))

    def test_softmax_rows_sum_to_one(self):
        out = F.softmax_rows(Tensor(self.rng.normal(size=(6, 4)) * 30))
        self.assertTrue(np.all(out.data > 0))
        np.testing.assert_allclose(out.data.sum(axis=1), 1.0, atol=1e-12)

    def test_cross_entropy_of_one_hot_is_zero(self):
        loss = F.cross_entropy(Tensor([[0.0, 1.0, 0.0]]), [1])
        self.assertAlmostEqual(loss.item(), 0.0)

    def test_layer_norm_of_pair(self):
        out = F.layer_norm(Tensor([[1.0, 3.0]]), Tensor([1.0, 1.0]), Tensor([0.0, 0.0]))
        np.testing.assert_allclose(out.data, [[-1.0, 1.0]], atol=1e-4)

    def test_relu_gradient(self):
        x = Tensor([[-1.0, 2.0]], requires_grad=True)
        F.total(F.relu(x)).backward()
        np.testing.assert_array_equal(x.grad, [[0.0, 1.0]])

    def test_softmax_cross_entropy_gradient_is_p_minus_one_hot(self):
        scores = Tensor([[0.3, -1.2, 2.0]], requires_grad=True)
        probs = F.softmax_rows(scores)
        F.cross_entropy(probs, [2]).backward()
        np.testing.assert_allclose(scores.grad, probs.data - np.array([[0.0, 0.0, 1.0]]), atol=1e-10)

    def test_matmul_add_scale_gradients(self):
        self.assertGradientMatches(
            lambda a, b, c: self.project(F.scale(F.add(F.matmul(a, b), c), 0.7)),
            self.rng.normal(size=(3, 2)), self.rng.normal(size=(2, 4)), self.rng.normal(size=(4,)),
        )

    def test_transpose_and_take_rows_gradients(self):
        self.assertGradientMatches(
            lambda a: self.project(F.take_rows(F.transpose(a), [0, 2, 2, 1])),
            self.rng.normal(size=(4, 3)),
        )

    def test_relu_gradient_numerically(self):
        x = self.rng.normal(size=(3, 4))
        x[np.abs(x) < 0.1] = 0.5
        self.assertGradientMatches(lambda a: self.project(F.relu(a)), x)

    def test_layer_norm_gradient(self):
        self.assertGradientMatches(
            lambda x, g, b: self.project(F.layer_norm(x, g, b)),
            self.rng.normal(size=(3, 4)), self.rng.normal(size=(4,)), self.rng.normal(size=(4,)),
        )

    def test_softmax_and_cross_entropy_gradient(self):
        self.assertGradientMatches(
            lambda s: F.cross_entropy(F.softmax_rows(s), [1, 0, 3]),
            self.rng.normal(size=(3, 4)),
        )

    def test_mean_aggregate_gradient(self):
        sources, targets = [0, 1, 2, 2], [1, 2, 0, 1]
        out = F.mean_aggregate(Tensor(np.eye(4)), sources, targets)
        np.testing.assert_allclose(out.data[1], [0.5, 0.0, 0.5, 0.0])
        np.testing.assert_array_equal(out.data[3], np.zeros(4))
        self.assertGradientMatches(
            lambda x: self.project(F.mean_aggregate(x, sources, targets)),
            self.rng.normal(size=(4, 4)),
        )

    def test_shape_errors(self):
        with self.assertRaises(ShapeError):
            F.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
        with self.assertRaises(ShapeError):
            F.add(Tensor(np.ones((2, 3))), Tensor(np.ones((2,))))
        with self.assertRaises(ShapeError):
            F.cross_entropy(Tensor([[0.5, 0.5]]), [2])

    def test_backward_without_parameters_is_a_no_op(self):
        loss = F.total(Tensor([1.0, 2.0]))
        loss.backward()
        self.assertIsNone(loss.grad)


class AdamTests(SimpleTestCase):
    def test_zero_gradient_leaves_parameters(self):
        params = {'w': np.array([1.0, -2.0])}
        _, state = adam_step(params, {'w': np.zeros(2)}, AdamState())
        np.testing.assert_array_equal(params['w'], [1.0, -2.0])
        self.assertEqual(state.step, 1)

    def test_first_step_moves_by_learning_rate(self):
        params = {'p': np.array([0.0])}
        adam_step(params, {'p': np.array([1.0])}, AdamState())
        self.assertAlmostEqual(params['p'][0], -1e-3, places=9)

    def test_descends_a_quadratic(self):
        w = Tensor([[3.0], [-1.5]], requires_grad=True)
        optimizer = Adam({'w': w}, lr=0.1)

        def loss():
            return F.total(F.matmul(F.transpose(w), w))

        values = [loss().item()]
        for _ in range(2):
            optimizer.zero_grad()
            loss().backward()
            optimizer.step()
            values.append(loss().item())
        self.assertLess(values[1], values[0])
        self.assertLess(values[2], values[1])


class CheckpointTests(SimpleTestCase):
    def make(self):
        return Checkpoint(
            params={'b': np.arange(3.0), 'a': np.eye(2)},
            vocab=('program', 'var'),
            edges='01234',
            hidden_dim=2,
            meta={'seed': 0},
        )

    def test_round_trip_and_stable_bytes(self):
        data = dumps_checkpoint(self.make())
        self.assertEqual(data, dumps_checkpoint(self.make()))
        loaded = loads_checkpoint(data, vocab=('program', 'var'), edges='01234')
        np.testing.assert_array_equal(loaded.params['a'], np.eye(2))
        np.testing.assert_array_equal(loaded.params['b'], np.arange(3.0))
        self.assertEqual(loaded.meta, {'seed': 0})
        self.assertEqual(dumps_checkpoint(loaded), data)

    def test_incompatible_checkpoints_are_rejected(self):
        data = dumps_checkpoint(self.make())
        with self.assertRaises(CheckpointError):
            loads_checkpoint(data, vocab=('program',))
        with self.assertRaises(CheckpointError):
            loads_checkpoint(data, edges='01')
        with self.assertRaises(CheckpointError):
            loads_checkpoint(b'not a checkpoint')
        with self.assertRaises(CheckpointError):
            loads_checkpoint(data[:-8])
