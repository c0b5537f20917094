"""Differentiable operations used by the graph encoder and its loss."""
import numpy as np

from .tensor import Function, ShapeError, Tensor

LAYER_NORM_EPS = 1e-5
PROBABILITY_FLOOR = 1e-300


def as_tensor(value):
    return value if isinstance(value, Tensor) else Tensor(value)


class MatMul(Function):
    @staticmethod
    def forward(ctx, a, b):
        if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
        return a.data @ b.data

    @staticmethod
    def backward(ctx, grad):
        a, b = ctx.args
        return grad @ b.data.T, a.data.T @ grad


class Add(Function):
    """Elementwise sum; a 1-D right operand is added to every row."""

    @staticmethod
    def forward(ctx, a, b):
        if a.shape != b.shape and not (b.data.ndim == 1 and a.data.ndim == 2 and a.shape[1] == b.shape[0]):
            raise ShapeError(f"cannot add {a.shape} and {b.shape}")
        return a.data + b.data

    @staticmethod
    def backward(ctx, grad):
        a, b = ctx.args
        return grad, grad if a.shape == b.shape else grad.sum(axis=0)


class Scale(Function):
    @staticmethod
    def forward(ctx, a, factor):
        ctx.saved['factor'] = float(factor)
        return a.data * ctx.saved['factor']

    @staticmethod
    def backward(ctx, grad):
        return grad * ctx.saved['factor'], None


class Transpose(Function):
    @staticmethod
    def forward(ctx, a):
        if a.data.ndim != 2:
            raise ShapeError(f"transpose needs a matrix, got {a.shape}")
        return a.data.T.copy()

    @staticmethod
    def backward(ctx, grad):
        return (grad.T,)


class ReLU(Function):
    @staticmethod
    def forward(ctx, a):
        ctx.saved['mask'] = a.data > 0
        return np.where(ctx.saved['mask'], a.data, 0.0)

    @staticmethod
    def backward(ctx, grad):
        return (grad * ctx.saved['mask'],)


class Sum(Function):
    @staticmethod
    def forward(ctx, a):
        return np.array(a.data.sum())

    @staticmethod
    def backward(ctx, grad):
        a, = ctx.args
        return (np.full(a.shape, float(grad)),)


class LayerNorm(Function):
    """Normalise every row to zero mean and unit variance, then apply gain and bias."""

    @staticmethod
    def forward(ctx, x, gain, bias, eps=LAYER_NORM_EPS):
        if x.data.ndim != 2 or gain.shape != (x.shape[1],) or bias.shape != (x.shape[1],):
            raise ShapeError(f"layer norm over {x.shape} with gain {gain.shape} and bias {bias.shape}")
        mean = x.data.mean(axis=1, keepdims=True)
        inv_std = 1.0 / np.sqrt(x.data.var(axis=1, keepdims=True) + eps)
        normed = (x.data - mean) * inv_std
        ctx.saved.update(normed=normed, inv_std=inv_std)
        return normed * gain.data + bias.data

    @staticmethod
    def backward(ctx, grad):
        x, gain, bias = ctx.args
        normed, inv_std = ctx.saved['normed'], ctx.saved['inv_std']
        width = x.shape[1]
        d_normed = grad * gain.data
        d_x = inv_std / width * (
            width * d_normed
            - d_normed.sum(axis=1, keepdims=True)
            - normed * (d_normed * normed).sum(axis=1, keepdims=True)
        )
        return d_x, (grad * normed).sum(axis=0), grad.sum(axis=0)


class SoftmaxRows(Function):
    @staticmethod
    def forward(ctx, a):
        if a.data.ndim != 2:
            raise ShapeError(f"softmax_rows needs a matrix, got {a.shape}")
        shifted = np.exp(a.data - a.data.max(axis=1, keepdims=True))
        out = shifted / shifted.sum(axis=1, keepdims=True)
        ctx.saved['out'] = out
        return out

    @staticmethod
    def backward(ctx, grad):
        out = ctx.saved['out']
        return (out * (grad - (grad * out).sum(axis=1, keepdims=True)),)


class CrossEntropy(Function):
    """Mean negative log-probability of each row's label, taking row-stochastic input."""

    @staticmethod
    def forward(ctx, probs, labels):
        labels = np.asarray(labels, dtype=np.int64)
        if probs.data.ndim != 2 or labels.shape != (probs.shape[0],):
            raise ShapeError(f"cross entropy over {probs.shape} with labels {labels.shape}")
        if labels.size and (labels.min() < 0 or labels.max() >= probs.shape[1]):
            raise ShapeError(f"labels must lie in [0, {probs.shape[1]})")
        rows = np.arange(len(labels))
        picked = np.maximum(probs.data[rows, labels], PROBABILITY_FLOOR)
        ctx.saved.update(rows=rows, labels=labels, picked=picked)
        return np.array(-np.log(picked).mean())

    @staticmethod
    def backward(ctx, grad):
        probs, _ = ctx.args
        rows, labels, picked = ctx.saved['rows'], ctx.saved['labels'], ctx.saved['picked']
        d_probs = np.zeros(probs.shape)
        d_probs[rows, labels] = -float(grad) / (len(rows) * picked)
        return d_probs, None


class TakeRows(Function):
    @staticmethod
    def forward(ctx, a, indices):
        ctx.saved['indices'] = np.asarray(indices, dtype=np.int64)
        return a.data[ctx.saved['indices']]

    @staticmethod
    def backward(ctx, grad):
        a, _ = ctx.args
        d_a = np.zeros(a.shape)
        np.add.at(d_a, ctx.saved['indices'], grad)
        return d_a, None


class MeanAggregate(Function):
    """
    out[i] = mean of x[j] over the edges (j -> i); rows without incoming edges stay zero.
    `sources` and `targets` are parallel index arrays of one relation's edges.
    """

    @staticmethod
    def forward(ctx, x, sources, targets):
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        counts = np.bincount(targets, minlength=x.shape[0]).astype(np.float64)
        scale = np.divide(1.0, counts, out=np.zeros_like(counts), where=counts > 0)[:, None]
        out = np.zeros(x.shape)
        np.add.at(out, targets, x.data[sources])
        ctx.saved.update(sources=sources, targets=targets, scale=scale)
        return out * scale

    @staticmethod
    def backward(ctx, grad):
        x = ctx.args[0]
        d_x = np.zeros(x.shape)
        np.add.at(d_x, ctx.saved['sources'], (grad * ctx.saved['scale'])[ctx.saved['targets']])
        return d_x, None, None


def matmul(a, b):
    return MatMul.apply(as_tensor(a), as_tensor(b))


def add(a, b):
    return Add.apply(as_tensor(a), as_tensor(b))


def scale(a, factor):
    return Scale.apply(as_tensor(a), factor)


def transpose(a):
    return Transpose.apply(as_tensor(a))


def relu(a):
    return ReLU.apply(as_tensor(a))


def total(a):
    return Sum.apply(as_tensor(a))


def layer_norm(x, gain, bias, eps=LAYER_NORM_EPS):
    return LayerNorm.apply(as_tensor(x), as_tensor(gain), as_tensor(bias), eps=eps)


def softmax_rows(a):
    return SoftmaxRows.apply(as_tensor(a))


def cross_entropy(probs, labels):
    return CrossEntropy.apply(as_tensor(probs), labels)


def take_rows(a, indices):
    return TakeRows.apply(as_tensor(a), indices)


def mean_aggregate(x, sources, targets):
    return MeanAggregate.apply(as_tensor(x), sources, targets)
