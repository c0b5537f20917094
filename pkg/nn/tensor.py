"""
A small reverse-mode autodiff tape over numpy float64 arrays.

Each differentiable operation is a Function subclass with a forward that computes the
result from the input arrays and a backward that maps the output gradient to one gradient
per input. Function.apply records a Context on the result whenever an input takes part in
the graph; Tensor.backward walks that graph in reverse topological order and accumulates
gradients into the leaves that require them.
"""
from __future__ import annotations

import numpy as np


class ShapeError(ValueError):
    pass


class Tensor:
    __slots__ = ('data', 'grad', '_ctx', 'requires_grad')

    def __init__(self, data, requires_grad=False):
        self.data = np.array(data, dtype=np.float64)
        self.grad = None
        self._ctx = None
        self.requires_grad = requires_grad

    def __repr__(self):
        fn = f" grad_fn={self._ctx.op.__name__}" if self._ctx is not None else ''
        return f"Tensor(shape={self.shape}{fn})"

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data.reshape(-1)[0])

    def numpy(self):
        return self.data

    def zero_grad(self):
        self.grad = None

    def detach(self):
        return Tensor(self.data.copy())

    def __matmul__(self, other):
        from .functional import matmul
        return matmul(self, other)

    def __add__(self, other):
        from .functional import add
        return add(self, other)

    def __mul__(self, factor):
        from .functional import scale
        return scale(self, factor)

    __rmul__ = __mul__

    @property
    def T(self):
        from .functional import transpose
        return transpose(self)

    def backward(self):
        """Populate .grad of every leaf that requires it; a no-op if nothing does."""
        if self._ctx is None:
            return
        if self.size != 1:
            raise ShapeError(f"backward needs a scalar, got shape {self.shape}")
        order = topological_order(self)
        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(order):
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            if node._ctx is None:
                if node.requires_grad:
                    node.grad = grad if node.grad is None else node.grad + grad
                continue
            ctx = node._ctx
            for arg, arg_grad in zip(ctx.args, ctx.op.backward(ctx, grad)):
                if arg_grad is None or not isinstance(arg, Tensor) or not in_graph(arg):
                    continue
                if arg_grad.shape != arg.shape:
                    raise ShapeError(f"{ctx.op.__name__} produced gradient {arg_grad.shape} for {arg.shape}")
                key = id(arg)
                grads[key] = arg_grad if key not in grads else grads[key] + arg_grad


def in_graph(tensor):
    return tensor.requires_grad or tensor._ctx is not None


def topological_order(root):
    order = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        if node._ctx is not None:
            for arg in reversed(node._ctx.args):
                if isinstance(arg, Tensor) and in_graph(arg) and id(arg) not in visited:
                    stack.append((arg, False))
    return order


class Context:
    __slots__ = ('op', 'args', 'saved')

    def __init__(self, op, args):
        self.op = op
        self.args = args
        self.saved = {}


class Function:
    @classmethod
    def apply(cls, *args, **params):
        ctx = Context(cls, args)
        result = Tensor(cls.forward(ctx, *args, **params))
        if any(isinstance(arg, Tensor) and in_graph(arg) for arg in args):
            result._ctx = ctx
        return result

    @staticmethod
    def forward(ctx, *args, **params):
        raise NotImplementedError

    @staticmethod
    def backward(ctx, grad):
        raise NotImplementedError
