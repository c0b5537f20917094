"""Adam with bias correction, over named float64 parameter arrays."""
from dataclasses import dataclass, field

import numpy as np


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first_moment: dict = field(default_factory=dict)
    second_moment: dict = field(default_factory=dict)


def adam_step(params, grads, state):
    """
    One Adam update of `params` (name -> ndarray, updated in place) from `grads`
    (name -> ndarray or None for no gradient). Returns (params, state).
    """
    state.step += 1
    t = state.step
    for name, value in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(value)
        m = state.first_moment.setdefault(name, np.zeros_like(value))
        v = state.second_moment.setdefault(name, np.zeros_like(value))
        m *= state.beta1
        m += (1 - state.beta1) * grad
        v *= state.beta2
        v += (1 - state.beta2) * grad * grad
        m_hat = m / (1 - state.beta1 ** t)
        v_hat = v / (1 - state.beta2 ** t)
        value -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state


class Adam:
    """Optimizer over Tensors that own their gradients."""

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = dict(params)
        self.state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)

    def zero_grad(self):
        for tensor in self.params.values():
            tensor.zero_grad()

    def step(self):
        arrays = {name: tensor.data for name, tensor in self.params.items()}
        grads = {name: tensor.grad for name, tensor in self.params.items()}
        adam_step(arrays, grads, self.state)
