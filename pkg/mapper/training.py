import logging
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from graphs.builder import EdgeSetConfig
from graphs.vocab import VOCAB
from nn import functional as F
from nn.checkpoint import Checkpoint
from nn.optim import Adam
from nn.tensor import Tensor

from .model import forward, init_params

logger = logging.getLogger(__name__)


class EmptyDatasetError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    seed: int = 0
    hidden_dim: int = 64
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    edges: EdgeSetConfig = field(default_factory=EdgeSetConfig)
    batch_size: int = 1

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.batch_size != 1:
            raise ValueError("only a batch size of 1 is supported")

    def to_dict(self):
        return {
            'epochs': self.epochs,
            'seed': self.seed,
            'hidden_dim': self.hidden_dim,
            'lr': self.lr,
            'beta1': self.beta1,
            'beta2': self.beta2,
            'eps': self.eps,
            'edges': self.edges.mask,
            'batch_size': self.batch_size,
        }


@dataclass(frozen=True)
class TrainingExample:
    """A graph pair and, per buggy variable, the index of its correct-side variable."""
    buggy: object
    correct: object
    labels: tuple


@dataclass
class TrainedModel:
    params: dict
    config: TrainConfig
    history: list = field(default_factory=list)
    steps: int = 0

    def checkpoint(self, vocab=VOCAB):
        return Checkpoint(
            params=self.params,
            vocab=vocab.kinds,
            edges=self.config.edges.mask,
            hidden_dim=self.config.hidden_dim,
            meta={'steps': self.steps, 'seed': self.config.seed, 'config': self.config.to_dict()},
        )


def usable(example):
    return len(example.buggy.var_nodes) > 0 and len(example.correct.var_nodes) > 0


def predicted_columns(probs):
    # argmax takes the first maximum, i.e. the lowest correct-variable index on ties
    return tuple(int(c) for c in np.argmax(probs, axis=1))


def exact_match(examples, params):
    if not examples:
        return None
    hits = 0
    for example in examples:
        _, probs = forward(example.buggy, example.correct, params)
        hits += predicted_columns(probs.data) == tuple(example.labels)
    return hits / len(examples)


def train(dataset, cfg=None, validation=None, vocab=VOCAB, progress=False):
    """Train both encoders on (buggy graph, correct graph, labels) examples, one pair per step."""
    cfg = cfg or TrainConfig()
    examples = [e for e in dataset if usable(e)]
    if not examples:
        raise EmptyDatasetError("the training set has no example with variables on both sides")
    validation = [e for e in (validation or ()) if usable(e)]
    params = {
        name: Tensor(value, requires_grad=True)
        for name, value in init_params(len(vocab), cfg.hidden_dim, cfg.seed).items()
    }
    optimizer = Adam(params, lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.eps)
    rng = np.random.default_rng(cfg.seed)
    history = []
    steps = 0
    logger.info("training on %d pairs (%d validation) for %d epochs", len(examples), len(validation), cfg.epochs)
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(examples))
        losses = []
        for index in tqdm(order, desc=f"epoch {epoch}/{cfg.epochs}", disable=not progress, leave=False):
            example = examples[index]
            optimizer.zero_grad()
            _, probs = forward(example.buggy, example.correct, params)
            loss = F.cross_entropy(probs, list(example.labels))
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
            steps += 1
        arrays = {name: tensor.data for name, tensor in params.items()}
        record = {
            'epoch': epoch,
            'loss': float(np.mean(losses)),
            'validation_exact_match': exact_match(validation, arrays),
        }
        history.append(record)
        logger.info(
            "epoch %d: mean loss %.6f, validation exact match %s",
            epoch, record['loss'],
            'n/a' if record['validation_exact_match'] is None else f"{record['validation_exact_match']:.4f}",
        )
    return TrainedModel(
        params={name: tensor.data.copy() for name, tensor in params.items()},
        config=cfg,
        history=history,
        steps=steps,
    )
