import logging
import time

import numpy as np

from graphs.builder import EdgeSetConfig, build_graph
from graphs.vocab import VOCAB, NodeTypeVocab
from lang.scope import variables
from nn.checkpoint import load_checkpoint

from .enumeration import enumerate_mappings
from .mapping import VariableMapping
from .model import forward

logger = logging.getLogger(__name__)


class Mapper:
    """Inference wrapper around trained parameters; read-only, safe to share between threads."""

    def __init__(self, params, edges=None, vocab=VOCAB):
        self.params = params
        self.edges = edges or EdgeSetConfig()
        self.vocab = vocab

    @classmethod
    def from_checkpoint(cls, path, vocab=VOCAB):
        checkpoint = load_checkpoint(path, vocab=vocab.kinds)
        logger.info("loaded checkpoint %s (edges %s, hidden %d)", path, checkpoint.edges, checkpoint.hidden_dim)
        return cls(checkpoint.params, EdgeSetConfig.from_mask(checkpoint.edges), NodeTypeVocab(checkpoint.vocab))

    def probabilities(self, buggy, correct):
        """(P, buggy variables, correct variables) for two resolved programs."""
        buggy_vars, correct_vars = variables(buggy), variables(correct)
        if not buggy_vars or not correct_vars:
            return np.zeros((len(buggy_vars), len(correct_vars))), buggy_vars, correct_vars
        buggy_graph = build_graph(buggy, self.edges, self.vocab)
        correct_graph = build_graph(correct, self.edges, self.vocab)
        _, probs = forward(buggy_graph, correct_graph, self.params)
        return probs.data, buggy_vars, correct_vars

    def predict(self, buggy, correct):
        started = time.perf_counter()
        probs, buggy_vars, correct_vars = self.probabilities(buggy, correct)
        choice = tuple(np.argmax(probs, axis=1)) if probs.size else ()
        return VariableMapping.from_choice(
            choice, buggy_vars, correct_vars, probs, elapsed=time.perf_counter() - started,
        )

    def mappings(self, buggy, correct):
        """
        Lazy stream of mappings by decreasing likelihood. A buggy program without variables
        gets one empty mapping; buggy variables with no correct variable get none.
        """
        probs, buggy_vars, correct_vars = self.probabilities(buggy, correct)
        return enumerate_mappings(probs, buggy_vars, correct_vars)


def predict_mapping(buggy, correct, params, edges=None):
    return Mapper(params, edges).predict(buggy, correct)
