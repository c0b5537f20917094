"""
Relational graph convolutional encoder and variable scoring.

Node states use the row-vector convention: for every step,

    x'_i = x_i @ root + sum_r mean_{j in N_r(i)} x_j @ rel_r

followed by LayerNorm and ReLU. The node-kind embedding is shared; the buggy-side and
correct-side encoders each own their per-step weights.
"""
import numpy as np

from graphs.builder import NUM_RELATIONS
from nn import functional as F
from nn.tensor import ShapeError, Tensor

NUM_STEPS = 5
SIDES = ('buggy', 'correct')


def parameter_shapes(vocab_size, hidden_dim):
    shapes = {'embedding': (vocab_size, hidden_dim)}
    for side in SIDES:
        for step in range(NUM_STEPS):
            prefix = f'{side}.{step}'
            shapes[f'{prefix}.root'] = (hidden_dim, hidden_dim)
            for relation in range(NUM_RELATIONS):
                shapes[f'{prefix}.rel.{relation}'] = (hidden_dim, hidden_dim)
            shapes[f'{prefix}.ln_gain'] = (hidden_dim,)
            shapes[f'{prefix}.ln_bias'] = (hidden_dim,)
    return shapes


def init_params(vocab_size, hidden_dim, seed=0):
    """Glorot-uniform matrices, unit LayerNorm gains and zero biases, from one seeded generator."""
    rng = np.random.default_rng(seed)
    params = {}
    for name, shape in parameter_shapes(vocab_size, hidden_dim).items():
        if name.endswith('ln_gain'):
            params[name] = np.ones(shape)
        elif name.endswith('ln_bias'):
            params[name] = np.zeros(shape)
        else:
            limit = np.sqrt(6.0 / (shape[0] + shape[1]))
            params[name] = rng.uniform(-limit, limit, size=shape)
    return params


def relation_index(graph):
    """Per relation, the (sources, targets) index arrays of its edges."""
    edges = np.array(graph.edges, dtype=np.int64).reshape(-1, 3)
    index = []
    for relation in range(NUM_RELATIONS):
        selected = edges[edges[:, 2] == relation]
        index.append((selected[:, 0], selected[:, 1]))
    return index


def rgcn_encode(graph, side, params, relations=None):
    """
    Final node states (num_nodes x hidden_dim) of `graph` using the `side` encoder.
    `params` maps names to Tensors (training) or arrays (inference).
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    params = {name: value if isinstance(value, Tensor) else Tensor(value) for name, value in params.items()}
    embedding = params['embedding']
    if graph.nodes and max(graph.nodes) >= embedding.shape[0]:
        raise ShapeError(f"node kind {max(graph.nodes)} is outside the {embedding.shape[0]}-kind vocabulary")
    relations = relations if relations is not None else relation_index(graph)
    x = F.take_rows(embedding, list(graph.nodes))
    for step in range(NUM_STEPS):
        prefix = f'{side}.{step}'
        h = F.matmul(x, params[f'{prefix}.root'])
        for relation, (sources, targets) in enumerate(relations):
            if len(sources):
                h = F.add(h, F.matmul(F.mean_aggregate(x, sources, targets), params[f'{prefix}.rel.{relation}']))
        x = F.relu(F.layer_norm(h, params[f'{prefix}.ln_gain'], params[f'{prefix}.ln_bias']))
    return x


def score_mapping(buggy_vecs, correct_vecs):
    """S[i, j] = <a_i, b_j> and P = row softmax of S."""
    scores = F.matmul(buggy_vecs, F.transpose(correct_vecs))
    return scores, F.softmax_rows(scores)


def forward(buggy_graph, correct_graph, params):
    """Probability matrix over (buggy variable, correct variable) pairs."""
    buggy = F.take_rows(rgcn_encode(buggy_graph, 'buggy', params), list(buggy_graph.var_nodes))
    correct = F.take_rows(rgcn_encode(correct_graph, 'correct', params), list(correct_graph.var_nodes))
    return score_mapping(buggy, correct)
