"""
Self-checks run by `manage.py selftest`.

Each oracle compares a component against an independent computation (a dense-matrix
encoder, finite differences, brute-force sorting) or checks a property over the bundled
corpus, and returns an OracleResult instead of raising so every check is reported.
"""
import itertools
import logging
import random
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from graphs.builder import NUM_RELATIONS, ProgramGraph
from lang.suites import run_test_suite
from mapper.enumeration import best_first_assignments
from mapper.model import NUM_STEPS, SIDES, forward, init_params, rgcn_encode
from mutate.bugs import ME, VM, WCO
from mutate.dataset import EVAL, INJECTION_STEP_LIMIT, program_records
from mutate.transforms import MutationConfig, apply_config
from nn import functional as F
from nn.tensor import Tensor
from repair.engine import DEFAULT_BUDGET, FIXED

from .benchmark import ORACLE, evaluate_repair

logger = logging.getLogger(__name__)

CLOSURE_THRESHOLDS = {WCO: 1.0, VM: 0.95, ME: 0.90}


@dataclass
class OracleResult:
    name: str
    passed: bool
    summary: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self):
        return asdict(self)


def random_graph(rng, vocab_size, max_nodes=20, max_vars=4):
    num_nodes = int(rng.integers(1, max_nodes + 1))
    num_edges = int(rng.integers(0, 3 * num_nodes + 1))
    edges = tuple(
        (int(rng.integers(num_nodes)), int(rng.integers(num_nodes)), int(rng.integers(NUM_RELATIONS)))
        for _ in range(num_edges)
    )
    nodes = tuple(int(k) for k in rng.integers(vocab_size, size=num_nodes))
    var_count = int(rng.integers(1, min(max_vars, num_nodes) + 1))
    var_nodes = tuple(sorted(int(v) for v in rng.choice(num_nodes, size=var_count, replace=False)))
    return ProgramGraph(nodes, edges, var_nodes)


def dense_encode(graph, side, params, eps=F.LAYER_NORM_EPS):
    """The encoder written with per-relation row-normalised adjacency matrices."""
    size = graph.num_nodes
    adjacency = np.zeros((NUM_RELATIONS, size, size))
    for src, dst, rel in graph.edges:
        adjacency[rel, dst, src] += 1.0
    degree = adjacency.sum(axis=2, keepdims=True)
    adjacency = np.divide(adjacency, degree, out=np.zeros_like(adjacency), where=degree > 0)
    x = params['embedding'][list(graph.nodes)]
    for step in range(NUM_STEPS):
        prefix = f'{side}.{step}'
        h = x @ params[f'{prefix}.root']
        for rel in range(NUM_RELATIONS):
            h = h + adjacency[rel] @ x @ params[f'{prefix}.rel.{rel}']
        mean = h.mean(axis=1, keepdims=True)
        normed = (h - mean) / np.sqrt(h.var(axis=1, keepdims=True) + eps)
        x = np.maximum(normed * params[f'{prefix}.ln_gain'] + params[f'{prefix}.ln_bias'], 0.0)
    return x


def rgcn_dense_oracle(instances=50, seed=0, tolerance=1e-9):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for index in range(instances):
        vocab_size = int(rng.integers(2, 12))
        hidden_dim = int(rng.integers(1, 9))
        params = init_params(vocab_size, hidden_dim, seed=seed + index)
        # random LayerNorm parameters so the gain and bias paths are exercised too
        for name in params:
            if name.endswith('ln_gain') or name.endswith('ln_bias'):
                params[name] = rng.normal(size=params[name].shape)
        graph = random_graph(rng, vocab_size)
        side = SIDES[index % 2]
        deviation = np.max(np.abs(rgcn_encode(graph, side, params).data - dense_encode(graph, side, params)))
        worst = max(worst, float(deviation))
    return worst < tolerance, {'instances': instances, 'max_abs_deviation': worst, 'tolerance': tolerance}


def model_loss(buggy, correct, labels, params):
    _, probs = forward(buggy, correct, params)
    return F.cross_entropy(probs, labels)


def gradient_check(instances=10, seed=0, coordinates=24, eps=1e-5, tolerance=1e-4):
    """Analytic gradients of the full mapping loss against central differences at random coordinates."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for index in range(instances):
        vocab_size, hidden_dim = 8, 4
        arrays = init_params(vocab_size, hidden_dim, seed=seed + index)
        buggy = random_graph(rng, vocab_size, max_nodes=10)
        correct = random_graph(rng, vocab_size, max_nodes=10)
        labels = [int(c) for c in rng.integers(len(correct.var_nodes), size=len(buggy.var_nodes))]
        params = {name: Tensor(value, requires_grad=True) for name, value in arrays.items()}
        model_loss(buggy, correct, labels, params).backward()
        # views of the leaf data, so the perturbations below reach the plain forward pass
        plain = {name: tensor.data for name, tensor in params.items()}
        names = sorted(params)
        for _ in range(coordinates):
            name = names[int(rng.integers(len(names)))]
            tensor = params[name]
            position = tuple(int(rng.integers(n)) for n in tensor.shape)
            analytic = 0.0 if tensor.grad is None else float(tensor.grad[position])
            saved = tensor.data[position]
            tensor.data[position] = saved + eps
            upper = model_loss(buggy, correct, labels, plain).item()
            tensor.data[position] = saved - eps
            lower = model_loss(buggy, correct, labels, plain).item()
            tensor.data[position] = saved
            numeric = (upper - lower) / (2 * eps)
            error = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)
            worst = max(worst, error)
            checked += 1
    return worst < tolerance, {'instances': instances, 'coordinates': checked, 'max_relative_error': worst}


def brute_force_order(probs):
    rows, cols = probs.shape
    assignments = itertools.product(range(cols), repeat=rows)
    scored = [(float(np.prod([probs[i, c] for i, c in enumerate(a)])), a) for a in assignments]
    return [a for _, a in sorted(scored, key=lambda item: -item[0])]


def enumeration_oracle(instances=100, seed=0):
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(instances):
        rows, cols = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        probs = F.softmax_rows(Tensor(rng.normal(size=(rows, cols)))).data
        if [c for c, _ in best_first_assignments(probs)] != brute_force_order(probs):
            mismatches += 1
    return mismatches == 0, {'instances': instances, 'mismatches': mismatches}


def outcome_vector(program, suite, step_limit):
    return tuple(result.passed for result in run_test_suite(program, suite, step_limit).results)


def mutation_preservation(corpus, seed=0, step_limit=INJECTION_STEP_LIMIT):
    """Every configuration applied to every corpus program passes exactly the original tests."""
    checked = 0
    broken = []
    for entry in corpus:
        expected = outcome_vector(entry.program, entry.suite, step_limit)
        for config in MutationConfig.all():
            mutated = apply_config(entry.program, config, rng=random.Random(f'{seed}:{entry.program_id}:{config.id}'))
            checked += 1
            if outcome_vector(mutated.program, entry.suite, step_limit) != expected:
                broken.append(f'{entry.program_id}@{config.id}')
    return not broken, {'mutants': checked, 'broken': broken}


def repair_closure(corpus, seed=0, budget=DEFAULT_BUDGET, step_limit=INJECTION_STEP_LIMIT, workers=1, progress=False):
    """Ground-truth mappings must let the engine fix the held-out programs' injected bugs."""
    held_out = [entry for entry in corpus if entry.held_out]
    records = [r for entry in held_out for r in program_records(entry, EVAL, seed, step_limit=step_limit)]
    suites = {entry.ipa_id: entry.suite for entry in held_out}
    report, _ = evaluate_repair(records, suites, ORACLE, budget=budget, step_limit=step_limit, workers=workers,
                                progress=progress)
    rates = {bug_type: report['by_bug_type'][bug_type]['rates'][FIXED] for bug_type in CLOSURE_THRESHOLDS}
    passed = all(rates[b] is None or rates[b] >= threshold for b, threshold in CLOSURE_THRESHOLDS.items())
    return passed, {'pairs': report['all']['pairs'], 'fixed_rates': rates, 'thresholds': CLOSURE_THRESHOLDS}


def run_oracle(name, check, *args, **kwargs):
    started = time.perf_counter()
    try:
        passed, summary = check(*args, **kwargs)
    except Exception as e:
        logger.exception("%s raised", name)
        passed, summary = False, {'error': str(e), 'kind': type(e).__name__}
    result = OracleResult(name, bool(passed), summary, time.perf_counter() - started)
    log = logger.info if result.passed else logger.error
    log("%s %s in %.2fs", name, 'passed' if result.passed else 'FAILED', result.seconds)
    return result


CHECKS = {
    'rgcn-dense': rgcn_dense_oracle,
    'gradient-check': gradient_check,
    'enumeration': enumeration_oracle,
    'mutation-preservation': mutation_preservation,
    'repair-closure': repair_closure,
}
CORPUS_CHECKS = ('mutation-preservation', 'repair-closure')


def run_all(corpus, seed=0, budget=DEFAULT_BUDGET, workers=1, progress=False, skip=()):
    results = []
    for name, check in CHECKS.items():
        if name in skip:
            continue
        args = (corpus,) if name in CORPUS_CHECKS else ()
        kwargs = {'seed': seed}
        if name == 'repair-closure':
            kwargs.update(budget=budget, workers=workers, progress=progress)
        results.append(run_oracle(name, check, *args, **kwargs))
    return results
