"""
Lazy streams of variable mappings.

`enumerate_mappings` walks all |B|^|A| assignments best-first by joint probability.
Every row's columns are ranked once (stable, so ties favour the lower index); a state is
a vector of per-row ranks. Children of a state bump the rank of one row at or after the
last bumped row, which reaches every rank vector from exactly one parent, and a child is
never more likely than its parent, so popping a heap yields non-increasing probabilities
without duplicates.

`uniform_mappings` is the baseline: a lazily shuffled permutation of all assignments.
"""
import heapq
import random
import time

import numpy as np

from .mapping import VariableMapping


def best_first_assignments(probs):
    """Yield (columns, log probability) over every assignment, most likely first."""
    probs = np.asarray(probs, dtype=np.float64)
    rows, cols = probs.shape
    if rows == 0:
        # nothing to map: exactly one (empty) assignment
        yield (), 0.0
        return
    if cols == 0:
        return
    ranking = np.argsort(-probs, axis=1, kind='stable')
    log_probs = np.log(np.maximum(np.take_along_axis(probs, ranking, axis=1), 1e-300))

    def entry(ranks, pivot):
        columns = tuple(int(ranking[i, r]) for i, r in enumerate(ranks))
        score = float(sum(log_probs[i, r] for i, r in enumerate(ranks)))
        return (-score, columns, ranks, pivot)

    frontier = [entry((0,) * rows, 0)]
    while frontier:
        neg_score, columns, ranks, pivot = heapq.heappop(frontier)
        yield columns, -neg_score
        for row in range(pivot, rows):
            if ranks[row] + 1 < cols:
                bumped = ranks[:row] + (ranks[row] + 1,) + ranks[row + 1:]
                heapq.heappush(frontier, entry(bumped, row))


def enumerate_mappings(probs, buggy_vars, correct_vars):
    probs = np.asarray(probs, dtype=np.float64)
    started = time.perf_counter()
    for columns, _ in best_first_assignments(probs):
        now = time.perf_counter()
        yield VariableMapping.from_choice(columns, buggy_vars, correct_vars, probs, elapsed=now - started)
        started = time.perf_counter()


def decode(index, rows, cols):
    columns = []
    for _ in range(rows):
        index, digit = divmod(index, cols)
        columns.append(digit)
    return tuple(reversed(columns))


def uniform_assignments(rows, cols, seed=0):
    """Every assignment exactly once, in a seeded random order (lazy Fisher-Yates)."""
    if rows == 0:
        yield ()
        return
    if cols == 0:
        return
    total = cols ** rows
    rng = random.Random(seed)
    swapped = {}
    for i in range(total):
        j = rng.randrange(i, total)
        chosen = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
        swapped.pop(i, None)
        yield decode(chosen, rows, cols)


def uniform_mappings(buggy_vars, correct_vars, seed=0):
    rows, cols = len(buggy_vars), len(correct_vars)
    probs = np.full((rows, cols), 1.0 / cols) if cols else np.zeros((rows, 0))
    started = time.perf_counter()
    for columns in uniform_assignments(rows, cols, seed):
        now = time.perf_counter()
        yield VariableMapping.from_choice(columns, buggy_vars, correct_vars, probs, elapsed=now - started)
        started = time.perf_counter()
