"""
Repair benchmark: run the repair engine on dataset records with one of three mapping
sources and aggregate the outcomes.

Per-program seconds cover mapping generation (including the model's forward pass) and the
repair itself; loading the checkpoint happens once per process and is not counted.
"""
import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from tqdm import tqdm

from lang.interpreter import DEFAULT_STEP_LIMIT
from lang.scope import variables
from mapper.enumeration import enumerate_mappings, uniform_mappings
from mapper.mapping import VariableMapping
from mutate.bugs import BUG_TYPES
from mutate.dataset import record_programs
from repair.engine import DEFAULT_BUDGET, EXHAUSTED, FIXED, STATUSES, TIMEOUT, repair

from .metrics import ALL, REPORT_VERSION, seconds_summary

logger = logging.getLogger(__name__)

GNN = 'gnn'
UNIFORM = 'uniform-baseline'
ORACLE = 'oracle'
METHODS = (GNN, UNIFORM, ORACLE)

CACTUS_COLUMNS = ('program_id', 'method', 'seconds')
TIMING_NOTE = 'per-program seconds exclude the one-time checkpoint load'


def oracle_mapping(record, buggy, correct):
    correct_index = {v.key: i for i, v in enumerate(variables(correct))}
    buggy_vars = variables(buggy)
    choice = [correct_index[record['mapping'][v.key]] for v in buggy_vars]
    return VariableMapping.from_choice(choice, buggy_vars, variables(correct))


def timed(stream, sink, setup=0.0):
    """Pass mappings through, recording how long each took to produce."""
    for mapping in stream:
        sink.append(mapping.elapsed + setup)
        setup = 0.0
        yield mapping


def mapping_stream(method, record, buggy, correct, mapper=None, seed=0):
    """(stream, setup seconds) for one record."""
    if method == GNN:
        if mapper is None:
            raise ValueError("the gnn method needs a trained mapper")
        started = time.perf_counter()
        probs, buggy_vars, correct_vars = mapper.probabilities(buggy, correct)
        setup = time.perf_counter() - started
        return enumerate_mappings(probs, buggy_vars, correct_vars), setup
    if method == UNIFORM:
        return uniform_mappings(variables(buggy), variables(correct), seed), 0.0
    if method == ORACLE:
        return iter([oracle_mapping(record, buggy, correct)]), 0.0
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def repair_record(record, suite, method, mapper=None, budget=DEFAULT_BUDGET, step_limit=DEFAULT_STEP_LIMIT, seed=0):
    buggy, correct = record_programs(record)
    started = time.perf_counter()
    stream, setup = mapping_stream(method, record, buggy, correct, mapper, seed)
    mapping_seconds = []
    remaining = max(budget - (time.perf_counter() - started), 1e-9)
    outcome = repair(buggy, correct, timed(stream, mapping_seconds, setup), suite, remaining, step_limit)
    return {
        'program_id': record['program_id'],
        'bug_type': record['bug_type'],
        'status': outcome.status,
        'seconds': time.perf_counter() - started,
        'mappings_tried': outcome.mappings_tried,
        'candidates_tried': outcome.candidates_tried,
        'first_mapping': outcome.fixed and outcome.mappings_tried == 1,
        'mapping_seconds': mapping_seconds,
    }


_worker_mapper = None


def _init_worker(mapper):
    global _worker_mapper
    _worker_mapper = mapper


def _repair_task(args):
    record, suite, method, budget, step_limit, seed = args
    return repair_record(record, suite, method, _worker_mapper, budget, step_limit, seed)


def repair_summary(rows):
    counts = {status: sum(r['status'] == status for r in rows) for status in STATUSES}
    total = len(rows)
    return {
        'pairs': total,
        'counts': counts,
        'rates': {status: (counts[status] / total if total else None) for status in STATUSES},
        'fixed_first_mapping': sum(r['first_mapping'] for r in rows),
        'mappings_used': seconds_summary([r['mappings_tried'] for r in rows]),
        'mapping_seconds': seconds_summary([s for r in rows for s in r['mapping_seconds']]),
        'repair_seconds': seconds_summary([r['seconds'] for r in rows if r['status'] == FIXED]),
    }


def cactus_rows(rows, method):
    """One (program_id, method, seconds) row per fixed pair, sorted by time."""
    fixed = [(f"{r['program_id']}#{index}", method, r['seconds']) for index, r in enumerate(rows) if r['status'] == FIXED]
    return sorted(fixed, key=lambda row: (row[2], row[0]))


def evaluate_repair(records, suites, method, mapper=None, budget=DEFAULT_BUDGET, step_limit=DEFAULT_STEP_LIMIT,
                    seed=0, workers=1, progress=False):
    """
    Repair every record with the method's mapping stream. `suites` maps an assignment id to
    its TestSuite. Returns (report, cactus rows).
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == GNN and mapper is None:
        raise ValueError("the gnn method needs a trained mapper")
    tasks = [(r, suites[r['ipa_id']], method, budget, step_limit, seed) for r in records]
    bar = tqdm(total=len(tasks), desc=method, disable=not progress)
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(mapper,)) as executor:
            for row in executor.map(_repair_task, tasks):
                rows.append(row)
                bar.update()
    else:
        _init_worker(mapper)
        for task in tasks:
            rows.append(_repair_task(task))
            bar.update()
    bar.close()
    report = {
        'format_version': REPORT_VERSION,
        'method': method,
        'budget': budget,
        'timing': TIMING_NOTE,
        ALL: repair_summary(rows),
        'by_bug_type': {
            bug_type: repair_summary([r for r in rows if r['bug_type'] == bug_type]) for bug_type in BUG_TYPES
        },
    }
    counts = report[ALL]['counts']
    logger.info(
        "%s: %d fixed, %d exhausted, %d timeout",
        method, counts[FIXED], counts[EXHAUSTED], counts[TIMEOUT],
    )
    return report, cactus_rows(rows, method)


def write_cactus_csv(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as fh:
        writer = csv.writer(fh)
        writer.writerow(CACTUS_COLUMNS)
        for program_id, method, seconds in rows:
            writer.writerow((program_id, method, f'{seconds:.6f}'))
