import logging
import time
from dataclasses import dataclass
from pathlib import Path

from lang.interpreter import DEFAULT_STEP_LIMIT
from lang.printer import pretty_print
from lang.suites import run_test_suite

from .strategies import STRATEGIES

logger = logging.getLogger(__name__)

FIXED = 'fixed'
EXHAUSTED = 'exhausted'
TIMEOUT = 'timeout'
STATUSES = (FIXED, EXHAUSTED, TIMEOUT)

DEFAULT_BUDGET = 60.0


@dataclass(frozen=True)
class RepairOutcome:
    status: str
    fixed_source: str = None
    mappings_tried: int = 0
    candidates_tried: int = 0
    elapsed: float = 0.0
    mapping: object = None
    strategy: str = None

    @property
    def fixed(self):
        return self.status == FIXED

    def to_dict(self):
        return {
            'status': self.status,
            'fixed_source': self.fixed_source,
            'mappings_tried': self.mappings_tried,
            'candidates_tried': self.candidates_tried,
            'elapsed': self.elapsed,
            'mapping': self.mapping.as_dict() if hasattr(self.mapping, 'as_dict') else None,
            'strategy': self.strategy,
        }


def repair(buggy, correct, mapping_stream, suite, budget=DEFAULT_BUDGET, step_limit=DEFAULT_STEP_LIMIT,
           scratch_dir=None, clock=time.perf_counter):
    """
    Try the WCO, VM and ME candidates of every mapping in turn until one passes the suite.

    The budget is wall-clock seconds, checked before each mapping and each suite run. A
    candidate already tested under an earlier mapping is skipped without being counted.
    """
    if budget <= 0:
        raise ValueError("the repair budget must be positive")
    started = clock()
    deadline = started + budget
    scratch = Path(scratch_dir) if scratch_dir else None
    if scratch is not None:
        scratch.mkdir(parents=True, exist_ok=True)
    tested = set()
    mappings_tried = 0
    candidates_tried = 0

    def finish(status, source=None, mapping=None, strategy=None):
        outcome = RepairOutcome(status, source, mappings_tried, candidates_tried, clock() - started, mapping, strategy)
        logger.info(
            "repair %s after %d mappings and %d candidates (%.3fs)",
            status, mappings_tried, candidates_tried, outcome.elapsed,
        )
        return outcome

    for mapping in mapping_stream:
        if clock() >= deadline:
            return finish(TIMEOUT)
        mappings_tried += 1
        for name, strategy in STRATEGIES:
            for candidate in strategy(buggy, correct, mapping):
                source = pretty_print(candidate)
                if source in tested:
                    continue
                if clock() >= deadline:
                    return finish(TIMEOUT)
                tested.add(source)
                candidates_tried += 1
                if scratch is not None:
                    (scratch / f'{candidates_tried}.c').write_text(source)
                report = run_test_suite(candidate, suite, step_limit)
                logger.debug("%s candidate %d passes %d/%d", name, candidates_tried, report.passed, report.total)
                if report.all_passed:
                    return finish(FIXED, source, mapping, name)
    return finish(EXHAUSTED)
