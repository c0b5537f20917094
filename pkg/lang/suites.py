"""Input/output test suites and the judge that runs a program against them."""
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .interpreter import DEFAULT_STEP_LIMIT, interpret

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestCase:
    stdin: str
    expected: str


@dataclass(frozen=True)
class TestSuite:
    cases: tuple

    def __post_init__(self):
        if not self.cases:
            raise ValueError("a test suite needs at least one case")

    def __len__(self):
        return len(self.cases)


@dataclass(frozen=True)
class CaseResult:
    passed: bool
    stdout: str
    status: str
    error_kind: str = ''


@dataclass(frozen=True)
class TestReport:
    passed: int
    total: int
    results: tuple = field(default=(), compare=False)

    @property
    def all_passed(self):
        return self.passed == self.total


def normalize_output(text):
    """Strip trailing whitespace on every line and trailing blank lines."""
    lines = [line.rstrip() for line in text.replace('\r\n', '\n').split('\n')]
    return '\n'.join(lines).rstrip('\n')


def run_test_suite(program, suite, step_limit=DEFAULT_STEP_LIMIT):
    results = []
    for case in suite.cases:
        outcome = interpret(program, case.stdin, step_limit)
        passed = (
            outcome.ok
            and not outcome.printed_nan
            and normalize_output(outcome.stdout) == normalize_output(case.expected)
        )
        results.append(CaseResult(passed, outcome.stdout, outcome.status, outcome.error_kind))
    return TestReport(sum(r.passed for r in results), len(results), tuple(results))


def load_suite(directory):
    """Read a directory of paired NN.in / NN.out files, ordered by file name."""
    directory = Path(directory)
    cases = []
    for stdin_path in sorted(directory.glob('*.in')):
        expected_path = stdin_path.with_suffix('.out')
        if not expected_path.exists():
            raise FileNotFoundError(f"{stdin_path.name} has no matching {expected_path.name}")
        cases.append(TestCase(stdin_path.read_text(), expected_path.read_text()))
    if not cases:
        raise FileNotFoundError(f"no test cases found in {directory}")
    return TestSuite(tuple(cases))


def dump_suite(suite, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for index, case in enumerate(suite.cases, start=1):
        (directory / f'{index:02d}.in').write_text(case.stdin)
        (directory / f'{index:02d}.out').write_text(case.expected)
    logger.debug("wrote %d test cases to %s", len(suite), directory)
