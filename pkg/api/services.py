import logging
import time

from django.conf import settings

from lang.exceptions import LangError
from lang.parser import parse
from lang.scope import variables
from lang.suites import run_test_suite
from mapper.enumeration import uniform_mappings
from mapper.inference import Mapper
from nn.checkpoint import CheckpointError
from repair.engine import EXHAUSTED, FIXED, TIMEOUT, repair

from .models import Submission

logger = logging.getLogger(__name__)


class MappingService:
    """
    Loads the trained mapper once per process and maps variables between two programs.
    """

    _mapper = None
    _path = None

    @classmethod
    def get_mapper(cls):
        """The cached mapper; raises CheckpointError when no checkpoint is available."""
        path = settings.VARMAP['CHECKPOINT_PATH']
        if cls._mapper is None or cls._path != path:
            cls._mapper = Mapper.from_checkpoint(path)
            cls._path = path
        return cls._mapper

    @classmethod
    def reset(cls):
        cls._mapper = None
        cls._path = None

    @classmethod
    def available(cls):
        try:
            cls.get_mapper()
        except CheckpointError:
            return False
        return True

    @staticmethod
    def map_sources(buggy_source, correct_source):
        mapping = MappingService.get_mapper().predict(parse(buggy_source), parse(correct_source))
        return {
            'mapping': mapping.as_dict(),
            'probability': mapping.probability,
            'buggy_variables': [str(v) for v in mapping.buggy_vars],
            'correct_variables': [str(v) for v in mapping.correct_vars],
            'probabilities': mapping.probabilities.tolist() if mapping.probabilities is not None else [],
            'seconds': mapping.elapsed,
        }


class RepairService:
    """
    Tests a submission and, when it fails, repairs it against each reference solution in turn.
    """

    STATUS = {FIXED: Submission.FIXED, EXHAUSTED: Submission.EXHAUSTED, TIMEOUT: Submission.TIMEOUT}

    @staticmethod
    def mapping_stream(buggy, correct):
        """GNN-ranked mappings when a checkpoint exists, otherwise the uniform baseline."""
        if MappingService.available():
            return MappingService.get_mapper().mappings(buggy, correct)
        return uniform_mappings(variables(buggy), variables(correct), settings.VARMAP['SEED'])

    @staticmethod
    def process(submission):
        """Fill in the submission's status and repair fields and save it."""
        config = settings.VARMAP
        try:
            buggy = parse(submission.source)
        except LangError as e:
            submission.status = Submission.INVALID
            submission.message = str(e)
            submission.save()
            return submission

        suite = submission.assignment.test_suite()
        report = run_test_suite(buggy, suite, config['STEP_LIMIT'])
        submission.tests_passed, submission.tests_total = report.passed, report.total
        if report.all_passed:
            submission.status = Submission.CORRECT
            submission.message = "all tests pass"
            submission.save()
            return submission

        started = time.perf_counter()
        deadline = started + config['REPAIR_BUDGET']
        statuses = []
        for reference in submission.assignment.references.all():
            remaining = deadline - time.perf_counter()
            if remaining <= 0:
                statuses.append(TIMEOUT)
                break
            correct = parse(reference.source)
            outcome = repair(
                buggy, correct, RepairService.mapping_stream(buggy, correct), suite,
                budget=remaining, step_limit=config['STEP_LIMIT'], scratch_dir=config['SCRATCH_DIR'],
            )
            submission.mappings_tried += outcome.mappings_tried
            submission.candidates_tried += outcome.candidates_tried
            statuses.append(outcome.status)
            logger.info("submission %s against %s: %s", submission.id, reference, outcome.status)
            if outcome.fixed:
                submission.repaired_source = outcome.fixed_source
                submission.reference = reference
                submission.mapping = outcome.mapping.as_dict()
                break

        if FIXED in statuses:
            final = FIXED
        elif TIMEOUT in statuses:
            final = TIMEOUT
        else:
            final = EXHAUSTED
        submission.status = RepairService.STATUS[final]
        submission.elapsed = time.perf_counter() - started
        submission.message = (
            f"{report.passed}/{report.total} tests pass; repair {final} after "
            f"{submission.mappings_tried} mappings and {submission.candidates_tried} candidates"
        )
        submission.save()
        return submission
