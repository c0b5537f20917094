"""
Dataset generation: corpus programs x mutation configurations x bug types.

Records are JSON lines with the fields correct_source, buggy_source, mapping
(buggy variable key -> correct variable key), bug_type, bug_site, bug_description,
mutation_config_id, ipa_id, program_id and split. Every random choice is drawn from a
`random.Random` seeded with (seed, program, configuration, sample), so a program's records
do not depend on which worker produced them.
"""
import hashlib
import json
import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from tqdm import tqdm

from graphs.builder import build_graph
from lang.parser import parse
from lang.printer import pretty_print
from lang.scope import variables
from lang.suites import run_test_suite
from mapper.training import TrainingExample

from .bugs import BUG_TYPES, inject, make_pair
from .transforms import MutationConfig, apply_config

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
TRAIN = 'train'
VALID = 'valid'
EVAL = 'eval'
SPLITS = (TRAIN, VALID, EVAL)

# Corpus programs finish in a few thousand steps; a candidate still running after this
# many is an infinite loop.
INJECTION_STEP_LIMIT = 10 ** 5


class CorpusError(ValueError):
    def __init__(self, failures):
        self.failures = failures
        super().__init__(
            "corpus programs fail their own test suite: "
            + ', '.join(f"{program_id} ({passed}/{total})" for program_id, passed, total in failures)
        )


def validate_corpus(corpus, step_limit=INJECTION_STEP_LIMIT):
    failures = []
    for entry in corpus:
        report = run_test_suite(entry.program, entry.suite, step_limit)
        if not report.all_passed:
            logger.warning("%s passes %d of %d tests", entry.program_id, report.passed, report.total)
            failures.append((entry.program_id, report.passed, report.total))
    if failures:
        raise CorpusError(failures)


def assign_splits(corpus, seed=0, valid_fraction=0.2):
    """program_id -> split: held-out programs are eval, the rest is divided train/valid."""
    if not 0.0 <= valid_fraction < 1.0:
        raise ValueError("valid_fraction must lie in [0, 1)")
    seen = [e.program_id for e in corpus if not e.held_out]
    random.Random(f'{seed}:splits').shuffle(seen)
    valid_count = round(len(seen) * valid_fraction)
    splits = {program_id: VALID for program_id in seen[:valid_count]}
    splits.update({program_id: TRAIN for program_id in seen[valid_count:]})
    splits.update({e.program_id: EVAL for e in corpus if e.held_out})
    return splits


def record(pair, entry, split):
    return {
        'correct_source': pretty_print(pair.correct),
        'buggy_source': pretty_print(pair.buggy),
        'mapping': pair.mapping_dict(),
        'bug_type': pair.bug.type,
        'bug_site': pair.bug.site,
        'bug_description': pair.bug.description,
        'mutation_config_id': pair.config_id,
        'ipa_id': entry.ipa_id,
        'program_id': entry.program_id,
        'split': split,
    }


def program_records(entry, split, seed=0, per_config_samples=1, exhaustive=False, rename_buggy=False,
                    step_limit=INJECTION_STEP_LIMIT):
    """All records generated from one corpus program; pure given its arguments."""
    records = []
    for config in MutationConfig.all():
        for sample in range(per_config_samples):
            rng = random.Random(f'{seed}:{entry.program_id}:{config.id}:{sample}')
            mutated = apply_config(entry.program, config, rng=rng)
            if not mutated.changed:
                logger.debug("%s: configuration %s has no site", entry.program_id, config)
            if not run_test_suite(mutated.program, entry.suite, step_limit).all_passed:
                logger.error("%s: configuration %s changed the program's behaviour", entry.program_id, config)
                continue
            for bug_type in BUG_TYPES:
                found = inject(mutated.program, entry.suite, bug_type, rng, step_limit, None if exhaustive else 1)
                for buggy, bug in found:
                    pair = make_pair(entry.program, buggy, bug, config.id, rng if rename_buggy else None)
                    records.append(record(pair, entry, split))
    return records


def _program_records(args):
    return program_records(*args)


def generate_dataset(corpus, seed=0, per_config_samples=1, exhaustive=False, rename_buggy=False,
                     valid_fraction=0.2, step_limit=INJECTION_STEP_LIMIT, workers=1, progress=False):
    validate_corpus(corpus, step_limit)
    splits = assign_splits(corpus, seed, valid_fraction)
    tasks = [
        (entry, splits[entry.program_id], seed, per_config_samples, exhaustive, rename_buggy, step_limit)
        for entry in corpus
    ]
    bar = tqdm(total=len(tasks), desc='programs', disable=not progress)
    records = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for batch in executor.map(_program_records, tasks):
                records.extend(batch)
                bar.update()
    else:
        for task in tasks:
            records.extend(_program_records(task))
            bar.update()
    bar.close()
    counts = Counter((r['split'], r['bug_type']) for r in records)
    for (split, bug_type), count in sorted(counts.items()):
        logger.info("%s/%s: %d pairs", split, bug_type, count)
    return records


def manifest(corpus, records, seed, per_config_samples, exhaustive, rename_buggy, valid_fraction):
    counts = {split: {bug_type: 0 for bug_type in BUG_TYPES} for split in SPLITS}
    for r in records:
        counts[r['split']][r['bug_type']] += 1
    return {
        'format_version': FORMAT_VERSION,
        'seed': seed,
        'per_config_samples': per_config_samples,
        'exhaustive': exhaustive,
        'rename_buggy': rename_buggy,
        'valid_fraction': valid_fraction,
        'corpus': {entry.program_id: entry.sha256 for entry in corpus},
        'counts': counts,
        'records': len(records),
    }


def manifest_path(path):
    path = Path(path)
    return path.with_name(path.name + '.manifest.json')


def write_dataset(records, path, manifest_data=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w') as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + '\n')
    if manifest_data is not None:
        manifest_path(path).write_text(json.dumps(manifest_data, indent=2, sort_keys=True) + '\n')
    logger.info("wrote %d records to %s", len(records), path)


def load_dataset(path, split=None):
    records = []
    with Path(path).open() as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                r = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"{path}:{line_number}: {e.msg}") from None
            if split is None or r['split'] == split:
                records.append(r)
    return records


def dataset_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def record_programs(r):
    return parse(r['buggy_source']), parse(r['correct_source'])


def record_labels(r, buggy=None, correct=None):
    """Index of the mapped correct variable for every buggy variable."""
    if buggy is None or correct is None:
        buggy, correct = record_programs(r)
    columns = {v.key: index for index, v in enumerate(variables(correct))}
    return tuple(columns[r['mapping'][v.key]] for v in variables(buggy))


def training_example(r, edges=None):
    buggy, correct = record_programs(r)
    return TrainingExample(
        build_graph(buggy, edges),
        build_graph(correct, edges),
        record_labels(r, buggy, correct),
    )
