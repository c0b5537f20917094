"""Mapping-quality metrics: exact match, overlap coefficient and accuracy by variable count."""
import logging
from collections import defaultdict

import numpy as np
from tqdm import tqdm

from mutate.bugs import BUG_TYPES
from mutate.dataset import record_programs

logger = logging.getLogger(__name__)

REPORT_VERSION = 1
ALL = 'all'


def as_pairs(mapping):
    if hasattr(mapping, 'as_dict'):
        mapping = mapping.as_dict()
    return set(dict(mapping).items())


def overlap_coefficient(m1, m2):
    """|m1 & m2| / min(|m1|, |m2|) over (buggy variable, correct variable) pairs."""
    first, second = as_pairs(m1), as_pairs(m2)
    if not first and not second:
        return 1.0
    if not first or not second:
        raise ValueError("cannot compare an empty mapping with a non-empty one")
    return len(first & second) / min(len(first), len(second))


def seconds_summary(values):
    if not values:
        return {'mean': None, 'min': None, 'max': None}
    return {'mean': float(np.mean(values)), 'min': float(np.min(values)), 'max': float(np.max(values))}


def mapping_summary(rows):
    exact = sum(r['exact'] for r in rows)
    histogram = defaultdict(lambda: {'pairs': 0, 'exact': 0})
    for r in rows:
        histogram[r['variables']]['pairs'] += 1
        histogram[r['variables']]['exact'] += r['exact']
    return {
        'pairs': len(rows),
        'exact': exact,
        'exact_rate': exact / len(rows) if rows else None,
        'mean_overlap': float(np.mean([r['overlap'] for r in rows])) if rows else None,
        'by_variable_count': {str(count): histogram[count] for count in sorted(histogram)},
        'mapping_seconds': seconds_summary([r['seconds'] for r in rows]),
    }


def evaluate_mappings(mapper, records, progress=False):
    """Compare the mapper's best mapping against the ground truth of every record."""
    rows = []
    for record in tqdm(records, desc='mapping', disable=not progress):
        buggy, correct = record_programs(record)
        predicted = mapper.predict(buggy, correct)
        truth = record['mapping']
        rows.append({
            'bug_type': record['bug_type'],
            'variables': len(truth),
            'exact': predicted.as_dict() == truth,
            'overlap': overlap_coefficient(predicted, truth),
            'seconds': predicted.elapsed,
        })
    report = {
        'format_version': REPORT_VERSION,
        ALL: mapping_summary(rows),
        'by_bug_type': {
            bug_type: mapping_summary([r for r in rows if r['bug_type'] == bug_type]) for bug_type in BUG_TYPES
        },
    }
    logger.info(
        "exact mappings %d/%d, mean overlap %s",
        report[ALL]['exact'], report[ALL]['pairs'], report[ALL]['mean_overlap'],
    )
    return report


TIMING_KEYS = frozenset({'mapping_seconds', 'repair_seconds', 'timing'})


def without_timings(report):
    """The report minus wall-clock fields, which are the only part that varies between runs."""
    if isinstance(report, dict):
        return {key: without_timings(value) for key, value in report.items() if key not in TIMING_KEYS}
    return report
