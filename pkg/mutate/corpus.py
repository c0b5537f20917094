"""
Seed corpus of reference solutions.

Layout: <root>/<ipa>/suite/NN.in|NN.out and <root>/<ipa>/solutions/*.c. The last solution
of every assignment (by file name) is held out for evaluation.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from lang.parser import parse
from lang.suites import load_suite

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).resolve().parent / 'corpus'


@dataclass(frozen=True)
class CorpusProgram:
    ipa_id: str
    program_id: str
    source: str
    suite: object = field(repr=False)
    held_out: bool = False

    @cached_property
    def program(self):
        return parse(self.source)

    @property
    def sha256(self):
        return hashlib.sha256(self.source.encode()).hexdigest()


def load_corpus(directory=None):
    directory = Path(directory or CORPUS_DIR)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory {directory} does not exist")
    entries = []
    for ipa_dir in sorted(p for p in directory.iterdir() if p.is_dir()):
        solutions = sorted((ipa_dir / 'solutions').glob('*.c'))
        if not solutions:
            logger.warning("skipping %s: no solutions", ipa_dir.name)
            continue
        suite = load_suite(ipa_dir / 'suite')
        for path in solutions:
            entries.append(CorpusProgram(
                ipa_id=ipa_dir.name,
                program_id=f'{ipa_dir.name}/{path.stem}',
                source=path.read_text(),
                suite=suite,
                held_out=path == solutions[-1] and len(solutions) > 1,
            ))
    logger.info("loaded %d programs from %s", len(entries), directory)
    return entries
