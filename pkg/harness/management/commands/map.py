from pathlib import Path

from lang.parser import parse
from mapper.inference import Mapper

from ..base import ToolchainCommand


class Command(ToolchainCommand):
    help = "Map the buggy program's variables onto the correct program's variables."

    def add_command_arguments(self, parser):
        parser.add_argument('buggy', help='buggy C source file')
        parser.add_argument('correct', help='correct C source file')
        parser.add_argument('--checkpoint', default=None, help='default: VARMAP_CHECKPOINT_PATH')

    def run(self, **options):
        buggy = parse(Path(options['buggy']).read_text())
        correct = parse(Path(options['correct']).read_text())
        mapper = Mapper.from_checkpoint(self.setting('CHECKPOINT_PATH', options['checkpoint']))
        mapping = mapper.predict(buggy, correct)
        self.emit({
            'mapping': mapping.as_dict(),
            'probability': mapping.probability,
            'buggy_variables': [str(v) for v in mapping.buggy_vars],
            'correct_variables': [str(v) for v in mapping.correct_vars],
            'probabilities': mapping.probabilities.tolist() if mapping.probabilities is not None else [],
            'seconds': mapping.elapsed,
        })
