from pathlib import Path

from lang.parser import parse
from lang.suites import load_suite
from mapper.inference import Mapper

from harness.benchmark import GNN, UNIFORM, mapping_stream
from repair.engine import repair

from ..base import ToolchainCommand


class Command(ToolchainCommand):
    help = 'Repair a buggy program against a correct one and a test suite directory (NN.in / NN.out).'

    def add_command_arguments(self, parser):
        parser.add_argument('buggy', help='buggy C source file')
        parser.add_argument('correct', help='correct C source file')
        parser.add_argument('suite', help='test suite directory')
        parser.add_argument('--method', choices=(GNN, UNIFORM), default=GNN)
        parser.add_argument('--checkpoint', default=None, help='default: VARMAP_CHECKPOINT_PATH')
        parser.add_argument('--budget', type=float, default=None, help='seconds (default: VARMAP_REPAIR_BUDGET)')
        parser.add_argument('--step-limit', type=int, default=None)
        parser.add_argument('--scratch-dir', default=None, help='write every tested candidate here')

    def run(self, **options):
        buggy = parse(Path(options['buggy']).read_text())
        correct = parse(Path(options['correct']).read_text())
        suite = load_suite(options['suite'])
        mapper = None
        if options['method'] == GNN:
            mapper = Mapper.from_checkpoint(self.setting('CHECKPOINT_PATH', options['checkpoint']))
        stream, _ = mapping_stream(options['method'], None, buggy, correct, mapper, self.setting('SEED', options['seed']))
        outcome = repair(
            buggy, correct, stream, suite,
            budget=self.setting('REPAIR_BUDGET', options['budget']),
            step_limit=self.setting('STEP_LIMIT', options['step_limit']),
            scratch_dir=self.setting('SCRATCH_DIR', options['scratch_dir']),
        )
        self.emit(outcome.to_dict())
