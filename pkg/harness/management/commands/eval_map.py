from pathlib import Path

from mapper.inference import Mapper
from mutate.dataset import EVAL, SPLITS, load_dataset

from harness.metrics import evaluate_mappings, without_timings

from ..base import ToolchainCommand, write_json


class Command(ToolchainCommand):
    help = 'Score the mapper against the ground-truth mappings of one dataset split.'

    def add_command_arguments(self, parser):
        parser.add_argument('--dataset', default=None, help='dataset path (default: <VARMAP_DATA_DIR>/dataset.jsonl)')
        parser.add_argument('--split', choices=SPLITS, default=EVAL)
        parser.add_argument('--checkpoint', default=None, help='default: VARMAP_CHECKPOINT_PATH')
        parser.add_argument('--out', default=None, help='report path (default: <VARMAP_DATA_DIR>/eval-map.json)')
        parser.add_argument('--no-timings', action='store_true', help='leave wall-clock fields out of the report')

    def run(self, **options):
        dataset = Path(options['dataset'] or self.setting('DATA_DIR') / 'dataset.jsonl')
        records = load_dataset(dataset, options['split'])
        mapper = Mapper.from_checkpoint(self.setting('CHECKPOINT_PATH', options['checkpoint']))
        report = evaluate_mappings(mapper, records, progress=not options['quiet'])
        report['split'] = options['split']
        if options['no_timings']:
            report = without_timings(report)
        out = Path(options['out'] or self.setting('DATA_DIR') / 'eval-map.json')
        write_json(report, out)
        self.emit(report)
