from pathlib import Path

from mapper.inference import Mapper
from mutate.corpus import load_corpus
from mutate.dataset import EVAL, SPLITS, load_dataset

from harness.benchmark import GNN, METHODS, evaluate_repair, write_cactus_csv

from ..base import ToolchainCommand, write_json


class Command(ToolchainCommand):
    help = 'Run the repair benchmark on one dataset split; writes a report and a cactus-plot CSV.'

    def add_command_arguments(self, parser):
        parser.add_argument('--dataset', default=None, help='dataset path (default: <VARMAP_DATA_DIR>/dataset.jsonl)')
        parser.add_argument('--split', choices=SPLITS, default=EVAL)
        parser.add_argument('--method', choices=METHODS, default=GNN)
        parser.add_argument('--corpus', default=None, help='corpus with the test suites (default: VARMAP_CORPUS_DIR)')
        parser.add_argument('--checkpoint', default=None, help='default: VARMAP_CHECKPOINT_PATH')
        parser.add_argument('--budget', type=float, default=None, help='seconds per program')
        parser.add_argument('--step-limit', type=int, default=None)
        parser.add_argument('--out', default=None, help='report path (default: <VARMAP_DATA_DIR>/eval-repair-<method>.json)')
        parser.add_argument('--csv', default=None, help='cactus CSV path (default: next to the report)')
        self.add_workers_argument(parser)

    def run(self, **options):
        method = options['method']
        dataset = Path(options['dataset'] or self.setting('DATA_DIR') / 'dataset.jsonl')
        records = load_dataset(dataset, options['split'])
        suites = {entry.ipa_id: entry.suite for entry in load_corpus(self.setting('CORPUS_DIR', options['corpus']))}
        missing = sorted({r['ipa_id'] for r in records} - suites.keys())
        if missing:
            raise ValueError(f"no test suite for {', '.join(missing)}")
        mapper = None
        if method == GNN:
            mapper = Mapper.from_checkpoint(self.setting('CHECKPOINT_PATH', options['checkpoint']))
        report, cactus = evaluate_repair(
            records, suites, method, mapper,
            budget=self.setting('REPAIR_BUDGET', options['budget']),
            step_limit=self.setting('STEP_LIMIT', options['step_limit']),
            seed=self.setting('SEED', options['seed']),
            workers=self.setting('WORKERS', options['workers']),
            progress=not options['quiet'],
        )
        report['split'] = options['split']
        out = Path(options['out'] or self.setting('DATA_DIR') / f'eval-repair-{method}.json')
        csv_path = Path(options['csv'] or out.with_suffix('.csv'))
        write_json(report, out)
        write_cactus_csv(cactus, csv_path)
        self.emit({'report': str(out), 'cactus': str(csv_path), 'all': report['all']})
