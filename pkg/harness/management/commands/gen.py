from pathlib import Path

from mutate.corpus import load_corpus
from mutate.dataset import INJECTION_STEP_LIMIT, dataset_digest, generate_dataset, manifest, write_dataset

from ..base import ToolchainCommand


class Command(ToolchainCommand):
    help = 'Generate the (correct, buggy, mapping) dataset from the reference corpus as JSON lines.'

    def add_command_arguments(self, parser):
        parser.add_argument('--corpus', default=None, help='corpus directory (default: VARMAP_CORPUS_DIR)')
        parser.add_argument('--out', default=None, help='dataset path (default: <VARMAP_DATA_DIR>/dataset.jsonl)')
        parser.add_argument('--per-config-samples', type=int, default=None)
        parser.add_argument('--valid-fraction', type=float, default=None)
        parser.add_argument('--exhaustive', action='store_true', help='keep every failing injection')
        parser.add_argument('--rename-buggy', action='store_true', help='rename the buggy side randomly')
        parser.add_argument('--step-limit', type=int, default=INJECTION_STEP_LIMIT)
        self.add_workers_argument(parser)

    def run(self, **options):
        corpus = load_corpus(self.setting('CORPUS_DIR', options['corpus']))
        seed = self.setting('SEED', options['seed'])
        samples = self.setting('PER_CONFIG_SAMPLES', options['per_config_samples'])
        valid_fraction = self.setting('VALID_FRACTION', options['valid_fraction'])
        out = Path(options['out'] or self.setting('DATA_DIR') / 'dataset.jsonl')
        records = generate_dataset(
            corpus,
            seed=seed,
            per_config_samples=samples,
            exhaustive=options['exhaustive'],
            rename_buggy=options['rename_buggy'],
            valid_fraction=valid_fraction,
            step_limit=options['step_limit'],
            workers=self.setting('WORKERS', options['workers']),
            progress=not options['quiet'],
        )
        info = manifest(corpus, records, seed, samples, options['exhaustive'], options['rename_buggy'], valid_fraction)
        write_dataset(records, out, info)
        self.emit({'dataset': str(out), 'sha256': dataset_digest(out), 'records': len(records), 'counts': info['counts']})
