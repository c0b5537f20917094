import logging
from pathlib import Path

from mapper.training import TrainConfig, train
from mutate.dataset import TRAIN, VALID, load_dataset, training_example
from nn.checkpoint import save_checkpoint

from ..base import ToolchainCommand, write_json

logger = logging.getLogger(__name__)


def history_path(checkpoint_path):
    path = Path(checkpoint_path)
    return path.with_name(path.name + '.history.json')


class Command(ToolchainCommand):
    help = 'Train the variable mapper on the train split and write a checkpoint.'

    def add_command_arguments(self, parser):
        parser.add_argument('--dataset', default=None, help='dataset path (default: <VARMAP_DATA_DIR>/dataset.jsonl)')
        parser.add_argument('--out', default=None, help='checkpoint path (default: VARMAP_CHECKPOINT_PATH)')
        parser.add_argument('--epochs', type=int, default=None)
        parser.add_argument('--hidden-dim', type=int, default=None)
        parser.add_argument('--lr', type=float, default=None)
        self.add_edges_argument(parser)

    def run(self, **options):
        dataset = Path(options['dataset'] or self.setting('DATA_DIR') / 'dataset.jsonl')
        edges = self.edges(options)
        cfg = TrainConfig(
            epochs=self.setting('EPOCHS', options['epochs']),
            seed=self.setting('SEED', options['seed']),
            hidden_dim=self.setting('HIDDEN_DIM', options['hidden_dim']),
            lr=self.setting('LEARNING_RATE', options['lr']),
            edges=edges,
        )
        training = [training_example(r, edges) for r in load_dataset(dataset, TRAIN)]
        validation = [training_example(r, edges) for r in load_dataset(dataset, VALID)]
        model = train(training, cfg, validation, progress=not options['quiet'])
        out = Path(options['out'] or self.setting('CHECKPOINT_PATH'))
        save_checkpoint(model.checkpoint(), out)
        write_json({'config': cfg.to_dict(), 'steps': model.steps, 'epochs': model.history}, history_path(out))
        self.emit({'checkpoint': str(out), 'steps': model.steps, 'final': model.history[-1]})
