import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from graphs.builder import EdgeSetConfig
from lang.exceptions import LangError

logger = logging.getLogger(__name__)


def error_payload(exc):
    return {'error': str(exc), 'kind': type(exc).__name__}


def write_json(data, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + '\n')


class ToolchainCommand(BaseCommand):
    """
    Shared flags and error reporting. Subclasses implement `run(**options)`; domain
    failures leave the command as a JSON {"error", "kind"} payload with exit code 1.
    """

    # GraphDecodeError, ShapeError, CheckpointError, EmptyDatasetError and CorpusError
    # are ValueErrors; missing files are OSErrors.
    domain_errors = (LangError, ValueError, OSError)

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None, help='random seed (default: VARMAP_SEED)')
        parser.add_argument('--quiet', action='store_true', help='disable progress bars')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    @staticmethod
    def add_edges_argument(parser):
        parser.add_argument('--edges', default='01234', help='enabled edge families, e.g. 0,1 (0 ast ... 4 chrono)')

    @staticmethod
    def add_workers_argument(parser):
        parser.add_argument('--workers', type=int, default=None, help='worker processes (default: VARMAP_WORKERS)')

    @staticmethod
    def setting(name, value=None):
        """A command-line value when given, else the VARMAP setting."""
        return settings.VARMAP[name] if value is None else value

    @staticmethod
    def edges(options):
        return EdgeSetConfig.from_mask(options['edges'])

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except self.domain_errors as e:
            logger.debug("%s failed", type(self).__module__, exc_info=True)
            raise CommandError(json.dumps(error_payload(e)), returncode=1) from e

    def run(self, **options):
        raise NotImplementedError

    def emit(self, data):
        self.stdout.write(json.dumps(data, indent=2, sort_keys=True))
