#!/usr/bin/env python
"""Django's command-line utility for administrative tasks and the toolchain commands."""
import os
import sys
from core.settings.base import DEBUG

# hyphenated spellings of the toolchain commands
ALIASES = {
    'eval-map': 'eval_map',
    'eval-repair': 'eval_repair',
    'load-corpus': 'load_corpus',
}


def main():
    """Run administrative tasks."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings.production' if not DEBUG else 'core.settings.development')

    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv)
    if len(argv) > 1:
        argv[1] = ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == '__main__':
    main()
