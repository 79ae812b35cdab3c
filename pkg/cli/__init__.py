"""命令行模块"""

from .run_spec import RunSpec, COMMANDS, build_parser, parse_budget_split, parse_run_spec, spec_from_args
from .commands import (
    run, main,
    EXIT_OK, EXIT_FAILURE, EXIT_VALIDATION, EXIT_DEGENERATE
)

__all__ = [
    'RunSpec', 'COMMANDS', 'build_parser', 'parse_budget_split', 'parse_run_spec', 'spec_from_args',
    'run', 'main',
    'EXIT_OK', 'EXIT_FAILURE', 'EXIT_VALIDATION', 'EXIT_DEGENERATE'
]
