"""工具模块"""

from .errors import (
    ClusteringError,
    ValidationError,
    DegenerateInstanceError,
    DatasetParseError
)
from .logging_setup import setup_logging
from .report_io import (
    TIMING_KEY,
    to_jsonable,
    dump_report,
    write_report,
    read_report,
    strip_timing
)

__all__ = [
    'ClusteringError',
    'ValidationError',
    'DegenerateInstanceError',
    'DatasetParseError',
    'TIMING_KEY',
    'to_jsonable',
    'dump_report',
    'write_report',
    'read_report',
    'strip_timing',
    'setup_logging'
]
