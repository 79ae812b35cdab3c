"""监控模块"""

from .run_monitor import (
    RunMonitor,
    RunRecord,
    summarize_records
)

__all__ = [
    'RunMonitor',
    'RunRecord',
    'summarize_records'
]
