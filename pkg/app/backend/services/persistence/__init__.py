"""Snapshot, manifest, time-series and plot-data files."""

from backend.services.persistence.artifacts import (
    MANIFEST_NAME,
    TIMESERIES_COLUMNS,
    TIMESERIES_NAME,
    RunManifest,
    TimeSeries,
    error_to_dict,
    read_manifest,
    read_timeseries,
    write_manifest,
)
from backend.services.persistence.plot_data import QUANTITIES, emit_plot_data, resolve_quantity
from backend.services.persistence.snapshot import (
    SnapshotRecord,
    build_snapshot,
    read_snapshot,
    write_snapshot,
    write_snapshot_text,
)
from backend.services.persistence.snapshot_format import SnapshotFormatError

__all__ = [
    "MANIFEST_NAME",
    "QUANTITIES",
    "RunManifest",
    "SnapshotFormatError",
    "SnapshotRecord",
    "TIMESERIES_COLUMNS",
    "TIMESERIES_NAME",
    "TimeSeries",
    "build_snapshot",
    "emit_plot_data",
    "error_to_dict",
    "read_manifest",
    "read_snapshot",
    "read_timeseries",
    "resolve_quantity",
    "write_manifest",
    "write_snapshot",
    "write_snapshot_text",
]
