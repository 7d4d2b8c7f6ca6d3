"""Run manifest and time-series files.

Both files are deterministic: no timestamps or host names, JSON keys sorted
and floats written with full round-trip precision.
"""

from __future__ import annotations

import json
import math
import platform
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import scipy

from backend.services.persistence.snapshot import SnapshotRecord


MANIFEST_NAME = "manifest.json"
TIMESERIES_NAME = "timeseries.txt"
TIMESERIES_COLUMNS = (
    "time",
    "norm",
    "scf_residual",
    "helmholtz_residual",
    "min_abs_detuning",
    "transmittance",
    "reflectance",
)


def software_versions() -> Dict[str, str]:
    """Return the versions recorded in every manifest."""

    try:
        package = metadata.version("maxbloch")
    except metadata.PackageNotFoundError:
        package = "unknown"
    return {
        "maxbloch": package,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "scipy": scipy.__version__,
    }


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats by strings so the manifest stays strict JSON."""

    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def error_to_dict(exc: BaseException, *, step: Optional[int] = None, time: Optional[float] = None) -> Dict[str, Any]:
    """Describe an abort for the manifest."""

    record: Dict[str, Any] = {
        "type": type(exc).__name__,
        "message": str(exc),
        "exit_code": int(getattr(exc, "exit_code", 1)),
        "step": step,
        "time": time,
    }
    indices = getattr(exc, "indices", None)
    if indices:
        record["indices"] = list(indices)[:64]
    for attr in ("field", "index", "position"):
        value = getattr(exc, attr, None)
        if value is not None:
            record[attr] = value
    residuals = getattr(exc, "residuals", None)
    if residuals:
        record["residuals"] = [float(r) for r in residuals if math.isfinite(r)]
    dt = getattr(exc, "dt", None)
    if dt is not None and math.isfinite(dt):
        record["dt"] = float(dt)
    return record


@dataclass
class RunManifest:
    """Contents of `manifest.json`.

    Attributes:
        config: Fully resolved config echo.
        units: Unit system tag, SI scale factors and converted internal values.
        status: "completed" or "aborted".
        exit_code: Process exit code of the run.
        snapshots: Snapshot file names relative to the output directory.
        checkpoint: Checkpoint file name, when one was written.
        error: Abort description, when the run aborted.
    """

    config: Dict[str, Any]
    units: Dict[str, Any]
    status: str = "completed"
    exit_code: int = 0
    snapshots: List[str] = field(default_factory=list)
    checkpoint: Optional[str] = None
    error: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checkpoint": self.checkpoint,
            "config": self.config,
            "error": self.error,
            "exit_code": self.exit_code,
            "snapshots": list(self.snapshots),
            "status": self.status,
            "units": self.units,
            "versions": software_versions(),
        }


def write_manifest(manifest: RunManifest, directory: Path) -> Path:
    path = Path(directory) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_safe(manifest.to_dict()), sort_keys=True, indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def read_manifest(directory: Path) -> Dict[str, Any]:
    return json.loads((Path(directory) / MANIFEST_NAME).read_text(encoding="utf-8"))


class TimeSeries:
    """Accumulates one row of scalar diagnostics per snapshot."""

    def __init__(self) -> None:
        self._rows: List[List[float]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def append(self, record: SnapshotRecord) -> None:
        diag = record.diagnostics
        self._rows.append(
            [
                record.time,
                record.norm,
                float(diag.get("scf_residual", float("nan"))),
                float(diag.get("helmholtz_residual", float("nan"))),
                float(record.regime["min_abs_detuning"]),
                float(diag.get("transmittance", float("nan"))),
                float(diag.get("reflectance", float("nan"))),
            ]
        )

    def as_array(self) -> np.ndarray:
        return np.array(self._rows, dtype=float).reshape(-1, len(TIMESERIES_COLUMNS))

    def write(self, directory: Path) -> Path:
        path = Path(directory) / TIMESERIES_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, self.as_array(), fmt="%.17e", header=" ".join(TIMESERIES_COLUMNS), comments="# ")
        return path


def read_timeseries(directory: Path) -> Dict[str, np.ndarray]:
    """Load `timeseries.txt` into named columns."""

    data = np.loadtxt(Path(directory) / TIMESERIES_NAME, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(TIMESERIES_COLUMNS)}
