"""Plot-ready columnar exports of snapshot quantities."""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from backend.core.errors import ConfigurationError
from backend.services.persistence.snapshot import SnapshotRecord, read_snapshot
from cli.logging_config import get_logger


logger = get_logger(__name__)

QUANTITIES: Dict[str, Callable[[SnapshotRecord], np.ndarray]] = {
    "density": lambda r: r.density,
    "intensity": lambda r: np.abs(r.envelope) ** 2,
    "n2": lambda r: r.n_squared,
    "V": lambda r: r.potential,
    "delta_l": lambda r: r.local_detuning,
    "phase": lambda r: np.unwrap(np.angle(r.psi1)),
}

ALIASES = {"n²": "n2", "n^2": "n2", "n_squared": "n2", "Δ_l": "delta_l", "potential": "V"}


def resolve_quantity(name: str) -> str:
    """Map a quantity name or alias to its canonical name.

    Raises:
        ConfigurationError: When the name is unknown; the message lists valid names.
    """

    canonical = ALIASES.get(name, name)
    if canonical not in QUANTITIES:
        raise ConfigurationError(
            f"Unknown quantity {name!r}; valid names: {', '.join(QUANTITIES)}",
            field="quantity",
        )
    return canonical


def _columns(values: np.ndarray) -> list:
    """Split complex samples into re/im columns; real samples stay one column."""

    if np.iscomplexobj(values) and np.any(values.imag != 0):
        return [values.real, values.imag]
    return [np.real(values)]


def emit_plot_data(
    snapshots: Sequence[Path],
    quantity: str,
    path: Path,
    *,
    probe: Optional[float] = None,
) -> Path:
    """Write one quantity from snapshot files as whitespace-separated columns.

    A single snapshot (without `probe`) gives an (x, value) profile. Several
    snapshots, or an explicit `probe` position, give a (t, value) series
    sampled at the grid point nearest the probe (default x = 0).

    Args:
        snapshots: Snapshot files; series rows follow snapshot time order.
        quantity: One of QUANTITIES or an alias.
        path: Output file.
        probe: Position sampled for time series.

    Returns:
        Path: The written file.

    Raises:
        ConfigurationError: When the quantity is unknown or no snapshot is given.
    """

    canonical = resolve_quantity(quantity)
    if not snapshots:
        raise ConfigurationError("no snapshot files given", field="snapshots")
    records = sorted((read_snapshot(p) for p in snapshots), key=lambda r: (r.time, r.step))
    extract = QUANTITIES[canonical]

    header = [f"quantity: {canonical}"]
    if len(records) == 1 and probe is None:
        record = records[0]
        values = _columns(extract(record))
        header += [f"time: {record.time:.17g}", "columns: x " + ("value_re value_im" if len(values) == 2 else "value")]
        data = np.column_stack([record.grid.positions, *values])
    else:
        x0 = 0.0 if probe is None else float(probe)
        rows = []
        complex_valued = False
        for record in records:
            index = int(np.argmin(np.abs(record.grid.positions - x0)))
            sample = np.asarray(extract(record))[index]
            complex_valued = complex_valued or (np.iscomplexobj(sample) and sample.imag != 0)
            rows.append((record.time, sample))
        times = np.array([t for t, _ in rows])
        samples = np.array([s for _, s in rows])
        values = [samples.real, samples.imag] if complex_valued else [np.real(samples)]
        header += [f"probe: {x0:.17g}", "columns: t " + ("value_re value_im" if complex_valued else "value")]
        data = np.column_stack([times, *values])

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, data, fmt="%.17e", header="\n".join(header), comments="# ")
    logger.info("Wrote %s plot data for %s snapshot(s) to %s", canonical, len(records), path)
    return path
