"""Shared fixtures for the simulator tests."""

from __future__ import annotations

import textwrap
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
import yaml

from backend.core.grid import Grid1D, make_grid
from backend.core.params import PhysicalParams


@pytest.fixture
def grid() -> Grid1D:
    return make_grid(256, 40.0)


@pytest.fixture
def params() -> PhysicalParams:
    return PhysicalParams(dipole=1.0, detuning=10.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


MINIMAL_CONFIG = """\
grid:
  n_points: 128
  length: 40.0
physics:
  dipole: 0.0
  detuning: 1.0
evolution:
  dt: 0.01
  n_steps: 20
  snapshot_stride: 10
"""


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write a YAML config into tmp_path and return its path."""

    def _write(text: str, name: str = "config.yaml") -> Path:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def minimal_config() -> str:
    """Smallest valid config: a free Gaussian packet (dipole 0), 20 steps."""

    return MINIMAL_CONFIG


@pytest.fixture
def minimal_data(minimal_config: str) -> dict:
    """The minimal config as parsed sections, ready to be edited."""

    return yaml.safe_load(minimal_config)
