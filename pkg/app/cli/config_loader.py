"""Load, validate and dump run configuration files.

Configs are YAML documents made of sections. Errors are reported as
`ConfigurationError` naming the dotted field path, with the line number of
that key in the file when it can be located.
"""

from __future__ import annotations

import copy
import difflib
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import yaml
from pydantic import ValidationError

from backend.core.errors import ConfigurationError
from cli.logging_config import get_logger
from cli.schemas.run_config import SECTION_MODELS, RunConfig


logger = get_logger(__name__)


def known_keys() -> List[str]:
    """Return every key accepted anywhere in a run config."""

    keys = set()
    for model in SECTION_MODELS:
        keys.update(model.model_fields)
    return sorted(keys)


def suggest_key(name: str) -> Optional[str]:
    matches = difflib.get_close_matches(name, known_keys(), n=1, cutoff=0.6)
    return matches[0] if matches else None


def _key_lines(text: str) -> Dict[str, int]:
    """Map dotted key paths to 1-based line numbers of a YAML document."""

    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return {}
    lines: Dict[str, int] = {}

    def walk(node: Any, prefix: Tuple[str, ...]) -> None:
        if not isinstance(node, yaml.MappingNode):
            return
        for key_node, value_node in node.value:
            path = prefix + (str(key_node.value),)
            lines[".".join(path)] = key_node.start_mark.line + 1
            walk(value_node, path)

    walk(root, ())
    return lines


def _dotted(loc: Iterable[Any], data: Dict[str, Any]) -> str:
    """Drop discriminator tags pydantic inserts into error locations."""

    parts: List[str] = []
    node: Any = data
    for item in loc:
        item = str(item)
        if isinstance(node, dict) and item in node:
            parts.append(item)
            node = node[item]
        elif isinstance(node, dict) and node.get("kind") == item:
            continue
        else:
            parts.append(item)
            node = None
    return ".".join(parts)


def _from_validation_error(exc: ValidationError, data: Dict[str, Any], lines: Dict[str, int]) -> ConfigurationError:
    errors = exc.errors()
    # unknown keys explain most other failures (a misspelt key also leaves its field missing)
    first = next((e for e in errors if e["type"] == "extra_forbidden"), errors[0])
    field = _dotted(first["loc"], data)
    line = lines.get(field)
    where = f" (line {line})" if line else ""
    if first["type"] == "extra_forbidden":
        name = field.rsplit(".", 1)[-1]
        suggestion = suggest_key(name)
        hint = f"; did you mean {suggestion!r}?" if suggestion else ""
        message = f"Unknown key {field!r}{where}{hint}"
    else:
        message = f"Invalid value for {field!r}{where}: {first['msg']}"
    if len(errors) > 1:
        message += f" (and {len(errors) - 1} more error(s))"
    return ConfigurationError(message, field=field, line=line)


def parse_config_text(text: str, *, source: str = "<config>") -> Dict[str, Any]:
    """Parse YAML text into a section dictionary.

    Raises:
        ConfigurationError: On a YAML syntax error (with its line) or a non-mapping document.
    """

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigurationError(f"{source}: parse error at line {line}: {problem}", line=line) from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source}: a config must be a mapping of sections")
    return data


def validate_config(data: Dict[str, Any], *, text: str = "", base_dir: Optional[Path] = None) -> RunConfig:
    """Validate a section dictionary into a RunConfig.

    Args:
        data: Parsed sections.
        text: Original YAML text, used to locate error lines.
        base_dir: Directory that relative `from_file` paths are resolved against.

    Raises:
        ConfigurationError: When validation fails.
    """

    data = copy.deepcopy(data)
    initial = data.get("initial_state")
    if base_dir is not None and isinstance(initial, dict) and initial.get("kind") == "from_file":
        path = initial.get("path")
        if isinstance(path, str) and not Path(path).is_absolute():
            initial["path"] = str((base_dir / path).resolve())
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise _from_validation_error(exc, data, _key_lines(text) if text else {}) from exc


def load_config(path: Path) -> RunConfig:
    """Read and validate a config file.

    Args:
        path: YAML config file.

    Returns:
        RunConfig: Validated config with all defaults filled.

    Raises:
        ConfigurationError: When the file is missing, unparseable or invalid.
    """

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    config = validate_config(parse_config_text(text, source=str(path)), text=text, base_dir=path.parent)
    logger.debug("Loaded config %s", path)
    return config


def dump_config(config: RunConfig) -> str:
    """Serialise a config to YAML that `load_config` reads back identically."""

    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=True, default_flow_style=False)


def apply_override(data: Dict[str, Any], key: str, raw_value: str) -> Dict[str, Any]:
    """Return a copy of `data` with the dotted `key` set to a YAML-parsed value.

    Raises:
        ConfigurationError: When the key path crosses a non-mapping value.
    """

    data = copy.deepcopy(data)
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"cannot override {key!r}: {part!r} is not a section", field=key)
        node = child
    try:
        value = yaml.safe_load(raw_value)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"cannot parse override value {raw_value!r} for {key!r}", field=key) from exc
    node[parts[-1]] = value
    return data
