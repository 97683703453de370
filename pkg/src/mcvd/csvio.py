"""CSV and manifest writers used by the CLI layer.

Output contract: RFC-4180-style CSV (CRLF, header row), '.' decimal
separator, 9 significant digits with scientific notation below 1e-3 in
magnitude.  Every CSV gets a sidecar manifest (same basename, ``.manifest``)
holding the full run configuration as ``key = value`` lines -- the same
format the CLI accepts via ``--config``, so a manifest reproduces its run.
Provenance that must not break reproducibility checks (timestamps, tool
version, wall time) travels as comments.
"""

from __future__ import annotations

import csv
import datetime
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, OutputError

TOOL_VERSION = "0.1.0"


def format_cell(value: Any) -> str:
    """Render one CSV cell: ints verbatim, floats to 9 significant digits."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if x != x:
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    if abs(x) < 1e-3:
        return f"{x:.8e}"
    return f"{x:.9g}"


def write_csv(path: Path | str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write header + rows; empty row iterables yield a header-only file."""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
    except OSError as exc:
        raise OutputError(f"cannot write CSV {path}: {exc}") from exc


def manifest_path(csv_path: Path | str) -> Path:
    return Path(csv_path).with_suffix(".manifest")


def manifest_value(value: Any) -> str:
    """Full-precision rendering for manifests (repr round-trips floats)."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(manifest_value(v) for v in value)
    return str(value)


def write_manifest(
    path: Path | str,
    params: Mapping[str, Any],
    *,
    wall_time_s: float | None = None,
    extra_comments: Mapping[str, Any] | None = None,
) -> None:
    """Write the run manifest: comment provenance block, then key = value."""
    path = Path(path)
    lines = [f"# mcvd-version: {TOOL_VERSION}"]
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    lines.append(f"# written: {stamp}")
    if wall_time_s is not None:
        lines.append(f"# wall-time-s: {wall_time_s:.3f}")
    for key, value in (extra_comments or {}).items():
        lines.append(f"# {key}: {manifest_value(value)}")
    for key, value in params.items():
        lines.append(f"{key} = {manifest_value(value)}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write manifest {path}: {exc}") from exc


def read_flat_config(path: Path | str) -> dict[str, str]:
    """Parse a flat ``key = value`` file ('#' comments, blank lines ignored)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values
