"""JSON report writing with a fixed schema.

Reports carry a schema version, the command, the fully-resolved
configuration (including the seed) and the results.  Everything except
the timestamp is a pure function of the configuration, so reruns are
bit-identical modulo that one field.
"""

from __future__ import annotations

import datetime
import json
from pathlib import Path

SCHEMA_VERSION = 1


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and obj != obj:  # NaN
        return None
    return obj


def report_text(command: str, config: dict, results: dict,
                timestamp: str | None = None) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": _jsonable(config),
        "results": _jsonable(results),
        "timestamp": timestamp
        or datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_report(path, command: str, config: dict, results: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_text(command, config, results))
    return path


def write_csv(path, header: list[str], rows) -> Path:
    import csv

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path
