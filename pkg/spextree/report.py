"""Report serialization: deterministic JSON, CSV flattening, schema checks."""

import csv
import io
import json
import math
import sys
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

SIGNIFICANT_DIGITS = 12

SCHEMA_PATH = Path(__file__).parent / "schema" / "report.schema.json"

_JSON_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "boolean": bool,
    "null": type(None),
}


def _round(x: float) -> Optional[float]:
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def normalize(obj: Any) -> Any:
    """Plain JSON data: rounded floats, sorted sets, string keys."""
    if hasattr(obj, "as_report"):
        return normalize(obj.as_report())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, Mapping):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [normalize(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [normalize(x) for x in obj]
    return obj


def to_json(obj: Any) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _flatten(prefix: str, value: Any, out: Dict[str, Any]):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value, sort_keys=True)
    else:
        out[prefix] = value


def flatten_rows(table: Mapping[str, Any]) -> List[Dict[str, Any]]:
    """One row per entry of ``table``, nested keys joined with dots."""
    rows = []
    for name in sorted(table):
        row: Dict[str, Any] = {"name": name}
        _flatten("", normalize(table[name]), row)
        rows.append(row)
    return rows


def to_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        return ""
    headers = ["name"] + sorted({k for row in rows for k in row} - {"name"})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=headers, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in headers})
    return buf.getvalue()


def write_report(text: str, out: Optional[Union[str, Path]] = None, stream=None):
    """Write to ``out`` when given, otherwise to ``stream`` (stdout)."""
    if out is not None:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return
    if stream is None:
        stream = sys.stdout
    stream.write(text)
    stream.flush()


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def load_schema() -> dict:
    with open(SCHEMA_PATH, encoding="utf-8") as f:
        return json.load(f)


def _type_ok(value: Any, expected: Union[str, List[str]]) -> bool:
    names = [expected] if isinstance(expected, str) else expected
    for name in names:
        if name == "integer":
            if isinstance(value, int) and not isinstance(value, bool):
                return True
        elif name == "number":
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return True
        elif isinstance(value, _JSON_TYPES[name]):
            return True
    return False


def validate_report(obj: Any, kind: str) -> List[str]:
    """Problems with ``obj`` as a report of ``kind``; empty means valid."""
    definitions = load_schema()["definitions"]
    if kind not in definitions:
        return [f"unknown report kind {kind!r}"]
    spec = definitions[kind]
    data = normalize(obj)
    if not isinstance(data, dict):
        return [f"{kind} report must be an object"]
    problems = [f"missing key {key!r}" for key in spec.get("required", []) if key not in data]
    for key, rule in spec.get("properties", {}).items():
        if key in data and not _type_ok(data[key], rule["type"]):
            problems.append(f"key {key!r} has the wrong type")
    return problems
