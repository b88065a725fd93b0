"""JSON reports.

Reports carry the schema tag, the command, the seed and the bounds, and are
serialized with a fixed key order and no timestamps, so equal inputs give
byte-identical files.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .config import REPORTS
from .evaluator import Bounds


def envelope(
    command: str,
    payload: Dict[str, Any],
    seed: Optional[int] = None,
    bounds: Optional[Bounds] = None,
) -> Dict[str, Any]:
    report: Dict[str, Any] = {"schema": REPORTS.schema, "command": command}
    if seed is not None:
        report["seed"] = seed
    if bounds is not None:
        report["bounds"] = {"num_bound": bounds.num_bound, "set_bound": bounds.set_bound}
    report.update(payload)
    return report


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=REPORTS.indent, ensure_ascii=False) + "\n"


def default_path(command: str) -> Path:
    return Path(REPORTS.output_dir) / f"{command.replace(' ', '-')}.json"


def write_report(report: Dict[str, Any], path: Optional[Union[str, Path]] = None) -> Path:
    """Write ``report`` to ``path`` (default ``<output_dir>/<command>.json``) and return the path."""
    path = Path(path) if path is not None else default_path(report["command"])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding="utf-8")
    return path


def read_report(path: Union[str, Path]) -> Dict[str, Any]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema") != REPORTS.schema:
        raise ValueError(f"{path}: unsupported report schema {data.get('schema')!r}")
    return data
