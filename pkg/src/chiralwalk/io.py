"""Output plumbing: 12-significant-digit CSV, JSON manifests, atomic writes."""

from __future__ import annotations

import json
import os
import subprocess
import tempfile
from pathlib import Path

CSV_PRECISION = 12


def format_number(x) -> str:
    """Render a number with 12 significant digits (ints stay bare)."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.{CSV_PRECISION}g}"


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(comments: list[str], header: list[str], rows) -> str:
    """Comma-separated table with '#'-prefixed metadata comments, LF endings."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_number(x) if not isinstance(x, str) else x for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path: Path, comments: list[str], header: list[str], rows) -> None:
    atomic_write_text(path, csv_text(comments, header, rows))


def write_json(path: Path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def version_string() -> str:
    """Package version, decorated git-describe style when run from a checkout."""
    try:
        from importlib.metadata import version

        base = version("chiralwalk")
    except Exception:
        base = "0.1.0"
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{base}+g{out.stdout.strip()}"
    except Exception:
        pass
    return base
