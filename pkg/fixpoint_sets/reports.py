"""
Report rendering: JSON, plain text and Markdown, plus saving to disk
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List

logger = logging.getLogger(__name__)

FORMATS = ("json", "text", "markdown")

EXT_MAP = {
    'json': '.json',
    'text': '.txt',
    'markdown': '.md',
}

TABLE_COLUMNS = ("degree", "size", "set", "closed", "exact", "projective", "np", "kappa", "verdict")


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_json(payload: Dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _text_lines(payload: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, dict):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(value, indent + 1))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{pad}{key}: ({len(value)})")
                for i, item in enumerate(value, start=1):
                    lines.append(f"{pad}  [{i}]")
                    lines.extend(_text_lines(item, indent + 2))
            elif isinstance(value, list):
                lines.append(f"{pad}{key}: " + (", ".join(_scalar(v) for v in value) or "-"))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    else:
        lines.append(f"{pad}{_scalar(payload)}")
    return lines


def render_text(payload: Dict, title: str = "") -> str:
    lines = []
    if title:
        lines += [title.upper(), "=" * len(title)]
    lines += _text_lines(payload)
    if "all" in payload:
        lines += ["", "FIXED POINT SETS"] + classification_table(payload["all"], markdown=False)
    return "\n".join(lines) + "\n"


def classification_table(entries: Iterable[Dict], markdown: bool = True) -> List[str]:
    """One row per entry: degree, set, flags, kappa, verdict."""
    rows = [[_scalar(e.get(col)) for col in TABLE_COLUMNS] for e in entries]
    if markdown:
        lines = ["| " + " | ".join(TABLE_COLUMNS) + " |",
                 "|" + "|".join("---" for _ in TABLE_COLUMNS) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return lines
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(TABLE_COLUMNS)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(TABLE_COLUMNS, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in rows]
    return lines


def render_markdown(payload: Dict, title: str = "") -> str:
    lines = [f"# {title or 'Report'}", ""]
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
    for key, value in scalars.items():
        lines.append(f"- **{key}:** {_scalar(value)}")
    for key, value in payload.items():
        if key in scalars:
            continue
        lines += ["", f"## {key}", ""]
        if isinstance(value, list) and value and isinstance(value[0], dict) and "degree" in value[0]:
            lines += classification_table(value)
        else:
            lines += ["```", *_text_lines(value), "```"]
    return "\n".join(lines) + "\n"


def render(payload: Dict, fmt: str, title: str = "") -> str:
    if fmt == "json":
        return render_json(payload)
    if fmt == "text":
        return render_text(payload, title)
    if fmt == "markdown":
        return render_markdown(payload, title)
    raise ValueError(f"Unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def save_reports(payload: Dict, output_dir: Path, stem: str, formats: Dict[str, bool],
                 title: str = "") -> List[Path]:
    """
    Save a payload in every enabled format

    Args:
        payload: Report dictionary
        output_dir: Target directory (created if missing)
        stem: File name without extension
        formats: Format name -> enabled flag

    Returns:
        Paths of the files written
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    saved_files = []
    for format_name, enabled in formats.items():
        if not enabled:
            continue
        if format_name not in EXT_MAP:
            logger.warning(f"Report format {format_name} not available")
            continue
        filepath = output_dir / (stem + EXT_MAP[format_name])
        try:
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write(render(payload, format_name, title))
            saved_files.append(filepath)
            logger.info(f"Saved report: {filepath}")
        except OSError as e:
            logger.error(f"Failed to save {filepath}: {e}")
    return saved_files
