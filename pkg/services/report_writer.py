import json
import logging
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from models.run_config import OutputFormat

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

Row = Dict[str, Any]


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, Enum):
        return value.value
    return value


def render_csv(rows: Sequence[Row], columns: Optional[List[str]] = None) -> str:
    """CSV with a header row; +inf renders as 'inf' and missing cells stay empty"""
    frame = pd.DataFrame([_flatten(row) for row in rows], columns=columns)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT)


def _flatten(row: Row) -> Row:
    return {k: (v.value if isinstance(v, Enum) else v) for k, v in row.items()}


def render_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), indent=2) + "\n"


def emit(
    rows: Sequence[Row],
    output_format: OutputFormat,
    out: Optional[Path] = None,
    columns: Optional[List[str]] = None,
    summary: Optional[Row] = None,
) -> str:
    """Render rows (and an optional summary) and write them to `out` or stdout"""
    if output_format == OutputFormat.JSON:
        payload: Any = {"rows": list(rows), "summary": summary} if summary is not None else list(rows)
        text = render_json(payload)
    else:
        text = render_csv(rows, columns)
        if summary is not None:
            text += "\n" + render_csv([summary])

    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        logger.info(f"✅ Wrote {len(rows)} rows to {out}")
    return text
