import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to builtin types"""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    return value


class JsonExporter:
    """Deterministic JSON reports; floats keep their shortest round-trip repr"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def render(self, report: Dict[str, Any]) -> str:
        return json.dumps(_plain(report), indent=2) + "\n"

    def export(self, report: Dict[str, Any], out_path: Optional[str] = None) -> str:
        """Render the report and write it to out_path when given"""
        text = self.render(report)
        if out_path:
            try:
                Path(out_path).parent.mkdir(parents=True, exist_ok=True)
                with open(out_path, "w", encoding="utf-8", newline="") as f:
                    f.write(text)
                self.logger.info(f"Wrote report to {out_path}")
            except OSError as e:
                self.logger.error(f"Error writing JSON to {out_path}: {e}")
                raise
        return text
