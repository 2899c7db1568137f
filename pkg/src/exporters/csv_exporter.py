import logging
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

FLOAT_FORMAT = "%.17g"


class CsvExporter:
    """Writes result tables as CSV with round-trippable doubles"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def to_frame(self, rows: List[Dict[str, Any]], columns: List[str]) -> pd.DataFrame:
        """Row dicts to a DataFrame with a fixed column order"""
        return pd.DataFrame(rows, columns=columns)

    def render(self, frame: pd.DataFrame) -> str:
        """CSV text, 17 significant digits, '\\n' line endings"""
        buffer = StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    def export(self, frame: pd.DataFrame, out_path: Optional[str] = None) -> str:
        """
        Render the table and write it to out_path when given.

        Args:
            frame: table to export
            out_path: destination file; None leaves writing to the caller

        Returns:
            The CSV text
        """
        text = self.render(frame)
        if out_path:
            try:
                Path(out_path).parent.mkdir(parents=True, exist_ok=True)
                with open(out_path, "w", encoding="utf-8", newline="") as f:
                    f.write(text)
                self.logger.info(f"Wrote {len(frame)} rows to {out_path}")
            except OSError as e:
                self.logger.error(f"Error writing CSV to {out_path}: {e}")
                raise
        return text
