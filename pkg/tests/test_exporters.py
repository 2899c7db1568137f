import json

import numpy as np

from exporters.csv_exporter import CsvExporter
from exporters.json_exporter import JsonExporter


def test_csv_render_round_trips_doubles():
    exporter = CsvExporter()
    value = 0.1 + 0.2
    text = exporter.render(exporter.to_frame([{"a": value, "b": "x"}], ["a", "b"]))
    assert text == f"a,b\n{value!r},x\n"
    assert float(text.splitlines()[1].split(",")[0]) == value


def test_csv_column_order_and_file(tmp_path):
    exporter = CsvExporter()
    frame = exporter.to_frame([{"b": 2.0, "a": 1.0}], ["a", "b"])
    out = tmp_path / "nested" / "table.csv"
    text = exporter.export(frame, str(out))
    assert out.read_text(encoding="utf-8") == text
    assert text.startswith("a,b\n")
    assert "\r" not in text


def test_json_converts_numpy():
    exporter = JsonExporter()
    text = exporter.render({"x": np.float64(1.5), "v": np.arange(3), "nested": {"n": np.int64(7)}})
    assert text.endswith("\n")
    assert json.loads(text) == {"x": 1.5, "v": [0, 1, 2], "nested": {"n": 7}}


def test_json_export_writes_file(tmp_path):
    out = tmp_path / "report.json"
    text = JsonExporter().export({"verdict": "separable"}, str(out))
    assert out.read_text(encoding="utf-8") == text
