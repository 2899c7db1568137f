import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Tuple

from analyzers.separability_analyzer import SeparabilityAnalyzer
from commands import EXIT_CONFIG, EXIT_OK, emit
from commands.analyze import spec_from_config
from exporters.csv_exporter import CsvExporter
from utils.config import RunConfig
from utils.errors import ConfigError, NCPhaseError

logger = logging.getLogger(__name__)

COLUMNS = ["axis1", "axis2", "lambda1", "lambda2", "lambda12c", "Ps", "verdict", "sep1_residual"]


def grid_points(cfg: RunConfig) -> List[Tuple[float, ...]]:
    """Axis values in row-major order, first axis outermost"""
    if not 1 <= len(cfg.axes) <= 2:
        raise ConfigError("sweep needs one or two --param/--range axes")
    return list(itertools.product(*(axis.values() for axis in cfg.axes)))


def evaluate_point(cfg: RunConfig, values: Tuple[float, ...]) -> Dict[str, Any]:
    """One sweep row; analysis failures become an 'error' verdict"""
    overrides = {axis.name: value for axis, value in zip(cfg.axes, values)}
    row = {
        "axis1": values[0],
        "axis2": values[1] if len(values) > 1 else math.nan,
        "lambda1": math.nan, "lambda2": math.nan, "lambda12c": math.nan,
        "Ps": math.nan, "verdict": "error", "sep1_residual": math.nan,
    }
    analyzer = SeparabilityAnalyzer()
    try:
        spec = spec_from_config(cfg.with_values(**overrides))
        row["sep1_residual"] = analyzer.sep1_residual(spec)
        result = analyzer.run_pipeline(spec)
    except (NCPhaseError, ValueError) as e:
        logger.warning(f"Sweep point {overrides}: {type(e).__name__}: {e}")
        return row

    row.update({
        "lambda1": result.spectrum.lambda1,
        "lambda2": result.spectrum.lambda2,
        "lambda12c": result.state.Lambda12c,
        "Ps": result.report.Ps,
        "verdict": result.report.verdict,
    })
    return row


def run(cfg: RunConfig) -> int:
    """sweep: separability phase diagram over one or two parameters"""
    try:
        points = grid_points(cfg)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG

    logger.info(f"Sweeping {len(points)} points on {cfg.threads} thread(s)")
    # map() yields in submission order, so rows stay row-major for any thread count.
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        rows = list(pool.map(lambda values: evaluate_point(cfg, values), points))

    errors = sum(1 for row in rows if row["verdict"] == "error")
    if errors:
        logger.warning(f"{errors} of {len(rows)} sweep points failed")

    exporter = CsvExporter()
    emit(exporter.export(exporter.to_frame(rows, COLUMNS), cfg.out), cfg.out)
    return EXIT_OK
