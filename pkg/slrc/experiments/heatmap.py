"""
Binary PGM rendering of grid CSVs.

Pixel rows follow the distinct values of the first CSV column, pixel columns those of
the second. Values below the threshold are black (0); above it the gray level grows
with log10(value / threshold) and saturates to white (255) after `decades` decades.
Missing cells (NaN) are white.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from slrc.core.errors import InvalidInputError
from slrc.core.io import read_rows

logger = logging.getLogger(__name__)

VALUE_COLUMNS = ("frobenius_distance", "max_frobenius_distance", "param_distance")


def gray_levels(values: np.ndarray, threshold: float, decades: float = 6.0) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.clip(np.log10(values / threshold) / decades, 0.0, 1.0)
    levels = 1 + np.rint(254 * np.nan_to_num(scaled, nan=1.0))
    levels = np.where(values < threshold, 0, levels)
    levels = np.where(np.isnan(values), 255, levels)
    return levels.astype(np.uint8)


def emit_heatmap(
    csv_path: Union[str, Path],
    threshold: float = 1e-6,
    out_path: Optional[Union[str, Path]] = None,
    value_column: Optional[str] = None,
    decades: float = 6.0,
) -> Path:
    """
    Render a grid CSV as an 8-bit graymap next to it (grid.csv -> grid.pgm by default).

    Raises:
        InvalidInputError: on an empty CSV, a missing value column or an incomplete grid
    """
    csv_path = Path(csv_path)
    records = read_rows(csv_path)
    if not records:
        raise InvalidInputError(f"No rows in {csv_path}")
    columns = list(records[0].keys())
    if value_column is None:
        value_column = next((name for name in VALUE_COLUMNS if name in columns), None)
    if value_column not in columns:
        raise InvalidInputError(f"{csv_path} has no value column among {VALUE_COLUMNS}")

    row_axis, col_axis = columns[0], columns[1]
    row_values = sorted({float(rec[row_axis]) for rec in records})
    col_values = sorted({float(rec[col_axis]) for rec in records})
    if len(row_values) * len(col_values) != len(records):
        raise InvalidInputError(f"{csv_path} is not a full {row_axis} x {col_axis} grid")

    image = np.full((len(row_values), len(col_values)), np.nan)
    row_pos = {v: i for i, v in enumerate(row_values)}
    col_pos = {v: j for j, v in enumerate(col_values)}
    for rec in records:
        image[row_pos[float(rec[row_axis])], col_pos[float(rec[col_axis])]] = float(rec[value_column])

    pixels = gray_levels(image, threshold, decades)
    out_path = Path(out_path) if out_path is not None else csv_path.with_suffix(".pgm")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii")
    out_path.write_bytes(header + pixels.tobytes())
    logger.info(f"Wrote {out_path} ({np.count_nonzero(pixels == 0)} black of {pixels.size})")
    return out_path


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    """Pixels of a binary PGM written by emit_heatmap."""
    data = Path(path).read_bytes()
    magic, size, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise InvalidInputError(f"{path} is not an 8-bit binary PGM")
    width, height = (int(x) for x in size.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width)
