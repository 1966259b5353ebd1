"""Deterministic file emission: CSV tables, heatmap grids, binary PGM images.

All writers produce identical bytes for identical inputs: floats are
serialized with 9 significant digits, '.' decimal separator, '\n' line
endings.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def fmt(value) -> str:
    """Locale-independent cell formatting; floats get 9 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".9g")
    return str(value)


def write_csv(path, header, rows) -> None:
    lines = [",".join(str(h) for h in header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def field_matrix(field, resolution: int) -> np.ndarray:
    """Row-major grid field vector -> (rows=y, cols=x) matrix."""
    return np.asarray(field, dtype=float).reshape(resolution, resolution)


def write_heatmap_csv(path, matrix) -> None:
    """Grid field as CSV: a column-label header then one data row per grid
    row, row i holding y = i/(rows-1), column j holding x = j/(cols-1)."""
    matrix = np.asarray(matrix, dtype=float)
    header = [f"c{j}" for j in range(matrix.shape[1])]
    write_csv(path, header, matrix.tolist())


def write_pgm(path, matrix) -> None:
    """8-bit binary PGM (P5); field value 1.0 maps to 255, values are
    clipped to [0, 1], and the top image row is the y-max grid row."""
    matrix = np.asarray(matrix, dtype=float)
    scaled = np.round(np.clip(np.flipud(matrix), 0.0, 1.0) * 255.0)
    data = scaled.astype(np.uint8)
    h, w = data.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + data.tobytes())
