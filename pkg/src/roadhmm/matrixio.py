"""Matrix export: exact-value CSV and plain-text PGM brightness maps."""

from __future__ import annotations

import numpy as np


def write_matrix_csv(matrix: np.ndarray, path: str) -> None:
    """Write comma-separated rows with full round-trip precision."""
    matrix = np.asarray(matrix, dtype=float)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for row in matrix:
            handle.write(",".join(repr(float(v)) for v in row) + "\n")


def read_matrix_csv(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as handle:
        rows = [
            [float(token) for token in line.split(",")]
            for line in handle.read().splitlines()
            if line
        ]
    return np.array(rows, dtype=float)


def format_pgm(matrix: np.ndarray) -> str:
    """Render a matrix as plain-text grayscale (PGM P2), one image row per line.

    Pixels scale by the matrix maximum: round(255 * value / max), so the
    largest probability is white and zeros are black.
    """
    matrix = np.asarray(matrix, dtype=float)
    rows, cols = matrix.shape
    pixels = np.rint(255.0 * matrix / matrix.max()).astype(int)
    lines = ["P2", f"{cols} {rows}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in pixels)
    return "\n".join(lines) + "\n"


def write_matrix_pgm(matrix: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(format_pgm(matrix))
