"""MacKay alist reader/writer for sparse binary parity-check matrices.

Format (all indices 1-based in the file):

    n_cols n_rows
    max_col_weight max_row_weight
    per-column weights
    per-row weights
    one line per column: row indices of its ones (zero padding allowed)
    one line per row: column indices of its ones (zero padding allowed)
"""

from __future__ import annotations

import numpy as np


def parse_alist(text: str) -> np.ndarray:
    """Parse alist text into a dense uint8 matrix of shape (rows, cols)."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ValueError("alist: truncated header")
    try:
        n_cols, n_rows = (int(v) for v in lines[0][:2])
        col_w = [int(v) for v in lines[2]]
        row_w = [int(v) for v in lines[3]]
    except (ValueError, IndexError) as exc:
        raise ValueError(f"alist: bad header: {exc}") from None
    if len(col_w) != n_cols or len(row_w) != n_rows:
        raise ValueError("alist: weight list lengths do not match dimensions")
    if len(lines) < 4 + n_cols + n_rows:
        raise ValueError("alist: missing adjacency lines")

    h = np.zeros((n_rows, n_cols), dtype=np.uint8)
    for j in range(n_cols):
        entries = [int(v) for v in lines[4 + j] if int(v) != 0]
        if len(entries) != col_w[j]:
            raise ValueError(f"alist: column {j} lists {len(entries)} entries, expected {col_w[j]}")
        for r in entries:
            if not 1 <= r <= n_rows:
                raise ValueError(f"alist: column {j} references row {r} out of range")
            h[r - 1, j] = 1
    for i in range(n_rows):
        entries = sorted(int(v) for v in lines[4 + n_cols + i] if int(v) != 0)
        expected = sorted(int(c) + 1 for c in np.flatnonzero(h[i]))
        if entries != expected:
            raise ValueError(f"alist: row {i} adjacency inconsistent with column lists")
    return h


def format_alist(h: np.ndarray) -> str:
    """Serialize a dense binary matrix to alist text (unpadded entries)."""
    h = np.asarray(h, dtype=np.uint8)
    n_rows, n_cols = h.shape
    col_lists = [list(np.flatnonzero(h[:, j]) + 1) for j in range(n_cols)]
    row_lists = [list(np.flatnonzero(h[i, :]) + 1) for i in range(n_rows)]
    out = [
        f"{n_cols} {n_rows}",
        f"{max((len(c) for c in col_lists), default=0)} "
        f"{max((len(r) for r in row_lists), default=0)}",
        " ".join(str(len(c)) for c in col_lists),
        " ".join(str(len(r)) for r in row_lists),
    ]
    out.extend(" ".join(str(v) for v in c) for c in col_lists)
    out.extend(" ".join(str(v) for v in r) for r in row_lists)
    return "\n".join(out) + "\n"
