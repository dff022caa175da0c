"""Finite N x N checkerboard colorings.

Cell ``(m, n)`` covers the half-open square ``[m, m+1) x [n, n+1)``; values
are stored in an ``int8`` array indexed ``cells[m, n]``. Everything outside
``[0, N)^2`` has color 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._prng import random_signs

FAMILIES = ("constant", "parity", "striped", "random")


@dataclass(frozen=True, eq=False)
class Coloring:
    size: int
    cells: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"board size must be positive, got {self.size}")
        cells = np.array(self.cells, dtype=np.int8)
        if cells.shape != (self.size, self.size):
            raise ValueError(f"cells must have shape {(self.size, self.size)}, got {cells.shape}")
        if not np.all(np.abs(cells) == 1):
            raise ValueError("cell values must be -1 or +1")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.size == other.size and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.size, self.cells.tobytes()))

    def __getitem__(self, mn):
        return get_cell(self, *mn)

    def padded(self, pad: int = 1) -> np.ndarray:
        """Cells with a ``pad``-wide frame of zeros on every side."""
        return np.pad(self.cells, pad).astype(np.int8)

    def transformed(self, k: int = 0, flip: bool = False) -> "Coloring":
        """Image of the board under a symmetry of the square (``k`` quarter turns, then optional x-flip).

        Uses the same action on points as :func:`checkerdisc.geometry.apply_symmetry`.
        """
        c = self.cells
        for _ in range(k % 4):
            # (x, y) -> (N - y, x): new[m, n] = old[n, N-1-m]
            c = np.rot90(c, 1)
        if flip:
            c = c[::-1, :]
        return Coloring(self.size, c, self.label)


def make_constant(N: int, sign: int = 1) -> Coloring:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_size(N)
    return Coloring(N, np.full((N, N), sign, dtype=np.int8), "constant" if sign > 0 else "constant-")


def make_parity(N: int) -> Coloring:
    _check_size(N)
    m, n = np.indices((N, N))
    return Coloring(N, np.where((m + n) % 2 == 0, 1, -1), "parity")


def make_striped(N: int) -> Coloring:
    """Rows of one color, alternating by row: ``cell(m, n) = (-1)**n``."""
    _check_size(N)
    n = np.arange(N)
    row = np.where(n % 2 == 0, 1, -1)
    return Coloring(N, np.broadcast_to(row[None, :], (N, N)), "striped")


def make_random(N: int, seed: int) -> Coloring:
    """I.i.d. uniform signs from the SplitMix64 stream of ``seed``.

    Cell ``(m, n)`` takes output number ``n * N + m`` and is -1 iff its top
    bit is set.
    """
    _check_size(N)
    signs = random_signs(seed, N * N).reshape(N, N)  # [n, m]
    return Coloring(N, signs.T, f"random-{seed}")


def make_family(family: str, N: int, seed: int = 0) -> Coloring:
    if family == "constant":
        return make_constant(N)
    if family == "parity":
        return make_parity(N)
    if family == "striped":
        return make_striped(N)
    if family == "random":
        return make_random(N, seed)
    raise ValueError(f"unknown board family {family!r}; expected one of {', '.join(FAMILIES)}")


def get_cell(c: Coloring, m: int, n: int) -> int:
    if 0 <= m < c.size and 0 <= n < c.size:
        return int(c.cells[m, n])
    return 0


def cell_values(c: Coloring, m, n) -> np.ndarray:
    """Vectorized :func:`get_cell`."""
    m = np.asarray(m, dtype=np.int64)
    n = np.asarray(n, dtype=np.int64)
    inside = (m >= 0) & (m < c.size) & (n >= 0) & (n < c.size)
    out = np.zeros(np.broadcast(m, n).shape, dtype=np.int8)
    out[inside] = c.cells[m[inside], n[inside]]
    return out


def _check_size(N):
    if int(N) != N or N < 1:
        raise ValueError(f"board size must be a positive integer, got {N!r}")


# --- text format -----------------------------------------------------------

def dumps(c: Coloring) -> str:
    lines = [f"N {c.size} {c.label}".rstrip()]
    for n in range(c.size):
        lines.append("".join("+" if v > 0 else "-" for v in c.cells[:, n]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Coloring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty board file")
    head = lines[0].split(maxsplit=2)
    if len(head) < 2 or head[0] != "N":
        raise ValueError(f"bad header line {lines[0]!r}; expected 'N <size> <label>'")
    N = int(head[1])
    label = head[2] if len(head) > 2 else ""
    rows = lines[1:]
    if len(rows) != N:
        raise ValueError(f"expected {N} rows, found {len(rows)}")
    cells = np.empty((N, N), dtype=np.int8)
    for n, row in enumerate(rows):
        row = row.strip()
        if len(row) != N or set(row) - {"+", "-"}:
            raise ValueError(f"row {n} must be {N} characters of '+'/'-'")
        cells[:, n] = [1 if ch == "+" else -1 for ch in row]
    return Coloring(N, cells, label)


def save_coloring(c: Coloring, path) -> None:
    Path(path).write_text(dumps(c))


def load_coloring(path) -> Coloring:
    return loads(Path(path).read_text())
