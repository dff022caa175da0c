"""Discrepancy of segments and circles on +/-1 checkerboard colorings."""

from .coloring import (
    Coloring,
    get_cell,
    load_coloring,
    make_constant,
    make_parity,
    make_random,
    make_striped,
    save_coloring,
)
from .geometry import ArcRun, CellRun, Circle, Segment, circle_cells, segment_cells

__all__ = [
    "ArcRun",
    "CellRun",
    "Circle",
    "Coloring",
    "Segment",
    "circle_cells",
    "get_cell",
    "load_coloring",
    "make_constant",
    "make_parity",
    "make_random",
    "make_striped",
    "save_coloring",
    "segment_cells",
]

__version__ = "0.1.0"
