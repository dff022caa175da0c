import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from checkerdisc.coloring import make_random
from checkerdisc.geometry import Circle, Segment, circle_cells, segment_cells

from conftest import angular_circle, riemann_segment

coord = st.floats(-6, 14, allow_nan=False)
shift = st.integers(-20, 20)
# dyadic coordinates keep integer translation exact in floating point
dyadic = st.integers(-6 * 1024, 14 * 1024).map(lambda k: k / 1024)
radius = st.integers(1, 4 * 1024).map(lambda k: k / 1024)


def test_axis_segment():
    runs = segment_cells(Segment((0.5, 0.5), (2.5, 0.5)))
    assert [r.cell for r in runs] == [(0, 0), (1, 0), (2, 0)]
    assert np.allclose([r.length for r in runs], [0.5, 1.0, 0.5], atol=1e-15)


def test_diagonal_through_lattice_point():
    runs = segment_cells(Segment((0, 0), (2, 2)))
    assert [r.cell for r in runs] == [(0, 0), (1, 1)]
    assert np.allclose([r.length for r in runs], [math.sqrt(2)] * 2)


def test_segment_on_grid_line_goes_above():
    runs = segment_cells(Segment((0, 1), (2, 1)))
    assert [r.cell for r in runs] == [(0, 1), (1, 1)]


def test_degenerate_segment_is_empty():
    assert segment_cells(Segment((1.3, 2.2), (1.3, 2.2))) == []


def test_circle_inside_cell():
    runs = circle_cells(Circle((0.5, 0.5), 0.4))
    assert len(runs) == 1 and runs[0].cell == (0, 0)
    assert math.isclose(runs[0].span, 2 * math.pi)


def test_circle_at_lattice_point():
    runs = circle_cells(Circle((1, 1), 0.5))
    assert [r.cell for r in runs] == [(1, 1), (0, 1), (0, 0), (1, 0)]
    assert np.allclose([r.span for r in runs], [math.pi / 2] * 4)


def test_circle_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        Circle((0, 0), 0.0)


def _midpoint_in_cell(x, y, cell):
    return math.floor(x) == cell[0] and math.floor(y) == cell[1]


def test_circle_midpoints_match_dense_sampling():
    k = Circle((2.3, 1.7), 1.1)
    runs = circle_cells(k)
    assert math.isclose(sum(r.span for r in runs), 2 * math.pi, abs_tol=1e-10)
    for r in runs:
        mid = 0.5 * (r.angle_start + r.angle_end)
        assert _midpoint_in_cell(2.3 + 1.1 * math.cos(mid), 1.7 + 1.1 * math.sin(mid), r.cell)
    # per-cell span against 1e5 sampled angles
    th = (np.arange(100_000) + 0.5) * 2 * math.pi / 100_000
    cells = np.stack([np.floor(2.3 + 1.1 * np.cos(th)), np.floor(1.7 + 1.1 * np.sin(th))], 1).astype(int)
    for r in runs:
        frac = np.mean(np.all(cells == r.cell, axis=1))
        assert abs(frac * 2 * math.pi - r.span) < 1e-3


@given(coord, coord, coord, coord)
def test_segment_length_conservation(ax, ay, bx, by):
    s = Segment((ax, ay), (bx, by))
    runs = segment_cells(s)
    assert abs(sum(r.length for r in runs) - s.length) <= 1e-12 * (1 + s.length)
    for r in runs:
        assert 0 < r.length <= math.sqrt(2) + 1e-12


@given(coord, coord, coord, coord)
def test_segment_runs_ordered_adjacent_and_owned(ax, ay, bx, by):
    s = Segment((ax, ay), (bx, by))
    runs = segment_cells(s)
    pos = 0.0
    for r in runs:
        t = (pos + 0.5 * r.length) / s.length
        assert _midpoint_in_cell(*s.point(t), r.cell)
        pos += r.length
    for r0, r1 in zip(runs, runs[1:]):
        assert max(abs(r0.cell[0] - r1.cell[0]), abs(r0.cell[1] - r1.cell[1])) == 1


@given(coord, coord, st.floats(0.01, 6))
def test_circle_angle_conservation(cx, cy, r):
    runs = circle_cells(Circle((cx, cy), r))
    assert abs(sum(a.span for a in runs) - 2 * math.pi) <= 1e-10
    for a in runs:
        mid = 0.5 * (a.angle_start + a.angle_end)
        assert _midpoint_in_cell(cx + r * math.cos(mid), cy + r * math.sin(mid), a.cell)


@given(dyadic, dyadic, dyadic, dyadic, shift, shift)
def test_segment_translation_equivariance(ax, ay, bx, by, p, q):
    s = Segment((ax, ay), (bx, by))
    base = segment_cells(s)
    moved = segment_cells(s.translated(p, q))
    assert len(base) == len(moved)
    for r0, r1 in zip(base, moved):
        assert r1.cell == (r0.cell[0] + p, r0.cell[1] + q)
        assert r0.length == r1.length


@given(dyadic, dyadic, radius, shift, shift)
def test_circle_translation_equivariance(cx, cy, r, p, q):
    base = circle_cells(Circle((cx, cy), r))
    moved = circle_cells(Circle((cx + p, cy + q), r))
    assert len(base) == len(moved)
    for a0, a1 in zip(base, moved):
        assert a1.cell == (a0.cell[0] + p, a0.cell[1] + q)
        assert a0.span == a1.span


def test_segment_oracle_random_probes(rng):
    c = make_random(8, 4)
    for _ in range(50):
        ax, ay, bx, by = rng.uniform(-1, 9, size=4)
        s = Segment((ax, ay), (bx, by))
        exact = sum(c[r.cell] * r.length for r in segment_cells(s))
        assert abs(exact - riemann_segment(c, s)) <= 1e-3 * (1 + s.length)


def test_circle_oracle_random_probes(rng):
    c = make_random(8, 4)
    for _ in range(30):
        cx, cy = rng.uniform(-1, 9, size=2)
        k = Circle((cx, cy), rng.uniform(0.1, 4))
        exact = sum(c[a.cell] * k.radius * a.span for a in circle_cells(k))
        assert abs(exact - angular_circle(c, k)) <= 1e-3 * (1 + k.length)
