"""Per-cell decomposition of segments and circles.

Segments are cut at every crossing with the lines ``x = m`` and ``y = n``;
each piece is attributed to the half-open cell containing its midpoint. A
piece lying exactly on a grid line therefore belongs to the cell above (or to
the right), and a segment through a lattice point skips the corner cells it
only touches. Circles are handled the same way in the angle variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
T_MERGE = 1e-12  # segment parameter in [0, 1]
ANGLE_MERGE = 1e-12  # radians


@dataclass(frozen=True)
class Segment:
    a: tuple[float, float]
    b: tuple[float, float]

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def point(self, t: float) -> tuple[float, float]:
        return (self.a[0] + t * (self.b[0] - self.a[0]), self.a[1] + t * (self.b[1] - self.a[1]))

    def translated(self, p: float, q: float) -> "Segment":
        return Segment((self.a[0] + p, self.a[1] + q), (self.b[0] + p, self.b[1] + q))

    def to_json(self) -> dict:
        return {"ax": self.a[0], "ay": self.a[1], "bx": self.b[0], "by": self.b[1]}

    @classmethod
    def from_json(cls, d: dict) -> "Segment":
        return cls((float(d["ax"]), float(d["ay"])), (float(d["bx"]), float(d["by"])))


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")

    @property
    def length(self) -> float:
        return TWO_PI * self.radius

    def translated(self, p: float, q: float) -> "Circle":
        return Circle((self.center[0] + p, self.center[1] + q), self.radius)

    def to_json(self) -> dict:
        return {"cx": self.center[0], "cy": self.center[1], "t": self.radius}

    @classmethod
    def from_json(cls, d: dict) -> "Circle":
        return cls((float(d["cx"]), float(d["cy"])), float(d["t"]))


class CellRun(NamedTuple):
    cell: tuple[int, int]
    length: float


class ArcRun(NamedTuple):
    cell: tuple[int, int]
    angle_start: float
    angle_end: float

    @property
    def span(self) -> float:
        return self.angle_end - self.angle_start


# --- segment traversal ------------------------------------------------------

@njit(cache=True)
def _axis_crossings(out, k, a0, d):
    # parameters t in (0, 1) where a0 + t*d is an integer
    if d == 0.0:
        return k
    lo = min(a0, a0 + d)
    hi = max(a0, a0 + d)
    for g in range(int(math.ceil(lo)), int(math.floor(hi)) + 1):
        t = (g - a0) / d
        if 0.0 < t < 1.0:
            out[k] = t
            k += 1
    return k


@njit(cache=True)
def segment_pieces(ax, ay, bx, by):
    """Arrays ``(m, n, length)`` of the cell pieces of segment ``a -> b`` in order."""
    dx = bx - ax
    dy = by - ay
    L = math.sqrt(dx * dx + dy * dy)
    if L == 0.0:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64)
    cap = int(abs(dx)) + int(abs(dy)) + 6
    ts = np.empty(cap, np.float64)
    ts[0] = 0.0
    k = _axis_crossings(ts, 1, ax, dx)
    k = _axis_crossings(ts, k, ay, dy)
    ts[k] = 1.0
    k += 1
    ts = np.sort(ts[:k])
    keep = np.empty(k, np.float64)
    q = 0
    keep[q] = 0.0
    q += 1
    for i in range(1, k - 1):
        if ts[i] - keep[q - 1] > T_MERGE:
            keep[q] = ts[i]
            q += 1
    if 1.0 - keep[q - 1] <= T_MERGE and q > 1:
        q -= 1
    keep[q] = 1.0
    q += 1
    ms = np.empty(q - 1, np.int64)
    ns = np.empty(q - 1, np.int64)
    ls = np.empty(q - 1, np.float64)
    for i in range(q - 1):
        t0 = keep[i]
        t1 = keep[i + 1]
        tm = 0.5 * (t0 + t1)
        ms[i] = int(math.floor(ax + tm * dx)) if dx != 0.0 else int(math.floor(ax))
        ns[i] = int(math.floor(ay + tm * dy)) if dy != 0.0 else int(math.floor(ay))
        ls[i] = (t1 - t0) * L
    return ms, ns, ls


@njit(cache=True)
def segment_integral(padded, N, ax, ay, bx, by):
    """Signed integral of the coloring along ``a -> b``; ``padded`` has a one-cell zero frame."""
    ms, ns, ls = segment_pieces(ax, ay, bx, by)
    s = 0.0
    for i in range(ls.shape[0]):
        m = ms[i]
        n = ns[i]
        if 0 <= m < N and 0 <= n < N:
            s += padded[m + 1, n + 1] * ls[i]
    return s


def segment_cells(s: Segment) -> list[CellRun]:
    """Cell runs of ``s`` from ``a`` to ``b``; empty for a degenerate segment."""
    ms, ns, ls = segment_pieces(float(s.a[0]), float(s.a[1]), float(s.b[0]), float(s.b[1]))
    return [CellRun((int(m), int(n)), float(l)) for m, n, l in zip(ms, ns, ls)]


# --- circle traversal -------------------------------------------------------

@njit(cache=True)
def _wrap(a):
    a = a % TWO_PI
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a -= TWO_PI
    return a


@njit(cache=True)
def circle_angles(cx, cy, r, buf):
    """Sorted, merged crossing angles in [0, 2pi) written into ``buf``; returns the count."""
    k = 0
    for g in range(int(math.ceil(cx - r)), int(math.floor(cx + r)) + 1):
        d = (g - cx) / r
        if d > 1.0:
            d = 1.0
        elif d < -1.0:
            d = -1.0
        a = math.acos(d)
        buf[k] = _wrap(a)
        buf[k + 1] = _wrap(TWO_PI - a)
        k += 2
    for g in range(int(math.ceil(cy - r)), int(math.floor(cy + r)) + 1):
        e = (g - cy) / r
        if e > 1.0:
            e = 1.0
        elif e < -1.0:
            e = -1.0
        a = math.asin(e)
        buf[k] = _wrap(a)
        buf[k + 1] = _wrap(math.pi - a)
        k += 2
    if k == 0:
        return 0
    buf[:k] = np.sort(buf[:k])
    q = 1
    for i in range(1, k):
        if buf[i] - buf[q - 1] > ANGLE_MERGE:
            buf[q] = buf[i]
            q += 1
    # merge across the 0 / 2pi seam
    if q > 1 and buf[0] + TWO_PI - buf[q - 1] <= ANGLE_MERGE:
        q -= 1
    return q


@njit(cache=True)
def _angle_buffer(r):
    return np.empty(4 * (int(2.0 * r) + 3), np.float64)


@njit(cache=True)
def circle_pieces(cx, cy, r):
    """Arrays ``(m, n, start, end)`` of arc pieces; ``end - start`` sums to 2pi."""
    buf = _angle_buffer(r)
    k = circle_angles(cx, cy, r, buf)
    if k == 0:
        ms = np.empty(1, np.int64)
        ns = np.empty(1, np.int64)
        a0 = np.zeros(1, np.float64)
        a1 = np.full(1, TWO_PI)
        ms[0] = int(math.floor(cx + r))
        ns[0] = int(math.floor(cy))
        return ms, ns, a0, a1
    ms = np.empty(k, np.int64)
    ns = np.empty(k, np.int64)
    a0 = np.empty(k, np.float64)
    a1 = np.empty(k, np.float64)
    for i in range(k):
        s = buf[i]
        e = buf[i + 1] if i + 1 < k else buf[0] + TWO_PI
        if k == 1:
            e = s + TWO_PI
        mid = 0.5 * (s + e)
        ms[i] = int(math.floor(cx + r * math.cos(mid)))
        ns[i] = int(math.floor(cy + r * math.sin(mid)))
        a0[i] = s
        a1[i] = e
    return ms, ns, a0, a1


@njit(cache=True)
def circle_integral(padded, N, cx, cy, r, buf):
    """Signed integral of the coloring along the circle; ``buf`` is scratch space."""
    if cx + r <= 0.0 or cy + r <= 0.0 or cx - r >= N or cy - r >= N:
        return 0.0
    k = circle_angles(cx, cy, r, buf)
    if k == 0:
        m = int(math.floor(cx + r))
        n = int(math.floor(cy))
        if 0 <= m < N and 0 <= n < N:
            return padded[m + 1, n + 1] * TWO_PI * r
        return 0.0
    s = 0.0
    for i in range(k):
        a = buf[i]
        e = buf[i + 1] if i + 1 < k else buf[0] + TWO_PI
        if k == 1:
            e = a + TWO_PI
        mid = 0.5 * (a + e)
        m = int(math.floor(cx + r * math.cos(mid)))
        n = int(math.floor(cy + r * math.sin(mid)))
        if 0 <= m < N and 0 <= n < N:
            s += padded[m + 1, n + 1] * (e - a)
    return s * r


def circle_cells(c: Circle) -> list[ArcRun]:
    """Arc runs of ``c`` in increasing angle, starting at the first crossing."""
    ms, ns, a0, a1 = circle_pieces(float(c.center[0]), float(c.center[1]), float(c.radius))
    return [ArcRun((int(m), int(n)), float(s), float(e)) for m, n, s, e in zip(ms, ns, a0, a1)]


# --- symmetries of the board ------------------------------------------------

def apply_symmetry(point, N: int, k: int = 0, flip: bool = False):
    """Image of ``point`` under ``k`` quarter turns (x, y) -> (N - y, x), then optional x-flip."""
    x, y = point
    for _ in range(k % 4):
        x, y = N - y, x
    if flip:
        x = N - x
    return (x, y)
