"""Segment discrepancy, its exact supremum, projections and the line Lp discrepancy.

Exact supremum
--------------
Fix a line. Its cell runs carry weights ``color * length`` and, because the
coloring is constant on cells, the best sub-segment starts and ends on cell
boundaries, so it is a maximum-|subsum| problem on the weights. Over lines,
the objective is linear in the offset inside each combinatorial class of the
arrangement of lattice corners, and under rotation about a corner it has the
form ``A / cos(theta) + B / sin(theta)``, whose absolute value peaks at the
ends of an interval. Hence the supremum is attained on a line through two
corners of the ``(N+1) x (N+1)`` corner grid, with one exception: the family
of nearly axis-parallel lines pivoting on a grid line, whose limit mixes the
two rows (or columns) adjacent to that grid line. Both families are searched.

For a line with primitive direction ``(dx, dy)`` through corner ``(i, j)``
the parameter ``T = t * dx * |dy|`` (point ``(i, j) + t (dx, dy)``) makes
every grid crossing an integer, so run lengths and Kadane sums are exact
integers scaled by ``hypot(dx, dy) / (dx |dy|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .coloring import Coloring, cell_values
from .geometry import Circle, Segment, segment_integral, segment_pieces

EXACT_CAP = 64
AXIS_TILT = 1e-9  # slope of the witness segment realizing an axis-limit value


class SearchTooLarge(ValueError):
    pass


@dataclass
class DiscrepancyReport:
    value: float
    witness: Segment | Circle
    method: str
    search_size: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {
            "value": self.value,
            "witness": self.witness.to_json(),
            "method": self.method,
            "search_size": self.search_size,
        }
        d.update(self.extra)
        return d


def segment_discrepancy(c: Coloring, s: Segment) -> float:
    """Signed integral of the coloring along ``s`` (white length minus black length)."""
    return float(segment_integral(c.padded(), c.size, float(s.a[0]), float(s.a[1]),
                                  float(s.b[0]), float(s.b[1])))


# --- maximum |subsum| ------------------------------------------------------

@njit(cache=True)
def _kadane(w):
    best = 0.0
    bi = 0
    bj = -1
    cur_max = 0.0
    cur_min = 0.0
    smax = 0
    smin = 0
    for k in range(w.shape[0]):
        x = w[k]
        if cur_max <= 0:
            cur_max = x
            smax = k
        else:
            cur_max += x
        if cur_min >= 0:
            cur_min = x
            smin = k
        else:
            cur_min += x
        if cur_max > best:
            best = cur_max
            bi = smax
            bj = k
        if -cur_min > best:
            best = -cur_min
            bi = smin
            bj = k
    return best, bi, bj


def max_abs_subsum(w) -> tuple[float, int, int]:
    """``max |sum(w[i:j+1])|`` with its inclusive indices; ``(0.0, 0, -1)`` if nothing beats 0."""
    w = np.asarray(w, dtype=np.float64)
    best, i, j = _kadane(w)
    return float(best), int(i), int(j)


# --- exact search over corner lines -----------------------------------------

@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _corner_line_search(padded, N):
    best = -1.0
    info = np.zeros(6, np.int64)  # dx, dy, i, j, T_start, T_end
    nlines = 0
    wts = np.empty(4 * N + 8, np.int64)
    tb = np.empty(4 * N + 9, np.int64)
    for dx in range(1, N + 1):
        for ady in range(1, N + 1):
            if _gcd(dx, ady) != 1:
                continue
            scale = math.sqrt(dx * dx + ady * ady) / (dx * ady)
            for sgn in (1, -1):
                dy = sgn * ady
                for i in range(0, N - dx + 1):
                    for jj in range(0, N - ady + 1):
                        j = jj if sgn > 0 else jj + ady
                        if sgn > 0:
                            first = i < dx or j < ady
                        else:
                            first = i < dx or j > N - ady
                        if not first:
                            continue
                        nlines += 1
                        t0 = -i * ady
                        t1 = (N - i) * ady
                        if sgn > 0:
                            y0 = -j * dx
                            y1 = (N - j) * dx
                        else:
                            y0 = -(N - j) * dx
                            y1 = j * dx
                        if y0 > t0:
                            t0 = y0
                        if y1 < t1:
                            t1 = y1
                        nx = (t0 // ady + 1) * ady
                        ny = (t0 // dx + 1) * dx
                        cur = t0
                        k = 0
                        tb[0] = cur
                        while cur < t1:
                            nxt = nx
                            if ny < nxt:
                                nxt = ny
                            if t1 < nxt:
                                nxt = t1
                            tm2 = cur + nxt
                            m = i + tm2 // (2 * ady)
                            n = j + (sgn * tm2) // (2 * dx)
                            wts[k] = padded[m + 1, n + 1] * (nxt - cur)
                            k += 1
                            tb[k] = nxt
                            if nx == nxt:
                                nx += ady
                            if ny == nxt:
                                ny += dx
                            cur = nxt
                        # Kadane on exact integer weights
                        bb = 0
                        bi = 0
                        bj = -1
                        cmax = 0
                        cmin = 0
                        smax = 0
                        smin = 0
                        for q in range(k):
                            x = wts[q]
                            if cmax <= 0:
                                cmax = x
                                smax = q
                            else:
                                cmax += x
                            if cmin >= 0:
                                cmin = x
                                smin = q
                            else:
                                cmin += x
                            if cmax > bb:
                                bb = cmax
                                bi = smax
                                bj = q
                            if -cmin > bb:
                                bb = -cmin
                                bi = smin
                                bj = q
                        val = bb * scale
                        if val > best:
                            best = val
                            info[0] = dx
                            info[1] = dy
                            info[2] = i
                            info[3] = j
                            info[4] = tb[bi]
                            info[5] = tb[bj + 1]
    return best, info, nlines


def _axis_limit_best(cells: np.ndarray):
    """Best sub-segment of the row-switch family along horizontal grid lines.

    For grid line ``y = y0`` let A be the row above and B the row below. A
    line tilted slightly about ``(x0, y0)`` runs through one row left of
    ``x0`` and the other row right of it, so in the limit its sub-segments
    realize ``sum(left_row[p:x0]) + sum(right_row[x0:q])``. Taking
    ``x0 = p`` or ``x0 = q`` recovers plain row segments.

    Returns ``(value, y0, p, x0, q, left_is_above)``.
    """
    N = cells.shape[0]
    rows = np.zeros((N + 2, N), dtype=np.int64)  # rows[n + 1] = row n
    rows[1:N + 1] = cells.T
    above = rows[1:N + 2]  # y0 = 0..N
    below = rows[0:N + 1]
    best = (-1.0, 0, 0, 0, 0, True)
    for left, right, left_is_above in ((above, below, True), (below, above, False)):
        SL = np.concatenate([np.zeros((N + 1, 1), np.int64), np.cumsum(left, axis=1)], axis=1)
        SR = np.concatenate([np.zeros((N + 1, 1), np.int64), np.cumsum(right, axis=1)], axis=1)
        for sign in (1, -1):
            # maximize sign * (SL[x0] - SL[p] + SR[q] - SR[x0]) over p <= x0 <= q
            L = sign * SL
            R = sign * SR
            Lmin = np.minimum.accumulate(L, axis=1)
            Rmax = np.maximum.accumulate(R[:, ::-1], axis=1)[:, ::-1]
            total = (L - Lmin) + (Rmax - R)
            y0, x0 = np.unravel_index(int(np.argmax(total)), total.shape)
            v = float(total[y0, x0])
            if v > best[0]:
                p = int(np.argmin(L[y0, :x0 + 1]))
                q = x0 + int(np.argmax(R[y0, x0:]))
                best = (v, int(y0), p, int(x0), q, left_is_above)
    return best


def _axis_limit_witness(y0, p, x0, q, left_is_above) -> Segment:
    """A concrete segment within ~1e-9 of the limit configuration."""
    if p == q:
        return Segment((p, y0 + 0.5), (q, y0 + 0.5))
    h = AXIS_TILT if left_is_above else -AXIS_TILT
    return Segment((float(p), y0 + h * (x0 - p)), (float(q), y0 - h * (q - x0)))


def _axis_report(c: Coloring):
    v_h, *h = _axis_limit_best(c.cells)
    v_v, *v = _axis_limit_best(c.cells.T)
    if v_h >= v_v:
        return v_h, _axis_limit_witness(*h)
    w = _axis_limit_witness(*v)
    return v_v, Segment((w.a[1], w.a[0]), (w.b[1], w.b[0]))


def max_segment_discrepancy(c: Coloring, cap: int = EXACT_CAP) -> DiscrepancyReport:
    """Exact ``sup |int_I f|`` over all segments ``I``."""
    N = c.size
    if N > cap:
        raise SearchTooLarge(
            f"board size {N} is too large for exact search (cap {cap}); use sampled_segment_sup"
        )
    val, info, nlines = _corner_line_search(c.padded().astype(np.int64), N)
    dx, dy, i, j, ts, te = (int(x) for x in info)
    ady = abs(dy)
    sg = 1 if dy > 0 else -1
    witness = Segment((i + ts / ady, j + sg * ts / dx), (i + te / ady, j + sg * te / dx))
    v_axis, w_axis = _axis_report(c)
    n_axis = 4 * (N + 1)
    if v_axis >= val:
        val, witness = v_axis, w_axis
    return DiscrepancyReport(float(val), witness, "exact", int(nlines) + n_axis)


# --- sampled search ---------------------------------------------------------

def _clip_line(px, py, ux, uy, N):
    """Chord of the line ``p + s u`` inside ``[0, N]^2`` as ``(s0, s1)`` or None."""
    lo, hi = -np.inf, np.inf
    for p, u in ((px, ux), (py, uy)):
        if u == 0.0:
            if p < 0.0 or p > N:
                return None
            continue
        a, b = (0.0 - p) / u, (N - p) / u
        lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
    if hi <= lo:
        return None
    return lo, hi


@njit(cache=True)
def _best_on_segment(padded, N, ax, ay, bx, by):
    ms, ns, ls = segment_pieces(ax, ay, bx, by)
    w = np.empty(ls.shape[0], np.float64)
    for k in range(ls.shape[0]):
        m = ms[k]
        n = ns[k]
        if 0 <= m < N and 0 <= n < N:
            w[k] = padded[m + 1, n + 1] * ls[k]
        else:
            w[k] = 0.0
    best, i, j = _kadane(w)
    s0 = 0.0
    for k in range(i):
        s0 += ls[k]
    s1 = s0
    for k in range(i, j + 1):
        s1 += ls[k]
    return best, s0, s1


def sampled_segment_sup(c: Coloring, trials: int, seed: int = 0) -> DiscrepancyReport:
    """Monte Carlo lower estimate of the segment supremum.

    Even trials use the line through two random distinct corners, odd trials a
    line through a uniform point of the board with a uniform direction; each
    line contributes its best sub-segment.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    N = c.size
    padded = c.padded()
    rng = np.random.default_rng(seed)
    corners = rng.integers(0, N + 1, size=(trials, 4))
    points = rng.uniform(0.0, N, size=(trials, 2))
    angles = rng.uniform(0.0, np.pi, size=trials)
    best = (-1.0, Segment((0.0, 0.0), (0.0, 0.0)))
    for k in range(trials):
        if k % 2 == 0:
            x1, y1, x2, y2 = (float(v) for v in corners[k])
            if x1 == x2 and y1 == y2:
                x2 = float(N) - x1 if x1 != N / 2 else x1 + 1.0
            px, py = x1, y1
            ux, uy = x2 - x1, y2 - y1
            nrm = math.hypot(ux, uy)
            ux, uy = ux / nrm, uy / nrm
        else:
            px, py = (float(v) for v in points[k])
            ux, uy = math.cos(angles[k]), math.sin(angles[k])
        chord = _clip_line(px, py, ux, uy, N)
        if chord is None:
            continue
        s0, s1 = chord
        ax, ay = px + s0 * ux, py + s0 * uy
        bx, by = px + s1 * ux, py + s1 * uy
        v, a, b = _best_on_segment(padded, N, ax, ay, bx, by)
        if v > best[0]:
            best = (float(v), Segment((ax + a * ux, ay + a * uy), (ax + b * ux, ay + b * uy)))
    return DiscrepancyReport(max(best[0], 0.0), best[1], "sampled", trials)


# --- projections -----------------------------------------------------------

def corner_weights(c: Coloring) -> np.ndarray:
    """Mixed second difference of the colors at each lattice corner, shape (N+1, N+1)."""
    f = np.pad(c.cells.astype(np.int64), ((1, 1), (1, 1)))
    # w[i, j] = f(i, j) - f(i-1, j) - f(i, j-1) + f(i-1, j-1), cell (i, j) at f[i+1, j+1]
    return f[1:, 1:] - f[:-1, 1:] - f[1:, :-1] + f[:-1, :-1]


@dataclass(frozen=True)
class Projection:
    """Piecewise-linear ``x -> Delta_u(x)`` given by its values at breakpoints.

    Jumps (axis-parallel ``u`` only) appear as repeated breakpoints.
    """

    direction: tuple[float, float]
    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        xs, vs = self.breakpoints, self.values
        k = np.searchsorted(xs, x, side="right")
        out = np.zeros_like(x)
        inside = (k > 0) & (k < len(xs))
        k = k[inside] if x.ndim else (k if inside else None)
        if x.ndim == 0:
            if k is None:
                return 0.0
            x0, x1, v0, v1 = xs[k - 1], xs[k], vs[k - 1], vs[k]
            return float(v0 + (v1 - v0) * (x - x0) / (x1 - x0)) if x1 > x0 else float(v1)
        x0, x1, v0, v1 = xs[k - 1], xs[k], vs[k - 1], vs[k]
        h = x1 - x0
        with np.errstate(invalid="ignore", divide="ignore"):
            out[inside] = np.where(h > 0, v0 + (v1 - v0) * (x[inside] - x0) / np.where(h > 0, h, 1), v1)
        return out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def abs_power_integral(self, p: float) -> float:
        return _abs_power_integral(self.breakpoints, self.values, p)


def projection(c: Coloring, u) -> Projection:
    ux, uy = float(u[0]), float(u[1])
    if abs(math.hypot(ux, uy) - 1.0) > 1e-12:
        raise ValueError(f"direction {u!r} is not a unit vector")
    N = c.size
    if ux == 0.0 or uy == 0.0:
        # Delta is a step function: column sums (u = +-e1) or row sums (u = +-e2)
        sums = c.cells.sum(axis=1 if uy == 0.0 else 0).astype(np.float64)
        sgn = ux if uy == 0.0 else uy
        edges = np.arange(N + 1, dtype=np.float64)
        if sgn < 0:
            edges, sums = -edges[::-1], sums[::-1]
        xs = np.repeat(edges, 2)
        vs = np.zeros(2 * N + 2)
        vs[1:-1] = np.repeat(sums, 2)
        return Projection((ux, uy), xs, vs)
    w = corner_weights(c).ravel().astype(np.float64)
    i, j = np.indices((N + 1, N + 1))
    p = (i.ravel() * ux + j.ravel() * uy)
    nz = w != 0
    p, w = p[nz], w[nz]
    if len(p) == 0:
        return Projection((ux, uy), np.zeros(0), np.zeros(0))
    order = np.argsort(p, kind="stable")
    p, w = p[order], w[order]
    # merge coincident breakpoints
    new = np.concatenate([[True], np.diff(p) > 1e-12])
    grp = np.cumsum(new) - 1
    xs = p[new]
    ws = np.bincount(grp, weights=w)
    k = 1.0 / (ux * uy)
    slopes = k * np.cumsum(ws)[:-1]
    vals = np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
    return Projection((ux, uy), xs, vals)


def _gauss_legendre_abs_pow(x0, x1, v0, v1, p, nodes):
    g, gw = np.polynomial.legendre.leggauss(nodes)
    h = (x1 - x0)[:, None]
    s = 0.5 * (g + 1.0)[None, :]
    vals = np.abs(v0[:, None] + (v1 - v0)[:, None] * s) ** p
    return np.sum(0.5 * h * vals * gw[None, :], axis=1)


def _abs_power_integral(xs, vs, p, rtol=1e-6):
    """``int |g|^p`` for the piecewise-linear ``g`` through ``(xs, vs)``, zero outside."""
    if len(xs) < 2:
        return 0.0
    x0, x1 = xs[:-1], xs[1:]
    v0, v1 = vs[:-1], vs[1:]
    keep = x1 > x0
    x0, x1, v0, v1 = x0[keep], x1[keep], v0[keep], v1[keep]
    cross = (v0 * v1) < 0
    if np.any(cross):
        # split sign-changing pieces at their zero
        z = x0[cross] + (x1[cross] - x0[cross]) * v0[cross] / (v0[cross] - v1[cross])
        x0 = np.concatenate([x0[~cross], x0[cross], z])
        x1 = np.concatenate([x1[~cross], z, x1[cross]])
        nv0, nv1 = v0[cross], v1[cross]
        v0 = np.concatenate([v0[~cross], nv0, np.zeros_like(nv0)])
        v1 = np.concatenate([v1[~cross], np.zeros_like(nv1), nv1])
    a, b, h = np.abs(v0), np.abs(v1), x1 - x0
    if p == 1:
        return float(np.sum(0.5 * h * (a + b)))
    if p == 2:
        return float(np.sum(h * (a * a + a * b + b * b) / 3.0))
    nodes = 8
    prev = float(np.sum(_gauss_legendre_abs_pow(x0, x1, a, b, p, nodes)))
    while nodes < 1024:
        nodes *= 2
        cur = float(np.sum(_gauss_legendre_abs_pow(x0, x1, a, b, p, nodes)))
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


def line_lp(c: Coloring, p: float, angular_nodes: int = 256) -> float:
    """Line Lp discrepancy ``((1/N) int_{S^1} int |Delta_u(x)|^p dx du)^(1/p)``.

    Midpoint nodes ``theta_k = (k + 1/2) 2 pi / n`` on the circle; the
    x-integral is exact on every linear piece.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if angular_nodes < 4:
        raise ValueError("angular_nodes must be >= 4")
    n = int(angular_nodes)
    # Delta_{-u}(x) = Delta_u(-x): the lower half circle repeats the upper one
    half = n // 2 if n % 2 == 0 else n
    mult = 2.0 if n % 2 == 0 else 1.0
    total = 0.0
    for k in range(half):
        th = (k + 0.5) * 2.0 * math.pi / n
        u = (math.cos(th), math.sin(th))
        total += projection(c, u).abs_power_integral(p)
    total *= mult * 2.0 * math.pi / n
    return (total / c.size) ** (1.0 / p)


# --- exact line supremum ----------------------------------------------------

@njit(cache=True)
def _line_sup_rational(w, N):
    best = 0.0
    binfo = np.zeros(3, np.int64)
    buf = np.zeros(2 * N * N + 2, np.int64)
    for dx in range(1, N + 1):
        for dy in range(-N, N + 1):
            if dy == 0 or _gcd(dx, abs(dy)) != 1:
                continue
            qmin = N * dy if dy < 0 else 0
            size = N * dx + N * abs(dy) + 1
            for q in range(size):
                buf[q] = 0
            for i in range(N + 1):
                for j in range(N + 1):
                    if w[i, j] != 0:
                        buf[i * dx + j * dy - qmin] += w[i, j]
            T = 0
            S = 0
            tmax = 0
            qbest = 0
            for q in range(size):
                if abs(T) > tmax:
                    tmax = abs(T)
                    qbest = q
                S += buf[q]
                T += S
            val = math.sqrt(dx * dx + dy * dy) * tmax / (dx * abs(dy))
            if val > best:
                best = val
                binfo[0] = dx
                binfo[1] = dy
                binfo[2] = qbest + qmin
    return best, binfo


def _axis_full_line_best(cells: np.ndarray) -> float:
    """Full-line analogue of :func:`_axis_limit_best`: prefix of one row plus suffix of its neighbour."""
    N = cells.shape[0]
    rows = np.zeros((N + 2, N), dtype=np.int64)
    rows[1:N + 1] = cells.T
    best = 0
    for a, b in ((rows[1:], rows[:-1]), (rows[:-1], rows[1:])):
        pre = np.concatenate([np.zeros((N + 1, 1), np.int64), np.cumsum(a, axis=1)], axis=1)
        suf = b.sum(axis=1, keepdims=True) - np.concatenate(
            [np.zeros((N + 1, 1), np.int64), np.cumsum(b, axis=1)], axis=1)
        best = max(best, int(np.max(np.abs(pre + suf))))
    return float(best)


def line_sup(c: Coloring) -> float:
    """``sup_{u, x} |Delta_u(x)|`` over all lines.

    Exact: every direction through two lattice corners is evaluated with
    integer arithmetic, plus the axis-parallel directions and their one-sided
    limits.
    """
    rational, _ = _line_sup_rational(corner_weights(c).astype(np.int64), c.size)
    axis = max(_axis_full_line_best(c.cells), _axis_full_line_best(c.cells.T))
    return float(max(rational, axis))
