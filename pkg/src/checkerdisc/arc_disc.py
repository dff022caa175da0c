"""Circle discrepancy ``D_t(x)``, its supremum over centers and radii, and the circle Lp discrepancy."""

from __future__ import annotations

import logging
import math

import numpy as np
from numba import njit

from .coloring import Coloring
from .geometry import Circle, _angle_buffer, circle_integral
from .line_disc import DiscrepancyReport

log = logging.getLogger(__name__)

RADIUS_LO = 1 / 5  # radii range (N/5, N/4) as fractions of N
RADIUS_HI = 1 / 4


def circle_discrepancy(c: Coloring, k: Circle) -> float:
    r = float(k.radius)
    return float(circle_integral(c.padded(), c.size, float(k.center[0]), float(k.center[1]), r,
                                 _angle_buffer(r)))


def radius_nodes(N: int, count: int) -> np.ndarray:
    """Midpoints of ``count`` equal subintervals of ``(N/5, N/4)``."""
    lo, hi = RADIUS_LO * N, RADIUS_HI * N
    return lo + (np.arange(count) + 0.5) * (hi - lo) / count


@njit(cache=True)
def _circle_grid(padded, N, xs, ys, radii, p):
    """Sum of ``|D|^p`` and the max ``|D|`` over the grid ``xs x ys x radii``."""
    buf = _angle_buffer(radii.max())
    acc = 0.0
    best = -1.0
    bi = 0
    bj = 0
    bk = 0
    for k in range(radii.shape[0]):
        r = radii[k]
        for i in range(xs.shape[0]):
            cx = xs[i]
            if cx + r <= 0.0 or cx - r >= N:
                continue
            for j in range(ys.shape[0]):
                d = abs(circle_integral(padded, N, cx, ys[j], r, buf))
                if p > 0:
                    acc += d ** p
                if d > best:
                    best = d
                    bi = i
                    bj = j
                    bk = k
    return acc, best, bi, bj, bk


def circle_sup_search(c: Coloring, center_step: float = 0.25, radius_count: int = 32) -> DiscrepancyReport:
    """Largest ``|D_t(x)|`` with ``x`` on a ``center_step`` grid in ``(-2N, 2N)^2`` and ``t`` in ``(N/5, N/4)``."""
    if not center_step > 0:
        raise ValueError("center_step must be positive")
    if radius_count < 1:
        raise ValueError("radius_count must be >= 1")
    N = c.size
    kmax = int(math.ceil(4 * N / center_step))
    centers = -2.0 * N + center_step * np.arange(1, kmax)
    centers = centers[centers < 2.0 * N]
    radii = radius_nodes(N, radius_count)
    _, best, i, j, k = _circle_grid(c.padded(), N, centers, centers, radii, 0.0)
    w = Circle((float(centers[i]), float(centers[j])), float(radii[k]))
    return DiscrepancyReport(float(max(best, 0.0)), w, "sampled",
                             int(len(centers) ** 2 * len(radii)))


@njit(cache=True)
def _weighted_power_sum(padded, N, xs, wx, r, p):
    buf = _angle_buffer(r)
    acc = 0.0
    for i in range(xs.shape[0]):
        cx = xs[i]
        if cx + r <= 0.0 or cx - r >= N:
            continue
        for j in range(xs.shape[0]):
            d = abs(circle_integral(padded, N, cx, xs[j], r, buf))
            acc += wx[i] * wx[j] * d ** p
    return acc


GL_ORDER = 4


def center_rule(N: int, t: float, panel: float) -> tuple[np.ndarray, np.ndarray]:
    """1-D nodes and weights on ``[-t, N + t]`` for the ``x`` integral at radius ``t``.

    ``D_t`` has square-root singularities where the circle is tangent to a
    grid line, i.e. along ``x = m +- t``; panels break there and are split
    to length ``<= panel``, each carrying a Gauss-Legendre rule.
    """
    lo, hi = -t, N + t
    m = np.arange(N + 1, dtype=np.float64)
    br = np.concatenate([m + t, m - t, [lo, hi]])
    br = np.unique(br[(br >= lo) & (br <= hi)])
    g, gw = np.polynomial.legendre.leggauss(GL_ORDER)
    xs, ws = [], []
    for a, b in zip(br[:-1], br[1:]):
        k = max(1, int(math.ceil((b - a) / panel - 1e-9)))
        e = np.linspace(a, b, k + 1)
        h = np.diff(e)[:, None]
        xs.append((0.5 * h * (g + 1) + e[:-1, None]).ravel())
        ws.append((0.5 * h * gw).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def circle_power_integral(c: Coloring, p: float, panel: float, radius_count: int) -> float:
    """``int_{N/5}^{N/4} int |D_t(x)|^p dx dt``: midpoint rule in ``t``, tensor Gauss-Legendre in ``x``."""
    N = c.size
    padded = c.padded()
    total = 0.0
    for t in radius_nodes(N, radius_count):
        xs, ws = center_rule(N, float(t), panel)
        total += _weighted_power_sum(padded, N, xs, ws, float(t), float(p))
    return total * (RADIUS_HI - RADIUS_LO) * N / radius_count


def circle_lp(c: Coloring, p: float, center_step: float = 0.5, radius_count: int = 8,
              rtol: float = 1e-3, max_refinements: int = 2) -> float:
    """Circle Lp discrepancy ``((1/N^3) int_{N/5}^{N/4} int |D_t(x)|^p dx dt)^(1/p)``.

    ``center_step`` is the longest quadrature panel in ``x``. Both the panel
    length and the radius spacing are halved until successive estimates agree
    to ``rtol``. Each refinement costs about eight times the previous one, so
    the default stops after two and logs a warning if ``rtol`` was not met.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not center_step > 0 or radius_count < 1:
        raise ValueError("center_step must be positive and radius_count >= 1")
    N = c.size
    prev = circle_power_integral(c, p, center_step, radius_count)
    for _ in range(max_refinements):
        center_step /= 2
        radius_count *= 2
        cur = circle_power_integral(c, p, center_step, radius_count)
        converged = abs(cur - prev) <= rtol * abs(cur)
        prev = cur
        if converged:
            break
    else:
        log.warning("circle_lp did not reach rtol=%g after %d refinements", rtol, max_refinements)
    return (prev / N**3) ** (1.0 / p)
