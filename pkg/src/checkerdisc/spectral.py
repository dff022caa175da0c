"""Fourier side of the circle lower bound.

Conventions: ``fhat(xi) = int f(x) exp(-2 pi i x.xi) dx``. The arc-length
measure of the radius-``t`` circle has transform
``sigma_hat(t, xi) = 2 pi t J0(2 pi t |xi|)``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .arc_disc import _weighted_power_sum, center_rule
from .coloring import Coloring

PARSEVAL_CAP = 16

# J0 for |x| > 8: Hankel form sqrt(2/(pi x)) (P cos(x - pi/4) - (5/x) Q sin(x - pi/4))
# with the Cephes rational approximations of P and Q in (5/x)^2.
_PP = np.array([7.96936729297347051624e-4, 8.28352392107440799803e-2, 1.23953371646414299388e0,
                5.44725003058768775090e0, 8.74716500199817011941e0, 5.30324038235394892183e0,
                9.99999999999999997821e-1])
_PQ = np.array([9.24408810558863637013e-4, 8.56288474354474431428e-2, 1.25352743901058953537e0,
                5.47097740330417105182e0, 8.76190883237069594232e0, 5.30605288235394617618e0,
                1.00000000000000000218e0])
_QP = np.array([-1.13663838898469149931e-2, -1.28252718670509318512e0, -1.95539544257735972385e1,
                -9.32060152123768231369e1, -1.77681167980488050595e2, -1.47077505154951170175e2,
                -5.14105326766599330220e1, -6.05014350600728481186e0])
_QQ = np.array([1.0, 6.43178256118178023184e1, 8.56430025976980587198e2, 3.88240183605401609683e3,
                7.24046774195652478189e3, 5.93072701187316984827e3, 2.06209331660327847417e3,
                2.42005740240291393179e2])
SERIES_LIMIT = 8.0
SERIES_TERMS = 40


def bessel_j0(x):
    """Bessel function of the first kind, order 0 (absolute error below 1e-8 everywhere)."""
    x = np.abs(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    small = x <= SERIES_LIMIT
    if np.any(small):
        z = -(x[small] * 0.5) ** 2
        term = np.ones_like(z)
        acc = np.ones_like(z)
        for k in range(1, SERIES_TERMS):
            term = term * z / (k * k)
            acc += term
        out[small] = acc
    big = ~small
    if np.any(big):
        xb = x[big]
        w = 5.0 / xb
        q = w * w
        p = np.polyval(_PP, q) / np.polyval(_PQ, q)
        qq = np.polyval(_QP, q) / np.polyval(_QQ, q)
        xn = xb - math.pi / 4
        out[big] = math.sqrt(2 / math.pi) * (p * np.cos(xn) - w * qq * np.sin(xn)) / np.sqrt(xb)
    return out if out.ndim else float(out)


def sigma_hat(t: float, xi):
    """Transform of arc length on the radius-``t`` circle; ``xi`` is a vector or an array of shape (..., 2)."""
    if not t > 0:
        raise ValueError("t must be positive")
    r = np.linalg.norm(np.asarray(xi, dtype=np.float64), axis=-1)
    return 2 * math.pi * t * bessel_j0(2 * math.pi * t * r)


def sigma1_radial(u):
    """Radial profile ``2 pi J0(2 pi u)`` of ``sigma_hat(1, .)``."""
    return 2 * math.pi * bessel_j0(2 * math.pi * np.asarray(u, dtype=np.float64))


def _window(u):
    # int_0^1 exp(-2 pi i u v) dv
    u = np.asarray(u, dtype=np.float64)
    return np.exp(-1j * math.pi * u) * np.sinc(u)


def _phases(u, N):
    return np.exp(-2j * math.pi * np.multiply.outer(u, np.arange(N)))


def fhat(c: Coloring, xi):
    """Exact transform of the coloring at ``xi`` (shape (2,) or (..., 2))."""
    xi = np.asarray(xi, dtype=np.float64)
    flat = xi.reshape(-1, 2)
    E1 = _phases(flat[:, 0], c.size)
    E2 = _phases(flat[:, 1], c.size)
    P = np.einsum("km,kn,mn->k", E1, E2, c.cells.astype(np.float64))
    out = _window(flat[:, 0]) * _window(flat[:, 1]) * P
    return out.reshape(xi.shape[:-1]) if xi.ndim > 1 else complex(out[0])


def fhat_grid(c: Coloring, g1, g2):
    """``fhat`` on the tensor grid ``g1 x g2`` (separable evaluation)."""
    C = c.cells.astype(np.float64)
    P = _phases(g1, c.size) @ C @ _phases(g2, c.size).T
    return _window(g1)[:, None] * _window(g2)[None, :] * P


# --- ring energy -------------------------------------------------------------

def ring_energy(x: float, c1: float = 2.0, rtol: float = 1e-6) -> float:
    """``int_x^{c1 x} |2 pi J0(2 pi u)|^2 du`` by adaptive quadrature on unit-length pieces."""
    if not x > 0:
        raise ValueError("x must be positive")
    if not c1 > 1:
        raise ValueError("c1 must exceed 1")
    f = lambda u: float(sigma1_radial(u)) ** 2
    edges = np.unique(np.concatenate([np.arange(math.ceil(x), c1 * x), [x, c1 * x]]))
    edges = edges[(edges >= x) & (edges <= c1 * x)]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, _ = integrate.quad(f, a, b, epsrel=rtol * 1e-2, epsabs=0.0, limit=200)
        total += v
    return total


# --- annulus mass ------------------------------------------------------------

def _polar_mass(c: Coloring, r0: float, r1: float, nr: int, nth: int) -> float:
    g, gw = np.polynomial.legendre.leggauss(nr)
    r = 0.5 * (r1 - r0) * (g + 1) + r0
    wr = 0.5 * (r1 - r0) * gw * r
    # |fhat(-xi)| = |fhat(xi)|: integrate the half plane and double
    th = (np.arange(nth) + 0.5) * math.pi / nth
    total = 0.0
    for ri, wi in zip(r, wr):
        pts = np.stack([ri * np.cos(th), ri * np.sin(th)], axis=-1)
        total += wi * np.sum(np.abs(fhat(c, pts)) ** 2)
    return 2.0 * total * math.pi / nth


def decay_mass(c: Coloring, a: float, A: float, rtol: float = 1e-3) -> float:
    """``int_{a/N < |xi| < A} |fhat|^2`` by polar Gauss-Legendre x midpoint quadrature, refined to ``rtol``."""
    N = c.size
    r0 = a / N
    if not (a > 0 and A > 0 and r0 < A):
        raise ValueError("need a > 0, A > 0 and a/N < A")
    nr = max(16, int(math.ceil(2 * N * (A - r0))))
    nth = max(32, int(math.ceil(2 * math.pi * A * N)))
    prev = _polar_mass(c, r0, A, nr, nth)
    for _ in range(6):
        nr, nth = 2 * nr, 2 * nth
        cur = _polar_mass(c, r0, A, nr, nth)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


def small_ball_mass(c: Coloring, radius: float, nr: int = 64, nth: int = 256) -> float:
    """``int_{|xi| < radius} |fhat|^2`` (no refinement; used for the tiny-ball estimate)."""
    return _polar_mass(c, 0.0, radius, nr, nth)


# --- Parseval ----------------------------------------------------------------

def _tail_bound(N: int, t: float, R: int) -> float:
    """Upper bound for the part of ``int |fhat|^2 |sigma_hat_t|^2`` outside ``[-R, R]^2``.

    Per unit cell ``[k, k+1]^2``: ``int |P|^2 = N^2`` (orthogonality of the
    cell exponentials), ``|W|^2 <= s(k1) s(k2)`` with ``s = min(1, 1/(pi d)^2)``
    and ``|sigma_hat_t|^2 <= 1.01 * 4 t / R`` from ``|J0(z)| <~ sqrt(2/(pi z))``.
    """
    s_all = 2.0 + 2.0 / 6.0  # sum over all cells of min(1, 1/(pi d)^2), d = distance to 0
    s_out = 2.0 / (math.pi**2 * (R - 1))
    return N * N * 1.01 * 4.0 * t / R * 2.0 * s_all * s_out


def spectral_energy(c: Coloring, t: float, rel_tail: float = 0.005, max_R: int = 256):
    """``int |fhat|^2 |sigma_hat_t|^2`` on a square grid ``[-R, R]^2``.

    The integrand's inverse transform is supported in ``[-N-2t, N+2t]^2``, so
    the midpoint rule with spacing below ``1/(N + 2t)`` only incurs the
    truncation error; ``R`` doubles until the tail bound is below
    ``rel_tail`` of the computed value. Returns ``(value, R, tail_bound)``.
    """
    N = c.size
    R = 8
    while True:
        G = int(math.ceil(2 * R * (N + 2 * t + 2)))
        h = 2 * R / G
        g = -R + (np.arange(G) + 0.5) * h
        total = 0.0
        chunk = max(1, 2_000_000 // G)
        for s in range(0, G, chunk):
            g1 = g[s:s + chunk]
            F = fhat_grid(c, g1, g)
            rad = np.hypot(g1[:, None], g[None, :])
            S = 2 * math.pi * t * bessel_j0(2 * math.pi * t * rad)
            total += float(np.sum(np.abs(F) ** 2 * S**2))
        total *= h * h
        tail = _tail_bound(N, t, R)
        if tail <= rel_tail * total or 2 * R > max_R:
            return total, R, tail
        R *= 2


def spatial_energy(c: Coloring, t: float, step: float = 0.125) -> float:
    """``int |D_t(x)|^2 dx`` with the tangency-aligned tensor rule of :func:`center_rule`.

    ``D_t`` vanishes off ``[-t, N+t]^2``, so that square replaces the padded
    box; panels are at most ``step`` long.
    """
    xs, ws = center_rule(c.size, float(t), step)
    return float(_weighted_power_sum(c.padded(), c.size, xs, ws, float(t), 2.0))


def parseval_check(c: Coloring, t: float, step: float = 0.125) -> tuple[float, float]:
    """Both sides of ``int |D_t|^2 dx = int |fhat|^2 |sigma_hat_t|^2 dxi``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if c.size > PARSEVAL_CAP:
        raise ValueError(f"parseval_check is limited to N <= {PARSEVAL_CAP} (got {c.size})")
    if step > 0.125:
        raise ValueError("spatial step must be <= 0.125")
    spatial = spatial_energy(c, t, step)
    spectral, _, _ = spectral_energy(c, t)
    return spatial, spectral
