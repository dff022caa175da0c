"""Measure the regression constants frozen in ``checkerdisc.calibration``.

Run once, inspect, and copy the suggested values into the module. Lower
bounds are rounded down and upper bounds rounded up to three significant
digits, so a rerun on the same code passes with a little room.

    python3 scripts/calibrate.py [--skip-slow]
"""

from __future__ import annotations

import argparse
import json
import math
import time

import numpy as np

from checkerdisc.arc_disc import circle_lp, circle_sup_search
from checkerdisc.coloring import make_parity, make_random, make_striped
from checkerdisc.hierarchy import HierarchySpec, build_hierarchy, hier_segment_discrepancy, random_segments
from checkerdisc.line_disc import line_lp, max_segment_discrepancy
from checkerdisc.spectral import bessel_j0, decay_mass, ring_energy


def round_down(x: float, digits: int = 3) -> float:
    e = math.floor(math.log10(abs(x))) - digits + 1
    return math.floor(x / 10**e) * 10**e


def round_up(x: float, digits: int = 3) -> float:
    e = math.floor(math.log10(abs(x))) - digits + 1
    return math.ceil(x / 10**e) * 10**e


def bessel_constant() -> float:
    r = np.round(np.arange(500, 10001) * 0.01, 2)
    err = np.abs(2 * math.pi * bessel_j0(2 * math.pi * r) - 2 * r**-0.5 * np.cos(2 * math.pi * r - math.pi / 4))
    return float(np.max(err * r**1.5))


def ring_minimum() -> float:
    xs = np.geomspace(0.1, 100.0, 500)
    return min(ring_energy(float(x), 2.0) for x in xs)


def decay_pair(N: int = 8, seeds=range(20), max_A: float = 4.0):
    """Best worst-case (a, A) over a small grid; ``A`` is capped since cost grows like ``A^2``."""
    best = None
    for a in (0.25, 0.5, 1.0, 2.0):
        for A in (2.0, 4.0, 8.0):
            worst = min(decay_mass(make_random(N, s), a, A) for s in seeds) / (N * N / 3)
            print(f"  decay a={a} A={A}: min ratio {worst:.4f}", flush=True)
            if A <= max_A and (best is None or worst > best[2]):
                best = (a, A, worst)
    return best


def segment_kappa(Ns=(8, 16, 32, 64), seeds=range(5)):
    rows = []
    for N in Ns:
        for s in seeds:
            rows.append((N, max_segment_discrepancy(make_random(N, s)).value))
    x = np.log([r[0] for r in rows])
    y = np.log([r[1] for r in rows])
    slope = float(np.polyfit(x, y, 1)[0])
    return min(v / math.sqrt(N) for N, v in rows), slope


def circle_kappa(Ns=(16, 32, 64)):
    ratios = {}
    for N in Ns:
        for c in (make_parity(N), make_random(N, 0)):
            t0 = time.time()
            v = circle_sup_search(c, 0.25, 32).value
            ratios[f"{c.label}-{N}"] = v / math.sqrt(N)
            print(f"  circle sup {c.label} N={N}: {v:.6f} ({time.time() - t0:.1f}s)", flush=True)
    return min(ratios.values()), ratios


def circle_l2_kappa(N: int = 16) -> float:
    return circle_lp(make_parity(N), 2.0, rtol=1e-2) / math.sqrt(N)


def striped_window(Ns=(16, 32, 64, 128, 256)):
    return {N: line_lp(make_striped(N), 1.0, 16 * N) / math.log(N) for N in Ns}


def hierarchy_constant(count: int = 1000, seed: int = 2024):
    spec = HierarchySpec(epsilon=0.25, max_level=4, seed=1)
    h = build_hierarchy(spec)
    segs = random_segments(h, count, 4.0, h.extent / 2, seed=seed)
    L = np.array([s.length for s in segs])
    v = np.abs([hier_segment_discrepancy(h, s) for s in segs])
    return float(np.max(v / L**0.80)), _envelope_slope(L, v)


def _envelope_slope(L, v, bins: int = 8) -> float:
    """Log-log slope of the per-bin maximum of ``v`` against length."""
    edges = np.geomspace(L.min(), L.max() * (1 + 1e-12), bins + 1)
    xs, ys = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (L >= lo) & (L < hi)
        if sel.any():
            i = np.argmax(np.where(sel, v, -1.0))
            xs.append(math.log(L[i]))
            ys.append(math.log(v[i]))
    return float(np.polyfit(xs, ys, 1)[0])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--skip-slow", action="store_true", help="skip the circle and segment searches at N=64")
    args = ap.parse_args()

    out = {}
    t0 = time.time()
    out["bessel_c"] = c = bessel_constant()
    print(f"bessel c = {c:.8f} -> freeze {round_up(c)}", flush=True)
    out["ring_c2"] = c2 = ring_minimum()
    print(f"ring c2 = {c2:.8f} -> freeze {round_down(c2)}", flush=True)
    a, A, worst = decay_pair()
    out["decay"] = (a, A, worst)
    print(f"decay (a, A) = ({a}, {A}), min ratio {worst:.4f}", flush=True)
    win = striped_window()
    out["striped_window"] = win
    lo, hi = min(win.values()), max(win.values())
    print(f"striped ratios {win} -> window [{round_down(lo, 2)}, {round_up(hi, 2)}]", flush=True)
    k2 = circle_l2_kappa()
    out["circle_l2_kappa"] = k2
    print(f"circle L2 kappa2 = {k2:.6f} -> freeze {round_down(k2)}", flush=True)
    kp, slope = hierarchy_constant()
    out["hier_K_prime"] = (kp, slope)
    print(f"hierarchy K' = {kp:.6f} -> freeze {round_up(kp)}; envelope slope {slope:.4f}", flush=True)
    if not args.skip_slow:
        kappa, slope = segment_kappa()
        out["segment_kappa"] = (kappa, slope)
        print(f"segment kappa = {kappa:.6f} -> freeze {round_down(kappa)}; slope {slope:.4f}", flush=True)
        kc, ratios = circle_kappa()
        out["circle_kappa"] = (kc, ratios)
        print(f"circle kappa_c = {kc:.6f} -> freeze {round_down(kc)}", flush=True)
    print(f"elapsed {time.time() - t0:.0f}s")
    print(json.dumps(out, indent=2, default=str))


if __name__ == "__main__":
    main()
