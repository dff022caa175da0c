import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from checkerdisc.coloring import make_constant, make_parity, make_random, make_striped
from checkerdisc.geometry import Segment, apply_symmetry, segment_cells
from checkerdisc.line_disc import (
    SearchTooLarge,
    line_lp,
    line_sup,
    max_abs_subsum,
    max_segment_discrepancy,
    projection,
    sampled_segment_sup,
    segment_discrepancy,
)

from conftest import brute_subsum, riemann_segment

HOLDER = math.sqrt(2 * math.sqrt(2) * math.pi)  # |S^1 x support| <= 2 pi N sqrt(2)


def chord(N, x, u):
    """The board chord of the line {x u + y u_perp}, or None."""
    ux, uy = u
    px, py = x * ux, x * uy
    vx, vy = -uy, ux
    lo, hi = -math.inf, math.inf
    for p, v in ((px, vx), (py, vy)):
        if abs(v) < 1e-15:
            if not 0 <= p < N:
                return None
            continue
        a, b = (0 - p) / v, (N - p) / v
        lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
    if hi <= lo:
        return None
    return Segment((px + lo * vx, py + lo * vy), (px + hi * vx, py + hi * vy))


def line_integral(c, x, u):
    s = chord(c.size, x, u)
    return 0.0 if s is None else segment_discrepancy(c, s)


# --- segment_discrepancy ----------------------------------------------------

def test_segment_examples():
    assert math.isclose(segment_discrepancy(make_constant(5), Segment((0.3, 1.2), (4.1, 3.3))),
                        math.hypot(3.8, 2.1))
    for N in (4, 7):
        assert segment_discrepancy(make_striped(N), Segment((0, 0.5), (N, 0.5))) == pytest.approx(N)
        assert segment_discrepancy(make_striped(N), Segment((0, 1.5), (N, 1.5))) == pytest.approx(-N)
    assert segment_discrepancy(make_parity(4), Segment((0, 0), (4, 4))) == pytest.approx(4 * math.sqrt(2))


# --- max_abs_subsum ----------------------------------------------------------

def test_subsum_examples():
    assert max_abs_subsum([1, -1, 2])[0] == 2
    assert max_abs_subsum([-3, 1, -1])[0] == 3
    assert max_abs_subsum([]) == (0.0, 0, -1)


def test_subsum_brute_force_1000(rng):
    w = rng.normal(size=1000)
    v, i, j = max_abs_subsum(w)
    assert v == pytest.approx(brute_subsum(w), rel=1e-12)
    assert abs(sum(w[i:j + 1])) == pytest.approx(v, rel=1e-12)


@given(st.lists(st.floats(-100, 100), max_size=40))
def test_subsum_matches_brute_force(w):
    v, i, j = max_abs_subsum(w)
    assert v == pytest.approx(brute_subsum(w), abs=1e-9)
    if v > 0:
        assert abs(sum(w[i:j + 1])) == pytest.approx(v, abs=1e-9)


# --- exact and sampled suprema ---------------------------------------------

@pytest.mark.parametrize("N", [2, 5, 8])
def test_constant_and_parity_sup(N):
    rep = max_segment_discrepancy(make_constant(N))
    assert rep.value == pytest.approx(N * math.sqrt(2))
    assert rep.witness.length == pytest.approx(N * math.sqrt(2))
    if N % 2 == 0:
        assert max_segment_discrepancy(make_parity(N)).value == pytest.approx(N * math.sqrt(2))


@pytest.mark.parametrize("N", [4, 8, 16])
def test_striped_sup_beats_a_row(N):
    # the line through corners (0, 0) and (N, 1) stays in row 0
    rep = max_segment_discrepancy(make_striped(N))
    assert rep.value == pytest.approx(math.sqrt(N * N + 1))
    assert segment_discrepancy(make_striped(N), Segment((0, 0), (N, 1))) == pytest.approx(math.sqrt(N * N + 1))


@given(st.sampled_from(["constant", "parity", "striped", "random"]), st.integers(1, 10), st.integers(0, 10**6))
def test_witness_reproduces_value(family, N, seed):
    from checkerdisc.coloring import make_family
    c = make_family(family, N, seed)
    for rep in (max_segment_discrepancy(c), sampled_segment_sup(c, 50, seed)):
        assert abs(segment_discrepancy(c, rep.witness)) == pytest.approx(rep.value, abs=1e-9)
        assert rep.value >= 0


def test_exact_search_cap():
    with pytest.raises(SearchTooLarge):
        max_segment_discrepancy(make_constant(65))
    with pytest.raises(SearchTooLarge):
        max_segment_discrepancy(make_constant(10), cap=8)


def test_report_json_shape():
    d = max_segment_discrepancy(make_parity(4)).to_json()
    assert set(d) >= {"value", "witness", "method", "search_size"}
    assert set(d["witness"]) == {"ax", "ay", "bx", "by"} and d["method"] == "exact"


@given(st.integers(2, 16), st.integers(0, 10**6))
def test_sampled_never_exceeds_exact(N, seed):
    c = make_random(N, seed)
    assert sampled_segment_sup(c, 200, seed).value <= max_segment_discrepancy(c).value + 1e-9


def test_sampled_reaches_constant_diagonal():
    N = 16
    assert sampled_segment_sup(make_constant(N), 10_000, 3).value >= 0.99 * N * math.sqrt(2)


def test_sampled_deterministic():
    c = make_random(12, 9)
    assert sampled_segment_sup(c, 1, 4).to_json() == sampled_segment_sup(c, 1, 4).to_json()


def test_sampled_below_exact_n32():
    c = make_random(32, 1)
    assert sampled_segment_sup(c, 5000, 1).value <= max_segment_discrepancy(c).value + 1e-9


@given(st.integers(2, 9), st.integers(0, 10**6), st.integers(0, 3), st.booleans())
def test_symmetry_equivariance(N, seed, k, flip):
    c = make_random(N, seed)
    rep = max_segment_discrepancy(c)
    img = c.transformed(k, flip)
    assert max_segment_discrepancy(img).value == pytest.approx(rep.value, abs=1e-9)
    w = Segment(apply_symmetry(rep.witness.a, N, k, flip), apply_symmetry(rep.witness.b, N, k, flip))
    assert abs(segment_discrepancy(img, w)) == pytest.approx(rep.value, abs=1e-9)


def test_subsegment_optimality(rng):
    # random sub-segments of a fixed line never beat the run-sequence optimum
    c = make_random(10, 5)
    for _ in range(20):
        th = rng.uniform(0, math.pi)
        u = (math.cos(th), math.sin(th))
        proj = [0.0, 10 * u[0], 10 * u[1], 10 * (u[0] + u[1])]
        s = chord(10, rng.uniform(min(proj), max(proj)), u)
        if s is None:
            continue
        best = max_abs_subsum([c[r.cell] * r.length for r in segment_cells(s)])[0]
        for _ in range(200):
            t0, t1 = sorted(rng.uniform(0, 1, size=2))
            sub = Segment(s.point(t0), s.point(t1))
            assert abs(segment_discrepancy(c, sub)) <= best + 1e-9


# --- projection --------------------------------------------------------------

def test_projection_axis_examples():
    N = 6
    P = projection(make_constant(N), (1.0, 0.0))
    x = np.array([0.0, 0.5, 3.3, 5.99])
    assert np.allclose(P(x), N) and P(-0.1) == 0 and P(N + 0.1) == 0
    assert np.allclose(projection(make_parity(N), (1.0, 0.0))(np.linspace(0, N - 1e-9, 50)), 0)
    S = projection(make_striped(N), (0.0, 1.0))
    xs = np.linspace(0, N - 1e-6, 97)
    assert np.allclose(S(xs), N * (-1.0) ** np.floor(xs))


def test_projection_rejects_non_unit():
    with pytest.raises(ValueError):
        projection(make_constant(3), (1.0, 1.0))


@given(st.integers(1, 8), st.integers(0, 10**6), st.floats(0.01, math.pi - 0.01))
def test_projection_matches_line_integrals(N, seed, th):
    c = make_random(N, seed)
    u = (math.cos(th), math.sin(th))
    P = projection(c, u)
    assert P.values[0] == 0 and abs(P.values[-1]) < 1e-9
    lo, hi = P.breakpoints[0], P.breakpoints[-1]
    for x in np.linspace(lo - 0.5, hi + 0.5, 13):
        assert P(x) == pytest.approx(line_integral(c, x, u), abs=1e-9)


def test_power_integral_general_p(rng):
    c = make_random(5, 2)
    u = (math.cos(0.7), math.sin(0.7))
    P = projection(c, u)
    for p in (1.0, 1.5, 2.0, 3.0):
        ref = integrate.quad(lambda x: abs(P(x)) ** p, P.breakpoints[0], P.breakpoints[-1],
                             points=P.breakpoints[1:-1], limit=500, epsabs=0, epsrel=1e-10)[0]
        assert P.abs_power_integral(p) == pytest.approx(ref, rel=1e-6)


# --- Lp and sup ---------------------------------------------------------------

def constant_l2_oracle(N, n_theta, n_x):
    """Two-level quadrature with closed-form chord lengths of the square."""
    total = 0.0
    for th in (np.arange(n_theta) + 0.5) * 2 * math.pi / n_theta:
        u = (math.cos(th), math.sin(th))
        corners = [0.0, N * u[0], N * u[1], N * (u[0] + u[1])]
        xs = np.linspace(min(corners), max(corners), n_x)
        vals = np.array([0.0 if (s := chord(N, x, u)) is None else s.length for x in xs])
        total += integrate.simpson(vals**2, x=xs)
    return math.sqrt(total * 2 * math.pi / n_theta / N)


def test_line_lp_constant_matches_two_level_quadrature():
    N = 4
    v = line_lp(make_constant(N), 2.0, 64)
    assert v == pytest.approx(constant_l2_oracle(N, 1024, 4001), rel=2e-3)
    assert line_lp(make_constant(N), 2.0, 128) == pytest.approx(v, rel=1e-3)


@given(st.sampled_from(["constant", "parity", "striped", "random"]), st.integers(1, 10), st.integers(0, 99))
def test_line_lp_holder(family, N, seed):
    from checkerdisc.coloring import make_family
    c = make_family(family, N, seed)
    assert line_lp(c, 1.0, 64) <= HOLDER * line_lp(c, 2.0, 64) + 1e-9


def test_line_lp_rejects_small_p():
    with pytest.raises(ValueError):
        line_lp(make_constant(3), 0.5)


def corner_pair_sup(c):
    N = c.size
    pts = [(i, j) for i in range(N + 1) for j in range(N + 1)]
    best = 0.0
    for k, (i0, j0) in enumerate(pts):
        for i1, j1 in pts[k + 1:]:
            L = math.hypot(i1 - i0, j1 - j0)
            u = ((j1 - j0) / L, -(i1 - i0) / L)  # normal of the line
            best = max(best, abs(line_integral(c, i0 * u[0] + j0 * u[1], u)))
    return best


def test_line_sup_parity_brute_force():
    c = make_parity(8)
    assert line_sup(c) == pytest.approx(corner_pair_sup(c), abs=1e-9)


def test_line_sup_constant_dense_directions():
    N = 6
    c = make_constant(N)
    dense = max(projection(c, (math.cos(t), math.sin(t))).max_abs()
                for t in np.arange(1, 400) * (math.pi / 2) / 400)
    assert dense <= line_sup(c) + 1e-9
    assert line_sup(c) == pytest.approx(dense, abs=1e-9)  # pi/4 is on the grid
    assert line_sup(c) == pytest.approx(N * math.sqrt(2))


@pytest.mark.parametrize("N", [4, 8, 16])
def test_line_sup_striped(N):
    assert line_sup(make_striped(N)) == pytest.approx(math.sqrt(N * N + 1))


@given(st.integers(1, 7), st.integers(0, 10**6))
def test_line_sup_dominates_sampled_projections(N, seed):
    c = make_random(N, seed)
    s = line_sup(c)
    for t in np.linspace(0.01, math.pi - 0.01, 23):
        assert projection(c, (math.cos(t), math.sin(t))).max_abs() <= s + 1e-9
