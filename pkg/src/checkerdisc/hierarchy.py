"""Hierarchical random-sign coloring of the plane with ``|int_I f| <= K |I|^(1/2 + eps)``.

Level 1 is a 2 x 2 board. Level ``k + 1`` is an ``M_k x M_k`` array of
super-cells, each a copy of level ``k`` times a sign, the central sign being
+1 so that level ``k`` survives unchanged in the middle. Signs are resampled
until the new level passes its check (a Las Vegas loop).

Coordinates: the level-``k`` board is the cell square ``[-N_k/2, N_k/2)^2``;
``N_k`` is always even (``N_1 = 2`` and every ``M_k`` is odd).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ._prng import derive_seed, random_signs
from .coloring import Coloring, make_constant
from .geometry import Segment, segment_pieces
from .line_disc import EXACT_CAP, max_segment_discrepancy, sampled_segment_sup

DUMP_FORMAT = "checkerdisc-hierarchy"
DUMP_VERSION = 1


class HierarchyError(RuntimeError):
    pass


class OutOfExtent(ValueError):
    pass


@dataclass(frozen=True)
class HierarchySpec:
    epsilon: float = 0.25
    K: float = 500.0
    C_M: float = 1.0
    max_level: int = 3
    seed: int = 0
    epsilon_schedule: tuple[float, ...] | None = None  # per-level eps_1, eps_2, ...
    retry_budget: int = 200
    exact_cap: int = EXACT_CAP
    sampled_trials: int = 20000
    size_cap: int = 4096

    def __post_init__(self):
        if not 0 < self.epsilon <= 0.5:
            raise ValueError("epsilon must lie in (0, 1/2]")
        if self.K <= 0 or self.C_M <= 0:
            raise ValueError("K and C_M must be positive")
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        if self.epsilon_schedule is not None:
            sched = tuple(float(e) for e in self.epsilon_schedule)
            if len(sched) < self.max_level or not all(0 < e <= 0.5 for e in sched):
                raise ValueError("epsilon_schedule needs max_level entries in (0, 1/2]")
            object.__setattr__(self, "epsilon_schedule", sched)
        if self.sizes()[-1] > self.size_cap:
            raise ValueError(f"N_{self.max_level} = {self.sizes()[-1]} exceeds size cap {self.size_cap}")

    def eps(self, k: int) -> float:
        return self.epsilon_schedule[k - 1] if self.epsilon_schedule else self.epsilon

    def multiplier(self, k: int, N_k: int) -> int:
        """Smallest odd integer >= max(3, C_M (ln N_k)^(1/(2 eps_k)))."""
        target = max(3.0, self.C_M * math.log(N_k) ** (1.0 / (2.0 * self.eps(k))))
        M = math.ceil(target - 1e-12)
        return M if M % 2 == 1 else M + 1

    def sizes(self) -> list[int]:
        Ns = [2]
        for k in range(1, self.max_level):
            Ns.append(Ns[-1] * self.multiplier(k, Ns[-1]))
        return Ns

    def multipliers(self) -> list[int]:
        Ns = self.sizes()
        return [Ns[k] // Ns[k - 1] for k in range(1, len(Ns))]

    def phi(self, length: float, k: int = 1) -> float:
        return self.K * length ** (0.5 + self.eps(k))

    def level_bound(self, k: int) -> float:
        return self.phi(self.sizes()[k - 1], k) / 100.0


def level_of_length(spec: HierarchySpec, length: float) -> int:
    """Least ``k`` with ``N_k >= length``."""
    for k, N in enumerate(spec.sizes(), start=1):
        if N >= length:
            return k
    raise OutOfExtent(f"length {length} exceeds N_{spec.max_level}")


@dataclass
class LevelReport:
    level: int
    N: int
    max_found: float
    bound: float
    passed: bool
    method: str
    retries: int = 0
    witness: dict = field(default_factory=dict)


@dataclass
class HierarchicalColoring:
    spec: HierarchySpec
    base: Coloring
    sign_matrices: list[np.ndarray]
    verification: list[LevelReport]

    @property
    def sizes(self) -> list[int]:
        return self.spec.sizes()

    @property
    def extent(self) -> int:
        return self.sizes[-1]

    def board(self, k: int | None = None) -> Coloring:
        """Level ``k`` (default: top) as an ``N_k x N_k`` board; board cell (a, b) is plane cell (a - N_k/2, b - N_k/2)."""
        return _materialize(self.base, self.sign_matrices, self.spec.max_level if k is None else k)


def _materialize(base: Coloring, signs: list[np.ndarray], k: int) -> Coloring:
    cells = base.cells.astype(np.int8)
    for S in signs[: k - 1]:
        cells = np.kron(S, cells).astype(np.int8)
    return Coloring(cells.shape[0], cells, f"hier-level-{k}")


def _check(board: Coloring, spec: HierarchySpec, k: int) -> LevelReport:
    N = board.size
    if N <= spec.exact_cap:
        rep = max_segment_discrepancy(board, cap=spec.exact_cap)
    else:
        rep = sampled_segment_sup(board, spec.sampled_trials, seed=derive_seed(spec.seed, k, 0xC0FFEE))
    bound = spec.level_bound(k)
    w = rep.witness.translated(-N / 2, -N / 2)
    return LevelReport(k, N, rep.value, bound, rep.value <= bound, rep.method, 0, w.to_json())


def build_hierarchy(spec: HierarchySpec) -> HierarchicalColoring:
    base = make_constant(2, 1)
    reports = [_check(base, spec, 1)]
    if not reports[0].passed:
        raise HierarchyError(
            f"level 1: base board discrepancy {reports[0].max_found:.6g} exceeds "
            f"bound {reports[0].bound:.6g}; raise K")
    signs: list[np.ndarray] = []
    cells = base.cells
    for k, M in enumerate(spec.multipliers(), start=1):
        c = (M - 1) // 2
        worst = None
        for attempt in range(spec.retry_budget):
            S = random_signs(derive_seed(spec.seed, k, attempt), M * M).reshape(M, M)
            S = (S * S[c, c]).astype(np.int8)
            nxt = np.kron(S, cells).astype(np.int8)
            rep = _check(Coloring(nxt.shape[0], nxt, f"hier-level-{k + 1}"), spec, k + 1)
            rep.retries = attempt
            if rep.passed:
                break
            if worst is None or rep.max_found < worst.max_found:
                worst = rep
        else:
            raise HierarchyError(
                f"level {k + 1}: no sign choice passed in {spec.retry_budget} tries; best "
                f"discrepancy {worst.max_found:.6g} exceeds bound {worst.bound:.6g} by "
                f"{worst.max_found - worst.bound:.6g}; raise K or C_M")
        signs.append(S)
        reports.append(rep)
        cells = nxt
    return HierarchicalColoring(spec, base, signs, reports)


def verify_level(h: HierarchicalColoring, k: int) -> LevelReport:
    """Re-run the level-``k`` check on the stored coloring."""
    if not 1 <= k <= h.spec.max_level:
        raise ValueError(f"level {k} not built (1..{h.spec.max_level})")
    return _check(h.board(k), h.spec, k)


def hier_cells(h: HierarchicalColoring, m, n) -> np.ndarray:
    """Vectorized color lookup for plane cells ``(m, n)``."""
    m = np.asarray(m, dtype=np.int64)
    n = np.asarray(n, dtype=np.int64)
    half = h.extent // 2
    if np.any((m < -half) | (m >= half) | (n < -half) | (n >= half)):
        raise OutOfExtent(f"cell outside the built extent [-{half}, {half})^2; extend levels")
    a = m + half
    b = n + half
    sign = np.ones(np.broadcast(a, b).shape, dtype=np.int8)
    Ns = h.sizes
    for k in range(len(Ns) - 1, 0, -1):
        Nk = Ns[k - 1]
        i, j = a // Nk, b // Nk
        sign = sign * h.sign_matrices[k - 1][i, j]
        a, b = a - i * Nk, b - j * Nk
    return (sign * h.base.cells[a, b]).astype(np.int8)


def hier_cell(h: HierarchicalColoring, m: int, n: int) -> int:
    return int(hier_cells(h, m, n))


def hier_segment_discrepancy(h: HierarchicalColoring, s: Segment) -> float:
    """Signed integral of the plane coloring along ``s``."""
    half = h.extent / 2
    xs = (s.a[0], s.b[0])
    ys = (s.a[1], s.b[1])
    if min(xs + ys) < -half or max(xs + ys) > half:
        raise OutOfExtent(f"segment leaves the built extent [-{half:g}, {half:g}]^2; extend levels")
    ms, ns, ls = segment_pieces(float(s.a[0]), float(s.a[1]), float(s.b[0]), float(s.b[1]))
    # pieces on the closing edge x = half or y = half belong to no cell
    ok = (ms < half) & (ns < half)
    return float(np.dot(hier_cells(h, ms[ok], ns[ok]).astype(np.float64), ls[ok]))


def random_segments(h: HierarchicalColoring, count: int, min_length: float, max_length: float,
                    seed: int = 0) -> list[Segment]:
    """Segments with log-uniform length in ``[min_length, max_length]``, uniform
    direction and a uniform start point, resampled until they stay inside the
    built extent. Log-uniform lengths give every length scale the same number
    of samples, so per-scale maxima are comparable."""
    half = h.extent / 2
    if not 0 < min_length <= max_length <= h.extent:
        raise ValueError("need 0 < min_length <= max_length <= N_max")
    rng = np.random.default_rng(seed)
    out: list[Segment] = []
    while len(out) < count:
        L = math.exp(rng.uniform(math.log(min_length), math.log(max_length)))
        th = rng.uniform(0.0, 2 * math.pi)
        ax, ay = rng.uniform(-half, half, size=2)
        bx, by = ax + L * math.cos(th), ay + L * math.sin(th)
        if -half <= bx <= half and -half <= by <= half:
            out.append(Segment((float(ax), float(ay)), (float(bx), float(by))))
    return out


# --- persistence -------------------------------------------------------------

def _signs_to_rows(S: np.ndarray) -> list[str]:
    return ["".join("+" if v > 0 else "-" for v in S[:, j]) for j in range(S.shape[1])]


def _rows_to_signs(rows: list[str]) -> np.ndarray:
    M = len(rows)
    S = np.empty((M, M), dtype=np.int8)
    for j, row in enumerate(rows):
        if len(row) != M:
            raise ValueError("sign matrix rows must be square")
        S[:, j] = [1 if ch == "+" else -1 for ch in row]
    return S


def to_dict(h: HierarchicalColoring) -> dict:
    spec = asdict(h.spec)
    if spec["epsilon_schedule"] is not None:
        spec["epsilon_schedule"] = list(spec["epsilon_schedule"])
    return {
        "format": DUMP_FORMAT,
        "version": DUMP_VERSION,
        "spec": spec,
        "sizes": h.sizes,
        "base": _signs_to_rows(h.base.cells),
        "sign_matrices": [_signs_to_rows(S) for S in h.sign_matrices],
        "verification": [asdict(r) for r in h.verification],
    }


def from_dict(d: dict) -> HierarchicalColoring:
    if d.get("format") != DUMP_FORMAT:
        raise ValueError("not a hierarchy dump")
    if d.get("version") != DUMP_VERSION:
        raise ValueError(f"unsupported hierarchy dump version {d.get('version')}")
    sd = dict(d["spec"])
    if sd.get("epsilon_schedule") is not None:
        sd["epsilon_schedule"] = tuple(sd["epsilon_schedule"])
    spec = HierarchySpec(**sd)
    base = _rows_to_signs(d["base"])
    signs = [_rows_to_signs(rows) for rows in d["sign_matrices"]]
    if [S.shape[0] for S in signs] != spec.multipliers():
        raise ValueError("sign matrix sizes do not match HierarchySpec.multipliers()")
    reports = [LevelReport(**r) for r in d["verification"]]
    return HierarchicalColoring(spec, Coloring(2, base, "hier-base"), signs, reports)


def dump(h: HierarchicalColoring, path) -> None:
    Path(path).write_text(json.dumps(to_dict(h)))


def load(path) -> HierarchicalColoring:
    return from_dict(json.loads(Path(path).read_text()))
