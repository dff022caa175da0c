"""Command-line driver: ``checkerdisc {gen,disc,sweep,spectral,hier}``.

Single results are printed as JSON, sweeps as CSV (or JSON lines with
``--format json``). Floats carry 12 significant digits. Failures print a JSON
object ``{"error": ..., "message": ...}`` to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import calibration, hierarchy
from .arc_disc import circle_discrepancy, circle_lp, circle_sup_search
from .coloring import FAMILIES, dumps, load_coloring, make_family
from .geometry import Circle, Segment
from .line_disc import EXACT_CAP, line_lp, line_sup, max_segment_discrepancy, sampled_segment_sup, segment_discrepancy
from .spectral import PARSEVAL_CAP, decay_mass, parseval_check, ring_energy

SWEEP_MODES = ("seg-sup", "circ-sup", "lp", "line-sup")
SWEEP_COLUMNS = ("family", "N", "seed", "mode", "p", "value", "witness", "method", "elapsed_ms")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("usage", message, code=2)


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _round(obj):
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_round(obj))


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(code)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- sweep -------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Validated sweep parameters; one task per (N, seed)."""

    family: str
    Ns: list[int] = field(default_factory=list)
    seeds: list[int] = field(default_factory=lambda: [0])
    mode: str = "seg-sup"
    p: float = 1.0
    lp_kind: str = "line"
    trials: int = 20000
    exact_cap: int = EXACT_CAP
    center_step: float = 0.25
    radius_count: int = 32
    angular_nodes: int | None = None  # default 16 N
    jobs: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CliError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.mode not in SWEEP_MODES:
            raise CliError(f"unknown mode {self.mode!r}")
        if any(N < 1 for N in self.Ns):
            raise CliError("board sizes must be positive")
        if self.p < 1:
            raise CliError(f"p must be >= 1, got {self.p}")
        if self.lp_kind not in ("line", "circle"):
            raise CliError("lp kind must be line or circle")
        if self.trials < 1 or self.radius_count < 1 or not self.center_step > 0 or self.jobs < 1:
            raise CliError("trials, radius count, center step and jobs must be positive")
        if self.angular_nodes is not None and self.angular_nodes < 4:
            raise CliError("angular nodes must be >= 4")

    def tasks(self) -> list[tuple[int, int]]:
        seeds = self.seeds if self.family == "random" else self.seeds[:1]
        return [(N, s) for N in self.Ns for s in seeds]


def run_task(cfg: ExperimentConfig, N: int, seed: int) -> dict:
    c = make_family(cfg.family, N, seed)
    t0 = time.perf_counter()
    witness, method, p = "", "", ""
    if cfg.mode == "seg-sup":
        rep = (max_segment_discrepancy(c, cfg.exact_cap) if N <= cfg.exact_cap
               else sampled_segment_sup(c, cfg.trials, seed))
        value, witness, method = rep.value, to_json(rep.witness.to_json()), rep.method
    elif cfg.mode == "circ-sup":
        rep = circle_sup_search(c, cfg.center_step, cfg.radius_count)
        value, witness, method = rep.value, to_json(rep.witness.to_json()), rep.method
    elif cfg.mode == "line-sup":
        value, method = line_sup(c), "exact"
    else:
        p = cfg.p
        if cfg.lp_kind == "line":
            value, method = line_lp(c, cfg.p, cfg.angular_nodes or 16 * N), "line-quadrature"
        else:
            value, method = circle_lp(c, cfg.p), "circle-quadrature"
    elapsed = (time.perf_counter() - t0) * 1e3
    return {"family": cfg.family, "N": N, "seed": seed, "mode": cfg.mode, "p": p, "value": value,
            "witness": witness, "method": method, "elapsed_ms": elapsed}


def _run_star(args):
    return run_task(*args)


def run_sweep(cfg: ExperimentConfig) -> list[dict]:
    work = [(cfg, N, s) for N, s in cfg.tasks()]
    if cfg.jobs == 1 or len(work) <= 1:
        return [run_task(*w) for w in work]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
        return list(ex.map(_run_star, work))  # map keeps input order


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(to_json(r) + "\n" for r in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[k]) if isinstance(r[k], float) else r[k] for k in SWEEP_COLUMNS])
    return buf.getvalue()


# --- commands ----------------------------------------------------------------

def cmd_gen(args) -> None:
    if args.family not in FAMILIES:
        raise CliError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    if args.N < 1:
        raise CliError("N must be >= 1")
    _emit(dumps(make_family(args.family, args.N, args.seed)), args.out)


def cmd_disc(args) -> None:
    c = load_coloring(args.board)
    if args.segment:
        s = Segment(tuple(args.segment[:2]), tuple(args.segment[2:]))
        res = {"value": segment_discrepancy(c, s), "probe": s.to_json()}
    elif args.circle:
        k = Circle(tuple(args.circle[:2]), args.circle[2])
        res = {"value": circle_discrepancy(c, k), "probe": k.to_json()}
    elif args.sup == "segment":
        rep = (max_segment_discrepancy(c, args.exact_cap) if c.size <= args.exact_cap
               else sampled_segment_sup(c, args.trials, args.seed))
        res = rep.to_json()
    elif args.sup == "circle":
        res = circle_sup_search(c, args.center_step, args.radius_count).to_json()
    elif args.sup == "line":
        res = {"value": line_sup(c), "method": "exact"}
    else:
        raise CliError("give one of --segment, --circle or --sup")
    _emit(to_json(res) + "\n", args.out)


def _gap(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs)) if (lhs or rhs) else 0.0


def cmd_spectral(args) -> None:
    if args.check == "ring":
        if not (args.x > 0 and args.c1 > 1):
            raise CliError("ring needs x > 0 and c1 > 1")
        v = ring_energy(args.x, args.c1)
        res = {"check": "ring", "lhs": v, "rhs": calibration.RING_C2, "rel_gap": _gap(v, calibration.RING_C2)}
    else:
        if not args.board:
            raise CliError(f"{args.check} needs --board")
        c = load_coloring(args.board)
        if args.check == "parseval":
            if not args.t > 0:
                raise CliError("t must be positive")
            if c.size > PARSEVAL_CAP:
                raise CliError(f"parseval check limited to N <= {PARSEVAL_CAP}")
            lhs, rhs = parseval_check(c, args.t)
            res = {"check": "parseval", "t": args.t}
        else:
            a = args.a if args.a is not None else calibration.DECAY_A_LOW
            A = args.A if args.A is not None else calibration.DECAY_A_HIGH
            lhs, rhs = decay_mass(c, a, A), c.size**2 / 3
            res = {"check": "decay", "a": a, "A": A}
        res.update(lhs=lhs, rhs=rhs, rel_gap=_gap(lhs, rhs))
    _emit(to_json(res) + "\n", args.out)


def _report_json(r: hierarchy.LevelReport) -> dict:
    return {"level": r.level, "N": r.N, "max_found": r.max_found, "bound": r.bound, "passed": r.passed,
            "method": r.method, "retries": r.retries, "witness": r.witness}


def cmd_hier(args) -> None:
    if args.action == "build":
        try:
            spec = hierarchy.HierarchySpec(epsilon=args.epsilon, K=args.K, C_M=args.C_M, max_level=args.levels,
                                           seed=args.seed, retry_budget=args.retries)
        except ValueError as e:
            raise CliError(str(e)) from None
        h = hierarchy.build_hierarchy(spec)
        if args.out:
            hierarchy.dump(h, args.out)
        res = {"sizes": h.sizes, "levels": [_report_json(r) for r in h.verification], "dump": args.out}
        sys.stdout.write(to_json(res) + "\n")
        return
    if not args.dump:
        raise CliError(f"hier {args.action} needs --dump")
    h = hierarchy.load(args.dump)
    if args.action == "verify":
        reps = [hierarchy.verify_level(h, k) for k in range(1, h.spec.max_level + 1)]
        res = {"sizes": h.sizes, "levels": [_report_json(r) for r in reps], "passed": all(r.passed for r in reps)}
        _emit(to_json(res) + "\n", args.out)
    elif args.action == "query":
        if args.m is None or args.n is None:
            raise CliError("query needs --m and --n")
        _emit(to_json({"m": args.m, "n": args.n, "value": hierarchy.hier_cell(h, args.m, args.n)}) + "\n", args.out)
    else:  # dump a materialized level as a board file
        k = args.level or h.spec.max_level
        if not 1 <= k <= h.spec.max_level:
            raise CliError(f"level must lie in 1..{h.spec.max_level}")
        _emit(dumps(h.board(k)), args.out)


def cmd_sweep(args) -> None:
    cfg = ExperimentConfig(family=args.family, Ns=args.N, seeds=args.seeds or [args.seed], mode=args.mode,
                           p=args.p, lp_kind=args.lp_kind, trials=args.trials, center_step=args.center_step,
                           radius_count=args.radius_count, angular_nodes=args.angular_nodes, jobs=args.jobs)
    _emit(format_rows(run_sweep(cfg), args.format), args.out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    ap = _Parser(prog="checkerdisc", description="Segment and circle discrepancy of checkerboard colorings.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="write a board file")
    g.add_argument("family")
    g.add_argument("N", type=int)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("disc", parents=[common], help="discrepancy of one probe, or a supremum search")
    d.add_argument("board")
    probe = d.add_mutually_exclusive_group()
    probe.add_argument("--segment", nargs=4, type=float, metavar=("AX", "AY", "BX", "BY"))
    probe.add_argument("--circle", nargs=3, type=float, metavar=("CX", "CY", "T"))
    probe.add_argument("--sup", choices=("segment", "circle", "line"))
    d.add_argument("--exact-cap", type=int, default=EXACT_CAP)
    d.add_argument("--trials", type=int, default=20000)
    d.add_argument("--center-step", type=float, default=0.25)
    d.add_argument("--radius-count", type=int, default=32)
    d.set_defaults(func=cmd_disc)

    s = sub.add_parser("sweep", parents=[common], help="CSV sweep over board sizes and seeds")
    s.add_argument("--family", required=True)
    s.add_argument("--N", type=int, nargs="*", default=[])
    s.add_argument("--seeds", type=int, nargs="*")
    s.add_argument("--mode", choices=SWEEP_MODES, default="seg-sup")
    s.add_argument("--p", type=float, default=1.0)
    s.add_argument("--lp-kind", choices=("line", "circle"), default="line")
    s.add_argument("--trials", type=int, default=20000)
    s.add_argument("--center-step", type=float, default=0.25)
    s.add_argument("--radius-count", type=int, default=32)
    s.add_argument("--angular-nodes", type=int)
    s.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("spectral", parents=[common], help="Fourier-side checks")
    sp.add_argument("check", choices=("parseval", "decay", "ring"))
    sp.add_argument("--board")
    sp.add_argument("--t", type=float, default=1.5)
    sp.add_argument("--a", type=float)
    sp.add_argument("--A", type=float)
    sp.add_argument("--x", type=float, default=1.0)
    sp.add_argument("--c1", type=float, default=2.0)
    sp.set_defaults(func=cmd_spectral)

    h = sub.add_parser("hier", parents=[common], help="hierarchical construction")
    h.add_argument("action", choices=("build", "verify", "query", "dump"))
    h.add_argument("--dump", help="hierarchy dump to read")
    h.add_argument("--epsilon", type=float, default=0.25)
    h.add_argument("--K", type=float, default=500.0)
    h.add_argument("--C-M", dest="C_M", type=float, default=1.0)
    h.add_argument("--levels", type=int, default=3)
    h.add_argument("--retries", type=int, default=200)
    h.add_argument("--m", type=int)
    h.add_argument("--n", type=int)
    h.add_argument("--level", type=int)
    h.set_defaults(func=cmd_hier)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        args.func(args)
    except CliError as e:
        _fail("invalid-argument", str(e))
    except hierarchy.HierarchyError as e:
        _fail("hierarchy-failure", str(e))
    except (OSError, ValueError) as e:
        _fail(type(e).__name__, str(e))
    return 0


if __name__ == "__main__":
    sys.exit(main())
