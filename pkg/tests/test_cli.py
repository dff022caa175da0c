import csv
import io
import json
import math

import pytest

from checkerdisc import hierarchy
from checkerdisc.cli import ExperimentConfig, CliError, main
from checkerdisc.coloring import dumps, load_coloring, make_constant, make_parity, make_random, make_striped
from checkerdisc.geometry import Segment
from checkerdisc.line_disc import line_lp, segment_discrepancy


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fail(capsys, *argv):
    with pytest.raises(SystemExit) as e:
        main([str(a) for a in argv])
    assert e.value.code != 0
    return json.loads(capsys.readouterr().err)


def test_gen_striped_stdout(capsys):
    _, out, _ = run(capsys, "gen", "striped", 4)
    assert out == dumps(make_striped(4))
    assert out.splitlines()[1:] == ["++++", "----", "++++", "----"]


def test_gen_random_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "gen", "random", 8, "--seed", 7, "--out", a)
    run(capsys, "gen", "random", 8, "--seed", 7, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert load_coloring(a) == make_random(8, 7)


def test_gen_round_trip(capsys, tmp_path):
    p = tmp_path / "p.txt"
    run(capsys, "gen", "parity", 2, "--out", p)
    assert load_coloring(p) == make_parity(2)


def test_gen_bad_family(capsys):
    err = fail(capsys, "gen", "zebra", 4)
    assert err["error"] == "invalid-argument" and "zebra" in err["message"]


def board(tmp_path, c, name="b.txt"):
    p = tmp_path / name
    p.write_text(dumps(c))
    return p


def test_disc_segment(capsys, tmp_path):
    p = board(tmp_path, make_constant(4))
    _, out, _ = run(capsys, "disc", p, "--segment", 0.5, 0.5, 2.5, 0.5)
    assert json.loads(out)["value"] == 2.0


def test_disc_circle(capsys, tmp_path):
    p = board(tmp_path, make_parity(4))
    _, out, _ = run(capsys, "disc", p, "--circle", 1, 1, 0.5)
    assert abs(json.loads(out)["value"]) < 1e-12


def test_disc_agrees_with_library(capsys, tmp_path):
    c = make_random(9, 3)
    p = board(tmp_path, c)
    _, out, _ = run(capsys, "disc", p, "--segment", 0.3, 1.1, 8.2, 6.9)
    lib = segment_discrepancy(c, Segment((0.3, 1.1), (8.2, 6.9)))
    assert f'"value": {float(format(lib, ".12g"))}' in out


def test_disc_sup_report(capsys, tmp_path):
    p = board(tmp_path, make_constant(4))
    _, out, _ = run(capsys, "disc", p, "--sup", "segment")
    d = json.loads(out)
    assert d["method"] == "exact" and d["value"] == pytest.approx(4 * math.sqrt(2))


def test_disc_missing_file(capsys, tmp_path):
    err = fail(capsys, "disc", tmp_path / "none.txt", "--segment", 0, 0, 1, 1)
    assert err["error"] == "FileNotFoundError"


def test_sweep_header_only_for_empty_list(capsys):
    _, out, _ = run(capsys, "sweep", "--family", "random", "--mode", "seg-sup")
    assert out == "family,N,seed,mode,p,value,witness,method,elapsed_ms\n"


def test_sweep_rows(capsys):
    _, out, _ = run(capsys, "sweep", "--family", "random", "--N", 4, 6, "--seeds", 0, 1, "--mode", "seg-sup")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["N"], r["seed"]) for r in rows] == [("4", "0"), ("4", "1"), ("6", "0"), ("6", "1")]
    assert all(r["method"] == "exact" and json.loads(r["witness"]) for r in rows)


def test_sweep_lp_ordered_with_jobs(capsys):
    argv = ["sweep", "--family", "striped", "--N", 16, 8, 32, "--mode", "lp", "--p", 1]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", 2)
    strip = lambda text: [r[:-1] for r in csv.reader(io.StringIO(text))]  # drop timing
    assert strip(serial) == strip(parallel)
    rows = list(csv.DictReader(io.StringIO(serial)))
    assert [r["N"] for r in rows] == ["16", "8", "32"]
    for r in rows:
        ref = line_lp(make_striped(int(r["N"])), 1.0, 16 * int(r["N"]))
        assert r["value"] == format(ref, ".12g")


def test_sweep_json_format(capsys):
    _, out, _ = run(capsys, "sweep", "--family", "parity", "--N", 4, "--mode", "line-sup", "--format", "json")
    d = json.loads(out)
    assert d["value"] == pytest.approx(4 * math.sqrt(2))


def test_sweep_invalid_p(capsys):
    err = fail(capsys, "sweep", "--family", "parity", "--N", 4, "--mode", "lp", "--p", 0.5)
    assert "p must be" in err["message"]


def test_config_validation():
    with pytest.raises(CliError):
        ExperimentConfig(family="parity", Ns=[0])
    with pytest.raises(CliError):
        ExperimentConfig(family="parity", mode="bogus")
    assert ExperimentConfig(family="parity", Ns=[4], seeds=[1, 2]).tasks() == [(4, 1)]


def test_spectral_checks(capsys, tmp_path):
    p = board(tmp_path, make_parity(4))
    _, out, _ = run(capsys, "spectral", "parseval", "--board", p, "--t", 1.5)
    d = json.loads(out)
    assert set(d) >= {"lhs", "rhs", "rel_gap"} and d["rel_gap"] <= 0.02
    _, out, _ = run(capsys, "spectral", "ring", "--x", 2.0)
    d = json.loads(out)
    assert d["lhs"] >= d["rhs"] > 0
    _, out, _ = run(capsys, "spectral", "decay", "--board", board(tmp_path, make_random(8, 0), "r.txt"))
    d = json.loads(out)
    assert d["lhs"] >= d["rhs"] == pytest.approx(64 / 3)


def test_spectral_guard(capsys, tmp_path):
    err = fail(capsys, "spectral", "parseval", "--board", board(tmp_path, make_constant(20)), "--t", 1)
    assert "N <= 16" in err["message"]


def test_hier_build_verify_query(capsys, tmp_path):
    dump = tmp_path / "h.json"
    _, out, _ = run(capsys, "hier", "build", "--epsilon", 0.25, "--levels", 3, "--seed", 1, "--out", dump)
    built = json.loads(out)
    assert built["sizes"] == [2, 6, 30] and all(r["passed"] for r in built["levels"])
    h = hierarchy.load(dump)
    ref = hierarchy.build_hierarchy(hierarchy.HierarchySpec(epsilon=0.25, max_level=3, seed=1))
    assert all((a == b).all() for a, b in zip(h.sign_matrices, ref.sign_matrices))
    _, out, _ = run(capsys, "hier", "verify", "--dump", dump)
    d = json.loads(out)
    assert d["passed"]
    for r in d["levels"]:
        assert r["bound"] == pytest.approx(500 * r["N"] ** 0.75 / 100)
    _, out, _ = run(capsys, "hier", "query", "--dump", dump, "--m", 0, "--n", 0)
    assert json.loads(out)["value"] == 1
    _, out, _ = run(capsys, "hier", "dump", "--dump", dump, "--level", 2)
    assert out.startswith("N 6 ")


def test_hier_errors(capsys, tmp_path):
    err = fail(capsys, "hier", "build", "--K", 10, "--levels", 2)
    assert err["error"] == "hierarchy-failure" and "level 1" in err["message"]
    dump = tmp_path / "h.json"
    run(capsys, "hier", "build", "--levels", 2, "--out", dump)
    err = fail(capsys, "hier", "query", "--dump", dump, "--m", 50, "--n", 0)
    assert "extend levels" in err["message"]


def test_usage_error_is_json(capsys):
    err = fail(capsys, "nonsense")
    assert err["error"] == "usage"
