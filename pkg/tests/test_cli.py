import json

from mwisp.cli import main
from mwisp.instance import parse
from mwisp.perturb import collinear_triples


def run(*argv):
    return main([str(a) for a in argv])


def test_generate_perturb_solve(tmp_path):
    raw, gp, sol = tmp_path / "raw.json", tmp_path / "gp.json", tmp_path / "sol.json"
    assert run("generate", "--n", 5, "--N", 24, "--seed", 3, "-o", raw) == 0
    before = raw.read_text()
    assert run("perturb", "-i", raw, "-o", gp) == 0
    assert raw.read_text() == before
    assert collinear_triples(parse(gp.read_text()).vertices()) == []
    assert run("solve", "--k", 12, "--ell", 4, "-i", gp, "-o", sol) == 0
    out = json.loads(sol.read_text())
    assert set(out) == {"chosen", "weight", "stats"}
    assert run("oracle", "-i", gp, "-o", tmp_path / "opt.json") == 0


def test_cheap_cut_and_partition(tmp_path):
    raw, tris = tmp_path / "raw.json", tmp_path / "tris.json"
    run("generate", "--kind", "disjoint_triangles", "--n", 8, "--N", 64, "-o", raw)
    run("perturb", "-i", raw, "-o", tris)
    cut = tmp_path / "cut.json"
    assert run("cheap-cut", "--delta", "1/4", "-i", tris, "-o", cut, "--svg", tmp_path / "cut.svg") == 0
    assert json.loads(cut.read_text())["report"]["checks"]["cheap"] is True
    assert run("partition", "--delta", "1/4", "-i", tris, "-o", tmp_path / "p.json",
               "--svg", tmp_path / "p.svg") == 0
    assert run("separator", "--delta", "1/4", "--kbar", 2, "-i", tris, "-o", tmp_path / "s.json") == 0
    assert (tmp_path / "p.svg").read_text().startswith("<svg")


def test_validation_errors_exit_one(tmp_path, capsys):
    raw = tmp_path / "raw.json"
    run("generate", "--kind", "disjoint_triangles", "--n", 4, "--N", 64, "-o", raw)
    assert run("partition", "--delta", "0.25", "-i", raw) == 1
    assert run("partition", "--delta", "1/2", "-i", raw) == 1
    assert run("solve", "-i", tmp_path / "missing.json") == 1
    assert "error" in capsys.readouterr().err


def test_overlapping_triangles_exit_one(tmp_path):
    raw = tmp_path / "raw.json"
    run("generate", "--kind", "triangles", "--n", 8, "--N", 16, "--seed", 1, "-o", raw)
    assert run("partition", "--delta", "1/4", "-i", raw) == 1


def test_bench_and_render(tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"n": 3, "seeds": [0, 1]}))
    out = tmp_path / "r.csv"
    assert run("bench", "--suite", suite, "--out", out) == 0
    assert out.read_text().count("\n") == 7
    raw = tmp_path / "raw.json"
    run("generate", "-o", raw)
    assert run("render", "-i", raw, "--svg", tmp_path / "i.svg") == 0


def test_invariant_violation_exits_two(tmp_path, monkeypatch):
    from mwisp import partition

    def broken(ts, delta):
        raise partition.WalkDiverged("walk left the square")

    raw = tmp_path / "raw.json"
    run("generate", "--kind", "disjoint_triangles", "--n", 4, "--N", 64, "-o", raw)
    monkeypatch.setattr(partition, "build_subdivision", broken)
    assert run("partition", "--delta", "1/4", "-i", raw) == 2
