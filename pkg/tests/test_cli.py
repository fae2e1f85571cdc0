import json
import subprocess
import sys
from collections import defaultdict

import pytest

from chromafun.cache import CACHE_VERSION, PersistentCache
from chromafun.chromatic import IntPolynomial, chromatic_polynomial
from chromafun.cli import RunConfig, main
from chromafun.graph import complete_graph, cycle_graph, path_graph, star_graph
from chromafun.graph6 import emit_graph6

import oracles

P4, C4, P5, STAR = (emit_graph6(g) for g in (path_graph(4), cycle_graph(4), path_graph(5), star_graph(4)))


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ={} if environ is None else environ)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def test_chrompoly(capsys):
    code, out, _ = run(capsys, "chrompoly", "Bw")
    assert code == 0
    assert out["polynomial"] == {"coeffs": ["0", "2", "-3", "1"]}
    code, out, _ = run(capsys, "chrompoly", P5)
    expected = IntPolynomial((0, 1))
    for _ in range(4):
        expected = expected * IntPolynomial((-1, 1))
    assert IntPolynomial.from_json(out["polynomial"]) == expected
    assert out["chromatic_number"] == 2


def test_chrompoly_exit_codes(capsys):
    k13 = emit_graph6(complete_graph(13))
    code, _, err = run(capsys, "chrompoly", k13)
    assert code == 3 and "limit" in err
    code, _, _ = run(capsys, "chrompoly", k13, "--limit", "13")
    assert code == 0
    code, _, err = run(capsys, "chrompoly", "Bx")
    assert code == 2 and "byte" in err


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", P5, STAR)
    assert code == 0 and out["equivalent"] is True
    code, out, _ = run(capsys, "equiv", P4, C4)
    assert out["equivalent"] is False and out["first_difference"] is not None
    code, out, _ = run(capsys, "equiv", C4, C4)
    assert out["equivalent"] is True and out["first_difference"] is None


def test_natiso(capsys):
    code, out, _ = run(capsys, "natiso", C4, C4, "--max-colors", "3")
    assert code == 0
    assert all(i == j for pairs in out["matching"].values() for i, j in pairs)
    code, out, _ = run(capsys, "natiso", P5, STAR, "--max-colors", "5")
    assert code == 0 and out["certificate"]["natural"] and out["certificate"]["failures"] == 0
    code, _, err = run(capsys, "natiso", P4, C4)
    assert code == 4 and "St_" in err


def test_strip(capsys):
    code, out, _ = run(capsys, "strip", "fig3-g2", "3")
    assert out["cardinality"] == {"finite": "6"} and len(out["colorings"]) == 6 and out["proper_on_probe"]
    code, out, _ = run(capsys, "strip", "fig3-g1", "3")
    assert out["cardinality"] == "continuum" and out["witness"]["proper_on_probe"]
    code, out, _ = run(capsys, "strip", "natural-tree", "2")
    assert out["cardinality"] == {"finite": "2"}
    code, out, _ = run(capsys, "strip", "natural-wheel", "2")
    assert out["cardinality"] == {"finite": "2"} and out["chromatic_number"] == 2
    spec = json.dumps({"cell": 1, "intra": [], "inter": [[0, 0]], "two_way": True})
    code, out, _ = run(capsys, "strip", spec, "2")
    assert out["cardinality"] == {"finite": "2"}
    code, _, _ = run(capsys, "strip", "nonsense", "2")
    assert code == 2
    code, _, _ = run(capsys, "strip", "fig3-g3", "40")
    assert code == 3


def write_lines(tmp_path, lines, name="corpus.g6"):
    p = tmp_path / name
    p.write_text("".join(line + "\n" for line in lines))
    return str(p)


def test_corpus_trees(capsys, tmp_path):
    lines = [emit_graph6(t) for t in oracles.trees(5)]
    code, out, _ = run(capsys, "corpus", write_lines(tmp_path, lines))
    assert code == 0
    assert len(out["classes"]) == 1 and out["classes"][0]["size"] == 3


def test_corpus_four_vertex_graphs(capsys, tmp_path):
    graphs = [g for g in oracles.atlas(4) if g.vertex_count == 4]
    assert len(graphs) == 11
    lines = [emit_graph6(g) for g in graphs]
    code, out, _ = run(capsys, "corpus", write_lines(tmp_path, lines))
    expected = defaultdict(list)
    for k, g in enumerate(graphs, start=1):
        counts = tuple(oracles.count_colorings(g, n) for n in range(5))
        expected[counts].append(k)
    ours = sorted(sorted(m["line"] for m in c["members"]) for c in out["classes"])
    assert ours == sorted(expected.values())


def test_corpus_empty_and_errors(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", write_lines(tmp_path, []))
    assert code == 0 and out == {"graphs": 0, "classes": [], "errors": []}
    code, out, _ = run(capsys, "corpus", write_lines(tmp_path, ["Bw", "Bx", "A_"], "bad.g6"))
    assert code == 2
    assert [e["line"] for e in out["errors"]] == [2]
    assert out["graphs"] == 2


def test_corpus_is_deterministic(capsys, tmp_path):
    lines = [emit_graph6(g) for g in oracles.atlas(5)]
    path = write_lines(tmp_path, lines)
    first = run(capsys, "corpus", path, "--jobs", "1")[1]
    second = run(capsys, "corpus", path, "--jobs", "8")[1]
    assert first == second


def test_table_format(capsys):
    code, out, _ = run(capsys, "equiv", P4, C4, "--format", "table")
    assert code == 0 and "equivalent: false" in out


def test_cbs_command(capsys):
    c5 = emit_graph6(cycle_graph(5))
    code, out, _ = run(capsys, "cbs", c5, c5, "--phi", "1,2,3,4,0", "--psi", "2,3,4,0,1", "--m", "3", "--n", "4")
    assert code == 0
    assert len(out["bijections"]["3"]) == 30 and len(out["bijections"]["4"]) == 240
    code, _, _ = run(capsys, "cbs", c5, c5, "--phi", "0,0,0,0,0", "--psi", "0,1,2,3,4", "--m", "1", "--n", "2")
    assert code == 4


def test_cache_roundtrip(capsys, tmp_path):
    cache = tmp_path / "poly.cache"
    g = emit_graph6(cycle_graph(7))
    plain = run(capsys, "chrompoly", g)[1]
    cached = run(capsys, "chrompoly", g, "--cache", str(cache))[1]
    again = run(capsys, "chrompoly", g, "--cache", str(cache))[1]
    assert plain == cached == again
    lines = cache.read_text().splitlines()
    assert lines[0] == CACHE_VERSION and len(lines) > 1


def test_cache_env_overrides_flag(capsys, tmp_path):
    env_path, flag_path = tmp_path / "env.cache", tmp_path / "flag.cache"
    run(capsys, "chrompoly", emit_graph6(cycle_graph(6)), "--cache", str(flag_path), environ={"CHROMAFUN_CACHE": str(env_path)})
    assert env_path.exists() and not flag_path.exists()
    cfg = RunConfig(cache_path=None)
    assert cfg.vertex_limit == 12
    with pytest.raises(ValueError):
        RunConfig(vertex_limit=0)


def test_cache_corrupt_tail_is_truncated(tmp_path):
    path = tmp_path / "c.cache"
    good = f"{CACHE_VERSION}\nBw\t0,2,-3,1\n"
    path.write_text(good + "A_\t0,-1,1\nC~\t0,1,x\n" + "D??\t0,0")
    c = PersistentCache(path)
    assert len(c) == 2
    assert c.get("Bw") == chromatic_polynomial(complete_graph(3))
    assert path.read_text() == good + "A_\t0,-1,1\n"


def test_cache_version_mismatch_resets(tmp_path):
    path = tmp_path / "c.cache"
    path.write_text("chromafun-cache v0\nBw\t0,2,-3,1\n")
    c = PersistentCache(path)
    assert len(c) == 0
    assert path.read_text() == CACHE_VERSION + "\n"


def test_cache_on_off_bit_identical(capsys, tmp_path):
    cache = str(tmp_path / "x.cache")
    for g in oracles.atlas(6)[::25]:
        text = emit_graph6(g) if g.vertex_count else None
        if text is None:
            continue
        a = run(capsys, "chrompoly", text)[1]
        b = run(capsys, "chrompoly", text, "--cache", cache)[1]
        assert a == b


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "chromafun.cli", "chrompoly", "Bw"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["text"] == "t^3 - 3*t^2 + 2*t"
