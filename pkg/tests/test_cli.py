import json

import pytest

from booldim.cli import main
from booldim.poset import parse_poset


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_standard(work, capsys):
    code, out, _ = run(capsys, "gen", "standard", "3")
    assert code == 0
    P = parse_poset(out)
    assert P.n == 6 and len(P.covers) == 6


def test_gen_too_small(work, capsys):
    code, _, err = run(capsys, "gen", "standard", "1")
    assert code == 2 and "n >= 2" in err


def test_bad_arguments_exit_2(work, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "nonsense", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["build", "x.poset", "--unknown-flag"])
    assert exc.value.code == 2


def test_gen_deterministic(work, capsys):
    assert run(capsys, "gen", "random-tw", "40", "3", "7", "-o", "a")[0] == 0
    assert run(capsys, "gen", "random-tw", "40", "3", "7", "-o", "b")[0] == 0
    assert (work / "a.poset").read_bytes() == (work / "b.poset").read_bytes()
    assert (work / "a.td").read_bytes() == (work / "b.td").read_bytes()


def test_build_query_verify(work, capsys):
    run(capsys, "gen", "standard", "5", "-o", "s5")
    code, out, _ = run(capsys, "build", "s5.poset", "-o", "r.json")
    assert code == 0 and "permutations=" in out and "bound=" in out
    first = (work / "r.json").read_bytes()
    code, out, _ = run(capsys, "--json", "build", "s5.poset", "-o", "r.json")
    stats = json.loads(out)
    assert stats["permutations"] <= int(stats["paper_bound"])
    assert (work / "r.json").read_bytes() == first
    assert run(capsys, "query", "r.json", "1", "1")[1].strip() == "1"
    assert run(capsys, "query", "r.json", "1", "6")[1].strip() == "0"
    assert run(capsys, "query", "r.json", "1", "7")[1].strip() == "1"
    assert run(capsys, "query", "r.json", "1", "99")[0] == 2
    code, out, _ = run(capsys, "verify", "s5.poset", "r.json")
    assert code == 0 and out.startswith("PASS")


def test_verify_mismatch_exit_4(work, capsys):
    run(capsys, "gen", "kelly", "4", "-o", "k")
    run(capsys, "build", "k.poset", "--td", "k.td", "-o", "r.json")
    doc = json.loads((work / "r.json").read_text())
    doc["permutations"][3] = doc["permutations"][3][::-1]
    (work / "bad.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--json", "verify", "k.poset", "bad.json")
    assert code == 4 and json.loads(out)["passed"] is False


def test_invalid_td_exit_3(work, capsys):
    run(capsys, "gen", "kelly", "3", "-o", "k")
    (work / "bad.td").write_text("s td 1 1 10\nb 1 1\n")
    code, _, err = run(capsys, "build", "k.poset", "--td", "bad.td", "-o", "r.json")
    assert code == 3 and "property (1)" in err
    code, out, _ = run(capsys, "decompose", "k.poset", "--td", "bad.td")
    assert code == 3
    code, out, _ = run(capsys, "decompose", "k.poset", "--td", "k.td")
    assert code == 0 and out.startswith("valid")
    (work / "broken.td").write_text("s td 1 1 10\nb 1 x\n")
    assert run(capsys, "build", "k.poset", "--td", "broken.td", "-o", "r.json")[0] == 3


def test_decompose_writes_td(work, capsys):
    run(capsys, "gen", "random-tw", "30", "2", "1", "-o", "g")
    code, out, _ = run(capsys, "decompose", "g.poset")
    assert code == 0 and out.startswith("s td ")


def test_label_and_decode(work, capsys):
    run(capsys, "gen", "digraph", "40", "2", "5", "-o", "g")
    code, out, _ = run(capsys, "--json", "label", "g.dg", "-o", "g.lab", "--descriptor", "g.desc")
    info = json.loads(out)
    assert code == 0 and info["bits_per_label"] > 0
    labels = dict(line.split() for line in (work / "g.lab").read_text().splitlines())
    assert run(capsys, "decode", "g.desc", labels["1"], labels["1"])[1].strip() == "1"
    assert run(capsys, "decode", "g.desc", "zz", labels["1"])[0] == 2


def test_stats_writes_table_and_figure(work, capsys):
    code, out, _ = run(capsys, "stats", "--family", "kelly", "--n", "3..5", "--tsv", "--out-dir", "st")
    assert code == 0
    rows = (work / "st" / "stats.tsv").read_text().splitlines()
    assert rows[0].split("\t")[0] == "family" and len(rows) == 4
    assert (work / "st" / "permutations.png").stat().st_size > 1000
    assert run(capsys, "stats", "--n", "a..b")[0] == 2


def test_selftest(work, capsys):
    code, out, _ = run(capsys, "--json", "selftest")
    assert code == 0 and json.loads(out)["passed"] is True
