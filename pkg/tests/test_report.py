import csv

from booldim import report
from booldim.realizer import paper_bound


def test_magnitude():
    assert report.magnitude(6266) == "6266"
    assert report.magnitude(paper_bound(1)) == "~2^52"
    assert report.magnitude(paper_bound(5)).startswith("~2^")


def test_collect_table_and_figure(tmp_path):
    rows = report.collect("kelly", [3, 4]) + report.collect("standard-4", [2, 3])
    assert all(r.verified for r in rows)
    assert [r.permutations for r in rows if r.family == "standard-4"] == [4, 4]
    path = report.write_table(rows, tmp_path / "t.csv")
    with path.open() as fh:
        got = list(csv.DictReader(fh))
    assert [g["family"] for g in got] == ["kelly", "kelly", "standard-4", "standard-4"]
    fig = report.plot_counts(rows, tmp_path / "f.png")
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
