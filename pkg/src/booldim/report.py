"""Size statistics over generated families: delimited tables and figures."""
from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import generators  # noqa: E402
from .oracle import verify_all_pairs  # noqa: E402
from .realizer import build_realizer, paper_bound, standard_example_realizer  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (7.0, 3.0),
    "savefig.dpi": 120,
}

FAMILIES = ("kelly", "random-tw", "standard", "standard-4")


@dataclass
class StatsRow:
    family: str
    n: int
    elements: int
    k: int
    permutations: int
    realized_signatures: int
    program_nodes: int
    verified: bool
    build_s: float


def _instance(family: str, n: int, k: int, seed: int):
    if family == "kelly":
        return generators.gen_kelly(n)
    if family == "random-tw":
        return generators.gen_random_bounded_tw(n, k, seed)
    if family in ("standard", "standard-4"):
        return generators.gen_standard_example(n)
    raise ValueError(f"unknown family {family!r}")


def collect(family: str, ns, k: int = 2, seed: int = 0) -> list[StatsRow]:
    rows = []
    for n in ns:
        out = _instance(family, n, k, seed)
        t0 = time.perf_counter()
        if family == "standard-4":
            R = standard_example_realizer(n)
        else:
            R = build_realizer(out.poset, out.decomposition)
        dt = time.perf_counter() - t0
        ok = verify_all_pairs(out.poset, R).passed
        rows.append(StatsRow(family, n, out.poset.n, R.k, len(R.permutations),
                             int(R.metadata.get("realized_signatures", 0)),
                             len(R.program.nodes), ok, round(dt, 4)))
    return rows


def magnitude(value: int) -> str:
    """Short text for a possibly astronomically large integer."""
    if value < 10 ** 6:
        return str(value)
    return f"~2^{value.bit_length() - 1}"


def write_table(rows: list[StatsRow], path, delimiter: str = ",") -> Path:
    path = Path(path)
    fields = list(StatsRow.__dataclass_fields__)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, delimiter=delimiter, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))
    return path


def plot_counts(rows: list[StatsRow], path) -> Path:
    """Permutation count and realized-signature count against n."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2)
        for fam in sorted({r.family for r in rows}):
            sub = sorted((r for r in rows if r.family == fam), key=lambda r: r.n)
            xs = [r.n for r in sub]
            ax1.plot(xs, [r.permutations for r in sub], marker="o", ms=3, label=fam)
            ax2.plot(xs, [r.realized_signatures for r in sub], marker="s", ms=3, label=fam)
        ks = sorted({r.k for r in rows})
        ax1.set_xlabel("n")
        ax1.set_ylabel("permutations")
        ax1.set_title(f"width {','.join(map(str, ks))}; worst case for k={ks[0]}: "
                      f"{magnitude(paper_bound(ks[0]))}", fontsize=8)
        ax2.set_xlabel("n")
        ax2.set_ylabel("realized signatures")
        ax1.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
