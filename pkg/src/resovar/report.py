"""Report rendering: JSON documents, delimited summaries, and figures.

Every CLI command builds one report dict with a ``kind`` tag.  The JSON
payload (minus the ``timings`` section) is deterministic for fixed inputs
and seed; the CSV flattens the same payload into section/key/value rows,
and each kind that has something worth looking at gets a matplotlib
figure rendered next to the delimited file.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def report_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def flatten(doc, prefix=""):
    rows = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            rows.extend(flatten(doc[key], f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(doc, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in doc):
            rows.append((prefix, " ".join(str(x) for x in doc)))
        else:
            for i, item in enumerate(doc):
                rows.extend(flatten(item, f"{prefix}[{i}]"))
    else:
        rows.append((prefix, doc))
    return rows


def write_csv(doc, path: Path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        for key, value in flatten(doc):
            writer.writerow([key, value])


# -- figures -------------------------------------------------------------------


def _fig_scan(doc, out_dir: Path):
    points = doc["scan"]
    xs = [float(eval_fraction(p["t"])) for p in points]
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    xs = [xs[i] for i in order]
    dims = [points[i]["dims_h"] for i in order]
    degrees = range(len(dims[0]))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k in degrees:
        ax.plot(xs, [d[k] for d in dims], marker="o", label=f"dim H^{k}")
    ax.set_xlabel("t")
    ax.set_ylabel("twisted Betti number")
    ax.set_title("covariant cohomology along the scan")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = out_dir / "resonance_scan.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def eval_fraction(s):
    s = str(s)
    if "/" in s:
        num, den = s.split("/")
        return float(num) / float(den)
    return float(s)


def _circular_layout(n):
    return [
        (math.cos(2 * math.pi * i / n - math.pi / 2),
         math.sin(2 * math.pi * i / n - math.pi / 2))
        for i in range(n)
    ]


def _fig_graph_decomposition(doc, out_dir: Path):
    graph = doc["graph"]
    names = graph["vertices"]
    n = len(names)
    pos = _circular_layout(max(n, 1))
    index = {nm: i for i, nm in enumerate(names)}
    comps = doc["components"]
    ncols = max(len(comps), 1)
    fig, axes = plt.subplots(1, ncols + 1, figsize=(2.4 * (ncols + 1), 2.8))
    if ncols == 0:
        axes = [axes]
    base = axes[0]
    for u, v in graph["edges"]:
        x = [pos[index[u]][0], pos[index[v]][0]]
        y = [pos[index[u]][1], pos[index[v]][1]]
        base.plot(x, y, color="gray", zorder=1)
    base.scatter(*zip(*pos), s=160, color="lightsteelblue", zorder=2)
    for nm, (x, y) in zip(names, pos):
        base.annotate(nm, (x, y), ha="center", va="center", fontsize=7)
    base.set_title("graph", fontsize=9)
    base.axis("off")
    base.set_aspect("equal")
    for ax, comp in zip(axes[1:], comps):
        members = set(comp["vertices"])
        colors = ["indianred" if nm in members else "gainsboro" for nm in names]
        for u, v in graph["edges"]:
            x = [pos[index[u]][0], pos[index[v]][0]]
            y = [pos[index[u]][1], pos[index[v]][1]]
            ax.plot(x, y, color="lightgray", zorder=1)
        ax.scatter(*zip(*pos), s=160, color=colors, zorder=2)
        for nm, (x, y) in zip(names, pos):
            ax.annotate(nm, (x, y), ha="center", va="center", fontsize=7)
        ax.set_title(f"{comp['label']}\ndim {comp['dim']}", fontsize=8)
        ax.axis("off")
        ax.set_aspect("equal")
    fig.tight_layout()
    path = out_dir / "decomposition.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _fig_suite(doc, out_dir: Path):
    rows = doc["criteria"]
    per = doc.get("timings", {}).get("per_criterion", {})
    names = [f"{r['index']:02d} {r['name']}" for r in rows]
    seconds = [per.get(str(r["index"]), 0.0) for r in rows]
    colors = ["seagreen" if r["passed"] else "firebrick" for r in rows]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(rows) + 1.2))
    ax.barh(range(len(rows)), seconds, color=colors)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    status = "all passed" if doc["passed"] else "FAILURES PRESENT"
    ax.set_title(f"acceptance suite, seed {doc['seed']}: {status}", fontsize=10)
    fig.tight_layout()
    path = out_dir / "suite_timings.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _fig_grid(doc, out_dir: Path):
    fig, ax = plt.subplots(figsize=(4.2, 3))
    labels = ["grid points", "flat", "in S-union"]
    counts = [doc["points"], doc["flat_points"], doc["union_points"]]
    ax.bar(labels, counts, color=["steelblue", "seagreen", "goldenrod"])
    ax.set_yscale("log")
    for i, c in enumerate(counts):
        ax.annotate(str(c), (i, c), ha="center", va="bottom", fontsize=8)
    verdict = "equal" if doc["flat_points"] == doc["union_points"] and doc["ok"] else "MISMATCH"
    ax.set_title(f"flat locus vs closed form: {verdict}", fontsize=10)
    fig.tight_layout()
    path = out_dir / "grid_verify.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _fig_aomoto(doc, out_dir: Path):
    dims = doc["dims_h"]
    fig, ax = plt.subplots(figsize=(4, 2.8))
    ax.bar(range(len(dims)), dims, color="steelblue")
    ax.set_xticks(range(len(dims)))
    ax.set_xlabel("degree")
    ax.set_ylabel("dim H")
    ax.set_title("twisted cohomology dimensions", fontsize=10)
    fig.tight_layout()
    path = out_dir / "aomoto_dims.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


_FIGURES = {
    "scan": _fig_scan,
    "raag_decomposition": _fig_graph_decomposition,
    "suite": _fig_suite,
    "grid_verify": _fig_grid,
    "aomoto": _fig_aomoto,
}


def write_report(doc, json_out=None, report_dir=None, quiet=False):
    """Write the JSON document and, under report_dir, CSV plus figures."""
    text = report_json(doc)
    written = []
    if json_out:
        Path(json_out).write_text(text)
        written.append(Path(json_out))
    if report_dir:
        out = Path(report_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        written.append(out / "report.json")
        write_csv(doc, out / "report.csv")
        written.append(out / "report.csv")
        maker = _FIGURES.get(doc.get("kind"))
        if maker:
            written.extend(maker(doc, out))
    if not quiet and written:
        for path in written:
            print(f"wrote {path}")
    return written
