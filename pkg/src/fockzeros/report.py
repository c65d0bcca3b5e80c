"""Bundle saved run artifacts into one summary (JSON + CSV) with figures.

Consumes the files the CLI writes — ``*.report.json`` condition tables,
``*.norm.json`` ladder estimates, ``*.grid.csv`` evaluation grids,
``*.points.json`` point sets, and ``r,value`` radial curves — and renders
each to a PNG next to a machine-readable roll-up.  Rendering uses the Agg
backend only; nothing opens a window.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

__all__ = ["bundle_report"]


def _strip_suffix(name: str) -> tuple[str, str]:
    for suffix, kind in ((".report.json", "report"), (".norm.json", "norm"),
                         (".grid.csv", "grid"), (".points.json", "points"),
                         (".manifest.json", "manifest"),
                         (".envelope.json", "envelope")):
        if name.endswith(suffix):
            return name[: -len(suffix)], kind
    if name.endswith(".csv"):
        return name[:-4], "radial"
    if name.endswith(".json"):
        return name[:-5], "json"
    return name, "unknown"


def _sniff_json(doc) -> str:
    if isinstance(doc, dict):
        if "conditions" in doc and "verdict" in doc:
            return "report"
        if "partials" in doc and "verdict" in doc:
            return "norm"
        if "entries" in doc and "family" in doc:
            return "points"
        if "exponents" in doc:
            return "envelope"
    return "unknown"


def _plot_report(plt, doc, path: Path):
    conds = doc["conditions"]
    names = [c["name"] for c in conds]
    vals = [0.0 if c["value"] is None else float(c["value"]) for c in conds]
    ok = [bool(c["pass"]) for c in conds]
    fig, ax = plt.subplots(figsize=(7.0, 0.8 + 0.55 * len(conds)))
    ypos = np.arange(len(conds))[::-1]
    colors = ["#2a7e43" if p else "#b03a2e" for p in ok]
    ax.barh(ypos, vals, color=colors, height=0.6)
    for y, c in zip(ypos, conds):
        if c["threshold"] is not None:
            ax.plot([c["threshold"]] * 2, [y - 0.35, y + 0.35],
                    color="k", lw=1.2)
    ax.set_yticks(ypos)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xlabel("value (tick = threshold)")
    ax.set_title(doc.get("theorem", "report"), fontsize=10)
    ax.grid(alpha=0.3, axis="x")
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _plot_norm(plt, doc, path: Path):
    rs = [p["R"] for p in doc["partials"]]
    vals = [max(p["I"], 1e-300) for p in doc["partials"]]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(rs, np.log(vals), marker="o", ms=3)
    ax.set_xscale("log")
    ax.set_xlabel("R")
    ax.set_ylabel("log I(R)")
    ax.set_title(f"partial integrals: {doc['verdict']} "
                 f"(exponent {doc['exponent']:.3g})", fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _plot_grid(plt, rows, path: Path):
    z_re = rows["z_re"]
    z_im = rows["z_im"]
    w = rows["weighted_log_mag"]
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    finite = np.isfinite(w)
    sc = ax.scatter(z_re[finite], z_im[finite], c=w[finite], s=6,
                    cmap="viridis")
    fig.colorbar(sc, ax=ax, label="weighted log|F|")
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title("weighted log magnitude", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _plot_points(plt, doc, path: Path):
    lam = np.array([complex(e["lambda"][0], e["lambda"][1])
                    for e in doc["entries"]])
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    ax.scatter(lam.real, lam.imag, s=4, color="#1f4e79")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"family: {doc.get('family', '?')} "
                 f"({len(doc['entries'])} points)", fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _plot_radial(plt, data, path: Path, label: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(data[:, 0], data[:, 1], marker="o", ms=3)
    ax.set_xscale("log")
    ax.set_xlabel("r")
    ax.set_ylabel("value")
    ax.set_title(label, fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def bundle_report(inputs, out_dir) -> dict:
    """Collect artifacts, write summary.json / summary.csv / figures into
    out_dir, and return the summary document."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    artifacts = []
    cond_rows = []
    verdicts = {}
    for raw in inputs:
        p = Path(raw)
        base, kind = _strip_suffix(p.name)
        doc = None
        if kind in ("json", "report", "norm", "points", "envelope",
                    "manifest"):
            doc = json.loads(p.read_text())
            if kind == "json":
                kind = _sniff_json(doc)
        entry = {"source": p.name, "kind": kind}
        fig_path = out / f"{base}.png"
        if kind == "report":
            _plot_report(plt, doc, fig_path)
            entry["figure"] = fig_path.name
            verdicts[p.name] = bool(doc["verdict"])
            for c in doc["conditions"]:
                cond_rows.append({
                    "source": p.name, "theorem": doc["theorem"],
                    "condition": c["name"], "value": c["value"],
                    "threshold": c["threshold"], "pass": bool(c["pass"])})
        elif kind == "norm":
            _plot_norm(plt, doc, fig_path)
            entry["figure"] = fig_path.name
            verdicts[p.name] = doc["verdict"] == "converged"
        elif kind == "points":
            _plot_points(plt, doc, fig_path)
            entry["figure"] = fig_path.name
        elif kind == "grid":
            rows = np.genfromtxt(p, delimiter=",", names=True)
            _plot_grid(plt, rows, fig_path)
            entry["figure"] = fig_path.name
        elif kind == "radial":
            data = np.loadtxt(p, delimiter=",", skiprows=1, ndmin=2)
            _plot_radial(plt, data, fig_path, base)
            entry["figure"] = fig_path.name
        artifacts.append(entry)

    summary = {"schema_version": 1, "artifacts": artifacts,
               "conditions": cond_rows, "verdicts": verdicts}
    (out / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=1) + "\n")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "theorem", "condition", "value", "threshold",
                     "pass"])
    for row in cond_rows:
        writer.writerow([row["source"], row["theorem"], row["condition"],
                         "" if row["value"] is None else repr(row["value"]),
                         "" if row["threshold"] is None
                         else repr(row["threshold"]),
                         str(row["pass"]).lower()])
    (out / "summary.csv").write_text(buf.getvalue())
    return summary
