#!/usr/bin/env python3
"""Render line-with-errorbar figures and exponential-overlay histograms from
experiment CSV files.

This layer performs zero statistics: every mean and standard error drawn
comes verbatim from a CSV row, so the plotted values byte-match the file.
Input is the 9-column schema

    stat_name,architecture,n,depth_or_T,partition,instances,mean,stderr,convention

and a plot is described by a JSON spec:

    {"csv": "fig1.csv", "x": "n", "series": "depth_or_T",
     "out": "fig1.svg", "logy": true, "kind": "series"}

kind "series" draws one errorbar line per (stat_name, series-column value);
kind "porter-thomas" draws a histogram of the pt_p0_scaled rows with the
fitted exponential density overlaid. SVG output is byte-deterministic for a
fixed matplotlib version.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

matplotlib.rcParams["svg.hashsalt"] = "xeblab-figures"

CSV_COLUMNS = (
    "stat_name", "architecture", "n", "depth_or_T", "partition",
    "instances", "mean", "stderr", "convention",
)


class PlotError(Exception):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv: str
    out: str
    x: str = "n"
    series: str = "depth_or_T"
    kind: str = "series"
    logx: bool = False
    logy: bool = False
    title: str = ""

    def __post_init__(self):
        for name, col in (("x", self.x), ("series", self.series)):
            if col not in CSV_COLUMNS:
                raise PlotError(f"spec {name!r} column {col!r} not in CSV schema")
        if self.kind not in ("series", "porter-thomas"):
            raise PlotError(f"unknown plot kind {self.kind!r}")


def load_spec(path: str) -> PlotSpec:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise PlotError(f"cannot read spec: {exc}") from None
    except json.JSONDecodeError as exc:
        raise PlotError(f"bad spec JSON: {exc}") from None
    known = {f for f in PlotSpec.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise PlotError(f"unknown spec keys: {sorted(unknown)}")
    if "csv" not in raw or "out" not in raw:
        raise PlotError("spec needs 'csv' and 'out'")
    return PlotSpec(**raw)


def read_rows(path: str) -> list[dict[str, str]]:
    """Rows as raw strings; the header must match the schema exactly."""
    try:
        with open(path) as fh:
            header = fh.readline().rstrip("\n")
            if header.split(",") != list(CSV_COLUMNS):
                raise PlotError(f"unexpected CSV header in {path}: {header!r}")
            rows = []
            for lineno, line in enumerate(fh, 2):
                if not line.strip():
                    continue
                parts = line.rstrip("\n").split(",")
                if len(parts) != len(CSV_COLUMNS):
                    raise PlotError(f"{path}:{lineno}: expected 9 fields")
                rows.append(dict(zip(CSV_COLUMNS, parts)))
    except OSError as exc:
        raise PlotError(f"cannot read CSV: {exc}") from None
    if not rows:
        raise PlotError(f"CSV {path} has no data rows")
    return rows


def _save(fig, out: str) -> None:
    if out.endswith(".svg"):
        fig.savefig(out, metadata={"Date": None})
    else:
        fig.savefig(out)
    plt.close(fig)


def plot_series(spec: PlotSpec) -> dict[str, list[tuple[str, str, str]]]:
    """One errorbar line per (stat_name, series value); returns, per series,
    the exact (x, mean, stderr) strings that were drawn."""
    rows = read_rows(spec.csv)
    series: dict[str, list[tuple[str, str, str]]] = {}
    for row in rows:
        key = f"{row['stat_name']} [{spec.series}={row[spec.series]}]"
        series.setdefault(key, []).append((row[spec.x], row["mean"], row["stderr"]))

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=100)
    for key in sorted(series):
        pts = sorted(series[key], key=lambda p: float(p[0]))
        xs = [float(p[0]) for p in pts]
        means = [float(p[1]) for p in pts]
        errs = [float(p[2]) for p in pts]
        ax.errorbar(xs, means, yerr=errs, marker="o", markersize=3.5,
                    capsize=2.5, linewidth=1.2, label=key)
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel("statistic (error bars: one standard error)")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    _save(fig, spec.out)
    return series


def plot_porter_thomas(spec: PlotSpec) -> dict[str, list[str]]:
    """Histogram of the scaled return probabilities with the fitted
    exponential density b e^{-b p} overlaid; returns the raw strings used."""
    rows = read_rows(spec.csv)
    values = [r["mean"] for r in rows if r["stat_name"] == "pt_p0_scaled"]
    bhat_rows = [r["mean"] for r in rows if r["stat_name"] == "pt_bhat"]
    if not values or not bhat_rows:
        raise PlotError("porter-thomas plot needs pt_p0_scaled and pt_bhat rows")
    bhat = float(bhat_rows[0])
    vals = [float(v) for v in values]

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=100)
    ax.hist(vals, bins=40, density=True, alpha=0.6, label=f"{len(vals)} instances")
    top = max(vals)
    grid = [top * i / 400.0 for i in range(1, 401)]
    import math

    ax.plot(grid, [bhat * math.exp(-bhat * p) for p in grid],
            linewidth=1.5, label=f"fit: {bhat_rows[0]} * exp(-{bhat_rows[0]} p)")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel("scaled return probability")
    ax.set_ylabel("density")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, spec.out)
    return {"values": values, "bhat": bhat_rows}


def run_spec(spec: PlotSpec):
    if spec.kind == "porter-thomas":
        return plot_porter_thomas(spec)
    return plot_series(spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="?", help="input CSV (or use --spec)")
    parser.add_argument("--spec", help="JSON plot spec")
    parser.add_argument("--x", default="n")
    parser.add_argument("--series", default="depth_or_T")
    parser.add_argument("--kind", default="series", choices=["series", "porter-thomas"])
    parser.add_argument("--logx", action="store_true")
    parser.add_argument("--logy", action="store_true")
    parser.add_argument("--title", default="")
    parser.add_argument("--out", help="output image (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        if args.spec:
            spec = load_spec(args.spec)
        else:
            if not args.csv or not args.out:
                raise PlotError("need a CSV path and --out (or --spec)")
            spec = PlotSpec(csv=args.csv, out=args.out, x=args.x, series=args.series,
                            kind=args.kind, logx=args.logx, logy=args.logy,
                            title=args.title)
        run_spec(spec)
    except PlotError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
