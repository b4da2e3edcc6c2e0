#!/usr/bin/env python3
"""Render cooling curves (ground population vs machines used) from CSV traces.

Read-only consumer of the simulator's trace schema
``step,m,s_ground,mutual_info``; no physics is recomputed here. Optional
horizontal lines mark asymptotic bounds.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

TRACE_COLUMNS = ["step", "m", "s_ground", "mutual_info"]


def read_trace(path: str) -> dict[str, list[float]]:
    """Load one trace CSV; exits are left to the caller via ValueError."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if header[: len(TRACE_COLUMNS)] != TRACE_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header!r}")
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    columns = {name: [] for name in TRACE_COLUMNS}
    for row in rows:
        for name, value in zip(TRACE_COLUMNS, row):
            columns[name].append(float(value))
    return columns


def parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",")]


def parse_labels(text: str) -> list[str]:
    """Split legend labels on ';' when present so labels may contain commas."""
    sep = ";" if ";" in text else ","
    return text.split(sep)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="+", help="trace CSV files, one curve each")
    parser.add_argument("--bounds", help="comma-separated asymptote values to draw")
    parser.add_argument("--labels",
                        help="legend labels, ';'-separated if they contain commas")
    parser.add_argument("--out", default="cooling.png")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    labels = parse_labels(args.labels) if args.labels else [Path(p).stem for p in args.csvs]
    if len(labels) != len(args.csvs):
        print("error: need one label per CSV", file=sys.stderr)
        return 2

    try:
        traces = [read_trace(path) for path in args.csvs]
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, trace in zip(labels, traces):
        ax.plot(trace["m"], trace["s_ground"], marker=".", markersize=3, label=label)
    if args.bounds:
        for value in parse_float_list(args.bounds):
            ax.axhline(value, linestyle="--", linewidth=0.8, color="gray")
    ax.set_xlabel("machines used m")
    ax.set_ylabel("ground state population")
    ax.grid(True, linestyle=":", linewidth=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=args.dpi)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
