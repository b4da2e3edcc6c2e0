#!/usr/bin/env python3
"""Render correlation arcs (mutual information vs step) from CSV traces.

Read-only consumer of the simulator's trace schema; useful for overlaying
the step-wise optimal and global-basis protocols on one scenario.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from plot_cooling import parse_labels, read_trace  # noqa: E402


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="+", help="trace CSV files, one curve each")
    parser.add_argument("--labels",
                        help="legend labels, ';'-separated if they contain commas")
    parser.add_argument("--log-y", action="store_true", help="logarithmic correlation axis")
    parser.add_argument("--out", default="correlations.png")
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
        steps, mi = trace["step"], trace["mutual_info"]
        if args.log_y:
            # keep only plottable points on a log axis
            pairs = [(s, v) for s, v in zip(steps, mi) if v > 0]
            if pairs:
                ax.semilogy(*zip(*pairs), label=label)
        else:
            ax.plot(steps, mi, label=label)
    ax.set_xlabel("step")
    ax.set_ylabel("mutual information I(S:L) [nats]")
    ax.grid(True, linestyle=":", linewidth=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=args.dpi)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
