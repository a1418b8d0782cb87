"""Command-line entry point: ``plotlab plot <job-file>``.

One job per invocation; emits ``<output>.png`` and ``<output>.svg``.
Exit status 0 on success, 1 on any job or data error.
"""

from __future__ import annotations

import argparse
import sys

from .jobs import JobError, load_job
from .render import render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotlab", description="render figures from harness outputs")
    sub = parser.add_subparsers(dest="command", required=True)
    plot_p = sub.add_parser("plot", help="render the figure described by a "
                                         "TOML/JSON job file")
    plot_p.add_argument("job", help="path to the job file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        written = render(load_job(args.job))
    except (JobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
