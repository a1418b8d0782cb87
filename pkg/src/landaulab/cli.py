"""Command-line entry point.

Subcommands::

    landaulab run <config-file>     run the experiment named in the file
    landaulab validate-kernel       kernel oracle and identity checks
    landaulab inequalities          functional-inequality suite
    landaulab degiorgi              level-set energy recursion audit
    landaulab rates                 decay-rate fits (L^p, L^inf, moments)
    landaulab compare-heat          paired diffusion-vs-heat rate comparison

Exit status is 0 iff every gated check in the resulting summary passes.
"""

from __future__ import annotations

import argparse
import sys

from .harness import ExperimentConfig, load_config, run_experiment

_SHORTCUTS = {
    "validate-kernel": "kernel_validate",
    "inequalities": "inequalities",
    "degiorgi": "degiorgi",
    "rates": "rates",
    "compare-heat": "heat_comparison",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="landaulab",
        description="verification experiments for the nonlocal diffusion flow")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the experiment named in a "
                                       "TOML/JSON config file")
    run_p.add_argument("config", help="path to the config file")

    for cmd, experiment in _SHORTCUTS.items():
        p = sub.add_parser(cmd, help=f"run the {experiment} experiment "
                                     f"with default settings")
        p.add_argument("--out", default=f"out/{experiment}",
                       help="output directory")
        p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        config = load_config(args.config)
    else:
        config = ExperimentConfig(experiment=_SHORTCUTS[args.command],
                                  outdir=args.out, seed=args.seed)
    report = run_experiment(config)
    for item in report.items:
        status = "PASS" if item["passed"] else "FAIL"
        value = item.get("value")
        shown = "" if value is None else f"  value={value:.6g}"
        print(f"[{status}] {config.experiment}/{item['name']}{shown}")
    print(f"summary: {config.outdir}/summary.json "
          f"({'all passed' if report.passed else 'FAILURES PRESENT'})")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
