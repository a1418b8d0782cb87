"""Plot job description and loading.

A job file (TOML or JSON) names a figure kind, the input CSV/JSON files it
reads, and the output image base path. Rendering emits both ``<output>.png``
and ``<output>.svg``. Jobs only read the documented file formats written by
the harness; nothing here imports or calls the simulation code.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

KINDS = ("decay", "ratio_hist", "energy_cascade", "envelope")

_KNOWN_KEYS = {"kind", "inputs", "output", "reference_slopes", "column",
               "title", "params"}


class JobError(ValueError):
    """Raised for malformed or unsatisfiable plot jobs."""


@dataclass(frozen=True)
class PlotJob:
    """One figure: what to read, what to draw, where to write it.

    ``reference_slopes`` are the guide-line exponents drawn on decay
    figures. ``column`` selects the diagnostics column (e.g. ``lp2``) for
    the decay and envelope kinds. ``params`` holds kind-specific extras,
    e.g. the envelope shape constants.
    """

    kind: str
    inputs: tuple
    output: str
    reference_slopes: tuple = ()
    column: str | None = None
    title: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise JobError(f"unknown figure kind {self.kind!r}; "
                           f"expected one of {KINDS}")
        if not self.inputs:
            raise JobError("job needs at least one input file")
        for path in self.inputs:
            if not os.path.isfile(path):
                raise JobError(f"input file not found: {path}")
        for s in self.reference_slopes:
            if not math.isfinite(s):
                raise JobError(f"reference slope must be finite, got {s}")
        if self.kind in ("decay", "envelope") and not self.column:
            raise JobError(f"{self.kind} jobs need a 'column' entry")


def load_job(path: str) -> PlotJob:
    """Parse a TOML (by suffix) or JSON job file into a PlotJob.

    Relative input/output paths are resolved against the job file's
    directory so jobs stay portable.
    """
    if path.endswith(".toml"):
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    else:
        with open(path) as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict):
        raise JobError("job file must hold a table/object at top level")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise JobError(f"unknown job keys: {sorted(unknown)}")
    if "kind" not in doc or "inputs" not in doc or "output" not in doc:
        raise JobError("job file needs 'kind', 'inputs' and 'output'")

    base = os.path.dirname(os.path.abspath(path))

    def _resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    inputs = doc["inputs"]
    if isinstance(inputs, str):
        inputs = [inputs]
    return PlotJob(
        kind=doc["kind"],
        inputs=tuple(_resolve(p) for p in inputs),
        output=_resolve(doc["output"]),
        reference_slopes=tuple(float(s)
                               for s in doc.get("reference_slopes", ())),
        column=doc.get("column"),
        title=doc.get("title"),
        params=dict(doc.get("params", {})),
    )
