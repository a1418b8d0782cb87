"""Figure rendering for harness outputs; file interfaces only."""

from .jobs import KINDS, JobError, PlotJob, load_job
from .render import render

__version__ = "0.1.0"

__all__ = ["KINDS", "JobError", "PlotJob", "load_job", "render"]
