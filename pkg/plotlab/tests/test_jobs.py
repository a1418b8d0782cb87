"""Job parsing and validation."""

import json

import pytest

from plotlab.jobs import JobError, PlotJob, load_job

DATA = __file__.rsplit("/", 1)[0] + "/data"


def test_job_validation_kind():
    with pytest.raises(JobError, match="unknown figure kind"):
        PlotJob(kind="volume", inputs=(DATA + "/diagnostics.csv",),
                output="/tmp/x")


def test_job_validation_inputs():
    with pytest.raises(JobError, match="at least one input"):
        PlotJob(kind="decay", inputs=(), output="/tmp/x", column="lp2")
    with pytest.raises(JobError, match="not found"):
        PlotJob(kind="decay", inputs=("/no/such/file.csv",),
                output="/tmp/x", column="lp2")


def test_job_validation_column_and_slopes():
    with pytest.raises(JobError, match="'column'"):
        PlotJob(kind="decay", inputs=(DATA + "/diagnostics.csv",),
                output="/tmp/x")
    with pytest.raises(JobError, match="finite"):
        PlotJob(kind="decay", inputs=(DATA + "/diagnostics.csv",),
                output="/tmp/x", column="lp2",
                reference_slopes=(float("nan"),))


def test_load_job_json_and_relative_paths(tmp_path):
    (tmp_path / "d.csv").write_text("t,lp2\n0.1,1.0\n0.2,0.8\n")
    doc = {"kind": "decay", "inputs": "d.csv", "output": "figs/out",
           "column": "lp2", "reference_slopes": [-0.5, -0.75]}
    job_file = tmp_path / "job.json"
    job_file.write_text(json.dumps(doc))
    job = load_job(str(job_file))
    assert job.inputs == (str(tmp_path / "d.csv"),)
    assert job.output == str(tmp_path / "figs/out")
    assert job.reference_slopes == (-0.5, -0.75)


def test_load_job_toml(tmp_path):
    (tmp_path / "d.csv").write_text("t,lp2\n0.1,1.0\n0.2,0.8\n")
    (tmp_path / "job.toml").write_text(
        'kind = "decay"\ninputs = ["d.csv"]\noutput = "out"\n'
        'column = "lp2"\n[params]\nbins = 10\n')
    job = load_job(str(tmp_path / "job.toml"))
    assert job.kind == "decay"
    assert job.params == {"bins": 10}


def test_load_job_rejects_unknown_keys(tmp_path):
    (tmp_path / "job.json").write_text(
        '{"kind": "decay", "inputs": [], "output": "o", "colour": "lp2"}')
    with pytest.raises(JobError, match="unknown job keys"):
        load_job(str(tmp_path / "job.json"))
