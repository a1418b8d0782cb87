"""Acceptance item 13: deterministic rendering from stored harness files.

The fixture data under tests/data/ was produced by a completed harness run
(decay diagnostics, level-set energy table, Poincare ratio check); the
renderers here consume only those files.
"""

import hashlib
import subprocess
import sys

from plotlab.jobs import PlotJob
from plotlab.render import render

DATA = __file__.rsplit("/", 1)[0] + "/data"


def _sha(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _jobs(outdir, tag):
    return [
        PlotJob(kind="decay", inputs=(DATA + "/diagnostics.csv",),
                output=f"{outdir}/decay_{tag}", column="lp2",
                reference_slopes=(-0.5, -0.75)),
        PlotJob(kind="ratio_hist", inputs=(DATA + "/poincare.json",),
                output=f"{outdir}/hist_{tag}"),
        PlotJob(kind="energy_cascade", inputs=(DATA + "/degiorgi.csv",),
                output=f"{outdir}/cascade_{tag}"),
        PlotJob(kind="envelope", inputs=(DATA + "/diagnostics.csv",),
                output=f"{outdir}/env_{tag}", column="lp2",
                params={"amplitude": 7.5, "exponent": -0.5}),
    ]


def test_criterion_13_plot_determinism(tmp_path):
    first = [render(j) for j in _jobs(tmp_path, "a")]
    second = [render(j) for j in _jobs(tmp_path, "b")]
    checksum_drift = 0
    for fa, fb in zip(first, second):
        for pa, pb in zip(fa, fb):
            if _sha(pa) != _sha(pb):
                checksum_drift += 1
    assert checksum_drift == 0

    svg = open(f"{tmp_path}/decay_a.svg").read()
    assert "slope -0.50" in svg and "slope -0.75" in svg

    # the full render pass must not need the simulation package; check in
    # a fresh interpreter so this process's other test imports don't leak
    script = (
        "import sys\n"
        "from plotlab.jobs import PlotJob\n"
        "from plotlab.render import render\n"
        f"data = {DATA!r}\n"
        f"out = {str(tmp_path)!r}\n"
        "render(PlotJob(kind='decay', inputs=(data + '/diagnostics.csv',),\n"
        "       output=out + '/iso_decay', column='lp2',\n"
        "       reference_slopes=(-0.5, -0.75)))\n"
        "render(PlotJob(kind='ratio_hist', inputs=(data + '/poincare.json',),\n"
        "       output=out + '/iso_hist'))\n"
        "render(PlotJob(kind='energy_cascade', inputs=(data + '/degiorgi.csv',),\n"
        "       output=out + '/iso_cascade'))\n"
        "render(PlotJob(kind='envelope', inputs=(data + '/diagnostics.csv',),\n"
        "       output=out + '/iso_env', column='lp2',\n"
        "       params={'amplitude': 7.5, 'exponent': -0.5}))\n"
        "assert 'landaulab' not in sys.modules\n")
    subprocess.run([sys.executable, "-c", script], check=True)
    print("\n[PASS] criterion 13: plot determinism "
          "[identical checksums over 8 files, both slope guides present, "
          "no primary-component imports]")
