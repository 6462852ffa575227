"""Acceptance: the three preset CSVs render to images with the right curves.

The sweeps are produced through the simulator's public CLI (the only
interface this package depends on), at a tiny trial count for speed.
"""

import shutil
import subprocess
import sys

import pytest

from squintplot import FigureSpec, GapDominanceWarning, build_figure
from squintplot.cli import main as plot_main

pytestmark = pytest.mark.skipif(
    shutil.which("squintsel") is None,
    reason="squintsel CLI not installed; run `pip install -e ..` first",
)

PRESET_CURVES = {"fig3": 4, "fig4": 4, "fig5": 3}


@pytest.fixture(scope="module")
def preset_csvs(tmp_path_factory):
    root = tmp_path_factory.mktemp("sweeps")
    paths = {}
    for name in ("fig3", "fig4", "fig5"):
        out = root / f"{name}.csv"
        subprocess.run(
            ["squintsel", "run", "--preset", name, "--trials", "2",
             "--seed", "1", "--out", str(out), "--threads", "2"],
            check=True, capture_output=True,
        )
        paths[name] = out
    return paths


def test_acceptance_preset_csvs_render(preset_csvs, tmp_path):
    for name, csv in preset_csvs.items():
        out = tmp_path / f"{name}.png"
        rc = plot_main(["--csv", str(csv), "--figure", name,
                        "--out", str(out), "--dpi", "100"])
        assert rc == 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        fig, curves = build_figure(FigureSpec(str(csv), name, str(out)))
        assert len(curves) == PRESET_CURVES[name]
        assert len(fig.axes[0].containers) == PRESET_CURVES[name]
        print(f"ACCEPTANCE 8 ({name}): PASS  {len(curves)} curves -> {out.name}")


def test_acceptance_fig5_violation_warns(preset_csvs, tmp_path):
    # corrupt one bound row below its exact value: plot must warn
    text = preset_csvs["fig5"].read_text().splitlines()
    header, rows = text[0], text[1:]
    exact = {}
    for r in rows:
        parts = r.split(",")
        if parts[4] == "gap_exact":
            exact[parts[3]] = float(parts[5])
    corrupted = []
    done = False
    for r in rows:
        parts = r.split(",")
        if not done and parts[4] == "gap_bound":
            parts[5] = f"{exact[parts[3]] - 1.0:.12g}"
            done = True
        corrupted.append(",".join(parts))
    bad_csv = tmp_path / "bad5.csv"
    bad_csv.write_text("\n".join([header] + corrupted) + "\n")
    with pytest.warns(GapDominanceWarning):
        build_figure(FigureSpec(str(bad_csv), "fig5", str(tmp_path / "bad5.png")))


def test_cli_nonzero_on_schema_mismatch(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,sweep\n1,2,3\n")
    rc = plot_main(["--csv", str(bad), "--figure", "fig3",
                    "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "header" in capsys.readouterr().err
