import warnings

import pytest

from squintplot import (
    FigureSpec,
    GapDominanceWarning,
    SchemaError,
    build_figure,
    load_curves,
    render,
)

HEADER = "scenario,method,x_name,x_value,metric,mean,stderr,trials,seed,config_hash"


def write_csv(path, rows):
    path.write_text("\n".join([HEADER] + rows) + "\n")


def sumrate_rows(methods=("proposed", "mm"), xs=(0.0, 10.0, 20.0)):
    rows = []
    for m in methods:
        for i, x in enumerate(xs):
            rows.append(f"sumrate_vs_snr,{m},snr_db,{x},sumrate_avg_bps_hz,"
                        f"{(i + 1) * 2.5},0.1,4,0,abc123def456")
            rows.append(f"sumrate_vs_snr,{m},snr_db,{x},sumrate_total_bits,"
                        f"{(i + 1) * 320},12,4,0,abc123def456")
    return rows


def gap_rows(violate_at=None):
    rows = []
    for i, x in enumerate((0.0, 10.0, 20.0)):
        exact = (i + 1) * 10.0
        bound = 35.0 if x != violate_at else exact - 1.0
        rows.append(f"gap_vs_snr,proposed,snr_db,{x},gap_simulated,{exact},0.5,4,0,cafe01234567")
        rows.append(f"gap_vs_snr,proposed,snr_db,{x},gap_exact,{exact},0.5,4,0,cafe01234567")
        rows.append(f"gap_vs_snr,proposed,snr_db,{x},gap_bound,{bound},0.5,4,0,cafe01234567")
    return rows


class TestLoadCurves:
    def test_groups_methods_into_curves(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, sumrate_rows(methods=("proposed", "mm", "iabs")))
        curves = load_curves(FigureSpec(str(csv), "fig3", str(tmp_path / "o.png")))
        assert [c.label for c in curves] == ["proposed", "mm", "iabs"]
        assert all(c.x == [0.0, 10.0, 20.0] for c in curves)

    def test_sorts_by_x(self, tmp_path):
        csv = tmp_path / "s.csv"
        rows = sumrate_rows(methods=("proposed",), xs=(20.0, 0.0, 10.0))
        write_csv(csv, rows)
        (curve,) = load_curves(FigureSpec(str(csv), "fig3", "o.png"))
        assert curve.x == [0.0, 10.0, 20.0]

    def test_fig5_groups_by_metric(self, tmp_path):
        csv = tmp_path / "g.csv"
        write_csv(csv, gap_rows())
        curves = load_curves(FigureSpec(str(csv), "fig5", "o.png"))
        assert sorted(c.label for c in curves) == ["gap_bound", "gap_exact", "gap_simulated"]

    def test_missing_scenario_rejected(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, sumrate_rows())
        with pytest.raises(SchemaError, match="ee_vs_power"):
            load_curves(FigureSpec(str(csv), "fig4", "o.png"))

    def test_bad_header_rejected(self, tmp_path):
        csv = tmp_path / "s.csv"
        csv.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError, match="header"):
            load_curves(FigureSpec(str(csv), "fig3", "o.png"))

    def test_non_numeric_rejected(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, ["sumrate_vs_snr,mm,snr_db,zero,sumrate_avg_bps_hz,1,0,1,0,x"])
        with pytest.raises(SchemaError, match="non-numeric"):
            load_curves(FigureSpec(str(csv), "fig3", "o.png"))

    def test_empty_file_rejected(self, tmp_path):
        csv = tmp_path / "s.csv"
        csv.write_text(HEADER + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            load_curves(FigureSpec(str(csv), "fig3", "o.png"))


class TestGapDominanceWarning:
    def test_violation_warns(self, tmp_path):
        csv = tmp_path / "g.csv"
        write_csv(csv, gap_rows(violate_at=10.0))
        with pytest.warns(GapDominanceWarning, match="x=10"):
            load_curves(FigureSpec(str(csv), "fig5", "o.png"))

    def test_clean_data_is_silent(self, tmp_path):
        csv = tmp_path / "g.csv"
        write_csv(csv, gap_rows())
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            load_curves(FigureSpec(str(csv), "fig5", "o.png"))


class TestRender:
    def test_writes_png(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, sumrate_rows())
        out = tmp_path / "fig.png"
        render(FigureSpec(str(csv), "fig3", str(out), dpi=80))
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_single_method_has_single_curve(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, sumrate_rows(methods=("proposed",)))
        fig, curves = build_figure(FigureSpec(str(csv), "fig3", "o.png"))
        assert len(curves) == 1
        assert len(fig.axes[0].containers) == 1

    def test_idempotent(self, tmp_path):
        csv = tmp_path / "s.csv"
        write_csv(csv, sumrate_rows())
        out = tmp_path / "fig.png"
        spec = FigureSpec(str(csv), "fig3", str(out), dpi=80)
        render(spec)
        first = out.read_bytes()
        render(spec)
        assert out.read_bytes() == first

    def test_rejects_unknown_figure(self):
        with pytest.raises(ValueError):
            FigureSpec("x.csv", "fig7", "o.png")
