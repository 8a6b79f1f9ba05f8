import csv
import re

import numpy as np
import pytest

from gagam import report
from gagam.dataset import make_split, make_synthetic
from gagam.experiment import run_seed, write_seed_outputs
from gagam.gam import ModelSpec, TermSpec, fit
from gagam.nsga2 import GaConfig

N, L, S = TermSpec.none(), TermSpec.linear(), TermSpec.spline


def count(svg, cls):
    return len(re.findall(rf'class="{cls}"', svg))


def test_pareto_markers():
    pts = [(0.5, 0.9), (0.6, 0.4), (0.9, 0.1)]
    hl = {"knee": pts[1], "best_by_rmse": pts[0], "best_by_penalty": pts[2]}
    svg = report.pareto_svg(pts, hl, "t")
    assert count(svg, "point") == 3
    assert len(re.findall(r'class="highlight ', svg)) == 3
    for name in hl:
        assert count(svg, f"highlight {name}") == 1
    assert count(svg, "legend-marker") == 3
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_pareto_singleton():
    svg = report.pareto_svg([(0.4, 0.3)], {k: (0.4, 0.3) for k in ("knee", "best_by_rmse", "best_by_penalty")}, "t")
    assert count(svg, "point") == 1 and "nan" not in svg and "inf" not in svg


def test_axis_range_margin():
    assert report.axis_range([0.0, 1.0]) == pytest.approx((-0.05, 1.05))
    assert report.axis_range([2.0, 4.0], 0.1) == pytest.approx((1.8, 4.2))
    lo, hi = report.axis_range([3.0, 3.0])
    assert lo < 3.0 < hi


def test_points_inside_plot_area():
    pts = np.random.default_rng(0).uniform(size=(20, 2))
    svg = report.pareto_svg(pts, {}, "t")
    for cx, cy in re.findall(r'class="point" cx="([\d.]+)" cy="([\d.]+)"', svg):
        assert 80 < float(cx) < 610 and 50 < float(cy) < 410


@pytest.fixture(scope="module")
def pd_model():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, size=(200, 3))
    y = np.sin(3 * X[:, 0]) + X[:, 1] + 0.2 * rng.standard_normal(200)
    return fit(ModelSpec((S(10, 1.0), L, N)), X, y)


def test_pd_inactive(pd_model):
    svg = report.partial_dependence_svg(pd_model, 2, "x3")
    assert '<text class="inactive"' in svg and ">Inactive<" in svg
    assert count(svg, "band") == 0 and count(svg, "effect") == 0


def test_pd_linear_is_two_point_line(pd_model):
    svg = report.partial_dependence_svg(pd_model, 1, "x2")
    pts = re.search(r'class="effect" points="([^"]+)"', svg).group(1).split()
    assert len(pts) == 2 and count(svg, "band") == 1


def test_pd_spline_band(pd_model):
    svg = report.partial_dependence_svg(pd_model, 0, "x1")
    pts = re.search(r'class="effect" points="([^"]+)"', svg).group(1).split()
    assert len(pts) == 100
    band = re.search(r'class="band" points="([^"]+)"', svg).group(1).split()
    ys = np.array([float(p.split(",")[1]) for p in band])
    upper, lower = ys[:100], ys[100:][::-1]
    # SVG y grows downward, so the upper curve has smaller y
    assert np.all(upper <= lower + 1e-9)


def test_svg_deterministic(pd_model, tmp_path):
    a = report.emit_partial_dependence_plot(pd_model, 0, tmp_path / "a.svg", "x1")
    b = report.emit_partial_dependence_plot(pd_model, 0, tmp_path / "b.svg", "x1")
    assert a.read_bytes() == b.read_bytes()


@pytest.fixture(scope="module")
def seed_runs():
    data = make_synthetic(200, 0.3, n_decoys=1, seed=4)
    return data, [run_seed(data, GaConfig(population_size=8, generations=2, k_folds=3, seed=s), progress=None)
                  for s in (1, 2)]


def test_tables(seed_runs, tmp_path):
    _, runs = seed_runs
    records = [r.record for r in runs]
    paths = report.emit_tables(records, tmp_path)
    with open(paths[0]) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == report.RMSE_COLUMNS and len(rows) == 3
    with open(paths[1]) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == report.PENALTY_COLUMNS and len(rows) == 3
    # values round-trip at the written precision
    assert float(rows[1][2]) == pytest.approx(records[0].selection["knee"].penalty, abs=5e-7)
    assert "| seed |" in paths[3].read_text()


def test_tables_empty(tmp_path):
    paths = report.emit_tables([], tmp_path)
    assert paths[0].read_text() == ",".join(report.RMSE_COLUMNS) + "\n"
    assert paths[1].read_text() == ",".join(report.PENALTY_COLUMNS) + "\n"


def test_record_json_round_trip(seed_runs, tmp_path):
    _, runs = seed_runs
    report.write_json(tmp_path / "r.json", [r.record.to_dict() for r in runs])
    back = report.read_records(tmp_path / "r.json")
    assert back == [r.record for r in runs]
    assert "wall_clock" not in runs[0].record.to_dict()


def test_score_on_test_guards(seed_runs):
    data, runs = seed_runs
    split = make_split(data.n_rows, 0.2, runs[0].record.seed)
    model = runs[0].models["knee"]
    assert report.score_on_test(model, data, split) == runs[0].record.selection["knee"].test_rmse
    other = fit(model.spec, data.features[:50], data.target[:50])
    with pytest.raises(ValueError, match="train\\+val"):
        report.score_on_test(other, data, split)


def test_seed_outputs(seed_runs, tmp_path):
    _, runs = seed_runs
    d = write_seed_outputs(runs[0], tmp_path)
    names = {p.name for p in d.iterdir()}
    assert {"results.json", "timing.json", "models.json", "pareto.svg", "pd_x1.svg", "baseline_pd_decoy1.svg"} <= names
    svg = (d / "pareto.svg").read_text()
    assert count(svg, "point") == len(runs[0].front)
