"""Result records, CSV/JSON tables and SVG figures.

SVG output is written by hand with fixed number formatting so identical
inputs always give identical bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .baselines import CartNode, predict_cart
from .dataset import Dataset, Split
from .evaluation import rmse
from .gam import FittedGam, TermKind, partial_dependence, predict

RMSE_COLUMNS = ("seed", "gam_rmse", "gam_knee", "gam_penalty", "cart", "baseline_gam")
PENALTY_COLUMNS = ("seed", "baseline", "knee", "best_by_rmse", "best_by_penalty")


@dataclass
class ModelSummary:
    chromosome: list[dict]
    cv_rmse: float
    penalty: float
    uncertainty: float
    sparsity: float
    test_rmse: float


@dataclass
class RunRecord:
    seed: int
    config: dict
    selection: dict[str, ModelSummary]
    baseline_gam_test_rmse: float
    baseline_gam_penalty: float
    cart_test_rmse: float
    front: list[list[float]]
    history: list[dict] = field(default_factory=list)
    wall_clock: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        # timing lives in its own file so results stay byte-reproducible
        d.pop("wall_clock")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        d = dict(d)
        d["selection"] = {k: ModelSummary(**v) for k, v in d["selection"].items()}
        d.pop("wall_clock", None)
        return cls(**d)


def score_on_test(model: FittedGam | CartNode, data: Dataset, split: Split) -> float:
    """Test RMSE of a model refit on the whole train+validation partition."""
    train, test = split.train_val_indices, split.test_indices
    if np.intersect1d(train, test).size:
        raise ValueError("test partition overlaps the training partition")
    n_fit = model.n_train if isinstance(model, FittedGam) else model.n_samples
    if n_fit != len(train):
        raise ValueError(f"model was fit on {n_fit} rows, expected the {len(train)} train+val rows")
    X, y = data.features[test], data.target[test]
    pred = predict(model, X) if isinstance(model, FittedGam) else predict_cart(model, X)
    return rmse(pred, y)


def _fmt(v: float, digits: int = 6) -> str:
    return f"{v:.{digits}f}"


def table_rows(records: list[RunRecord]):
    rm, pe = [], []
    for r in records:
        s = r.selection
        rm.append([r.seed, s["best_by_rmse"].test_rmse, s["knee"].test_rmse, s["best_by_penalty"].test_rmse,
                   r.cart_test_rmse, r.baseline_gam_test_rmse])
        pe.append([r.seed, r.baseline_gam_penalty, s["knee"].penalty, s["best_by_rmse"].penalty,
                   s["best_by_penalty"].penalty])
    return rm, pe


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([row[0]] + [_fmt(v) for v in row[1:]])


def _markdown(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for row in rows:
        lines.append("| " + " | ".join([str(row[0])] + [_fmt(v, 4) for v in row[1:]]) + " |")
    return "\n".join(lines) + "\n"


def emit_tables(records: list[RunRecord], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rm, pe = table_rows(records)
    paths = [out / "rmse_table.csv", out / "penalty_table.csv", out / "results.json", out / "tables.md"]
    _write_csv(paths[0], RMSE_COLUMNS, rm)
    _write_csv(paths[1], PENALTY_COLUMNS, pe)
    write_json(paths[2], [r.to_dict() for r in records])
    paths[3].write_text(
        "Test RMSE\n\n" + _markdown(RMSE_COLUMNS, rm) + "\nComplexity penalty\n\n" + _markdown(PENALTY_COLUMNS, pe)
    )
    return paths


def read_records(path) -> list[RunRecord]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = [data]
    return [RunRecord.from_dict(d) for d in data]


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# --- SVG ---------------------------------------------------------------

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=80, right=30, top=50, bottom=70)
AXIS_PAD = 0.05


def axis_range(values, pad: float = AXIS_PAD) -> tuple[float, float]:
    """Data range widened by ``pad`` of its span on each side."""
    v = np.asarray(values, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    if span <= 0:
        span = max(abs(lo), 1.0) * 0.1
        return lo - span, hi + span
    return lo - pad * span, hi + pad * span


class _Canvas:
    def __init__(self, xr, yr, title: str, xlabel: str, ylabel: str):
        self.xr, self.yr = xr, yr
        self.x0, self.x1 = MARGIN["left"], WIDTH - MARGIN["right"]
        self.y0, self.y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.2f}" y="28" text-anchor="middle" font-size="15">{escape(title)}</text>',
        ]
        self._axes(xlabel, ylabel)

    def sx(self, x):
        return self.x0 + (x - self.xr[0]) / (self.xr[1] - self.xr[0]) * (self.x1 - self.x0)

    def sy(self, y):
        return self.y0 - (y - self.yr[0]) / (self.yr[1] - self.yr[0]) * (self.y0 - self.y1)

    def _axes(self, xlabel, ylabel):
        p = self.parts
        p.append(f'<rect class="frame" x="{self.x0:.2f}" y="{self.y1:.2f}" width="{self.x1 - self.x0:.2f}" '
                 f'height="{self.y0 - self.y1:.2f}" fill="none" stroke="black"/>')
        for v in np.linspace(*self.xr, 6):
            x = self.sx(v)
            p.append(f'<line x1="{x:.2f}" y1="{self.y0:.2f}" x2="{x:.2f}" y2="{self.y0 + 5:.2f}" stroke="black"/>')
            p.append(f'<text x="{x:.2f}" y="{self.y0 + 18:.2f}" text-anchor="middle">{v:.4g}</text>')
        for v in np.linspace(*self.yr, 6):
            y = self.sy(v)
            p.append(f'<line x1="{self.x0 - 5:.2f}" y1="{y:.2f}" x2="{self.x0:.2f}" y2="{y:.2f}" stroke="black"/>')
            p.append(f'<text x="{self.x0 - 8:.2f}" y="{y + 4:.2f}" text-anchor="end">{v:.4g}</text>')
        p.append(f'<text x="{(self.x0 + self.x1) / 2:.2f}" y="{HEIGHT - 25}" text-anchor="middle">{escape(xlabel)}</text>')
        cy = (self.y0 + self.y1) / 2
        p.append(f'<text x="20" y="{cy:.2f}" text-anchor="middle" transform="rotate(-90 20 {cy:.2f})">'
                 f'{escape(ylabel)}</text>')

    def add(self, s: str):
        self.parts.append(s)

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _marker(kind: str, cls: str, x: float, y: float) -> str:
    if kind == "circle":
        return f'<circle class="{cls}" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#4878b0" fill-opacity="0.7"/>'
    if kind == "square":
        return (f'<rect class="{cls}" x="{x - 7:.2f}" y="{y - 7:.2f}" width="14" height="14" '
                f'fill="none" stroke="#c03030" stroke-width="2"/>')
    if kind == "triangle":
        pts = f"{x:.2f},{y - 8:.2f} {x - 7:.2f},{y + 6:.2f} {x + 7:.2f},{y + 6:.2f}"
        return f'<polygon class="{cls}" points="{pts}" fill="none" stroke="#30a030" stroke-width="2"/>'
    pts = f"{x:.2f},{y - 9:.2f} {x + 9:.2f},{y:.2f} {x:.2f},{y + 9:.2f} {x - 9:.2f},{y:.2f}"
    return f'<polygon class="{cls}" points="{pts}" fill="none" stroke="#e08000" stroke-width="2"/>'


HIGHLIGHTS = (
    ("knee", "diamond", "Knee"),
    ("best_by_rmse", "square", "Lowest RMSE"),
    ("best_by_penalty", "triangle", "Lowest penalty"),
)


def pareto_svg(points, highlights: dict[str, tuple[float, float]], title: str) -> str:
    """Front scatter with penalty on x and RMSE on y.

    ``points`` are (rmse, penalty) pairs; ``highlights`` maps the three
    representative names to their pairs.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    c = _Canvas(axis_range(P[:, 1]), axis_range(P[:, 0]), title, "Complexity penalty", "CV RMSE")
    for r, pen in sorted(map(tuple, P), key=lambda t: (t[1], t[0])):
        c.add(_marker("circle", "point", c.sx(pen), c.sy(r)))
    for name, shape, _ in HIGHLIGHTS:
        if name in highlights:
            r, pen = highlights[name]
            c.add(_marker(shape, f"highlight {name}", c.sx(pen), c.sy(r)))
    ly = MARGIN["top"] + 15
    for name, shape, label in HIGHLIGHTS:
        lx = c.x1 - 120
        c.add(_marker(shape, "legend-marker", lx, ly))
        c.add(f'<text x="{lx + 14:.2f}" y="{ly + 4:.2f}">{label}</text>')
        ly += 20
    return c.render()


def emit_pareto_plot(front, selection, out_path, title: str = "Pareto front") -> Path:
    pts = [ind.point for ind in front]
    hl = {name: ind.point for name, ind in selection.items()}
    out = Path(out_path)
    out.write_text(pareto_svg(pts, hl, title))
    return out


def partial_dependence_svg(model: FittedGam, feature_index: int, name: str, title: str | None = None) -> str:
    term = model.spec.terms[feature_index]
    title = title or f"{name}: {term.kind.value} term"
    if not term.active:
        c = _Canvas((0.0, 1.0), (-1.0, 1.0), title, name, "Contribution")
        c.add(f'<text class="inactive" x="{(c.x0 + c.x1) / 2:.2f}" y="{(c.y0 + c.y1) / 2:.2f}" '
              f'text-anchor="middle" font-size="28" fill="#888888">Inactive</text>')
        return c.render()
    grid, effect, lower, upper = partial_dependence(model, feature_index)
    c = _Canvas(axis_range(grid, 0.0), axis_range(np.concatenate([lower, upper])), title, name, "Contribution")
    band = [f"{c.sx(x):.2f},{c.sy(v):.2f}" for x, v in zip(grid, upper)]
    band += [f"{c.sx(x):.2f},{c.sy(v):.2f}" for x, v in zip(grid[::-1], lower[::-1])]
    c.add(f'<polygon class="band" points="{" ".join(band)}" fill="#4878b0" fill-opacity="0.25" stroke="none"/>')
    idx = [0, len(grid) - 1] if term.kind is TermKind.LINEAR else range(len(grid))
    line = " ".join(f"{c.sx(grid[i]):.2f},{c.sy(effect[i]):.2f}" for i in idx)
    c.add(f'<polyline class="effect" points="{line}" fill="none" stroke="#1f3f80" stroke-width="2"/>')
    return c.render()


def emit_partial_dependence_plot(model: FittedGam, feature_index: int, out_path, name: str | None = None,
                                 title: str | None = None) -> Path:
    out = Path(out_path)
    out.write_text(partial_dependence_svg(model, feature_index, name or f"x{feature_index}", title))
    return out
