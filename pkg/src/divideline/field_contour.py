"""Ensemble prediction maps over a grid and marching-squares level sets."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import errors
from .evaluate import polyline_length_km
from .geodata import NORTH, Grid, IncomeDataset, Polyline, StoreDataset
from .linear_svm import fit_standardizer
from .mlp import NetworkArch, TrainConfig, classify_accuracy, init_network, predict, train
from .parallel import imap_ordered
from .resample import ResamplePlan, SplitSpec, balanced_sample, split, train_count
from .rng import SPLIT_STREAM, rng_for

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Values on grid nodes, ``[i_lon, j_lat]``; NaN exactly where the mask is off."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.array_equal(np.isfinite(v), self.grid.mask):
            raise ValueError("field must be finite exactly on in-mask nodes")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_masked(cls, grid: Grid, masked_values) -> ScalarField:
        v = np.full(grid.shape, np.nan)
        v[grid.mask] = masked_values
        return cls(grid, v)


@dataclass(frozen=True)
class ContourSpec:
    level: float

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise ValueError("contour level must be finite")


class _Accumulator:
    """Neumaier-compensated running sum of equally shaped arrays."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)
        self.count = 0

    def add(self, x):
        t = self.total + x
        big = np.abs(self.total) >= np.abs(x)
        self.comp += np.where(big, (self.total - t) + x, (x - t) + self.total)
        self.total = t
        self.count += 1

    def mean(self):
        return (self.total + self.comp) / self.count


# --- brand ensemble -----------------------------------------------------------------


def brand_targets(labels) -> np.ndarray:
    """Southern brand -> 1, northern brand -> 0."""
    return np.where(np.asarray(labels) == NORTH, 0.0, 1.0)


@dataclass
class BrandFieldResult:
    field: ScalarField
    accuracy: float  # mean per-resample test accuracy
    accuracies: list[float]
    averaged_accuracy: float  # accuracy of the ensemble-mean prediction on the test set
    train: StoreDataset = field(repr=False)
    test: StoreDataset = field(repr=False)
    networks: list = field(default_factory=list, repr=False)


def run_brand_ensemble(
    dataset: StoreDataset,
    grid: Grid,
    plan: ResamplePlan,
    split_spec: SplitSpec,
    arch: NetworkArch = NetworkArch(),
    cfg: TrainConfig = TrainConfig(),
    threads: int | None = 1,
    keep_networks: bool = False,
) -> BrandFieldResult:
    """Train one regressor per balanced resample and average their grid predictions."""
    train_set, test_set = split(dataset, split_spec)
    std = fit_standardizer(train_set.coords)
    nodes = grid.masked_nodes()
    test_targets = brand_targets(test_set.labels)

    def one(index):
        sample = balanced_sample(train_set, index, plan)
        net = init_network(arch, cfg.seed, std, stream=(index,))
        net = train(net, (sample.coords, brand_targets(sample.labels)), cfg)
        acc = classify_accuracy(net, (test_set.coords, test_targets))
        return predict(net, nodes), predict(net, test_set.coords), acc, net

    acc_field = _Accumulator(len(nodes))
    acc_test = _Accumulator(len(test_set))
    accs, nets = [], []
    for k, (vals, test_pred, acc, net) in enumerate(imap_ordered(one, range(plan.n_resamples), threads)):
        acc_field.add(vals)
        acc_test.add(test_pred)
        accs.append(acc)
        if keep_networks:
            nets.append(net)
        if (k + 1) % 100 == 0:
            log.info("ann resample %d/%d", k + 1, plan.n_resamples)
    mean_test = acc_test.mean()
    averaged = float(np.count_nonzero((mean_test >= 0.5) == (test_targets == 1.0))) / len(test_targets)
    return BrandFieldResult(
        field=ScalarField.from_masked(grid, acc_field.mean()),
        accuracy=math.fsum(accs) / len(accs),
        accuracies=accs,
        averaged_accuracy=averaged,
        train=train_set,
        test=test_set,
        networks=nets,
    )


def brand_field(
    dataset: StoreDataset,
    grid: Grid,
    plan: ResamplePlan,
    split_spec: SplitSpec,
    arch: NetworkArch = NetworkArch(),
    cfg: TrainConfig = TrainConfig(),
    threads: int | None = 1,
) -> tuple[ScalarField, float]:
    res = run_brand_ensemble(dataset, grid, plan, split_spec, arch, cfg, threads)
    return res.field, res.accuracy


# --- income field ------------------------------------------------------------------


def scale_minmax(values) -> tuple[np.ndarray, float, float]:
    v = np.asarray(values, dtype=float)
    if v.size < 2 or not v.max() > v.min():
        raise errors.AllEqual("min-max scaling needs at least two distinct values")
    lo, hi = float(v.min()), float(v.max())
    return (v - lo) / (hi - lo), lo, hi


def unscale_minmax(scaled, lo: float, hi: float) -> np.ndarray:
    return np.asarray(scaled, dtype=float) * (hi - lo) + lo


def threshold_level(value: float, lo: float, hi: float) -> float:
    """Position of ``value`` on the min-max scale."""
    return (value - lo) / (hi - lo)


def regression_scores(pred, target) -> tuple[float, float]:
    """``(1 - mean absolute error, R^2)`` on scaled targets."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    score = 1.0 - float(np.mean(np.abs(pred - target)))
    ss_tot = float(np.sum((target - target.mean()) ** 2))
    r2 = 1.0 - float(np.sum((pred - target) ** 2)) / ss_tot if ss_tot > 0 else float("nan")
    return score, r2


@dataclass
class GdhiResult:
    field: ScalarField
    level: float
    accuracy: float  # mean over seeds of 1 - MAE on scaled test targets
    r2: float
    scores: list[float]
    lo: float
    hi: float
    n_train: int
    n_test: int
    networks: list = field(default_factory=list, repr=False)


def run_gdhi_ensemble(
    income: IncomeDataset,
    grid: Grid,
    arch: NetworkArch = NetworkArch(),
    cfg: TrainConfig = TrainConfig(),
    split_spec: SplitSpec = SplitSpec(),
    n_seeds: int = 10,
    threads: int | None = 1,
    keep_networks: bool = False,
) -> GdhiResult:
    """Regress scaled income on centroid coordinates; average a seed ensemble over the grid.

    The split is drawn once from ``split_spec.seed``; each ensemble member
    differs only in its weight initialisation.
    """
    n = len(income.records)
    k = train_count(n, split_spec.train_fraction)
    if n < 5 or n - math.floor(n * split_spec.train_fraction + 1e-9) < 1:
        raise errors.TestSetEmpty(f"{n} income records leave no test set at train_fraction={split_spec.train_fraction}")
    if n_seeds < 1:
        raise errors.ConfigInvalid("n_seeds must be >= 1")
    scaled, lo, hi = scale_minmax(income.gdhi)
    if not lo <= income.national_mean <= hi:
        raise errors.ThresholdOutOfRange(
            f"national mean {income.national_mean} lies outside the data range [{lo}, {hi}]"
        )
    level = threshold_level(income.national_mean, lo, hi)
    perm = rng_for(split_spec.seed, SPLIT_STREAM).permutation(n)
    tr, te = np.sort(perm[:k]), np.sort(perm[k:])
    coords = income.coords
    std = fit_standardizer(coords[tr])
    nodes = grid.masked_nodes()

    def one(s):
        net = init_network(arch, cfg.seed, std, stream=(s,))
        net = train(net, (coords[tr], scaled[tr]), cfg)
        return predict(net, nodes), regression_scores(predict(net, coords[te]), scaled[te]), net

    acc = _Accumulator(len(nodes))
    scores, r2s, nets = [], [], []
    for vals, (score, r2), net in imap_ordered(one, range(n_seeds), threads):
        acc.add(vals)
        scores.append(score)
        r2s.append(r2)
        if keep_networks:
            nets.append(net)
    return GdhiResult(
        field=ScalarField.from_masked(grid, acc.mean()),
        level=level,
        accuracy=math.fsum(scores) / len(scores),
        r2=math.fsum(r2s) / len(r2s),
        scores=scores,
        lo=lo,
        hi=hi,
        n_train=len(tr),
        n_test=len(te),
        networks=nets,
    )


def gdhi_field(income, grid, arch=NetworkArch(), cfg=TrainConfig(), split_spec=SplitSpec(), n_seeds=10, threads=1):
    res = run_gdhi_ensemble(income, grid, arch, cfg, split_spec, n_seeds, threads)
    return res.field, res.level, res.accuracy


# --- marching squares -----------------------------------------------------------------


def _edge_point(key, grid_lons, grid_lats, values, level):
    kind, i, j = key
    if kind == "x":  # (i, j) -> (i + 1, j), constant latitude
        v0, v1 = values[i, j], values[i + 1, j]
        t = (level - v0) / (v1 - v0)
        return (grid_lons[i] + t * (grid_lons[i + 1] - grid_lons[i]), grid_lats[j])
    v0, v1 = values[i, j], values[i, j + 1]
    t = (level - v0) / (v1 - v0)
    return (grid_lons[i], grid_lats[j] + t * (grid_lats[j + 1] - grid_lats[j]))


def _cell_segments(i, j, vals, above, level):
    """Segments (pairs of edge keys) for one cell; corners ordered SW, SE, NE, NW."""
    a0, a1, a2, a3 = above
    e0, e1, e2, e3 = ("x", i, j), ("y", i + 1, j), ("x", i, j + 1), ("y", i, j)
    crossing = [e for e, hit in ((e0, a0 != a1), (e1, a1 != a2), (e2, a3 != a2), (e3, a0 != a3)) if hit]
    if len(crossing) == 2:
        return [tuple(crossing)]
    # saddle: diagonal corners agree; decide connectivity from the cell-centre mean
    center_above = float(np.mean(vals)) > level
    if center_above == a0:
        return [(e0, e1), (e2, e3)]  # SW and NE joined through the centre
    return [(e3, e0), (e1, e2)]


def extract_contours(fld: ScalarField, spec) -> list[Polyline]:
    """Level set of ``fld`` at ``spec.level`` (or a bare number) as maximal polylines.

    Cells with any NaN corner are skipped.  A node is "above" when its value
    is strictly greater than the level.  Closed loops repeat their first
    vertex at the end.  Output order is deterministic.
    """
    level = float(spec.level if isinstance(spec, ContourSpec) else spec)
    v = fld.values
    lons, lats = fld.grid.lons, fld.grid.lats
    above = v > level
    c00, c10, c11, c01 = v[:-1, :-1], v[1:, :-1], v[1:, 1:], v[:-1, 1:]
    finite = np.isfinite(c00) & np.isfinite(c10) & np.isfinite(c11) & np.isfinite(c01)
    code = above[:-1, :-1] * 1 + above[1:, :-1] * 2 + above[1:, 1:] * 4 + above[:-1, 1:] * 8
    active = finite & (code != 0) & (code != 15)

    adj: dict = {}
    for i, j in zip(*np.nonzero(active)):
        i, j = int(i), int(j)
        corners = (v[i, j], v[i + 1, j], v[i + 1, j + 1], v[i, j + 1])
        flags = (bool(above[i, j]), bool(above[i + 1, j]), bool(above[i + 1, j + 1]), bool(above[i, j + 1]))
        for a, b in _cell_segments(i, j, corners, flags, level):
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    if not adj:
        raise errors.NoCrossing(f"no grid cell straddles level {level}")

    points = {key: _edge_point(key, lons, lats, v, level) for key in adj}
    used = set()

    def walk(start):
        chain = [start]
        prev, cur = None, start
        while True:
            nxt = [k for k in adj[cur] if k != prev and frozenset((cur, k)) not in used]
            if not nxt:
                break
            k = nxt[0]
            used.add(frozenset((cur, k)))
            chain.append(k)
            prev, cur = cur, k
            if cur == start:
                break
        return chain

    chains = []
    for key in sorted(k for k, nb in adj.items() if len(nb) == 1):
        if all(frozenset((key, k)) in used for k in adj[key]):
            continue
        chains.append(walk(key))
    for key in sorted(adj):
        if any(frozenset((key, k)) not in used for k in adj[key]):
            chains.append(walk(key))

    out = []
    for chain in chains:
        xy = np.array([points[k] for k in chain], dtype=float)
        keep = np.ones(len(xy), dtype=bool)
        keep[1:] = np.any(xy[1:] != xy[:-1], axis=1)
        xy = xy[keep]
        if len(xy) >= 2:
            out.append(Polyline(xy))
    if not out:
        raise errors.NoCrossing(f"level {level} only touches grid nodes")
    return out


def rank_contours(contours) -> list[Polyline]:
    """Longest first (great-circle length); equal lengths ordered by westernmost first vertex."""
    contours = list(contours)
    lengths = [polyline_length_km(c) for c in contours]

    def key(k):
        return (-round(lengths[k], 9), float(contours[k].coords[0, 0]), float(contours[k].coords[0, 1]), k)

    return [contours[k] for k in sorted(range(len(contours)), key=key)]


def principal_contour(contours) -> Polyline:
    contours = list(contours)
    if not contours:
        raise ValueError("no contours")
    return rank_contours(contours)[0]


# --- field files ------------------------------------------------------------------


def write_field_csv(fld: ScalarField, path) -> None:
    """``lon,lat,value`` for every node, lon-major; out-of-mask values are ``nan``."""
    lons, lats = fld.grid.lons.tolist(), fld.grid.lats.tolist()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lon", "lat", "value"])
        for i, lon in enumerate(lons):
            for j, lat in enumerate(lats):
                w.writerow([repr(lon), repr(lat), repr(float(fld.values[i, j]))])


def read_field_csv(path) -> ScalarField:
    path = Path(path)
    if not path.is_file():
        raise errors.MissingFile(path)
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
    lon, lat, val = data["lon"], data["lat"], data["value"]
    ulon, ulat = np.unique(lon), np.unique(lat)
    n_lon, n_lat = len(ulon), len(ulat)
    if n_lon * n_lat != len(val):
        raise errors.MalformedRow(path, 0, "field file is not a complete rectangular grid")
    bbox = (float(ulon[0]), float(ulon[-1]), float(ulat[0]), float(ulat[-1]))
    values = np.full((n_lon, n_lat), np.nan)
    values[np.searchsorted(ulon, lon), np.searchsorted(ulat, lat)] = val
    mask = np.isfinite(values)
    mask.setflags(write=False)
    grid = Grid(bbox, n_lon, n_lat, mask)
    return ScalarField(grid, values)


def contours_to_geojson(contours, level: float) -> dict:
    ranked = rank_contours(contours)
    features = []
    for rank, line in enumerate(ranked):
        features.append(
            {
                "type": "Feature",
                "properties": {"level": level, "rank": rank, "length_km": polyline_length_km(line)},
                "geometry": {"type": "LineString", "coordinates": line.coords.tolist()},
            }
        )
    return {"type": "FeatureCollection", "features": features}
