"""Geospatial inputs: store points, regional incomes, landmass masks and grids.

Coordinates are held as ``(lon, lat)`` everywhere inside the package.  The CSV
formats put latitude first because that is how people write coordinates;
the loaders swap on the way in and the writers swap back on the way out.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import errors
from .rng import SYNTH_STREAM, rng_for

NORTH = 1
SOUTH = -1

# lon_min, lon_max, lat_min, lat_max; covers England including Scilly
ENGLAND_BBOX = (-6.4, 1.8, 49.9, 55.9)

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_BOUNDARY = DATA_DIR / "england.geojson"


@dataclass(frozen=True)
class GeoPoint:
    lon: float
    lat: float

    def __post_init__(self):
        check_coordinates(np.array([[self.lon, self.lat]], dtype=float))


@dataclass(frozen=True)
class LabeledPoint:
    point: GeoPoint
    label: int

    def __post_init__(self):
        if self.label not in (NORTH, SOUTH):
            raise ValueError(f"label must be +1 or -1, got {self.label!r}")


def check_coordinates(coords: np.ndarray, where: str = "") -> None:
    """Raise CoordinateOutOfRange unless every (lon, lat) row is finite and in range."""
    coords = np.asarray(coords, dtype=float)
    prefix = f"{where}: " if where else ""
    if not np.all(np.isfinite(coords)):
        raise errors.CoordinateOutOfRange(f"{prefix}non-finite coordinate")
    bad_lon = np.abs(coords[:, 0]) > 180.0
    bad_lat = np.abs(coords[:, 1]) > 90.0
    if bad_lon.any() or bad_lat.any():
        k = int(np.flatnonzero(bad_lon | bad_lat)[0])
        lon, lat = coords[k]
        raise errors.CoordinateOutOfRange(f"{prefix}lon={lon!r} lat={lat!r} outside WGS84 range")


def _frozen(a, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StoreDataset:
    """Labelled store locations.

    ``coords`` is an ``(n, 2)`` array of ``(lon, lat)``; ``labels`` holds +1
    for the northern brand and -1 for the southern one.  ``brand_names`` is
    ``(north_brand, south_brand)``.
    """

    coords: np.ndarray
    labels: np.ndarray
    brand_names: tuple[str, str] = ("North", "South")

    def __post_init__(self):
        coords = _frozen(self.coords, float).reshape(-1, 2)
        labels = _frozen(self.labels, np.int64).reshape(-1)
        if len(coords) != len(labels):
            raise ValueError("coords and labels differ in length")
        if not np.all(np.isin(labels, (NORTH, SOUTH))):
            raise ValueError("labels must be +1 or -1")
        check_coordinates(coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "brand_names", tuple(self.brand_names))

    @classmethod
    def from_points(cls, points: Iterable[LabeledPoint], brand_names=("North", "South")):
        points = list(points)
        coords = np.array([[p.point.lon, p.point.lat] for p in points], dtype=float).reshape(-1, 2)
        labels = np.array([p.label for p in points], dtype=np.int64)
        return cls(coords, labels, brand_names)

    @property
    def points(self) -> list[LabeledPoint]:
        return [
            LabeledPoint(GeoPoint(float(x), float(y)), int(l))
            for (x, y), l in zip(self.coords, self.labels)
        ]

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, StoreDataset):
            return NotImplemented
        return (
            self.brand_names == other.brand_names
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    def count(self, label: int) -> int:
        return int(np.count_nonzero(self.labels == label))

    def subset(self, index) -> StoreDataset:
        index = np.asarray(index, dtype=np.intp)
        return StoreDataset(self.coords[index], self.labels[index], self.brand_names)

    def require_two_per_class(self) -> None:
        for label, name in zip((NORTH, SOUTH), self.brand_names):
            if self.count(label) < 2:
                raise errors.FewerThanTwoPerClass(
                    f"brand {name!r} has {self.count(label)} point(s); need at least 2"
                )


def dedup_points(coords: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Indices of first occurrences of each exact (lon, lat, label) triple, in order."""
    seen = set()
    keep = []
    for k, ((x, y), l) in enumerate(zip(coords.tolist(), labels.tolist())):
        key = (x, y, l)
        if key not in seen:
            seen.add(key)
            keep.append(k)
    return np.array(keep, dtype=np.intp)


def _read_csv_rows(path, header: Sequence[str]):
    path = Path(path)
    if not path.is_file():
        raise errors.MissingFile(path)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise errors.MalformedRow(path, 1, "empty file") from None
        if [c.strip().lower() for c in first] != list(header):
            raise errors.MalformedRow(path, 1, f"expected header {','.join(header)!r}, got {','.join(first)!r}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise errors.MalformedRow(path, reader.line_num, f"expected {len(header)} fields, got {len(row)}")
            yield reader.line_num, [c.strip() for c in row]


def _parse_float(path, line, text, name):
    try:
        value = float(text)
    except ValueError:
        raise errors.MalformedRow(path, line, f"{name} {text!r} is not a number") from None
    if not math.isfinite(value):
        raise errors.MalformedRow(path, line, f"{name} is not finite")
    return value


def load_store_csv(path, north_brand: str, south_brand: str) -> StoreDataset:
    """Read a ``brand,lat,lon`` CSV into a deduplicated :class:`StoreDataset`."""
    brands = {north_brand: NORTH, south_brand: SOUTH}
    coords, labels = [], []
    for line, (brand, lat, lon) in _read_csv_rows(path, ("brand", "lat", "lon")):
        if brand not in brands:
            raise errors.UnknownBrand(f"{path}:{line}: brand {brand!r} is neither {north_brand!r} nor {south_brand!r}")
        lat = _parse_float(path, line, lat, "lat")
        lon = _parse_float(path, line, lon, "lon")
        try:
            check_coordinates(np.array([[lon, lat]]))
        except errors.CoordinateOutOfRange as exc:
            raise errors.CoordinateOutOfRange(f"{path}:{line}: {exc}") from None
        coords.append((lon, lat))
        labels.append(brands[brand])
    coords = np.array(coords, dtype=float).reshape(-1, 2)
    labels = np.array(labels, dtype=np.int64)
    keep = dedup_points(coords, labels)
    ds = StoreDataset(coords[keep], labels[keep], (north_brand, south_brand))
    ds.require_two_per_class()
    return ds


def write_store_csv(dataset: StoreDataset, path) -> None:
    north, south = dataset.brand_names
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["brand", "lat", "lon"])
        for (lon, lat), label in zip(dataset.coords.tolist(), dataset.labels.tolist()):
            w.writerow([north if label == NORTH else south, repr(lat), repr(lon)])


@dataclass(frozen=True)
class IncomeRecord:
    region_name: str
    centroid: GeoPoint
    gdhi: float

    def __post_init__(self):
        if not (math.isfinite(self.gdhi) and self.gdhi > 0):
            raise errors.NonPositiveIncome(f"{self.region_name}: gdhi must be positive, got {self.gdhi!r}")


@dataclass(frozen=True)
class IncomeDataset:
    records: tuple[IncomeRecord, ...]
    national_mean: float

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise errors.InputError("income dataset is empty")
        names = [r.region_name for r in self.records]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise errors.DuplicateRegion(f"region {dup!r} appears more than once")

    @property
    def coords(self) -> np.ndarray:
        return np.array([[r.centroid.lon, r.centroid.lat] for r in self.records], dtype=float)

    @property
    def gdhi(self) -> np.ndarray:
        return np.array([r.gdhi for r in self.records], dtype=float)


def load_income_csv(path, national_mean: float | None = None) -> IncomeDataset:
    """Read a ``region,lat,lon,gdhi`` CSV.

    The national mean defaults to the unweighted mean of the gdhi column;
    pass ``national_mean`` to use a published figure instead.
    """
    records = []
    seen = set()
    for line, (name, lat, lon, gdhi) in _read_csv_rows(path, ("region", "lat", "lon", "gdhi")):
        lat = _parse_float(path, line, lat, "lat")
        lon = _parse_float(path, line, lon, "lon")
        gdhi = _parse_float(path, line, gdhi, "gdhi")
        if gdhi <= 0:
            raise errors.NonPositiveIncome(f"{path}:{line}: gdhi must be positive, got {gdhi!r}")
        if name in seen:
            raise errors.DuplicateRegion(f"{path}:{line}: region {name!r} appears more than once")
        seen.add(name)
        try:
            centroid = GeoPoint(lon, lat)
        except errors.CoordinateOutOfRange as exc:
            raise errors.CoordinateOutOfRange(f"{path}:{line}: {exc}") from None
        records.append(IncomeRecord(name, centroid, gdhi))
    if not records:
        raise errors.MalformedRow(path, 2, "no data rows")
    if national_mean is None:
        national_mean = math.fsum(r.gdhi for r in records) / len(records)
    return IncomeDataset(tuple(records), float(national_mean))


def write_income_csv(income: IncomeDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["region", "lat", "lon", "gdhi"])
        for r in income.records:
            w.writerow([r.region_name, repr(r.centroid.lat), repr(r.centroid.lon), repr(r.gdhi)])


# --- polygons -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polygon:
    exterior: np.ndarray
    holes: tuple[np.ndarray, ...] = ()


@dataclass(frozen=True, eq=False)
class LandmassMask:
    """Union of polygons (with optional holes).  Rings are closed (first == last)."""

    polygons: tuple[Polygon, ...]

    @property
    def rings(self) -> list[np.ndarray]:
        out = []
        for poly in self.polygons:
            out.append(poly.exterior)
            out.extend(poly.holes)
        return out

    @classmethod
    def from_rings(cls, exterior, holes=()) -> LandmassMask:
        return cls((Polygon(_close_ring(exterior), tuple(_close_ring(h) for h in holes)),))


def _segments_cross(p1, p2, q1, q2) -> np.ndarray:
    """Vectorised proper-or-touching intersection test of one segment against many."""

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    proper = (np.sign(d1) * np.sign(d2) < 0) & (np.sign(d3) * np.sign(d4) < 0)

    def on_seg(a, b, c, d):
        return (d == 0) & (np.minimum(a[..., 0], b[..., 0]) <= c[..., 0]) & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0])) & (
            np.minimum(a[..., 1], b[..., 1]) <= c[..., 1]) & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1]))

    touch = on_seg(q1, q2, p1, d1) | on_seg(q1, q2, p2, d2) | on_seg(p1, p2, q1, d3) | on_seg(p1, p2, q2, d4)
    return proper | touch


def _check_simple(ring: np.ndarray) -> None:
    a, b = ring[:-1], ring[1:]
    m = len(a)
    if m < 4:
        return
    for i in range(m - 2):
        js = np.arange(i + 2, m)
        if i == 0:
            js = js[js != m - 1]  # first and last edges share the closing vertex
        if len(js) == 0:
            continue
        hit = _segments_cross(a[i], b[i], a[js], b[js])
        if hit.any():
            raise errors.SelfIntersectingRing(f"ring edges {i} and {int(js[np.argmax(hit)])} intersect")


def _close_ring(coords) -> np.ndarray:
    ring = np.asarray(coords, dtype=float)
    if ring.ndim != 2 or ring.shape[1] < 2:
        raise errors.DegenerateRing("ring must be a list of positions")
    ring = ring[:, :2]
    check_coordinates(ring)
    if len(ring) == 0 or not np.array_equal(ring[0], ring[-1]):
        ring = np.vstack([ring, ring[:1]])
    if len(ring) < 4:
        raise errors.DegenerateRing(f"ring has {len(ring)} vertices after closure; need at least 4")
    _check_simple(ring)
    ring.setflags(write=False)
    return ring


def _geometries(obj) -> list[dict]:
    kind = obj.get("type")
    if kind == "FeatureCollection":
        out = []
        for feat in obj.get("features", []):
            out.extend(_geometries(feat))
        return out
    if kind == "Feature":
        geom = obj.get("geometry")
        if geom is None:
            return []
        return _geometries(geom)
    if kind == "GeometryCollection":
        out = []
        for g in obj.get("geometries", []):
            out.extend(_geometries(g))
        return out
    return [obj]


def _read_geojson(path):
    path = Path(path)
    if not path.is_file():
        raise errors.MissingFile(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise errors.InvalidGeometry(f"{path}: not valid JSON ({exc})") from None


def mask_from_geojson(obj) -> LandmassMask:
    polygons = []
    for geom in _geometries(obj):
        kind = geom.get("type")
        if kind == "Polygon":
            parts = [geom["coordinates"]]
        elif kind == "MultiPolygon":
            parts = geom["coordinates"]
        else:
            raise errors.NotAPolygon(f"expected Polygon or MultiPolygon geometry, got {kind!r}")
        for rings in parts:
            if not rings:
                raise errors.DegenerateRing("polygon without rings")
            polygons.append(Polygon(_close_ring(rings[0]), tuple(_close_ring(h) for h in rings[1:])))
    if not polygons:
        raise errors.NotAPolygon("no polygon geometry found")
    return LandmassMask(tuple(polygons))


def load_boundary(path) -> LandmassMask:
    """Load a GeoJSON Polygon/MultiPolygon (bare, Feature or FeatureCollection)."""
    return mask_from_geojson(_read_geojson(path))


def mask_to_geojson(mask: LandmassMask) -> dict:
    coords = [[p.exterior.tolist(), *[h.tolist() for h in p.holes]] for p in mask.polygons]
    geom = {"type": "MultiPolygon", "coordinates": coords}
    return {"type": "FeatureCollection", "features": [{"type": "Feature", "properties": {}, "geometry": geom}]}


def _ring_test(ring: np.ndarray, x: np.ndarray, y: np.ndarray):
    """Even-odd crossing parity and on-boundary flags for points against one ring."""
    inside = np.zeros(x.shape, dtype=bool)
    on_edge = np.zeros(x.shape, dtype=bool)
    for (x1, y1), (x2, y2) in zip(ring[:-1].tolist(), ring[1:].tolist()):
        ylo, yhi = min(y1, y2), max(y1, y2)
        band = (y >= ylo) & (y <= yhi)
        if not band.any():
            continue
        xb, yb = x[band], y[band]
        cross = (x2 - x1) * (yb - y1) - (y2 - y1) * (xb - x1)
        seg_len = abs(x2 - x1) + abs(y2 - y1)
        on = (np.abs(cross) <= 1e-12 * seg_len) & (xb >= min(x1, x2)) & (xb <= max(x1, x2))
        on_edge[band] |= on
        if y1 != y2:
            straddle = (y1 > yb) != (y2 > yb)
            xint = x1 + (yb - y1) * (x2 - x1) / (y2 - y1)
            inside[band] ^= straddle & (xb < xint)
    return inside, on_edge


def points_in_mask(coords, mask: LandmassMask | None) -> np.ndarray:
    """Vectorised :func:`point_in_mask` over an ``(n, 2)`` array.  ``None`` means the whole plane."""
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    if mask is None:
        return np.ones(len(coords), dtype=bool)
    x, y = coords[:, 0], coords[:, 1]
    result = np.zeros(len(coords), dtype=bool)
    for poly in mask.polygons:
        inside, on_edge = _ring_test(poly.exterior, x, y)
        hit = inside | on_edge
        for hole in poly.holes:
            h_in, h_on = _ring_test(hole, x, y)
            hit &= ~(h_in & ~h_on)
        result |= hit
    return result


def point_in_mask(p: GeoPoint, mask: LandmassMask | None) -> bool:
    """Even-odd ray casting; points on any ring boundary count as inside."""
    return bool(points_in_mask([[p.lon, p.lat]], mask)[0])


# --- grids ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Grid:
    """Regular lon/lat lattice.  Arrays indexed ``[i_lon, j_lat]``."""

    bbox: tuple[float, float, float, float]
    n_lon: int
    n_lat: int
    mask: np.ndarray = field(repr=False)

    @property
    def lons(self) -> np.ndarray:
        return np.linspace(self.bbox[0], self.bbox[1], self.n_lon)

    @property
    def lats(self) -> np.ndarray:
        return np.linspace(self.bbox[2], self.bbox[3], self.n_lat)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_lon, self.n_lat)

    def nodes(self) -> np.ndarray:
        """``(n_lon, n_lat, 2)`` array of node coordinates."""
        lon, lat = np.meshgrid(self.lons, self.lats, indexing="ij")
        return np.stack([lon, lat], axis=-1)

    def node(self, i: int, j: int) -> GeoPoint:
        return GeoPoint(float(self.lons[i]), float(self.lats[j]))

    def masked_nodes(self) -> np.ndarray:
        return self.nodes()[self.mask]


def make_grid(bbox, n_lon: int, n_lat: int, mask: LandmassMask | None = None) -> Grid:
    lon_min, lon_max, lat_min, lat_max = (float(v) for v in bbox)
    if n_lon < 2 or n_lat < 2:
        raise errors.DegenerateBbox(f"grid needs at least 2x2 nodes, got {n_lon}x{n_lat}")
    if not (lon_min < lon_max and lat_min < lat_max):
        raise errors.DegenerateBbox(f"degenerate bbox {bbox!r}")
    check_coordinates(np.array([[lon_min, lat_min], [lon_max, lat_max]]))
    grid = Grid((lon_min, lon_max, lat_min, lat_max), int(n_lon), int(n_lat), np.ones((n_lon, n_lat), bool))
    inside = points_in_mask(grid.nodes().reshape(-1, 2), mask).reshape(n_lon, n_lat)
    inside.setflags(write=False)
    object.__setattr__(grid, "mask", inside)
    return grid


# --- polylines --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polyline:
    """Ordered ``(lon, lat)`` vertices, at least two, no consecutive repeats."""

    coords: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coords, float).reshape(-1, 2)
        if len(c) < 2:
            raise errors.InvalidGeometry("polyline needs at least 2 points")
        if np.any(np.all(c[1:] == c[:-1], axis=1)):
            raise errors.InvalidGeometry("polyline has repeated consecutive points")
        check_coordinates(c)
        object.__setattr__(self, "coords", c)

    @property
    def points(self) -> list[GeoPoint]:
        return [GeoPoint(float(x), float(y)) for x, y in self.coords]

    @property
    def closed(self) -> bool:
        return len(self.coords) > 2 and np.array_equal(self.coords[0], self.coords[-1])

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        if not isinstance(other, Polyline):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ReferenceLine:
    name: str
    polyline: Polyline


def load_reference_line(path, name: str | None = None) -> ReferenceLine:
    """First LineString (or MultiLineString part) in a GeoJSON file."""
    obj = _read_geojson(path)
    for geom in _geometries(obj):
        if geom.get("type") == "LineString":
            coords = geom["coordinates"]
        elif geom.get("type") == "MultiLineString" and geom["coordinates"]:
            coords = geom["coordinates"][0]
        else:
            continue
        coords = np.array(coords, dtype=float)[:, :2]
        label = name
        if label is None:
            props = obj.get("properties") if obj.get("type") == "Feature" else None
            label = (props or {}).get("name") or Path(path).stem
        return ReferenceLine(label, Polyline(coords))
    raise errors.InvalidGeometry(f"{path}: no LineString geometry found")


def load_polylines(path) -> list[tuple[Polyline, dict]]:
    """All LineStrings in a GeoJSON file with their feature properties."""
    obj = _read_geojson(path)
    feats = obj.get("features", [obj]) if obj.get("type") == "FeatureCollection" else [obj]
    out = []
    for feat in feats:
        props = feat.get("properties") or {} if feat.get("type") == "Feature" else {}
        for geom in _geometries(feat):
            if geom.get("type") == "LineString":
                out.append((Polyline(np.array(geom["coordinates"], dtype=float)[:, :2]), dict(props)))
            elif geom.get("type") == "MultiLineString":
                for part in geom["coordinates"]:
                    out.append((Polyline(np.array(part, dtype=float)[:, :2]), dict(props)))
    if not out:
        raise errors.InvalidGeometry(f"{path}: no LineString geometry found")
    return out


def polylines_to_geojson(items: Sequence[tuple[Polyline, dict]]) -> dict:
    features = [
        {
            "type": "Feature",
            "properties": dict(props),
            "geometry": {"type": "LineString", "coordinates": line.coords.tolist()},
        }
        for line, props in items
    ]
    return {"type": "FeatureCollection", "features": features}


# --- synthetic data -------------------------------------------------------------


def synth_two_brand(
    n_north: int,
    n_south: int,
    separation: float,
    noise_sd: float,
    seed: int,
    center: tuple[float, float] = (-1.5, 52.5),
    brand_names: tuple[str, str] = ("North", "South"),
) -> StoreDataset:
    """Two isotropic Gaussian clusters ``separation`` degrees apart in latitude.

    The northern cluster is centred at ``center_lat + separation / 2``.
    """
    if n_north < 2 or n_south < 2:
        raise errors.FewerThanTwoPerClass("synthetic clusters need at least 2 points each")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    rng = rng_for(seed, SYNTH_STREAM)
    lon0, lat0 = center
    north = np.array([lon0, lat0 + separation / 2.0]) + noise_sd * rng.standard_normal((n_north, 2))
    south = np.array([lon0, lat0 - separation / 2.0]) + noise_sd * rng.standard_normal((n_south, 2))
    coords = np.vstack([north, south])
    labels = np.concatenate([np.full(n_north, NORTH), np.full(n_south, SOUTH)])
    return StoreDataset(coords, labels, brand_names)


def synth_income(
    n_regions: int,
    seed: int,
    bbox=(-3.0, 1.0, 50.6, 54.8),
    hub: tuple[float, float] = (-0.13, 51.51),
    national_mean: float | None = None,
) -> IncomeDataset:
    """Fake regional incomes that decay with distance from ``hub``."""
    rng = rng_for(seed, SYNTH_STREAM, 1)
    lon = rng.uniform(bbox[0], bbox[1], n_regions)
    lat = rng.uniform(bbox[2], bbox[3], n_regions)
    dist = np.hypot((lon - hub[0]) * math.cos(math.radians(52.5)), lat - hub[1])
    gdhi = 17000.0 + 14000.0 * np.exp(-dist / 0.9) + 800.0 * rng.standard_normal(n_regions)
    gdhi = np.maximum(gdhi, 1000.0)
    records = tuple(
        IncomeRecord(f"Region {k + 1:02d}", GeoPoint(float(x), float(y)), float(round(g)))
        for k, (x, y, g) in enumerate(zip(lon, lat, gdhi))
    )
    if national_mean is None:
        national_mean = math.fsum(r.gdhi for r in records) / len(records)
    return IncomeDataset(records, float(national_mean))
