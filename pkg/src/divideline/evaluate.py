"""Accuracy accounting, great-circle distances and line comparison reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import errors
from .geodata import DATA_DIR, GeoPoint, Polyline, ReferenceLine, _parse_float, _read_csv_rows

EARTH_RADIUS_KM = 6371.0088
KM_PER_MILE = 1.609344
DEFAULT_LANDMARKS = DATA_DIR / "landmarks.csv"


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    return float(haversine_many(np.array([a.lon, a.lat]), np.array([[b.lon, b.lat]]))[0])


def haversine_many(p, coords) -> np.ndarray:
    """Great-circle distance from one ``(lon, lat)`` to each row of ``coords``."""
    p = np.asarray(p, dtype=float)
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    lon1, lat1 = np.radians(p[0]), np.radians(p[1])
    lon2, lat2 = np.radians(coords[:, 0]), np.radians(coords[:, 1])
    h = np.sin((lat2 - lat1) / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2) ** 2
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def _nearest_on_segments(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Closest point on each segment ``a[k]-b[k]`` to ``p`` in an equirectangular frame centred at ``p``."""
    kx = math.cos(math.radians(p[1]))
    scale = np.array([kx, 1.0])
    pa = (a - p) * scale
    ab = (b - a) * scale
    denom = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(denom > 0, -np.einsum("ij,ij->i", pa, ab) / denom, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return a + t[:, None] * (b - a)


def point_to_polyline_km(p: GeoPoint, line: Polyline) -> float:
    """Distance from ``p`` to the nearest point of ``line``.

    The nearest point on each segment is found in a local planar projection
    about ``p``; the distance to it is then measured along the great circle.
    Segment endpoints are also considered, so the answer never exceeds the
    distance to the nearest vertex.
    """
    return float(_point_to_polyline(np.array([p.lon, p.lat], dtype=float), line.coords))


def _point_to_polyline(p: np.ndarray, coords: np.ndarray) -> float:
    a, b = coords[:-1], coords[1:]
    near = _nearest_on_segments(p, a, b)
    d = haversine_many(p, np.vstack([near, coords]))
    return float(d.min())


def sample_along(line: Polyline, n_samples: int) -> np.ndarray:
    """``n_samples`` points spaced uniformly by great-circle arc length, endpoints included."""
    c = line.coords
    seg = np.array([haversine_many(c[k], c[k + 1 : k + 2])[0] for k in range(len(c) - 1)])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    targets = np.linspace(0.0, total, n_samples)
    k = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, len(seg) - 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(seg[k] > 0, (targets - cum[k]) / seg[k], 0.0)
    t = np.clip(t, 0.0, 1.0)
    out = c[k] + t[:, None] * (c[k + 1] - c[k])
    out[0], out[-1] = c[0], c[-1]
    return out


def polyline_length_km(line: Polyline) -> float:
    c = line.coords
    return math.fsum(float(haversine_many(c[k], c[k + 1 : k + 2])[0]) for k in range(len(c) - 1))


@dataclass(frozen=True)
class Discrepancy:
    mean_km: float
    max_km: float
    hausdorff_km: float


def line_discrepancy(a: Polyline, b: Polyline, n_samples: int = 200) -> Discrepancy:
    """Mean and max distance from points sampled along ``a`` to ``b``, plus the symmetric Hausdorff max."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if np.array_equal(a.coords, b.coords):
        return Discrepancy(0.0, 0.0, 0.0)
    ab = np.array([_point_to_polyline(p, b.coords) for p in sample_along(a, n_samples)])
    ba = np.array([_point_to_polyline(p, a.coords) for p in sample_along(b, n_samples)])
    return Discrepancy(
        mean_km=math.fsum(ab) / len(ab),
        max_km=float(ab.max()),
        hausdorff_km=float(max(ab.max(), ba.max())),
    )


def svm_accuracy(h, test) -> float:
    """Fraction of ``test`` whose label matches the sign of ``h``'s decision value (0 counts as +1)."""
    if len(test.labels) == 0:
        raise errors.TestSetEmpty("no test points")
    pred = np.where(h.decision(test.coords) >= 0, 1, -1)
    return float(np.count_nonzero(pred == np.asarray(test.labels))) / len(test.labels)


@dataclass(frozen=True)
class Landmark:
    name: str
    point: GeoPoint


def load_landmarks(path=DEFAULT_LANDMARKS) -> list[Landmark]:
    """Read a ``name,lat,lon`` CSV."""
    out = []
    for line, (name, lat, lon) in _read_csv_rows(path, ("name", "lat", "lon")):
        lat = _parse_float(path, line, lat, "lat")
        lon = _parse_float(path, line, lon, "lon")
        out.append(Landmark(name, GeoPoint(lon, lat)))
    return out


@dataclass
class ComparisonReport:
    """All pairwise line metrics.

    ``landmark_distances[line][landmark]`` is in km.  ``line_discrepancy``
    maps ``"<line> vs <reference>"`` to a :class:`Discrepancy` dict, and
    ``pairwise`` does the same for every pair of computed lines.
    """

    landmark_distances: dict[str, dict[str, float]] = field(default_factory=dict)
    line_discrepancy: dict[str, dict[str, float]] = field(default_factory=dict)
    pairwise: dict[str, dict[str, float]] = field(default_factory=dict)
    accuracies: dict[str, float] = field(default_factory=dict)
    line_lengths_km: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d) -> ComparisonReport:
        return cls(**{k: d.get(k, {}) for k in cls.__dataclass_fields__})

    @classmethod
    def from_json(cls, text: str) -> ComparisonReport:
        return cls.from_dict(json.loads(text))


def build_report(
    lines: Mapping[str, Polyline],
    landmarks: Sequence[Landmark] = (),
    reference: ReferenceLine | None = None,
    accuracies: Mapping[str, float] | None = None,
    n_samples: int = 200,
) -> ComparisonReport:
    if not lines:
        raise ValueError("build_report needs at least one line")
    rep = ComparisonReport(accuracies={k: float(v) for k, v in (accuracies or {}).items()})
    names = list(lines)
    for name in names:
        line = lines[name]
        rep.line_lengths_km[name] = polyline_length_km(line)
        rep.landmark_distances[name] = {lm.name: point_to_polyline_km(lm.point, line) for lm in landmarks}
        if reference is not None:
            rep.line_discrepancy[f"{name} vs {reference.name}"] = asdict(
                line_discrepancy(line, reference.polyline, n_samples)
            )
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            rep.pairwise[f"{a} vs {b}"] = asdict(line_discrepancy(lines[a], lines[b], n_samples))
    return rep


def write_report(report: ComparisonReport, path) -> None:
    Path(path).write_text(report.to_json(), encoding="utf-8")
