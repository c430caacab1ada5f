"""Static SVG figures: store scatter, prediction heatmap, dividing lines, landmarks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union
from xml.sax.saxutils import quoteattr

import numpy as np

from . import errors
from .geodata import NORTH, GeoPoint, LandmassMask, Polyline

NORTH_COLOR = "#2166ac"
SOUTH_COLOR = "#d6302b"
LOW_COLOR = (33, 102, 172)  # field value 0: northern
MID_COLOR = (247, 247, 247)
HIGH_COLOR = (214, 48, 43)  # field value 1: southern
ASPECT_LAT = 53.0


@dataclass(frozen=True)
class Viewport:
    bbox: tuple[float, float, float, float]
    width: float = 800.0
    height: float = 600.0

    def __post_init__(self):
        lon_min, lon_max, lat_min, lat_max = self.bbox
        if not (lon_min < lon_max and lat_min < lat_max and self.width > 0 and self.height > 0):
            raise ValueError(f"degenerate viewport {self}")

    @classmethod
    def fit(cls, bbox, width: float = 800.0, aspect_cos_lat: bool = False) -> Viewport:
        """Viewport whose height keeps degrees square (or cos(53 deg)-corrected if asked)."""
        lon_min, lon_max, lat_min, lat_max = bbox
        kx = math.cos(math.radians(ASPECT_LAT)) if aspect_cos_lat else 1.0
        height = width * (lat_max - lat_min) / ((lon_max - lon_min) * kx)
        return cls(tuple(bbox), float(width), float(height))

    def x(self, lon):
        lon_min, lon_max = self.bbox[0], self.bbox[1]
        return (np.asarray(lon, dtype=float) - lon_min) / (lon_max - lon_min) * self.width

    def y(self, lat):
        lat_min, lat_max = self.bbox[2], self.bbox[3]
        return (lat_max - np.asarray(lat, dtype=float)) / (lat_max - lat_min) * self.height


@dataclass(frozen=True, eq=False)
class PointsLayer:
    coords: np.ndarray
    labels: np.ndarray
    radius: float = 2.0


@dataclass(frozen=True, eq=False)
class HeatmapLayer:
    field: object  # ScalarField
    level: float = 0.5
    lo: float = 0.0
    hi: float = 1.0


@dataclass(frozen=True, eq=False)
class LineLayer:
    polyline: Polyline
    color: str = "#000000"
    width: float = 2.0
    dash: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class LandmarkLayer:
    name: str
    point: GeoPoint


@dataclass(frozen=True, eq=False)
class BoundaryLayer:
    mask: LandmassMask
    color: str = "#555555"


Layer = Union[PointsLayer, HeatmapLayer, LineLayer, LandmarkLayer, BoundaryLayer]


@dataclass(eq=False)
class Scene:
    viewport: Viewport
    layers: list = field(default_factory=list)


def _f(v) -> str:
    return f"{float(v):.3f}"


def _hex(rgb) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _mix(a, b, t):
    return tuple(int(round(x + (y - x) * t)) for x, y in zip(a, b))


def diverging_color(value: float, level: float, lo: float = 0.0, hi: float = 1.0) -> str:
    """Blue below ``level``, red above, the neutral mid colour exactly at ``level``."""
    if value == level:
        return _hex(MID_COLOR)
    if value < level:
        span = level - lo
        t = 1.0 if span <= 0 else min(max((level - value) / span, 0.0), 1.0)
        return _hex(_mix(MID_COLOR, LOW_COLOR, t))
    span = hi - level
    t = 1.0 if span <= 0 else min(max((value - level) / span, 0.0), 1.0)
    return _hex(_mix(MID_COLOR, HIGH_COLOR, t))


def _heatmap(vp: Viewport, layer: HeatmapLayer) -> list[str]:
    fld = layer.field
    lons, lats = fld.grid.lons, fld.grid.lats
    dx = (lons[-1] - lons[0]) / (len(lons) - 1)
    dy = (lats[-1] - lats[0]) / (len(lats) - 1)
    w = dx / (vp.bbox[1] - vp.bbox[0]) * vp.width
    h = dy / (vp.bbox[3] - vp.bbox[2]) * vp.height
    out = ['<g class="heatmap" shape-rendering="crispEdges">']
    xs = vp.x(lons - dx / 2)
    ys = vp.y(lats + dy / 2)
    for i in range(len(lons)):
        for j in range(len(lats)):
            v = fld.values[i, j]
            if not math.isfinite(v):
                continue
            color = diverging_color(float(v), layer.level, layer.lo, layer.hi)
            out.append(f'<rect x="{_f(xs[i])}" y="{_f(ys[j])}" width="{_f(w)}" height="{_f(h)}" fill="{color}"/>')
    out.append("</g>")
    return out


def _points(vp: Viewport, layer: PointsLayer) -> list[str]:
    out = ['<g class="stores" fill-opacity="0.8">']
    xs, ys = vp.x(layer.coords[:, 0]), vp.y(layer.coords[:, 1])
    for x, y, lab in zip(xs, ys, layer.labels):
        color = NORTH_COLOR if lab == NORTH else SOUTH_COLOR
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(layer.radius)}" fill="{color}"/>')
    out.append("</g>")
    return out


def _path(vp: Viewport, coords) -> str:
    xs, ys = vp.x(coords[:, 0]), vp.y(coords[:, 1])
    return "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in zip(xs, ys))


def _line(vp: Viewport, layer: LineLayer) -> list[str]:
    attrs = f'fill="none" stroke="{layer.color}" stroke-width="{_f(layer.width)}"'
    if layer.dash:
        attrs += f' stroke-dasharray="{layer.dash}"'
    title = f"<title>{_esc(layer.label)}</title>" if layer.label else ""
    return [f'<path d="{_path(vp, layer.polyline.coords)}" {attrs}>{title}</path>']


def _esc(text: str) -> str:
    return quoteattr(text)[1:-1]


def _landmark(vp: Viewport, layer: LandmarkLayer) -> list[str]:
    x, y = float(vp.x(layer.point.lon)), float(vp.y(layer.point.lat))
    off = vp.width / 100  # label offset scales with the figure so geometry stays affine
    return [
        f'<g class="landmark"><circle cx="{_f(x)}" cy="{_f(y)}" r="4.000" fill="#ffd400" stroke="#000000"/>'
        f'<text x="{_f(x + off)}" y="{_f(y - off)}" font-family="sans-serif" font-size="12">{_esc(layer.name)}</text></g>'
    ]


def _boundary(vp: Viewport, layer: BoundaryLayer) -> list[str]:
    d = " ".join(_path(vp, ring) + " Z" for ring in layer.mask.rings)
    return [f'<path class="boundary" d="{d}" fill="none" stroke="{layer.color}" stroke-width="1.000"/>']


_DRAW = {
    PointsLayer: _points,
    HeatmapLayer: _heatmap,
    LineLayer: _line,
    LandmarkLayer: _landmark,
    BoundaryLayer: _boundary,
}


def render_svg(scene: Scene) -> str:
    """Serialise ``scene`` to an SVG 1.1 document; layers are painted in list order."""
    if not scene.layers:
        raise errors.EmptyScene("scene has no layers")
    vp = scene.viewport
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(vp.width)}" height="{_f(vp.height)}" '
        f'viewBox="0 0 {_f(vp.width)} {_f(vp.height)}">',
        f'<rect x="0" y="0" width="{_f(vp.width)}" height="{_f(vp.height)}" fill="#ffffff"/>',
    ]
    for layer in scene.layers:
        parts.extend(_DRAW[type(layer)](vp, layer))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def line_styles() -> Sequence[tuple[str, str | None]]:
    """Stroke colour and dash pattern cycled across overlaid dividing lines."""
    return [("#000000", None), ("#7b3294", "8 4"), ("#008837", "2 3"), ("#e66101", "10 3 2 3")]
