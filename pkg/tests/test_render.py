import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from divideline import errors
from divideline.field_contour import ScalarField
from divideline.geodata import GeoPoint, LandmassMask, Polyline, make_grid
from divideline.render import (
    MID_COLOR,
    BoundaryLayer,
    HeatmapLayer,
    LandmarkLayer,
    LineLayer,
    PointsLayer,
    Scene,
    Viewport,
    diverging_color,
    render_svg,
)

SVG = "{http://www.w3.org/2000/svg}"
BBOX = (-4.0, 2.0, 50.0, 56.0)


def full_scene(width=600.0, height=400.0):
    g = make_grid(BBOX, 7, 5)
    nodes = g.nodes()
    fld = ScalarField(g, (nodes[..., 1] - 50) / 6)
    return Scene(
        Viewport(BBOX, width, height),
        [
            HeatmapLayer(fld, 0.5),
            BoundaryLayer(LandmassMask.from_rings([[-3, 51], [1, 51], [1, 55], [-3, 55]])),
            PointsLayer(np.array([[-1.0, 53.0], [0.5, 51.5]]), np.array([1, -1])),
            LineLayer(Polyline([[-4, 52.5], [2, 53.1]]), label="svm & ann <test>"),
            LandmarkLayer("Watford Gap services", GeoPoint(-1.1105, 52.3030)),
        ],
    )


def test_point_at_center_maps_to_pixel_center():
    svg = render_svg(Scene(Viewport(BBOX, 600, 400), [PointsLayer(np.array([[-1.0, 53.0]]), np.array([1]))]))
    (circle,) = ET.fromstring(svg.encode()).iter(SVG + "circle")
    assert float(circle.get("cx")) == 300.0
    assert float(circle.get("cy")) == 200.0
    assert circle.get("fill") == "#2166ac"


def test_class_colours():
    svg = render_svg(Scene(Viewport(BBOX), [PointsLayer(np.array([[0.0, 52.0], [1.0, 52.0]]), np.array([1, -1]))]))
    fills = [c.get("fill") for c in ET.fromstring(svg.encode()).iter(SVG + "circle")]
    assert fills == ["#2166ac", "#d6302b"]


def test_byte_identical():
    assert render_svg(full_scene()) == render_svg(full_scene())


def test_level_gets_exact_mid_colour():
    assert diverging_color(0.5, 0.5) == "#{:02x}{:02x}{:02x}".format(*MID_COLOR)
    assert diverging_color(0.4641, 0.4641, 0.0, 1.0) == "#f7f7f7"
    assert diverging_color(0.0, 0.5) == "#2166ac"
    assert diverging_color(1.0, 0.5) == "#d6302b"


def test_heatmap_cell_at_level():
    g = make_grid((0, 1, 0, 1), 2, 2)
    fld = ScalarField(g, np.full((2, 2), 0.3))
    svg = render_svg(Scene(Viewport((0, 1, 0, 1)), [HeatmapLayer(fld, 0.3)]))
    rects = [r for r in ET.fromstring(svg.encode()).iter(SVG + "rect")][1:]
    assert len(rects) == 4 and all(r.get("fill") == "#f7f7f7" for r in rects)


def test_well_formed_xml_with_escaped_text():
    root = ET.fromstring(render_svg(full_scene()).encode())
    assert root.tag == SVG + "svg"
    assert root.get("version") == "1.1"
    titles = [t.text for t in root.iter(SVG + "title")]
    assert titles == ["svm & ann <test>"]


def numbers(svg):
    attrs = re.findall(r'\s(?:x|y|cx|cy|width|height|d)="([^"]*)"', svg)
    return [float(v) for a in attrs for v in re.findall(r"-?\d+\.\d+|-?\d+", a)]


def test_doubling_viewport_doubles_coordinates():
    body = lambda s: s.split("\n", 2)[2]  # drop the xml prolog and svg element
    a = numbers(body(render_svg(full_scene(600, 400))))
    b = numbers(body(render_svg(full_scene(1200, 800))))
    assert len(a) == len(b) > 50
    assert np.allclose(b, 2 * np.array(a), atol=2e-3)


def test_empty_scene():
    with pytest.raises(errors.EmptyScene):
        render_svg(Scene(Viewport(BBOX), []))


def test_viewport_fit_aspect():
    vp = Viewport.fit(BBOX, 600)
    assert vp.height == 600
    assert Viewport.fit(BBOX, 600, aspect_cos_lat=True).height > 600
    with pytest.raises(ValueError):
        Viewport((0, 0, 0, 1))
