import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divideline import errors
from divideline.evaluate import (
    EARTH_RADIUS_KM,
    KM_PER_MILE,
    ComparisonReport,
    Landmark,
    build_report,
    haversine_km,
    line_discrepancy,
    load_landmarks,
    point_to_polyline_km,
    polyline_length_km,
    sample_along,
    svm_accuracy,
)
from divideline.geodata import GeoPoint, Polyline, ReferenceLine, StoreDataset, synth_two_brand
from divideline.linear_svm import Hyperplane, Standardizer
from oracles import meridian_arc_km

lons = st.floats(-180, 180, allow_nan=False)
lats = st.floats(-90, 90, allow_nan=False)
points = st.builds(GeoPoint, lons, lats)


def test_haversine_zero_and_quarter():
    p = GeoPoint(-1.1, 52.3)
    assert haversine_km(p, p) == 0.0
    quarter = 2 * math.pi * EARTH_RADIUS_KM / 4
    assert haversine_km(GeoPoint(0, 0), GeoPoint(90, 0)) == pytest.approx(quarter, abs=0.01)
    assert haversine_km(GeoPoint(0, 0), GeoPoint(0, 90)) == pytest.approx(quarter, abs=0.01)


def test_haversine_meridian():
    assert haversine_km(GeoPoint(-2, 52), GeoPoint(-2, 53)) == pytest.approx(meridian_arc_km(1.0), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(points, points)
def test_haversine_symmetric(a, b):
    assert haversine_km(a, b) == pytest.approx(haversine_km(b, a), rel=1e-12, abs=1e-9)
    assert haversine_km(a, b) >= 0


@settings(max_examples=200, deadline=None)
@given(points, points, points)
def test_triangle_inequality(a, b, c):
    ab, bc, ac = haversine_km(a, b), haversine_km(b, c), haversine_km(a, c)
    assert ac <= (ab + bc) * (1 + 1e-9) + 1e-9


def test_point_on_vertex_is_zero():
    line = Polyline([[-3, 52], [-1, 52.5], [1, 53]])
    assert point_to_polyline_km(GeoPoint(-1, 52.5), line) == 0.0


def test_point_north_of_long_segment():
    line = Polyline([[-4, 52], [4, 52]])
    d = point_to_polyline_km(GeoPoint(0.0, 53.0), line)
    assert d == pytest.approx(meridian_arc_km(1.0), abs=0.5)
    assert d == pytest.approx(111.19, abs=0.5)


def test_point_beyond_segment_end_uses_endpoint():
    line = Polyline([[0, 52], [1, 52]])
    assert point_to_polyline_km(GeoPoint(3, 52), line) == pytest.approx(haversine_km(GeoPoint(3, 52), GeoPoint(1, 52)))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-6, 2), st.floats(50, 56)), min_size=2, max_size=8, unique=True),
    st.floats(-8, 4),
    st.floats(49, 57),
)
def test_polyline_distance_not_above_nearest_vertex(coords, lon, lat):
    coords = [c for k, c in enumerate(coords) if k == 0 or c != coords[k - 1]]
    line = Polyline(coords)
    p = GeoPoint(lon, lat)
    vmin = min(haversine_km(p, GeoPoint(*c)) for c in coords)
    assert point_to_polyline_km(p, line) <= vmin


def test_self_discrepancy_exact_zero():
    line = Polyline([[-3, 51], [-1.2, 52.4], [0.3, 52.1], [1.5, 53.0]])
    d = line_discrepancy(line, line)
    assert (d.mean_km, d.max_km, d.hausdorff_km) == (0.0, 0.0, 0.0)


def test_parallel_lines_half_degree():
    a = Polyline([[-3, 52.0], [0, 52.0]])
    b = Polyline([[-3, 52.5], [0, 52.5]])
    d = line_discrepancy(a, b, 200)
    expect = meridian_arc_km(0.5)
    assert expect == pytest.approx(55.6, abs=0.5)
    assert d.mean_km == pytest.approx(expect, abs=0.5)
    assert d.max_km == pytest.approx(expect, abs=0.5)


def test_hausdorff_symmetric():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = Polyline(np.column_stack([np.sort(rng.uniform(-5, 1, 5)), rng.uniform(51, 54, 5)]))
        b = Polyline(np.column_stack([np.sort(rng.uniform(-5, 1, 4)), rng.uniform(51, 54, 4)]))
        assert line_discrepancy(a, b).hausdorff_km == line_discrepancy(b, a).hausdorff_km


def test_sample_along_uniform_spacing():
    line = Polyline([[0, 52], [1, 52], [3, 52]])
    s = sample_along(line, 7)
    assert s[0].tolist() == [0, 52] and s[-1].tolist() == [3, 52]
    steps = [haversine_km(GeoPoint(*s[k]), GeoPoint(*s[k + 1])) for k in range(6)]
    assert max(steps) - min(steps) < 1e-3 * polyline_length_km(line)


def plane(w, b=0.0):
    return Hyperplane(w, b, Standardizer.identity())


def test_svm_accuracy_true_plane():
    d = synth_two_brand(30, 30, 1.0, 0.05, seed=0, center=(0.0, 0.0))
    assert svm_accuracy(plane([0, 1]), d) == 1.0


def test_svm_accuracy_orthogonal_plane_monte_carlo():
    accs = []
    for seed in range(40):
        d = synth_two_brand(250, 250, 1.0, 0.3, seed=seed, center=(0.0, 0.0))
        accs.append(svm_accuracy(plane([1, 0]), d))
    assert np.mean(accs) == pytest.approx(0.5, abs=0.02)


def test_svm_accuracy_boundary_points_are_positive():
    test = StoreDataset(np.array([[1.0, 0.0], [-2.0, 0.0], [3.0, 0.0]]), np.array([1, -1, 1]), ("N", "S"))
    assert svm_accuracy(plane([0, 1]), test) == pytest.approx(2 / 3)


def test_svm_accuracy_empty():
    empty = StoreDataset(np.zeros((0, 2)), np.zeros(0, dtype=int), ("N", "S"))
    with pytest.raises(errors.TestSetEmpty):
        svm_accuracy(plane([0, 1]), empty)


def test_report_landmark_on_line_and_round_trip():
    line = Polyline([[-2, 52.3030], [-1.1105, 52.3030], [0, 52.6]])
    lm = Landmark("Watford Gap services", GeoPoint(-1.1105, 52.3030))
    ref = ReferenceLine("ref", Polyline([[-3, 51.5], [1, 53]]))
    rep = build_report({"svm": line, "ann": Polyline([[-2, 52], [0, 53]])}, [lm], ref, {"svm": 0.78})
    assert rep.landmark_distances["svm"]["Watford Gap services"] == 0.0
    assert set(rep.line_discrepancy) == {"svm vs ref", "ann vs ref"}
    assert set(rep.pairwise) == {"svm vs ann"}
    back = ComparisonReport.from_json(rep.to_json())
    assert back == rep
    assert back.to_json() == rep.to_json()
    for group in (rep.landmark_distances, rep.line_discrepancy, rep.pairwise):
        assert all(v >= 0 for inner in group.values() for v in inner.values())


def test_default_landmark_file():
    (lm,) = load_landmarks()
    assert lm.name == "Watford Gap services"
    assert (lm.point.lat, lm.point.lon) == (52.3030, -1.1105)


def test_two_miles_in_km():
    assert 2 * KM_PER_MILE == pytest.approx(3.219, abs=5e-4)
