import math

import numpy as np
import pytest

from divideline import errors
from divideline.evaluate import svm_accuracy
from divideline.geodata import NORTH, SOUTH, StoreDataset, make_grid, synth_two_brand
from divideline.linear_svm import (
    Hyperplane,
    Standardizer,
    SvmConfig,
    average_hyperplane,
    fit_standardizer,
    hyperplane_to_polyline,
    solve_dual,
    svm_pipeline,
    train_svm,
)
from divideline.resample import ResamplePlan, SplitSpec, balanced_sample, split
from oracles import max_margin_line, two_pass_mean_sd

HARD = SvmConfig(c=1e6, tol=1e-6, max_passes=2000)
IDENT = Standardizer.identity()


def ds(coords, labels):
    return StoreDataset(np.asarray(coords, dtype=float), np.asarray(labels), ("N", "S"))


def random_separable(rng, n):
    """Points in a box split by a random line, with a guaranteed gap."""
    theta = rng.uniform(0, 2 * math.pi)
    normal = np.array([math.cos(theta), math.sin(theta)])
    pts = []
    while len(pts) < n:
        p = rng.uniform(-3, 3, size=2)
        if abs(p @ normal) > 0.2:
            pts.append(p)
    pts = np.array(pts)
    y = np.where(pts @ normal > 0, 1, -1)
    if (y > 0).sum() < 2 or (y < 0).sum() < 2:
        return random_separable(rng, n)
    return pts, y


def test_standardizer_example():
    s = fit_standardizer(np.array([[0.0, 0.0], [2.0, 2.0]]))
    assert s.mean.tolist() == [1.0, 1.0]
    assert s.sd.tolist() == [1.0, 1.0]


def test_standardizer_zero_variance():
    with pytest.raises(errors.ZeroVariance):
        fit_standardizer(np.array([[1.0, 2.0]] * 5))


def test_standardizer_matches_exact_oracle():
    rng = np.random.default_rng(17)
    pts = np.column_stack([rng.uniform(-6, 2, 1000), 50 + 6 * rng.random(1000)])
    s = fit_standardizer(pts)
    for axis in range(2):
        m, sd = two_pass_mean_sd(pts[:, axis].tolist())
        assert s.mean[axis] == pytest.approx(m, rel=1e-13, abs=1e-13)
        assert s.sd[axis] == pytest.approx(sd, rel=1e-12)


def test_two_point_symmetric_pair():
    h = train_svm(ds([[0, -1], [0, 1]], [SOUTH, NORTH]), IDENT)
    assert h.w.tolist() == pytest.approx([0.0, 1.0], abs=1e-12)
    assert h.b == pytest.approx(0.0, abs=1e-12)
    # margin 1: both points sit on the margin boundaries
    assert h.decision(np.array([[0, 1], [0, -1]])).tolist() == pytest.approx([1.0, -1.0], abs=1e-12)


def test_xor_has_slack_and_low_accuracy():
    # jitter breaks the exact symmetry that would make the optimal normal zero
    x = np.array([[1.0, 1.05], [-1.0, -0.95], [1.0, -1.0], [-1.02, 1.0]])
    y = np.array([1, 1, -1, -1])
    sol = solve_dual(x, y, 1.0, 1e-6, 100000)
    assert sol.converged
    slack = np.maximum(0.0, 1 - y * (x @ sol.w + sol.b))
    assert slack.max() > 0
    h = train_svm(ds(x, y), IDENT)
    assert svm_accuracy(h, ds(x, y)) <= 0.75


def test_perfect_xor_is_degenerate():
    x = np.array([[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
    with pytest.raises(errors.DegenerateHyperplane):
        train_svm(ds(x, [1, 1, -1, -1]), IDENT)


def test_matches_margin_oracle_20_points():
    rng = np.random.default_rng(3)
    x, y = random_separable(rng, 20)
    h = train_svm(ds(x, y), IDENT, HARD)
    w_o, b_o, m_o = max_margin_line(x, y)
    f = h.decision(x)
    assert (y * f).min() == pytest.approx(m_o, abs=1e-3)
    assert np.abs(f - (x @ w_o + b_o)).max() < 1e-2


def test_unit_norm_and_orientation():
    rng = np.random.default_rng(8)
    for _ in range(10):
        x, y = random_separable(rng, 25)
        std = fit_standardizer(x)
        h = train_svm(ds(x, y), std)
        assert np.linalg.norm(h.w) == pytest.approx(1.0, abs=1e-9)
        f = h.decision(x)
        assert f[y > 0].mean() > f[y < 0].mean()


def test_label_flip_gives_same_line():
    rng = np.random.default_rng(21)
    x, y = random_separable(rng, 24)
    std = fit_standardizer(x)
    h1 = train_svm(ds(x, y), std, HARD)
    h2 = train_svm(ds(x, -y), std, HARD)
    assert h2.w == pytest.approx(-h1.w, abs=1e-6)
    assert h2.b == pytest.approx(-h1.b, abs=1e-6)


def test_translation_equivariance():
    d = synth_two_brand(60, 40, 0.6, 0.3, seed=5)
    shifted = ds(d.coords + np.array([3.25, -1.5]), d.labels)
    h1 = train_svm(d, fit_standardizer(d.coords))
    h2 = train_svm(shifted, fit_standardizer(shifted.coords))
    assert h2.decision(shifted.coords) == pytest.approx(h1.decision(d.coords), abs=1e-9)
    assert svm_accuracy(h1, d) == svm_accuracy(h2, shifted)


def test_nonconvergence_warns_and_flags():
    d = synth_two_brand(60, 60, 0.2, 0.5, seed=2)
    with pytest.warns(errors.NonConvergenceWarning):
        h = train_svm(d, fit_standardizer(d.coords), SvmConfig(c=1.0, tol=1e-9, max_passes=1))
    assert h.converged is False
    assert np.isfinite(h.w).all()


def plane(angle_deg, b=0.0):
    t = math.radians(angle_deg)
    return Hyperplane([math.cos(t), math.sin(t)], b, IDENT)


def test_average_idempotent():
    h = plane(73.0, 0.4)
    avg = average_hyperplane([h] * 1000)
    assert avg.w == pytest.approx(h.w, abs=1e-15)
    assert avg.b == pytest.approx(0.4, abs=1e-15)


def test_average_sign_alignment():
    avg = average_hyperplane([Hyperplane([0, 1], 0, IDENT), Hyperplane([0, -1], 0, IDENT)])
    assert avg.w.tolist() == [0.0, 1.0]
    assert avg.b == 0.0


def test_average_symmetric_pair():
    avg = average_hyperplane([plane(80), plane(100)])
    # mean of two unit vectors at +-10 deg about vertical is vertical
    assert abs(avg.w[0]) < 1e-9
    assert avg.w[1] == pytest.approx(1.0, abs=1e-9)


def test_average_order_invariant():
    rng = np.random.default_rng(0)
    planes = [plane(a, b) for a, b in zip(rng.uniform(60, 120, 50), rng.normal(0, 1, 50))]
    ref = average_hyperplane(planes)
    for _ in range(5):
        perm = [planes[0]] + [planes[k] for k in rng.permutation(np.arange(1, 50))]
        other = average_hyperplane(perm)
        assert other.w.tolist() == ref.w.tolist() and other.b == ref.b


def test_average_empty():
    with pytest.raises(errors.EmptyEnsemble):
        average_hyperplane([])


def test_average_orthogonal_planes_do_not_cancel():
    # after alignment every normal has a non-negative component along the
    # first, so the mean keeps length >= 1/n
    avg = average_hyperplane([plane(0)] + [plane(90), plane(-90)] * 500)
    assert avg.w.tolist() == pytest.approx([1.0, 0.0])


def test_pipeline_separable_clusters():
    d = synth_two_brand(150, 90, 1.0, 0.1, seed=4)
    h, acc = svm_pipeline(d, ResamplePlan(20, 1), SplitSpec(0.8, True, 1))
    assert acc == 1.0


def test_pipeline_single_resample_equals_direct():
    d = synth_two_brand(80, 50, 0.5, 0.3, seed=6)
    plan, spec = ResamplePlan(1, 9), SplitSpec(0.8, True, 2)
    h, _ = svm_pipeline(d, plan, spec)
    train, _ = split(d, spec)
    direct = train_svm(balanced_sample(train, 0, plan), fit_standardizer(train.coords))
    assert h.w.tolist() == pytest.approx(direct.w.tolist(), abs=1e-15)
    assert h.b == direct.b


def test_pipeline_thread_count_bitwise():
    d = synth_two_brand(120, 60, 0.4, 0.3, seed=12)
    plan, spec = ResamplePlan(40, 3), SplitSpec()
    a = svm_pipeline(d, plan, spec, threads=1)
    b = svm_pipeline(d, plan, spec, threads=4)
    assert a[0].to_dict() == b[0].to_dict() and a[1] == b[1]


def test_polyline_horizontal():
    pl = hyperplane_to_polyline(Hyperplane([0, 1], 0, IDENT), (-1, 1, -1, 1))
    assert pl.coords.tolist() == [[-1.0, 0.0], [1.0, 0.0]]


def test_polyline_misses_box():
    with pytest.raises(errors.NoIntersection):
        hyperplane_to_polyline(Hyperplane([1, 0], 2, IDENT), (-1, 1, -1, 1))


def test_polyline_random_planes_on_border():
    rng = np.random.default_rng(99)
    grid = make_grid((-6.4, 1.8, 49.9, 55.9), 10, 10)
    std = Standardizer([-2.0, 52.5], [1.5, 1.2])
    done = 0
    while done < 200:
        t = rng.uniform(0, 2 * math.pi)
        h = Hyperplane([math.cos(t), math.sin(t)], rng.normal(0, 1.5), std)
        try:
            pl = hyperplane_to_polyline(h, grid)
        except errors.NoIntersection:
            continue
        done += 1
        assert len(pl) == 2
        assert np.abs(h.decision(pl.coords)).max() < 1e-9
        for lon, lat in pl.coords:
            on_x = min(abs(lon - grid.bbox[0]), abs(lon - grid.bbox[1])) < 1e-12
            on_y = min(abs(lat - grid.bbox[2]), abs(lat - grid.bbox[3])) < 1e-12
            assert on_x or on_y


def test_hyperplane_dict_round_trip():
    h = Hyperplane([0.6, 0.8], -0.25, Standardizer([-1.0, 52.0], [1.1, 0.9]), converged=False)
    back = Hyperplane.from_dict(h.to_dict())
    assert back.to_dict() == h.to_dict()


def test_svm_accuracy_recount():
    d = synth_two_brand(70, 70, 0.3, 0.4, seed=13)
    h = train_svm(d, fit_standardizer(d.coords))
    naive = sum((1 if h.decision(c[None])[0] >= 0 else -1) == lab for c, lab in zip(d.coords, d.labels)) / len(d)
    assert svm_accuracy(h, d) == naive
