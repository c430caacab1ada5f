import numpy as np
import pytest

from divideline import errors
from divideline.geodata import NORTH, SOUTH, StoreDataset, synth_two_brand
from divideline.resample import (
    ResamplePlan,
    SplitSpec,
    balanced_sample,
    balanced_samples,
    split,
    train_count,
)


def make_dataset(n_north, n_south):
    coords = np.column_stack([np.arange(n_north + n_south) * 0.01 - 2.0, np.full(n_north + n_south, 52.0)])
    labels = np.array([NORTH] * n_north + [SOUTH] * n_south)
    return StoreDataset(coords, labels, ("N", "S"))


def rows_of(sub, parent):
    lookup = {tuple(c): k for k, c in enumerate(parent.coords.tolist())}
    return sorted(lookup[tuple(c)] for c in sub.coords.tolist())


def test_stratified_counts_10_10():
    tr, te = split(make_dataset(10, 10), SplitSpec(0.8, True, 0))
    assert (tr.count(NORTH), tr.count(SOUTH)) == (8, 8)
    assert (te.count(NORTH), te.count(SOUTH)) == (2, 2)


def test_stratified_counts_2_2_half():
    tr, te = split(make_dataset(2, 2), SplitSpec(0.5, True, 0))
    assert (tr.count(NORTH), tr.count(SOUTH)) == (1, 1)
    assert (te.count(NORTH), te.count(SOUTH)) == (1, 1)


@pytest.mark.parametrize("n, frac, expect", [(10, 0.8, 8), (3, 0.8, 2), (2, 0.99, 1), (2, 0.01, 1), (1000, 0.7, 700)])
def test_train_count(n, frac, expect):
    assert train_count(n, frac) == expect


def test_split_is_partition_and_deterministic():
    ds = synth_two_brand(37, 55, 1.0, 0.3, seed=2)
    for stratified in (True, False):
        spec = SplitSpec(0.75, stratified, 12)
        tr, te = split(ds, spec)
        a, b = rows_of(tr, ds), rows_of(te, ds)
        assert set(a).isdisjoint(b)
        assert sorted(a + b) == list(range(len(ds)))
        tr2, te2 = split(ds, spec)
        assert tr == tr2 and te == te2
    assert split(ds, SplitSpec(0.75, True, 13))[0] != split(ds, SplitSpec(0.75, True, 12))[0]


def test_split_keeps_row_order():
    ds = make_dataset(20, 30)
    tr, _ = split(ds, SplitSpec(0.6, True, 3))
    lons = tr.coords[:, 0]
    assert (np.diff(lons) > 0).all()


def test_stratified_split_needs_two_per_class():
    with pytest.raises(errors.ClassTooSmall):
        split(make_dataset(1, 5), SplitSpec())


def test_balanced_counts():
    ds = make_dataset(100, 20)
    s = balanced_sample(ds, 0, ResamplePlan(10, 0))
    assert len(s.index) == 40
    assert s.dataset.count(NORTH) == 20 and s.dataset.count(SOUTH) == 20
    # every minority row is used
    assert set(range(100, 120)) <= set(s.index.tolist())
    assert len(set(s.index.tolist())) == 40


def test_balanced_equal_classes_uses_all():
    ds = make_dataset(7, 7)
    assert balanced_sample(ds, 5, ResamplePlan(10, 0)).index.tolist() == list(range(14))


def test_balanced_empty_class():
    ds = StoreDataset(np.array([[0.0, 50.0], [1.0, 50.0]]), np.array([NORTH, NORTH]), ("N", "S"))
    with pytest.raises(errors.EmptyClass):
        balanced_sample(ds, 0, ResamplePlan(1, 0))


def test_balanced_index_independence():
    ds = make_dataset(300, 40)
    plan = ResamplePlan(100, 8)
    forward = [balanced_sample(ds, i, plan).index.tolist() for i in range(100)]
    backward = [balanced_sample(ds, i, plan).index.tolist() for i in reversed(range(100))][::-1]
    assert forward == backward
    assert len({tuple(f) for f in forward}) > 90


@pytest.mark.parametrize("threads", [1, 2, 8])
def test_balanced_samples_thread_count(threads):
    ds = make_dataset(200, 30)
    plan = ResamplePlan(50, 1)
    ref = [s.index.tolist() for s in balanced_samples(ds, plan, 1)]
    assert [s.index.tolist() for s in balanced_samples(ds, plan, threads)] == ref


def test_majority_rows_roughly_uniform():
    ds = make_dataset(50, 10)
    plan = ResamplePlan(1, 3)
    hits = np.zeros(50)
    for i in range(2000):
        idx = balanced_sample(ds, i, plan).index
        hits[idx[idx < 50]] += 1
    # each majority row is picked with probability 10/50
    assert np.abs(hits / 2000 - 0.2).max() < 0.05


def test_config_bounds():
    with pytest.raises(errors.ConfigInvalid):
        SplitSpec(1.0)
    with pytest.raises(errors.ConfigInvalid):
        ResamplePlan(0)
