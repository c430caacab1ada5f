"""Train/test splitting and class-balanced undersampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import errors
from .geodata import NORTH, SOUTH, StoreDataset
from .parallel import imap_ordered
from .rng import RESAMPLE_STREAM, SPLIT_STREAM, rng_for


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise errors.ConfigInvalid(f"train_fraction must be in (0, 1), got {self.train_fraction}")


@dataclass(frozen=True)
class ResamplePlan:
    n_resamples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_resamples < 1:
            raise errors.ConfigInvalid(f"n_resamples must be >= 1, got {self.n_resamples}")


@dataclass(frozen=True, eq=False)
class BalancedSample:
    dataset: StoreDataset
    index: np.ndarray  # rows of the parent dataset, ascending

    @property
    def coords(self):
        return self.dataset.coords

    @property
    def labels(self):
        return self.dataset.labels

    @property
    def points(self):
        return self.dataset.points


def train_count(n: int, fraction: float) -> int:
    """Rows that go to training: rounded down, but never emptying either side."""
    k = math.floor(n * fraction + 1e-9)
    return min(max(k, 1), n - 1)


def split_indices(n: int, fraction: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    perm = rng.permutation(n)
    k = train_count(n, fraction)
    return np.sort(perm[:k]), np.sort(perm[k:])


def split(dataset: StoreDataset, spec: SplitSpec) -> tuple[StoreDataset, StoreDataset]:
    """Partition into train/test.  Rows keep their original relative order."""
    rng = rng_for(spec.seed, SPLIT_STREAM)
    n = len(dataset)
    if spec.stratified:
        train, test = [], []
        for label in (NORTH, SOUTH):
            rows = np.flatnonzero(dataset.labels == label)
            if len(rows) < 2:
                raise errors.ClassTooSmall(f"class {label:+d} has {len(rows)} point(s); stratified split needs 2")
            tr, te = split_indices(len(rows), spec.train_fraction, rng)
            train.append(rows[tr])
            test.append(rows[te])
        train_idx = np.sort(np.concatenate(train))
        test_idx = np.sort(np.concatenate(test))
    else:
        if n < 2:
            raise errors.ClassTooSmall("need at least 2 points to split")
        train_idx, test_idx = split_indices(n, spec.train_fraction, rng)
    return dataset.subset(train_idx), dataset.subset(test_idx)


def balanced_sample(dataset: StoreDataset, index: int, plan: ResamplePlan) -> BalancedSample:
    """Every minority point plus an equal-sized subset of the majority, drawn without replacement.

    The draw depends only on ``(plan.seed, index)``.
    """
    north = np.flatnonzero(dataset.labels == NORTH)
    south = np.flatnonzero(dataset.labels == SOUTH)
    if len(north) == 0 or len(south) == 0:
        raise errors.EmptyClass("balanced sampling needs both classes present")
    if len(north) == len(south):
        rows = np.arange(len(dataset))
    else:
        minority, majority = (north, south) if len(north) < len(south) else (south, north)
        rng = rng_for(plan.seed, RESAMPLE_STREAM, index)
        picked = rng.choice(majority, size=len(minority), replace=False)
        rows = np.sort(np.concatenate([minority, picked]))
    return BalancedSample(dataset.subset(rows), rows)


def balanced_samples(dataset: StoreDataset, plan: ResamplePlan, threads: int | None = 1) -> list[BalancedSample]:
    return list(imap_ordered(lambda i: balanced_sample(dataset, i, plan), range(plan.n_resamples), threads))
