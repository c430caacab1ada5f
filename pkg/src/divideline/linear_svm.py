"""Soft-margin linear SVM trained by SMO, plus the resampled-ensemble pipeline."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import errors
from .evaluate import svm_accuracy
from .geodata import Grid, Polyline, StoreDataset
from .parallel import imap_ordered
from .resample import ResamplePlan, SplitSpec, balanced_sample, split

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    sd: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        sd = np.array(self.sd, dtype=float).reshape(2)
        if not np.all(sd > 0):
            raise errors.ZeroVariance(f"standard deviations must be positive, got {sd.tolist()}")
        mean.setflags(write=False)
        sd.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sd", sd)

    @classmethod
    def identity(cls) -> Standardizer:
        return cls(np.zeros(2), np.ones(2))

    def transform(self, coords) -> np.ndarray:
        return (np.asarray(coords, dtype=float) - self.mean) / self.sd

    def inverse(self, z) -> np.ndarray:
        return np.asarray(z, dtype=float) * self.sd + self.mean

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "sd": self.sd.tolist()}

    @classmethod
    def from_dict(cls, d) -> Standardizer:
        return cls(d["mean"], d["sd"])

    def __eq__(self, other):
        if not isinstance(other, Standardizer):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.sd, other.sd)

    __hash__ = None


def fit_standardizer(points) -> Standardizer:
    """Per-axis mean and population standard deviation.

    Accepts an ``(n, 2)`` array or a sequence of :class:`GeoPoint`.
    """
    if not isinstance(points, np.ndarray):
        points = [(p.lon, p.lat) if hasattr(p, "lon") else p for p in points]
    x = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(x) < 2:
        raise errors.ZeroVariance("need at least 2 points to standardise")
    mean = x.mean(axis=0)
    sd = np.sqrt(((x - mean) ** 2).mean(axis=0))
    if not np.all(sd > 0):
        raise errors.ZeroVariance(f"zero variance along axis {int(np.argmin(sd))}")
    return Standardizer(mean, sd)


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Decision function ``w . standardize(x) + b`` with ``|w| = 1``; positive means North."""

    w: np.ndarray
    b: float
    standardizer: Standardizer
    converged: bool = True

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(2)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    def decision(self, coords) -> np.ndarray:
        return self.standardizer.transform(coords) @ self.w + self.b

    def geographic(self) -> tuple[np.ndarray, float]:
        """Coefficients ``(a, c)`` of the same line as ``a . (lon, lat) + c = 0`` in degrees."""
        a = self.w / self.standardizer.sd
        c = self.b - float(np.dot(a, self.standardizer.mean))
        return a, c

    def to_dict(self) -> dict:
        return {
            "w": self.w.tolist(),
            "b": self.b,
            "standardizer": self.standardizer.to_dict(),
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d) -> Hyperplane:
        return cls(d["w"], d["b"], Standardizer.from_dict(d["standardizer"]), d.get("converged", True))


@dataclass(frozen=True)
class SvmConfig:
    c: float = 1.0
    tol: float = 1e-4
    max_passes: int = 200  # SMO iterations capped at max_passes * n

    def __post_init__(self):
        if not (self.c > 0 and self.tol > 0):
            raise errors.ConfigInvalid("SVM c and tol must be positive")
        if self.max_passes < 1:
            raise errors.ConfigInvalid("max_passes must be >= 1")


@dataclass
class DualSolution:
    w: np.ndarray
    b: float
    alpha: np.ndarray
    iterations: int
    converged: bool


_TAU = 1e-12


def solve_dual(x: np.ndarray, y: np.ndarray, c: float, tol: float, max_iter: int) -> DualSolution:
    """SMO for the linear-kernel soft-margin dual.

    Working pairs are chosen by the second-order rule of Fan, Chen & Lin
    (2005).  Because the kernel is linear, ``w`` is kept explicitly and the
    gradient ``G = y * (X w) - 1`` is recomputed from it each step.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    alpha = np.zeros(n)
    w = np.zeros(x.shape[1])
    kdiag = np.einsum("ij,ij->i", x, x)
    pos = y > 0
    converged = False
    it = 0
    while it < max_iter:
        g = y * (x @ w) - 1.0
        minus_yg = -y * g
        up = np.where(pos, alpha < c, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < c)
        if not up.any() or not low.any():
            converged = True
            break
        cand_up = np.where(up, minus_yg, -np.inf)
        i = int(np.argmax(cand_up))
        gmax = cand_up[i]
        gmin = np.min(np.where(low, minus_yg, np.inf))
        if gmax - gmin < tol:
            converged = True
            break
        b_it = gmax - minus_yg
        ok = low & (b_it > 0)
        a_it = kdiag[i] + kdiag - 2.0 * (x @ x[i])
        a_it = np.where(a_it > 0, a_it, _TAU)
        score = np.where(ok, -(b_it * b_it) / a_it, np.inf)
        j = int(np.argmin(score))
        lam = b_it[j] / a_it[j]
        # alpha_i += y_i * lam, alpha_j -= y_j * lam, each kept inside [0, c]
        lam = min(lam, c - alpha[i] if y[i] > 0 else alpha[i])
        lam = min(lam, alpha[j] if y[j] > 0 else c - alpha[j])
        alpha[i] += y[i] * lam
        alpha[j] -= y[j] * lam
        alpha[i] = min(max(alpha[i], 0.0), c)
        alpha[j] = min(max(alpha[j], 0.0), c)
        w += lam * (x[i] - x[j])
        it += 1

    # recompute w from alpha to shed accumulated update drift
    w = (alpha * y) @ x
    g = y * (x @ w) - 1.0
    yg = y * g
    free = (alpha > 0) & (alpha < c)
    if free.any():
        r = float(np.mean(yg[free]))
    else:
        at_upper = alpha >= c
        at_lower = alpha <= 0
        ub_set = (pos & at_upper) | (~pos & at_lower)
        lb_set = (pos & at_lower) | (~pos & at_upper)
        ub = float(np.min(yg[ub_set])) if ub_set.any() else np.inf
        lb = float(np.max(yg[lb_set])) if lb_set.any() else -np.inf
        if math.isinf(ub) or math.isinf(lb):
            r = lb if math.isinf(ub) else ub
        else:
            r = (ub + lb) / 2.0
    return DualSolution(w, -r, alpha, it, converged)


def train_svm(sample, std: Standardizer, cfg: SvmConfig = SvmConfig()) -> Hyperplane:
    """Fit one soft-margin linear SVM on standardised coordinates.

    ``sample`` is anything with ``coords`` and ``labels`` (a
    :class:`BalancedSample` or :class:`StoreDataset`).  The result has unit
    normal and is oriented so the mean decision value of class +1 exceeds
    that of class -1.  If the iteration cap is hit, a
    :class:`NonConvergenceWarning` is issued and ``converged`` is False.
    """
    z = std.transform(sample.coords)
    y = np.asarray(sample.labels, dtype=float)
    if not ((y > 0).any() and (y < 0).any()):
        raise errors.EmptyClass("SVM training needs both classes present")
    sol = solve_dual(z, y, cfg.c, cfg.tol, cfg.max_passes * max(len(y), 1))
    if not sol.converged:
        warnings.warn(
            f"SMO stopped after {sol.iterations} iterations without meeting tol={cfg.tol}",
            errors.NonConvergenceWarning,
            stacklevel=2,
        )
    norm = float(np.linalg.norm(sol.w))
    if not norm > 1e-12:
        raise errors.DegenerateHyperplane("optimal normal vector is zero; classes give no direction")
    w, b = sol.w / norm, sol.b / norm
    f = z @ w + b
    if f[y > 0].mean() < f[y < 0].mean():
        w, b = -w, -b
    return Hyperplane(w, b, std, sol.converged)


def average_hyperplane(planes) -> Hyperplane:
    """Normalised mean of sign-aligned unit normals, with the mean offset.

    Each plane is flipped, if needed, so its normal has a non-negative dot
    product with the first plane's normal.  Sums use ``math.fsum`` so the
    result does not depend on the order of ``planes`` beyond the choice of
    the first one.
    """
    planes = list(planes)
    if not planes:
        raise errors.EmptyEnsemble("no hyperplanes to average")
    std = planes[0].standardizer
    ref = planes[0].w
    ws, bs = [], []
    for h in planes:
        if h.standardizer != std:
            raise ValueError("all hyperplanes must share one standardizer")
        s = -1.0 if float(np.dot(h.w, ref)) < 0 else 1.0
        ws.append(s * h.w)
        bs.append(s * h.b)
    n = len(planes)
    mean_w = np.array([math.fsum(w[k] for w in ws) / n for k in range(2)])
    norm = float(np.linalg.norm(mean_w))
    if norm < 1e-6:
        raise errors.CancellationDegenerate(f"mean normal has length {norm:.3g}")
    return Hyperplane(mean_w / norm, math.fsum(bs) / n, std, all(h.converged for h in planes))


@dataclass
class SvmEnsembleResult:
    hyperplane: Hyperplane
    accuracy: float  # mean of per-resample test accuracies
    accuracies: list[float]
    averaged_accuracy: float  # accuracy of the averaged plane on the test set
    train: StoreDataset = field(repr=False)
    test: StoreDataset = field(repr=False)
    n_unconverged: int = 0


def run_svm_ensemble(
    dataset: StoreDataset,
    plan: ResamplePlan,
    split_spec: SplitSpec,
    cfg: SvmConfig = SvmConfig(),
    threads: int | None = 1,
) -> SvmEnsembleResult:
    """Split once, train on ``plan.n_resamples`` balanced subsamples of the training set, average."""
    train, test = split(dataset, split_spec)
    std = fit_standardizer(train.coords)

    def one(index):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", errors.NonConvergenceWarning)
            h = train_svm(balanced_sample(train, index, plan), std, cfg)
        return h, svm_accuracy(h, test)

    planes, accs = [], []
    for k, (h, acc) in enumerate(imap_ordered(one, range(plan.n_resamples), threads)):
        planes.append(h)
        accs.append(acc)
        if (k + 1) % 100 == 0:
            log.info("svm resample %d/%d", k + 1, plan.n_resamples)
    n_bad = sum(not h.converged for h in planes)
    if n_bad:
        warnings.warn(f"{n_bad} of {len(planes)} SVM fits hit the iteration cap", errors.NonConvergenceWarning)
    avg = average_hyperplane(planes)
    return SvmEnsembleResult(
        hyperplane=avg,
        accuracy=math.fsum(accs) / len(accs),
        accuracies=accs,
        averaged_accuracy=svm_accuracy(avg, test),
        train=train,
        test=test,
        n_unconverged=n_bad,
    )


def svm_pipeline(
    dataset: StoreDataset,
    plan: ResamplePlan,
    split_spec: SplitSpec,
    cfg: SvmConfig = SvmConfig(),
    threads: int | None = 1,
) -> tuple[Hyperplane, float]:
    res = run_svm_ensemble(dataset, plan, split_spec, cfg, threads)
    return res.hyperplane, res.accuracy


def hyperplane_to_polyline(h: Hyperplane, grid_or_bbox) -> Polyline:
    """Clip the zero level set to the grid's bounding box.

    Returns a two-point segment ordered west to east (south to north for a
    vertical line).  Raises :class:`NoIntersection` if the line misses the
    box or only grazes a corner.
    """
    bbox = grid_or_bbox.bbox if isinstance(grid_or_bbox, Grid) else tuple(grid_or_bbox)
    lon_min, lon_max, lat_min, lat_max = bbox
    a, c = h.geographic()
    if not np.all(np.isfinite(a)) or not np.any(a != 0):
        raise errors.DegenerateHyperplane("hyperplane has no direction")
    eps = 1e-12 * max(abs(lon_max - lon_min), abs(lat_max - lat_min))
    hits = []
    if a[1] != 0:
        for lon in (lon_min, lon_max):
            lat = -(c + a[0] * lon) / a[1]
            if lat_min - eps <= lat <= lat_max + eps:
                hits.append((lon, min(max(lat, lat_min), lat_max)))
    if a[0] != 0:
        for lat in (lat_min, lat_max):
            lon = -(c + a[1] * lat) / a[0]
            if lon_min - eps <= lon <= lon_max + eps:
                hits.append((min(max(lon, lon_min), lon_max), lat))
    uniq = []
    for p in sorted(hits):
        if not any(abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        raise errors.NoIntersection("dividing line does not cross the bounding box")
    if len(uniq) > 2:
        # numerically a corner hit twice; keep the two extremes
        uniq = [uniq[0], uniq[-1]]
    return Polyline(np.array(uniq, dtype=float))

