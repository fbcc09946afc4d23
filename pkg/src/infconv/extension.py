"""Lipschitz extension from scattered samples.

The extension is the conical envelope of the +inf-extended sample function,
min over samples of value + k*norm(x - sample), evaluated by direct
minimization so sample points may sit off the grid. The argmin recorded in
the result is the witnessing SAMPLE index, not a grid index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .analysis import CheckReport, _min_set_indices
from .envelope import EnvelopeResult, Kernel
from .errors import LipschitzViolated, SamplesOffGrid
from .grid import Grid, GridFunction, NormKind

ON_GRID_TOL = 1e-9


@dataclass
class SampleSet:
    """Scattered points with values that are k-Lipschitz in the given norm."""

    points: np.ndarray  # (m, d)
    values: np.ndarray  # (m,)
    norm: NormKind = NormKind.L2
    k: float = 1.0
    validate: bool = True

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if self.points.shape[0] != self.values.size:
            raise ValueError("points and values lengths differ")
        if self.k <= 0:
            raise ValueError("k must be positive")
        m = self.points.shape[0]
        if m > 1:
            diff = self.points[:, None, :] - self.points[None, :, :]
            dist = self.norm.of(diff)
            np.fill_diagonal(dist, np.inf)
            if dist.min() == 0.0:
                raise ValueError("sample points must be pairwise distinct")
        if self.validate:
            report = validate_lipschitz(self)
            if not report.passed:
                raise LipschitzViolated(report.detail)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "k": float(self.k),
            "norm": self.norm.value,
            "points": self.points.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict, validate: bool = True) -> "SampleSet":
        return cls(
            np.asarray(data["points"], dtype=np.float64),
            np.asarray(data["values"], dtype=np.float64),
            NormKind(data["norm"]),
            float(data["k"]),
            validate=validate,
        )


def save_sample_set(samples: SampleSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(samples.to_json_dict(), fh, sort_keys=True)
        fh.write("\n")


def load_sample_set(path, validate: bool = True) -> SampleSet:
    with open(path) as fh:
        return SampleSet.from_json_dict(json.load(fh), validate=validate)


def validate_lipschitz(samples: SampleSet) -> CheckReport:
    """All-pairs |v_i - v_j| <= k*norm(p_i - p_j), with 1e-12 slack."""
    m = samples.size
    if m < 2:
        return CheckReport("sample_lipschitz", True, 0.0, -1, "fewer than two samples")
    i, j = np.triu_indices(m, k=1)
    dist = samples.norm.of(samples.points[i] - samples.points[j])
    viol = np.abs(samples.values[i] - samples.values[j]) - samples.k * dist
    w = int(np.argmax(viol))
    worst = max(0.0, float(viol[w]))
    return CheckReport(
        "sample_lipschitz", worst <= 1e-12, worst, (int(i[w]), int(j[w])),
        f"k = {samples.k}, norm = {samples.norm.value}, pairs = {i.size}",
    )


def mcshane_extend(samples: SampleSet, grid: Grid) -> EnvelopeResult:
    """Largest k-Lipschitz function below the samples, on the grid.

    Direct minimization over the sample list; ties pick the lowest sample
    index.
    """
    report = validate_lipschitz(samples)
    if not report.passed:
        raise LipschitzViolated(report.detail)
    if samples.dim != grid.dim:
        raise ValueError("sample dimension does not match grid")
    coords = grid.coordinates()
    env = np.empty(grid.npoints)
    arg = np.empty(grid.npoints, dtype=np.int64)
    chunk = max(1, int(4_000_000 / samples.size))
    for lo in range(0, grid.npoints, chunk):
        hi = min(lo + chunk, grid.npoints)
        diff = coords[lo:hi, None, :] - samples.points[None, :, :]
        cand = samples.values[None, :] + samples.k * samples.norm.of(diff)
        arg[lo:hi] = np.argmin(cand, axis=1)
        env[lo:hi] = cand[np.arange(hi - lo), arg[lo:hi]]
    kernel = Kernel.conical(samples.k, samples.norm)
    return EnvelopeResult(GridFunction(grid, env), arg, kernel)


def sample_grid_indices(samples: SampleSet, grid: Grid) -> np.ndarray:
    """Flat grid index of each sample; raises if any sample is off-grid."""
    out = np.empty(samples.size, dtype=np.int64)
    for s in range(samples.size):
        flat = grid.nearest_flat_index(samples.points[s])
        if np.max(np.abs(grid.coordinate(flat) - samples.points[s])) > ON_GRID_TOL:
            raise SamplesOffGrid(f"sample {s} does not coincide with a grid point")
        out[s] = flat
    return out


def verify_minimizer_location(samples: SampleSet, ext: EnvelopeResult,
                              tol: float = 1e-9) -> CheckReport:
    """Every grid minimizer of the extension is a sample point, at the sample minimum."""
    grid = ext.envelope.grid
    sample_flats = sample_grid_indices(samples, grid)
    min_samples = float(np.min(samples.values))
    min_ext = float(np.min(ext.envelope.values))
    minimizers = _min_set_indices(ext.envelope.values, tol)
    stray = np.setdiff1d(minimizers, sample_flats)
    worst = abs(min_ext - min_samples) + float(stray.size)
    return CheckReport(
        "minimizer_location", stray.size == 0 and abs(min_ext - min_samples) <= 1e-9,
        worst, int(stray[0]) if stray.size else -1,
        f"min extension = {min_ext}, min samples = {min_samples}, "
        f"non-sample minimizers = {stray.size}",
    )
