"""Extended-real-valued functions on finite uniform grids.

Values live in (-inf, +inf] by default; -inf is an opt-in flag on the
containing function. Storage is a flat row-major float64 array (last axis
fastest), +inf/-inf are the native floating infinities and NaN is rejected.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, EmptySet


class NormKind(Enum):
    """Which norm the ambient space carries."""

    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    def of(self, vecs) -> np.ndarray:
        """Norm of each vector in an (..., d) array."""
        v = np.asarray(vecs, dtype=np.float64)
        if self is NormKind.L1:
            return np.sum(np.abs(v), axis=-1)
        if self is NormKind.L2:
            return np.sqrt(np.sum(v * v, axis=-1))
        return np.max(np.abs(v), axis=-1)


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular lattice in 1-3 dimensions.

    coordinate(i) = origin + i * spacing per axis, exactly reproducible.
    """

    origin: tuple
    spacing: tuple
    counts: tuple

    def __post_init__(self):
        origin = tuple(float(x) for x in self.origin)
        spacing = tuple(float(x) for x in self.spacing)
        counts = tuple(int(n) for n in self.counts)
        if not (1 <= len(counts) <= 3):
            raise DimensionMismatch("grid dimension must be 1, 2 or 3")
        if len(origin) != len(counts) or len(spacing) != len(counts):
            raise DimensionMismatch("origin/spacing/counts lengths differ")
        if any(h <= 0 for h in spacing):
            raise ValueError("spacing must be positive")
        if any(n < 1 for n in counts):
            raise ValueError("counts must be >= 1")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def line(cls, start: float, spacing: float, count: int) -> "Grid":
        return cls((start,), (spacing,), (count,))

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def npoints(self) -> int:
        return int(np.prod(self.counts))

    @property
    def min_spacing(self) -> float:
        return min(self.spacing)

    def axis_coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + np.arange(self.counts[axis]) * self.spacing[axis]

    def coordinates(self) -> np.ndarray:
        """All lattice coordinates as an (npoints, dim) array, row-major."""
        axes = [self.axis_coords(a) for a in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def coordinate(self, flat_index: int) -> np.ndarray:
        multi = np.unravel_index(int(flat_index), self.counts)
        return np.array(
            [self.origin[a] + multi[a] * self.spacing[a] for a in range(self.dim)]
        )

    def flat_index(self, multi) -> int:
        return int(np.ravel_multi_index(tuple(int(i) for i in multi), self.counts))

    def nearest_flat_index(self, point) -> int:
        """Flat index of the grid point closest to `point` (per-axis rounding)."""
        p = np.asarray(point, dtype=np.float64)
        if p.shape != (self.dim,):
            raise DimensionMismatch("point dimension does not match grid")
        multi = []
        for a in range(self.dim):
            i = int(round((p[a] - self.origin[a]) / self.spacing[a]))
            multi.append(min(max(i, 0), self.counts[a] - 1))
        return self.flat_index(multi)


@dataclass
class GridFunction:
    """A grid plus one extended-real value per lattice point."""

    grid: Grid
    values: np.ndarray
    allow_neg_inf: bool = False

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64).ravel()
        if v.size != self.grid.npoints:
            raise ValueError("values length does not match grid point count")
        if np.isnan(v).any():
            raise ValueError("NaN values are not allowed")
        if not self.allow_neg_inf and np.isneginf(v).any():
            raise ValueError("-inf requires allow_neg_inf=True")
        self.values = v

    @property
    def proper(self) -> bool:
        return bool(np.isfinite(self.values).any())

    def with_values(self, values, allow_neg_inf=None) -> "GridFunction":
        flag = self.allow_neg_inf if allow_neg_inf is None else allow_neg_inf
        return GridFunction(self.grid, values, allow_neg_inf=flag)


@dataclass
class PointSet:
    """Finite subset of a grid as a membership mask."""

    grid: Grid
    mask: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.mask, dtype=bool).ravel()
        if m.size != self.grid.npoints:
            raise ValueError("mask length does not match grid point count")
        self.mask = m

    @classmethod
    def from_indices(cls, grid: Grid, flat_indices) -> "PointSet":
        mask = np.zeros(grid.npoints, dtype=bool)
        mask[np.asarray(flat_indices, dtype=np.int64)] = True
        return cls(grid, mask)

    @classmethod
    def ball(cls, grid: Grid, radius: float, norm: NormKind = NormKind.L2,
             center=None) -> "PointSet":
        c = np.zeros(grid.dim) if center is None else np.asarray(center, float)
        if c.shape != (grid.dim,):
            raise DimensionMismatch("center dimension does not match grid")
        return cls(grid, norm.of(grid.coordinates() - c) <= radius)

    @property
    def nonempty(self) -> bool:
        return bool(self.mask.any())

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def member_indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def member_coords(self) -> np.ndarray:
        return self.grid.coordinates()[self.mask]


def indicator(pset: PointSet) -> GridFunction:
    """0 on the set, +inf elsewhere."""
    if not pset.nonempty:
        raise EmptySet("indicator of an empty set is not proper")
    values = np.where(pset.mask, 0.0, np.inf)
    return GridFunction(pset.grid, values)


def linear_minus_on_ball(coeffs, radius: float, grid: Grid,
                         norm: NormKind = NormKind.L2) -> GridFunction:
    """-<coeffs, x> inside the closed ball of the given radius, +inf outside."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.shape != (grid.dim,):
        raise DimensionMismatch("coeffs dimension does not match grid")
    if radius <= 0:
        raise ValueError("radius must be positive")
    coords = grid.coordinates()
    inside = norm.of(coords) <= radius
    return GridFunction(grid, np.where(inside, -(coords @ c), np.inf))


def distance_to_set(grid: Grid, pset: PointSet,
                    norm: NormKind = NormKind.L2) -> GridFunction:
    """Pointwise distance min over members; zero exactly on members."""
    if not pset.nonempty:
        raise EmptySet("distance to an empty set is undefined")
    coords = grid.coordinates()
    members = pset.member_coords()
    out = np.empty(grid.npoints)
    # chunked so the (chunk, members, dim) intermediate stays small
    chunk = max(1, int(4_000_000 / max(1, members.shape[0])))
    for lo in range(0, grid.npoints, chunk):
        hi = min(lo + chunk, grid.npoints)
        diff = coords[lo:hi, None, :] - members[None, :, :]
        out[lo:hi] = norm.of(diff).min(axis=1)
    return GridFunction(grid, out)


# ---------------------------------------------------------------------------
# serialization

def _encode_value(v: float):
    if np.isposinf(v):
        return "inf"
    if np.isneginf(v):
        return "-inf"
    return float(v)


def _decode_value(v) -> float:
    if v == "inf":
        return np.inf
    if v == "-inf":
        return -np.inf
    return float(v)


def grid_to_json_dict(grid: Grid) -> dict:
    return {
        "dim": grid.dim,
        "origin": list(grid.origin),
        "spacing": list(grid.spacing),
        "counts": list(grid.counts),
    }


def grid_from_json_dict(data: dict) -> Grid:
    grid = Grid(tuple(data["origin"]), tuple(data["spacing"]), tuple(data["counts"]))
    if int(data.get("dim", grid.dim)) != grid.dim:
        raise ValueError("dim field disagrees with origin/spacing/counts")
    return grid


def grid_function_to_json_dict(f: GridFunction) -> dict:
    d = grid_to_json_dict(f.grid)
    d["values"] = [_encode_value(v) for v in f.values]
    return d


def grid_function_from_json_dict(data: dict) -> GridFunction:
    grid = grid_from_json_dict(data)
    values = np.array([_decode_value(v) for v in data["values"]])
    return GridFunction(grid, values, allow_neg_inf=bool(np.isneginf(values).any()))


def save_grid_function(f: GridFunction, path) -> None:
    with open(path, "w") as fh:
        json.dump(grid_function_to_json_dict(f), fh, sort_keys=True)
        fh.write("\n")


def load_grid_function(path) -> GridFunction:
    with open(path) as fh:
        return grid_function_from_json_dict(json.load(fh))


def grid_function_to_csv(f: GridFunction, path) -> None:
    """One row per point: x1..xd,value."""
    coords = f.grid.coordinates()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{a + 1}" for a in range(f.grid.dim)] + ["value"])
        for row, v in zip(coords, f.values):
            writer.writerow([repr(float(c)) for c in row] + [repr(float(v))])
