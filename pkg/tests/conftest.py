"""Shared instance generators.

Random instances use dyadic values (multiples of 1/8) on dyadic grids so
that candidate comparisons are exact in floating point; exact argmin
tie-breaking is then well defined across the oracle and the fast paths.
"""

import numpy as np
import pytest

from infconv import Grid, GridFunction, NormKind


def dyadic_grid(rng, dim, max_side=48):
    if dim == 1:
        counts = (int(rng.integers(3, max_side + 1)),)
    elif dim == 2:
        side = max(3, int(max_side ** 0.5))
        counts = tuple(int(x) for x in rng.integers(3, side + 1, 2))
    else:
        counts = tuple(int(x) for x in rng.integers(2, 7, 3))
    spacing = tuple(float(rng.choice([0.25, 0.5, 1.0])) for _ in counts)
    origin = tuple(float(rng.integers(-8, 8)) / 2 for _ in counts)
    return Grid(origin, spacing, counts)


def dyadic_function(rng, grid, inf_fraction=0.3):
    v = rng.integers(-128, 128, grid.npoints) / 8.0
    v[rng.random(grid.npoints) < inf_fraction] = np.inf
    if not np.isfinite(v).any():
        v[0] = 0.0
    return GridFunction(grid, v)


def random_instance(rng, dim, max_side=48, inf_fraction=0.3):
    return dyadic_function(rng, dyadic_grid(rng, dim, max_side), inf_fraction)


def convex_1d(rng, n, spacing=0.5):
    """Random discretely convex sequence: cumulated nondecreasing slopes."""
    slopes = np.sort(rng.integers(-16, 17, n - 1)) / 8.0
    values = np.concatenate([[0.0], np.cumsum(slopes)])
    values += float(rng.integers(-8, 9))
    return GridFunction(Grid.line(float(rng.integers(-4, 1)), spacing, n), values)


def lipschitz_samples(rng, grid, k, count, norm=NormKind.L2):
    """Distinct grid points with values ~0.45k-Lipschitz (strict margin at k)."""
    from infconv import SampleSet

    idx = rng.choice(grid.npoints, size=min(count, grid.npoints), replace=False)
    pts = grid.coordinates()[np.sort(idx)]
    anchors = rng.integers(-32, 32, pts.shape[0]) / 8.0
    pair = norm.of(pts[:, None, :] - pts[None, :, :])
    vals = np.min(anchors[None, :] + 0.45 * k * pair, axis=1)
    return SampleSet(pts, vals, norm, k)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
