"""Inf-convolution engine.

Exact brute-force oracle plus fast exact transforms for the conical
(k * norm) and quadratic (k/2 * squared L2) kernels. Fast paths cover
1-d conical with any norm, multi-d conical with the L1 norm (separable),
and the quadratic kernel in any dimension (separable lower envelope of
parabolas). Multi-d conical L2/Linf kernels are not separable and route
to the oracle rather than approximate.

Argmin ties are broken by lowest flat index everywhere; the final envelope
value at a point is always recomputed from its witness as
f(witness) + kernel(x - witness) with the same kernel code the oracle uses,
so fast-path and oracle values coincide whenever the witnesses do.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NegInfUnsupported, NonProper, NoWitness
from .grid import Grid, GridFunction, NormKind


@dataclass(frozen=True)
class Kernel:
    """Inf-convolution kernel: conical k*norm(z) or quadratic (k/2)*|z|_2^2."""

    kind: str
    k: float
    norm: NormKind = NormKind.L2

    def __post_init__(self):
        if self.kind not in ("conical", "quadratic"):
            raise ValueError("kernel kind must be 'conical' or 'quadratic'")
        if self.k <= 0:
            raise ValueError("kernel parameter k must be positive")

    @classmethod
    def conical(cls, k: float, norm: NormKind = NormKind.L2) -> "Kernel":
        return cls("conical", float(k), norm)

    @classmethod
    def quadratic(cls, k: float) -> "Kernel":
        return cls("quadratic", float(k))

    def of(self, diffs) -> np.ndarray:
        """Kernel value for each difference vector in an (..., d) array."""
        if self.kind == "conical":
            return self.k * self.norm.of(diffs)
        d = np.asarray(diffs, dtype=np.float64)
        return 0.5 * self.k * np.sum(d * d, axis=-1)


@dataclass
class EnvelopeResult:
    """Envelope values plus the witnessing argmin index per point (-1: none)."""

    envelope: GridFunction
    argmin: np.ndarray
    kernel: Kernel

    def __post_init__(self):
        self.argmin = np.ascontiguousarray(self.argmin, dtype=np.int64).ravel()
        if self.argmin.size != self.envelope.grid.npoints:
            raise ValueError("argmin length does not match grid point count")


def inf_conv_bruteforce(f: GridFunction, kernel: Kernel) -> EnvelopeResult:
    """Exact minimum of f(y) + kernel(x - y) over all grid points y.

    Total on valid GridFunctions: f == +inf yields +inf with no witness,
    any -inf value collapses the envelope to -inf everywhere.
    """
    grid = f.grid
    n = grid.npoints
    neg = np.isneginf(f.values)
    if neg.any():
        j = int(np.argmax(neg))
        env = GridFunction(grid, np.full(n, -np.inf), allow_neg_inf=True)
        return EnvelopeResult(env, np.full(n, j, dtype=np.int64), kernel)
    if not f.proper:
        env = GridFunction(grid, np.full(n, np.inf))
        return EnvelopeResult(env, np.full(n, -1, dtype=np.int64), kernel)
    coords = grid.coordinates()
    env = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    chunk = max(1, int(2_000_000 / n))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        cand = f.values[None, :] + kernel.of(coords[lo:hi, None, :] - coords[None, :, :])
        arg[lo:hi] = np.argmin(cand, axis=1)  # first occurrence = lowest index
        env[lo:hi] = cand[np.arange(hi - lo), arg[lo:hi]]
    return EnvelopeResult(GridFunction(grid, env), arg, kernel)


def _require_fast_path_input(f: GridFunction, k: float) -> None:
    if f.allow_neg_inf:
        raise NegInfUnsupported("fast paths require functions without -inf")
    if not f.proper:
        raise NonProper("envelope of a non-proper function; use the oracle")
    if k <= 0:
        raise ValueError("k must be positive")


def _conical_lines(vals: np.ndarray, coords1d: np.ndarray, k: float):
    """Per-line conical transform: witnesses for each row of an (L, n) array.

    Forward/backward running-minimum scans; tie-break prefers the lowest
    index on each side and the left side overall.
    """
    L, n = vals.shape
    idx = np.arange(n)
    inf_col = np.full((L, 1), np.inf)

    a = vals - k * coords1d
    m = np.minimum.accumulate(a, axis=1)
    prev = np.concatenate([inf_col, m[:, :-1]], axis=1)
    wl = np.maximum.accumulate(np.where(a < prev, idx, -1), axis=1)

    br = (vals + k * coords1d)[:, ::-1]
    mr = np.minimum.accumulate(br, axis=1)
    prevr = np.concatenate([inf_col, mr[:, :-1]], axis=1)
    wrr = np.maximum.accumulate(np.where(br <= prevr, idx, -1), axis=1)[:, ::-1]
    wr = np.where(wrr >= 0, (n - 1) - wrr, -1)

    def side_value(w):
        vw = np.take_along_axis(vals, np.clip(w, 0, None), axis=1)
        dist = np.abs(coords1d[None, :] - coords1d[np.clip(w, 0, None)])
        return np.where(w >= 0, vw + k * dist, np.inf)

    val_l = side_value(wl)
    val_r = side_value(wr)
    take_left = val_l <= val_r  # ties: wl <= i <= wr, so left is the lower index
    wit = np.where(take_left, wl, wr)
    out = np.where(take_left, val_l, val_r)
    return out, wit


@njit(cache=True)
def _parabola_lines(vals, k, h):  # pragma: no cover - exercised via wrapper
    """Lower envelope of parabolas per row of an (L, n) array, in index coords.

    Cost of vertex p at position i is vals[p] + (k/2) * (h*(i-p))^2; +inf
    entries are skipped. Returns values and vertex witnesses (-1 if a row
    is entirely +inf).
    """
    L, n = vals.shape
    out = np.empty((L, n))
    wit = np.empty((L, n), np.int64)
    v = np.empty(n, np.int64)
    z = np.empty(n + 1)
    A = 0.5 * k * h * h
    for r in range(L):
        row = vals[r]
        top = -1
        for q in range(n):
            fq = row[q]
            if fq == np.inf:
                continue
            if top < 0:
                top = 0
                v[0] = q
                z[0] = -np.inf
                z[1] = np.inf
                continue
            p = v[top]
            s = ((fq + A * q * q) - (row[p] + A * p * p)) / (2.0 * A * (q - p))
            while s <= z[top]:
                top -= 1
                p = v[top]
                s = ((fq + A * q * q) - (row[p] + A * p * p)) / (2.0 * A * (q - p))
            top += 1
            v[top] = q
            z[top] = s
            z[top + 1] = np.inf
        if top < 0:
            for i in range(n):
                out[r, i] = np.inf
                wit[r, i] = -1
            continue
        j = 0
        for i in range(n):
            while z[j + 1] < i:
                j += 1
            p = v[j]
            out[r, i] = row[p] + A * (i - p) * (i - p)
            wit[r, i] = p
    return out, wit


def _axis_pass(values: np.ndarray, axis: int, line_transform):
    """Apply a 1-d transform along one axis of a d-dim value array."""
    moved = np.moveaxis(values, axis, -1)
    shape = moved.shape
    flat = np.ascontiguousarray(moved).reshape(-1, shape[-1])
    out, wit = line_transform(flat)
    out = np.moveaxis(out.reshape(shape), -1, axis)
    wit = np.moveaxis(wit.reshape(shape), -1, axis)
    return out, wit


def _separable_transform(f: GridFunction, kernel: Kernel,
                         line_for_axis) -> EnvelopeResult:
    """Run per-axis passes and chain witnesses into full argmin indices.

    Axis 0 (the most significant in row-major order) is processed last so
    that exact ties compose to the lowest flat index, matching the oracle.
    """
    grid = f.grid
    shape = grid.counts
    g = f.values.reshape(shape)
    witnesses = [None] * grid.dim
    for axis in reversed(range(grid.dim)):
        g, witnesses[axis] = _axis_pass(g, axis, line_for_axis(axis))
    index_arrays = list(np.indices(shape))
    for axis in range(grid.dim):
        j = witnesses[axis][tuple(index_arrays)]
        if (j < 0).any():
            raise NonProper("transform produced no witness; input not proper")
        index_arrays[axis] = j
    arg = np.ravel_multi_index(tuple(index_arrays), shape).ravel()
    # canonical value: same expression the oracle evaluates
    coords = grid.coordinates()
    env = f.values[arg] + kernel.of(coords - coords[arg])
    return EnvelopeResult(GridFunction(grid, env), arg, kernel)


def pasch_hausdorff(f: GridFunction, k: float,
                    norm: NormKind = NormKind.L2) -> EnvelopeResult:
    """Conical envelope inf{f(y) + k*norm(y - x)} with fast exact paths.

    1-d uses forward/backward scans (all norms coincide on a line); multi-d
    L1 uses per-axis passes; multi-d L2/Linf delegates to the oracle.
    """
    _require_fast_path_input(f, k)
    kernel = Kernel.conical(k, norm)
    if f.grid.dim > 1 and norm is not NormKind.L1:
        return inf_conv_bruteforce(f, kernel)

    def line_for_axis(axis):
        coords1d = f.grid.axis_coords(axis)
        return lambda flat: _conical_lines(flat, coords1d, k)

    return _separable_transform(f, kernel, line_for_axis)


def moreau_yosida(f: GridFunction, k: float) -> EnvelopeResult:
    """Quadratic envelope inf{f(y) + (k/2)*|y - x|_2^2}, exact in any dim."""
    _require_fast_path_input(f, k)
    kernel = Kernel.quadratic(k)

    def line_for_axis(axis):
        h = f.grid.spacing[axis]
        return lambda flat: _parabola_lines(flat, k, h)

    return _separable_transform(f, kernel, line_for_axis)


def envelope_sequence(f: GridFunction, n_max: int,
                      norm: NormKind = NormKind.L2) -> list:
    """Conical envelopes for k = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [pasch_hausdorff(f, float(k), norm) for k in range(1, n_max + 1)]


def proximal_map(result: EnvelopeResult) -> np.ndarray:
    """Witness coordinates per point, as an (npoints, dim) array."""
    if (result.argmin < 0).any():
        raise NoWitness("no finite witness at some point")
    return result.envelope.grid.coordinates()[result.argmin]


def prox_point(result: EnvelopeResult, flat_index: int) -> np.ndarray:
    """Witness coordinate for a single point."""
    j = int(result.argmin[int(flat_index)])
    if j < 0:
        raise NoWitness(f"no finite witness at flat index {flat_index}")
    return result.envelope.grid.coordinate(j)
