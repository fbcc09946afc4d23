"""Property checkers for grid functions and their envelopes.

Each check returns a CheckReport with the worst violation found and a
witness location. Exhaustive pair scans switch to seeded sampling above
256 points so the exhaustive suite stays fast; a per-call generator keeps
every check deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import EnvelopeResult, moreau_yosida
from .errors import (
    InfiniteValue,
    NoFiniteValues,
    NonProper,
    NotConvex,
    PreconditionViolated,
)
from .grid import GridFunction, NormKind, PointSet, distance_to_set, indicator

PAIR_SCAN_LIMIT = 256
SAMPLED_PAIRS = 100_000
DEFAULT_SEED = 42


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_violation: float
    witness: object
    detail: str

    def to_json_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, (np.integer, np.floating)):
            witness = witness.item()
        elif isinstance(witness, (tuple, list)):
            witness = [int(w) for w in witness]
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "worst_violation": float(self.worst_violation),
            "witness": witness,
            "detail": self.detail,
        }


@dataclass
class CoercivityMinorant:
    """Tabulated nondecreasing phi plus an offset beta: f >= phi(|x|) + beta.

    phi is evaluated by step interpolation from below, so a pass asserts
    the inequality for a genuine nondecreasing minorant of any interpolant.
    """

    breakpoints: np.ndarray  # (m, 2) rows of (t, value), t strictly increasing
    beta: float

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64).reshape(-1, 2)
        if bp.shape[0] == 0:
            raise ValueError("at least one breakpoint required")
        if np.any(np.diff(bp[:, 0]) <= 0):
            raise ValueError("breakpoint arguments must be strictly increasing")
        if np.any(np.diff(bp[:, 1]) < 0):
            raise ValueError("breakpoint values must be nondecreasing")
        if np.any(bp[:, 1] < 0) or np.any(bp[:, 0] < 0):
            raise ValueError("phi maps [0,inf) into [0,inf)")
        self.breakpoints = bp

    def phi(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        pos = np.searchsorted(self.breakpoints[:, 0], t, side="right") - 1
        vals = np.where(pos >= 0, self.breakpoints[np.clip(pos, 0, None), 1], 0.0)
        return vals


def infimum(f: GridFunction) -> float:
    """Minimum value over the grid (finite grids attain their infimum)."""
    return float(np.min(f.values))


def _min_set_indices(values: np.ndarray, tol: float) -> np.ndarray:
    m = np.min(values)
    if np.isposinf(m):
        return np.array([], dtype=np.int64)
    if np.isneginf(m):
        return np.flatnonzero(np.isneginf(values))
    return np.flatnonzero(values <= m + tol)


def argmin_set(f: GridFunction, tol: float = 0.0) -> PointSet:
    """All indices within tol of the minimum."""
    m = infimum(f)
    if not np.isfinite(m):
        raise NoFiniteValues("argmin_set requires a finite infimum")
    return PointSet.from_indices(f.grid, _min_set_indices(f.values, tol))


def check_infimum_preservation(f: GridFunction, env: EnvelopeResult) -> CheckReport:
    """min f == min envelope (both finite, or both -inf)."""
    if not f.proper:
        raise NonProper("infimum preservation assumes a proper f")
    mf = infimum(f)
    me = infimum(env.envelope)
    if np.isneginf(mf) or np.isneginf(me):
        passed = np.isneginf(mf) and np.isneginf(me)
        return CheckReport(
            "infimum_preservation", passed, 0.0 if passed else np.inf,
            int(np.argmin(env.envelope.values)),
            f"min f = {mf}, min envelope = {me}",
        )
    gap = abs(mf - me)
    return CheckReport(
        "infimum_preservation", gap <= 1e-9, gap,
        int(np.argmin(env.envelope.values)),
        f"min f = {mf}, min envelope = {me}",
    )


def check_minimizer_preservation(f: GridFunction, env: EnvelopeResult,
                                 tol: float = 1e-9) -> CheckReport:
    """Argmin sets of f and its envelope coincide as index sets."""
    if not f.proper:
        raise NonProper("minimizer preservation assumes a proper f")
    set_f = _min_set_indices(f.values, tol)
    set_e = _min_set_indices(env.envelope.values, tol)
    only_f = np.setdiff1d(set_f, set_e)
    only_e = np.setdiff1d(set_e, set_f)
    mismatches = only_f.size + only_e.size
    witness = int(only_f[0]) if only_f.size else (int(only_e[0]) if only_e.size else -1)
    return CheckReport(
        "minimizer_preservation", mismatches == 0, float(mismatches), witness,
        f"|argmin f| = {set_f.size}, |argmin envelope| = {set_e.size}, "
        f"symmetric difference = {mismatches}",
    )


def check_monotone_in_n(seq, f: GridFunction) -> CheckReport:
    """Envelope sequence is pointwise nondecreasing and dominated by f."""
    worst = 0.0
    witness = -1
    prev = None
    for res in seq:
        cur = res.envelope.values
        if prev is not None:
            gap = prev - cur
            gap = gap[np.isfinite(gap)]
            if gap.size and gap.max() > worst:
                worst = float(gap.max())
        over = cur - f.values
        over = np.where(np.isfinite(over), over, -np.inf)
        i = int(np.argmax(over))
        if over[i] > worst:
            worst = float(over[i])
            witness = i
        prev = cur
    return CheckReport(
        "monotone_in_n", worst <= 1e-12, worst, witness,
        f"checked {len(seq)} envelopes against f and each other",
    )


def _pair_indices(n: int, seed: int):
    if n <= PAIR_SCAN_LIMIT:
        i, j = np.triu_indices(n, k=1)
        return i, j
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=SAMPLED_PAIRS)
    j = rng.integers(0, n, size=SAMPLED_PAIRS)
    keep = i != j
    return i[keep], j[keep]


def check_lipschitz(f: GridFunction, k: float, norm: NormKind = NormKind.L2,
                    seed: int = DEFAULT_SEED) -> CheckReport:
    """|f(x) - f(x')| <= k*norm(x - x') over checked pairs."""
    if not np.isfinite(f.values).all():
        raise InfiniteValue("Lipschitz check requires an all-finite function")
    n = f.grid.npoints
    i, j = _pair_indices(n, seed)
    coords = f.grid.coordinates()
    viol = np.abs(f.values[i] - f.values[j]) - k * norm.of(coords[i] - coords[j])
    w = int(np.argmax(viol))
    worst = max(0.0, float(viol[w]))
    return CheckReport(
        "lipschitz", worst <= 1e-9, worst, (int(i[w]), int(j[w])),
        f"constant k = {k}, norm = {norm.value}, pairs checked = {i.size}",
    )


def check_midpoint_convex(f: GridFunction, seed: int = DEFAULT_SEED) -> CheckReport:
    """f(mid) <= (f(x) + f(y))/2 for pairs whose midpoint is a grid point."""
    n = f.grid.npoints
    i, j = _pair_indices(n, seed)
    multi = np.stack(np.unravel_index(np.arange(n), f.grid.counts), axis=-1)
    sums = multi[i] + multi[j]
    ok = (sums % 2 == 0).all(axis=1)
    i, j, sums = i[ok], j[ok], sums[ok]
    mid = np.ravel_multi_index(tuple((sums // 2).T), f.grid.counts)
    with np.errstate(invalid="ignore"):
        rhs = 0.5 * (f.values[i] + f.values[j])  # +inf propagates, passes vacuously
        vacuous = np.isposinf(rhs) | np.isnan(rhs)
        lhs = f.values[mid]
        viol = np.where(vacuous, -np.inf, lhs - rhs)
    viol = np.where(np.isposinf(lhs) & ~vacuous, np.inf, viol)
    viol = np.where(np.isnan(viol), 0.0, viol)
    if viol.size == 0:
        return CheckReport("midpoint_convex", True, 0.0, -1, "no representable midpoints")
    w = int(np.argmax(viol))
    worst = max(0.0, float(viol[w]))
    return CheckReport(
        "midpoint_convex", worst <= 1e-9, worst, (int(i[w]), int(j[w])),
        f"midpoint pairs checked = {i.size}",
    )


def check_coercivity_bound(env: EnvelopeResult, f: GridFunction, H: PointSet,
                           k: float, norm: NormKind = NormKind.L2) -> CheckReport:
    """envelope >= min f + k*d(x, H) when f is +inf off H; equality for indicators."""
    off = ~H.mask
    if np.isfinite(f.values[off]).any():
        raise PreconditionViolated("f must be +inf outside H")
    m = float(np.min(f.values))
    bound = m + k * distance_to_set(f.grid, H, norm).values
    gap = bound - env.envelope.values
    w = int(np.argmax(gap))
    worst = max(0.0, float(gap[w]))
    detail = f"min f = {m}, points = {f.grid.npoints}"
    is_indicator = bool(np.all(f.values[H.mask] == 0.0))
    if is_indicator:
        eq_gap = float(np.max(np.abs(env.envelope.values - bound)))
        detail += f", indicator input: max |envelope - bound| = {eq_gap}"
    return CheckReport("coercivity_bound", worst <= 1e-9, worst, w, detail)


def check_coercive_minorant(f: GridFunction, minorant: CoercivityMinorant,
                            norm: NormKind = NormKind.L2) -> CheckReport:
    """f(x) >= phi(norm(x)) + beta at every grid point."""
    lower = minorant.phi(norm.of(f.grid.coordinates())) + minorant.beta
    gap = np.where(np.isposinf(f.values), -np.inf, lower - f.values)
    gap = np.where(np.isneginf(f.values), np.inf, gap)
    w = int(np.argmax(gap))
    worst = max(0.0, float(gap[w]))
    return CheckReport(
        "coercive_minorant", worst <= 1e-9, worst, w,
        f"beta = {minorant.beta}, breakpoints = {minorant.breakpoints.shape[0]}",
    )


def affine_minorant(f: GridFunction, k: float = 1.0):
    """A pair (slope, alpha) with f(x) >= <slope, x> + alpha everywhere.

    Supporting affine function of the quadratic envelope at its minimizer:
    slope = k*(base - prox(base)), alpha = envelope(base) - <slope, base>.
    At the envelope minimizer the proximal displacement vanishes, so this
    degenerates to the constant minorant at the minimum; the verified
    inequality is part of the contract either way.
    """
    if not f.proper:
        raise NonProper("affine minorant requires a proper function")
    convexity = check_midpoint_convex(f)
    if not convexity.passed:
        raise NotConvex(
            f"midpoint convexity violated by {convexity.worst_violation}"
        )
    env = moreau_yosida(f, k)
    base = int(np.argmin(env.envelope.values))
    x_hat = f.grid.coordinate(base)
    prox = f.grid.coordinate(int(env.argmin[base]))
    slope = k * (x_hat - prox)
    alpha = float(env.envelope.values[base] - slope @ x_hat)
    coords = f.grid.coordinates()
    if np.any(f.values - (coords @ slope + alpha) < 0):
        # fall back to the always-valid constant support at the minimum
        slope = np.zeros(f.grid.dim)
        alpha = float(np.min(f.values[np.isfinite(f.values)]))
    return slope, alpha


def minimizing_sequence(f: GridFunction, count: int):
    """Flat indices with nonincreasing values ending at the grid minimum."""
    if not f.proper:
        raise NonProper("minimizing sequence requires a proper function")
    finite = np.isfinite(f.values)
    order = np.argsort(f.values[finite], kind="stable")
    idx = np.flatnonzero(finite)[order]
    vals = f.values[idx]
    distinct_idx = idx[np.concatenate([[True], np.diff(vals) > 0])]
    take = distinct_idx[: min(count, distinct_idx.size)][::-1]
    return [int(i) for i in take]
