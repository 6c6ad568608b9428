"""Averages over detector settings and the reactivity built from them.

Three samplers are available:

``grid`` (planar only)
    Tensor-product trapezoidal rule with ``n`` equispaced angles per party on
    [0, 2pi).  The error bound is the difference to the ``n/2`` rule, whose
    nodes are a subset of the ``n`` rule's nodes, so it costs nothing extra.
``monte-carlo``
    ``n`` i.i.d. settings (uniform angles, or uniform points on each Bloch
    sphere); half width 1.96 standard errors.
``fibonacci`` (sphere only)
    Randomly shifted golden-ratio-family Kronecker lattice in [0, 1)^(2d)
    pushed through the area-preserving map onto d spheres; for one sphere this
    is the Fibonacci lattice.  ``n`` points are split into 16 independently
    shifted replicates, whose spread gives a Student-t half width.

Every sampler is a deterministic function of (mode, seed).  Settings are
evaluated in fixed-size chunks that write into a preallocated array, so
results are bit-identical for any ``workers`` value.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .errors import DegenerateError, UsageError
from .infogeom import batch_boundary_area, batch_distance, batch_volume
from .measure import batch_tables, correlation_tensor, planar_direction
from .qcore import DensityMatrix

VOLUME_FLOOR = 1e-9
MAX_GRID_POINTS = 1 << 22
FIB_REPLICATES = 16
CHUNK = 8192

Quantity = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AveragingMode:
    kind: str = "sphere"  # planar | sphere
    sampler: str = "fibonacci"  # grid | monte-carlo | fibonacci
    n: int = 8192  # grid points per party, or total sample count
    seed: int = 0
    workers: int = 1
    tol: float | None = None

    def __post_init__(self):
        if self.kind not in ("planar", "sphere"):
            raise UsageError(f"unknown averaging kind {self.kind!r}")
        if self.sampler not in ("grid", "monte-carlo", "fibonacci"):
            raise UsageError(f"unknown sampler {self.sampler!r}")
        if self.sampler == "grid":
            if self.kind != "planar":
                raise UsageError("the grid sampler is planar only")
            if self.n < 4 or self.n % 2:
                raise UsageError("grid needs an even number of points per party, at least 4")
        else:
            if self.n < 100:
                raise UsageError("sampled modes need at least 100 settings")
            if self.sampler == "fibonacci" and self.kind != "sphere":
                raise UsageError("the fibonacci sampler covers the sphere only")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")

    @classmethod
    def planar_grid(cls, n: int = 64, **kw) -> "AveragingMode":
        return cls("planar", "grid", n, **kw)

    @classmethod
    def sphere(cls, n: int = 8192, seed: int = 0, **kw) -> "AveragingMode":
        return cls("sphere", "fibonacci", n, seed, **kw)

    @classmethod
    def monte_carlo(cls, kind: str = "sphere", n: int = 20000, seed: int = 0, **kw) -> "AveragingMode":
        return cls(kind, "monte-carlo", n, seed, **kw)

    def describe(self) -> str:
        return f"{self.kind}/{self.sampler}"


def default_mode(n_parties: int, seed: int = 0) -> AveragingMode:
    if n_parties <= 3:
        return AveragingMode.sphere(8192, seed)
    return AveragingMode.monte_carlo("sphere", 20000, seed)


@dataclass(frozen=True)
class MeanEstimate:
    mean: float
    half_width: float
    samples: int
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReactivityResult:
    area_mean: MeanEstimate
    volume_mean: MeanEstimate
    reactivity: float
    half_width: float
    mode: AveragingMode

    def to_dict(self) -> dict:
        return {
            "area_mean": asdict(self.area_mean),
            "volume_mean": asdict(self.volume_mean),
            "reactivity": self.reactivity,
            "half_width": self.half_width,
            "mode": asdict(self.mode),
        }


# -- sample plans -------------------------------------------------------------


def _sphere_points(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    z = 1.0 - 2.0 * u
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = 2 * np.pi * v
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def kronecker_lattice(n: int, dim: int) -> np.ndarray:
    """First ``n`` points of the additive-recurrence sequence with generator
    1/g^k, g the positive root of x^(dim+1) = x + 1 (g is the golden ratio for
    dim = 1)."""
    g = 2.0
    for _ in range(64):
        g = (1.0 + g) ** (1.0 / (dim + 1))
    alpha = np.mod(g ** -np.arange(1, dim + 1), 1.0)
    idx = np.arange(n, dtype=float)[:, None]
    return np.mod(0.5 + idx * alpha, 1.0)


class _Plan:
    """Lazily materialized detector settings for one (mode, party count)."""

    def __init__(self, mode: AveragingMode, d: int):
        self.mode = mode
        self.d = d
        if mode.sampler == "grid":
            self.size = mode.n**d
            if self.size > MAX_GRID_POINTS:
                raise UsageError(
                    f"grid of {mode.n}^{d} = {self.size} points exceeds the {MAX_GRID_POINTS} cap"
                )
            self._dirs = None
        elif mode.sampler == "monte-carlo":
            rng = np.random.default_rng(mode.seed)
            if mode.kind == "planar":
                self._dirs = planar_direction(rng.uniform(0, 2 * np.pi, size=(mode.n, d)))
            else:
                g = rng.standard_normal((mode.n, d, 3))
                self._dirs = g / np.linalg.norm(g, axis=-1, keepdims=True)
            self.size = mode.n
        else:
            per = -(-mode.n // FIB_REPLICATES)
            base = kronecker_lattice(per, 2 * d)
            shifts = np.random.default_rng(mode.seed).uniform(size=(FIB_REPLICATES, 1, 2 * d))
            pts = np.mod(base[None] + shifts, 1.0).reshape(-1, 2 * d)
            self._dirs = _sphere_points(pts[:, 0::2], pts[:, 1::2])
            self.size = per * FIB_REPLICATES

    def grid_indices(self, start: int, stop: int) -> np.ndarray:
        return np.stack(np.unravel_index(np.arange(start, stop), (self.mode.n,) * self.d), axis=-1)

    def directions(self, start: int, stop: int) -> np.ndarray:
        if self._dirs is not None:
            return self._dirs[start:stop]
        angles = 2 * np.pi * self.grid_indices(start, stop) / self.mode.n
        return planar_direction(angles)

    def half_grid_mask(self) -> np.ndarray:
        idx = self.grid_indices(0, self.size)
        return np.all(idx % 2 == 0, axis=1)


def _evaluate(rho: DensityMatrix, quantity: Quantity, plan: _Plan) -> np.ndarray:
    corr = correlation_tensor(rho)
    bounds = [(s, min(s + CHUNK, plan.size)) for s in range(0, plan.size, CHUNK)]

    def run(b):
        vals = np.asarray(quantity(batch_tables(corr, plan.directions(*b))), dtype=float)
        return vals.reshape(b[1] - b[0], -1)

    if plan.mode.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(plan.mode.workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    out = np.empty((plan.size, parts[0].shape[1]))
    for (s, e), part in zip(bounds, parts):
        out[s:e] = part
    return out


def _gradient(fn: Callable[[np.ndarray], float], m: np.ndarray) -> np.ndarray:
    grad = np.empty_like(m)
    for k in range(m.size):
        h = 1e-7 * max(1.0, abs(m[k]))
        up, dn = m.copy(), m.copy()
        up[k] += h
        dn[k] -= h
        grad[k] = (fn(up) - fn(dn)) / (2 * h)
    return grad


def _estimate(values: np.ndarray, plan: _Plan, fn: Callable[[np.ndarray], float]) -> MeanEstimate:
    """Point estimate fn(mean of columns) with the sampler's error bound."""
    mode = plan.mode
    m = values.mean(axis=0)
    value = float(fn(m))
    if mode.sampler == "grid":
        half = values[plan.half_grid_mask()].mean(axis=0)
        hw = abs(value - float(fn(half)))
    elif mode.sampler == "monte-carlo":
        z = (values - m) @ _gradient(fn, m)
        hw = 1.96 * float(np.std(z, ddof=1)) / np.sqrt(len(z))
    else:
        reps = values.reshape(FIB_REPLICATES, -1, values.shape[1]).mean(axis=1)
        z = (reps - m) @ _gradient(fn, m)
        tq = stats.t.ppf(0.975, FIB_REPLICATES - 1)
        hw = float(tq * np.std(z, ddof=1) / np.sqrt(FIB_REPLICATES))
    flags = ()
    if mode.tol is not None and hw > mode.tol:
        flags = ("tolerance-not-reached",)
    return MeanEstimate(value, hw, plan.size, flags)


def average(state: DensityMatrix, quantity: Quantity, mode: AveragingMode | None = None) -> MeanEstimate:
    """Average a setting-indexed quantity over detector settings.

    ``quantity`` receives a batch of outcome tables of shape (N, 2, ..., 2)
    (one binary axis per party) and returns N values.
    """
    mode = mode or default_mode(state.n_parties)
    plan = _Plan(mode, state.n_parties)
    vals = _evaluate(state, quantity, plan)
    if vals.shape[1] != 1:
        raise UsageError("average() takes a scalar quantity")
    return _estimate(vals, plan, lambda m: m[0])


def _distance_quantity(tables: np.ndarray) -> np.ndarray:
    return batch_distance(tables, 2, 0, 1)


def _require_parties(state: DensityMatrix, lo: int, hi: int) -> None:
    if not lo <= state.n_parties <= hi:
        raise UsageError(f"expected {lo}..{hi} parties, got {state.n_parties}")


def mean_distance(state: DensityMatrix, mode: AveragingMode | None = None) -> MeanEstimate:
    _require_parties(state, 2, 2)
    return average(state, _distance_quantity, mode)


def reactivity_bipartite(
    state: DensityMatrix, mode: AveragingMode | None = None, label: str | None = None
) -> ReactivityResult:
    """R = 1 / mean distance.  The area slot holds e0 = 1."""
    _require_parties(state, 2, 2)
    mode = mode or default_mode(2)
    plan = _Plan(mode, 2)
    vals = _evaluate(state, _distance_quantity, plan)
    dist = _estimate(vals, plan, lambda m: m[0])
    if dist.mean < VOLUME_FLOOR:
        raise DegenerateError(f"mean distance of {label or 'state'} is {dist.mean:.3g}, below floor")
    r = _estimate(vals, plan, lambda m: 1.0 / m[0])
    area = MeanEstimate(1.0, 0.0, plan.size)
    return ReactivityResult(area, dist, r.mean, r.half_width, mode)


def reactivity_multipartite(
    state: DensityMatrix, mode: AveragingMode | None = None, label: str | None = None
) -> ReactivityResult:
    """Ratio of the averaged boundary area to the averaged top-dimensional volume."""
    _require_parties(state, 3, 6)
    d = state.n_parties
    mode = mode or default_mode(d)
    plan = _Plan(mode, d)
    parties = list(range(d))

    def quantity(tables):
        return np.stack(
            [batch_boundary_area(tables, d, parties), batch_volume(tables, d, parties)], axis=-1
        )

    vals = _evaluate(state, quantity, plan)
    area = _estimate(vals, plan, lambda m: m[0])
    vol = _estimate(vals, plan, lambda m: m[1])
    if abs(vol.mean) < VOLUME_FLOOR:
        raise DegenerateError(
            f"mean {d - 1}-volume of {label or 'state'} is {vol.mean:.3g}, below floor {VOLUME_FLOOR}"
        )
    r = _estimate(vals, plan, lambda m: m[0] / m[1])
    return ReactivityResult(area, vol, r.mean, r.half_width, mode)


def reactivity(state: DensityMatrix, mode: AveragingMode | None = None, label: str | None = None) -> ReactivityResult:
    if state.n_parties == 2:
        return reactivity_bipartite(state, mode, label)
    return reactivity_multipartite(state, mode, label)
