"""Detector model: measurement directions, projectors, outcome tables.

A detector measures spin along a Bloch-sphere direction n and records outcome
0 for the +1 eigenvalue and 1 for -1.  A planar angle ``a`` means the
direction (sin a, 0, cos a) in the x-z great circle, so the projector
amplitudes involve a/2: P+(a) = |v><v| with v = (cos a/2, sin a/2).

Joint probabilities are computed from the real correlation tensor
T[m0..md] = Tr(rho sigma_m0 (x) ... (x) sigma_md), which lets a whole batch of
settings be evaluated with real contractions:
P(b) = 2^-d sum_m T[m] prod_k u_k(b_k)[m_k], u_k(b) = (1, (-1)^b n_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import UsageError
from .qcore import I2, SX, SY, SZ, DensityMatrix, kron_all

PAULIS = np.stack([I2, SX, SY, SZ])

Direction = Union[float, Sequence[float]]


def planar_direction(alpha) -> np.ndarray:
    """Unit vectors (sin a, 0, cos a); broadcasts over array input."""
    alpha = np.mod(np.asarray(alpha, dtype=float), 2 * np.pi)
    return np.stack([np.sin(alpha), np.zeros_like(alpha), np.cos(alpha)], axis=-1)


def as_direction(direction: Direction) -> np.ndarray:
    arr = np.asarray(direction, dtype=float)
    if arr.ndim == 0:
        return planar_direction(arr)
    if arr.shape != (3,):
        raise UsageError(f"a direction is a planar angle or a 3-vector, got {direction!r}")
    if abs(np.linalg.norm(arr) - 1) > 1e-12:
        raise UsageError(f"direction {direction!r} is not a unit vector")
    return arr


@dataclass(frozen=True, eq=False)
class DetectorSetting:
    """One measurement direction per party, stored as a (d, 3) array."""

    directions: np.ndarray

    def __post_init__(self):
        d = np.array(self.directions, dtype=float)
        d.flags.writeable = False
        object.__setattr__(self, "directions", d)

    @classmethod
    def of(cls, *directions: Direction) -> "DetectorSetting":
        return cls(np.stack([as_direction(x) for x in directions]))

    @classmethod
    def planar(cls, angles: Iterable[float]) -> "DetectorSetting":
        return cls(planar_direction(np.asarray(list(angles), dtype=float)))

    @property
    def n_parties(self) -> int:
        return self.directions.shape[0]


def projectors(direction: Direction) -> tuple[np.ndarray, np.ndarray]:
    n = as_direction(direction)
    ns = n[0] * SX + n[1] * SY + n[2] * SZ
    return (I2 + ns) / 2, (I2 - ns) / 2


def correlation_tensor(rho: DensityMatrix) -> np.ndarray:
    """Real tensor T[m0, ..., m(d-1)] = Tr(rho sigma_m0 (x) ...), shape (4,)*d."""
    d = rho.n_parties
    if any(k != 2 for k in rho.dims):
        raise UsageError("the detector model covers qubits only")
    # Tr(rho S) = sum_ij rho[i, j] S[j, i], one Pauli factor per party
    rows = list(range(d))
    cols = list(range(d, 2 * d))
    ms = list(range(2 * d, 3 * d))
    operands = [rho.tensor(), rows + cols]
    for k in range(d):
        operands += [PAULIS, [ms[k], cols[k], rows[k]]]
    t = np.einsum(*operands, ms, optimize=True)
    return np.ascontiguousarray(t.real)


def batch_tables(corr: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Outcome tables for a batch of settings.

    ``directions`` has shape (N, d, 3); the result has shape (N, 2, ..., 2)
    with outcome axes in party order.  Entries are clamped at 0.
    """
    directions = np.asarray(directions, dtype=float)
    n, d, _ = directions.shape
    signs = np.array([1.0, -1.0])
    # u[N, d, b, m]
    u = np.empty((n, d, 2, 4))
    u[..., 0] = 1.0
    u[..., 1:] = signs[None, None, :, None] * directions[:, :, None, :]
    t = np.broadcast_to(corr, (n,) + corr.shape)
    # contract the leading m-axis each round; outcome axes accumulate at the end
    for k in range(d):
        t = np.einsum("nm...,nbm->n...b", t, u[:, k])
    probs = t / 2**d
    return np.clip(probs, 0.0, None)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Joint probability table over binary outcomes, party 0 = most significant bit."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.clip(np.asarray(self.probs, dtype=float).reshape(-1), 0.0, None)
        d = int(round(np.log2(p.size))) if p.size else 0
        if p.size < 2 or 2**d != p.size:
            raise UsageError(f"probability table size {p.size} is not a power of two")
        if abs(p.sum() - 1) > 1e-10:
            raise UsageError(f"probabilities sum to {p.sum():.12g}, expected 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def n_parties(self) -> int:
        return int(round(np.log2(self.probs.size)))

    @property
    def table(self) -> np.ndarray:
        return self.probs.reshape((2,) * self.n_parties)

    def __getitem__(self, bits: str) -> float:
        return float(self.probs[int(bits, 2)])


def joint_distribution(rho: DensityMatrix, settings: DetectorSetting | Sequence[Direction]) -> OutcomeDistribution:
    if not isinstance(settings, DetectorSetting):
        settings = DetectorSetting.of(*settings)
    if settings.n_parties != rho.n_parties:
        raise UsageError(
            f"{settings.n_parties} detector directions for a {rho.n_parties}-party state"
        )
    table = batch_tables(correlation_tensor(rho), settings.directions[None])[0]
    return OutcomeDistribution(table / table.sum())


def joint_distribution_direct(rho: DensityMatrix, settings: DetectorSetting) -> np.ndarray:
    """Reference path: probs[b] = Tr((P_b0 (x) ... ) rho) with explicit Kronecker products."""
    projs = [projectors(n) for n in settings.directions]
    d = len(projs)
    out = np.empty(2**d)
    for idx in range(2**d):
        bits = [(idx >> (d - 1 - k)) & 1 for k in range(d)]
        op = kron_all(projs[k][b] for k, b in enumerate(bits))
        out[idx] = np.real(np.trace(op @ rho.matrix))
    return out


def marginal_table(table: np.ndarray, d: int, keep: Iterable[int]) -> np.ndarray:
    """Sum out parties not in ``keep`` from the last ``d`` axes of ``table``."""
    keep = set(keep)
    if not keep:
        raise UsageError("cannot marginalize onto an empty party set")
    if min(keep) < 0 or max(keep) >= d:
        raise UsageError(f"party indices {sorted(keep)} out of range for {d} parties")
    lead = table.ndim - d
    drop = tuple(lead + k for k in range(d) if k not in keep)
    return table.sum(axis=drop) if drop else table


def marginalize(dist: OutcomeDistribution, keep: Iterable[int]) -> OutcomeDistribution:
    keep = sorted(set(keep))
    return OutcomeDistribution(marginal_table(dist.table, dist.n_parties, keep))
