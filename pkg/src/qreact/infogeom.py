"""Shannon-entropy geometry of measurement outcomes.

All entropies are in bits.  The functions whose names start with ``batch_``
take raw probability tables with arbitrary leading batch axes followed by one
binary axis per party; the averaging code evaluates thousands of detector
settings at once through them.  The remaining functions are the scalar API on
:class:`~qreact.measure.OutcomeDistribution`.

Generalized volumes are elementary symmetric polynomials of the conditional
entropy profile: the information distance of two parties is e1 of
(H(A|B), H(B|A)), the tripartite area is e2 of three conditional entropies and
the four-party volume is e3 of four.  No 1/k! simplex factor is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError
from .measure import OutcomeDistribution, marginal_table


def _plog2p(p: np.ndarray) -> np.ndarray:
    # -p log2 p with 0 log 0 := 0; log2 keeps dyadic probabilities exact
    p = np.clip(p, 0.0, None)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = -p[pos] * np.log2(p[pos])
    return out


def shannon_entropy(probs) -> float:
    return float(_plog2p(np.asarray(probs, dtype=float)).sum())


def binary_entropy(p):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return _plog2p(p) + _plog2p(1.0 - p)


def batch_entropy(table: np.ndarray, d: int, subset: Iterable[int]) -> np.ndarray:
    """Joint entropy of ``subset`` for every table in the batch."""
    subset = tuple(sorted(set(subset)))
    if not subset:
        return np.zeros(table.shape[: table.ndim - d])
    m = marginal_table(table, d, subset)
    axes = tuple(range(m.ndim - len(subset), m.ndim))
    return _plog2p(m).sum(axis=axes)


def batch_profile(table: np.ndarray, d: int, subset: Sequence[int]) -> np.ndarray:
    """H(C_i | subset minus i) for each i in ``subset``; shape (..., len(subset))."""
    subset = list(subset)
    if not subset:
        raise UsageError("entropy profile needs a nonempty party subset")
    h_all = batch_entropy(table, d, subset)
    vals = [h_all - batch_entropy(table, d, [j for j in subset if j != i]) for i in subset]
    # conditional entropy of one bit lies in [0, 1]; trim rounding residue
    return np.clip(np.stack(vals, axis=-1), 0.0, 1.0)


def batch_esp(values: np.ndarray, k: int) -> np.ndarray:
    """Elementary symmetric polynomial e_k along the last axis.

    Uses the additive recurrence e_j <- e_j + x * e_(j-1), which involves no
    subtraction and is therefore stable for the nonnegative inputs used here.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[-1]
    if not 0 <= k <= m:
        raise UsageError(f"polynomial degree {k} out of range for {m} variables")
    e = [np.ones(values.shape[:-1])] + [np.zeros(values.shape[:-1]) for _ in range(k)]
    for i in range(m):
        x = values[..., i]
        for j in range(min(i + 1, k), 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


def batch_boundary_area(table: np.ndarray, d: int, subset: Sequence[int]) -> np.ndarray:
    subset = list(subset)
    m = len(subset)
    if m < 3:
        raise UsageError("boundary area needs at least three parties")
    total = np.zeros(table.shape[: table.ndim - d])
    for face in combinations(subset, m - 1):
        total = total + batch_esp(batch_profile(table, d, face), m - 2)
    return total


def batch_volume(table: np.ndarray, d: int, subset: Sequence[int]) -> np.ndarray:
    subset = list(subset)
    return batch_esp(batch_profile(table, d, subset), len(subset) - 1)


def batch_distance(table: np.ndarray, d: int, i: int, j: int) -> np.ndarray:
    if i == j:
        return np.zeros(table.shape[: table.ndim - d])
    h_ij = batch_entropy(table, d, (i, j))
    h_i = batch_entropy(table, d, (i,))
    h_j = batch_entropy(table, d, (j,))
    return np.clip(2 * h_ij - h_i - h_j, 0.0, None)


# -- scalar API ---------------------------------------------------------------


@dataclass(frozen=True)
class EntropyProfile:
    subset: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.subset) != len(self.values):
            raise UsageError("profile needs one value per party")
        if any(v < 0 for v in self.values):
            raise UsageError("conditional entropies are nonnegative")


def _check_parties(dist: OutcomeDistribution, parties: Iterable[int]) -> list[int]:
    parties = list(parties)
    d = dist.n_parties
    if any(not 0 <= p < d for p in parties):
        raise UsageError(f"party indices {parties} out of range for {d} parties")
    return parties


def subset_entropy(dist: OutcomeDistribution, subset: Iterable[int]) -> float:
    subset = _check_parties(dist, subset)
    if not subset:
        raise UsageError("subset entropy needs a nonempty party set")
    return float(batch_entropy(dist.table, dist.n_parties, subset))


def conditional_entropy(dist: OutcomeDistribution, target: Iterable[int], given: Iterable[int]) -> float:
    target = set(_check_parties(dist, target))
    given = set(_check_parties(dist, given))
    if target & given:
        raise UsageError(f"target {sorted(target)} and condition {sorted(given)} overlap")
    d = dist.n_parties
    h = batch_entropy(dist.table, d, target | given) - batch_entropy(dist.table, d, given)
    return max(float(h), 0.0)


def info_distance(dist: OutcomeDistribution, i: int, j: int) -> float:
    """D_ij = H(i|j) + H(j|i) = 2 H_ij - H_i - H_j."""
    i, j = _check_parties(dist, (i, j))
    if i > j:
        # compute in canonical order so D_ij == D_ji bit for bit
        i, j = j, i
    return float(batch_distance(dist.table, dist.n_parties, i, j))


def entropy_profile(dist: OutcomeDistribution, subset: Sequence[int]) -> EntropyProfile:
    subset = _check_parties(dist, subset)
    vals = batch_profile(dist.table, dist.n_parties, subset)
    return EntropyProfile(tuple(subset), tuple(float(v) for v in vals))


def sym_volume(profile: EntropyProfile | Sequence[float], k: int) -> float:
    values = profile.values if isinstance(profile, EntropyProfile) else profile
    return float(batch_esp(np.asarray(values, dtype=float), k))


def boundary_area(dist: OutcomeDistribution, subset: Sequence[int]) -> float:
    subset = _check_parties(dist, subset)
    return float(batch_boundary_area(dist.table, dist.n_parties, subset))


def volume(dist: OutcomeDistribution, subset: Sequence[int]) -> float:
    subset = _check_parties(dist, subset)
    return float(batch_volume(dist.table, dist.n_parties, subset))
