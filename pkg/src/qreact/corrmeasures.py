"""Reference correlation measures: concurrence, global quantum discord,
quantum relative entropy and the exponential distinguishability curve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SupportError, UsageError
from .infogeom import shannon_entropy
from .measure import batch_tables, correlation_tensor
from .qcore import SY, DensityMatrix, partial_trace

EIG_FLOOR = 1e-12
# relative entropies below this are eigensolver rounding, reported as 0
REL_ENTROPY_RESOLUTION = 1e-13


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.dims != (2, 2):
        raise UsageError(f"expected a two-qubit state, got dims {rho.dims}")


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, m1 - m2 - m3 - m4) of a two-qubit state.

    The m_i are the square roots of the eigenvalues of rho (Y rho* Y), Y the
    two-qubit spin flip.  With rho = A A^dag they equal the singular values of
    A^T Y A, which avoids taking square roots of tiny, noisy eigenvalues.
    """
    _require_two_qubits(rho)
    yy = np.kron(SY, SY).real
    w, v = np.linalg.eigh(rho.matrix)
    a = v * np.sqrt(np.clip(w, 0.0, None))
    m = np.linalg.svd(a.T @ yy @ a, compute_uv=False)
    m = np.sort(m)[::-1]
    return float(max(0.0, m[0] - m[1] - m[2] - m[3]))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return shannon_entropy(np.clip(rho.eigenvalues(), 0.0, None))


def mutual_information(rho: DensityMatrix) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) in bits."""
    return (
        von_neumann_entropy(partial_trace(rho, [0]))
        + von_neumann_entropy(partial_trace(rho, [1]))
        - von_neumann_entropy(rho)
    )


# -- global quantum discord ---------------------------------------------------


@dataclass(frozen=True)
class DiscordSearchConfig:
    resolution: int = 24  # azimuthal grid points; polar uses resolution // 2
    refine_iters: int = 200
    tol: float = 1e-10

    def __post_init__(self):
        if self.resolution < 8:
            raise UsageError("discord grid resolution must be >= 8")
        if self.tol <= 0:
            raise UsageError("discord tolerance must be positive")


@dataclass(frozen=True)
class DiscordResult:
    value: float
    coarse_value: float
    directions: tuple[tuple[float, float], tuple[float, float]]  # (theta, phi) per party
    converged: bool

    def __float__(self) -> float:
        return self.value


def _bloch(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def _classical_mi(tables: np.ndarray) -> np.ndarray:
    """Mutual information (bits) of a batch of 2x2 outcome tables."""
    def h(p):
        out = np.zeros_like(p)
        pos = p > 0
        out[pos] = -p[pos] * np.log2(p[pos])
        return out

    pa = tables.sum(axis=2)
    pb = tables.sum(axis=1)
    return h(pa).sum(-1) + h(pb).sum(-1) - h(tables).sum(axis=(1, 2))


def global_quantum_discord(rho: DensityMatrix, cfg: DiscordSearchConfig | None = None) -> DiscordResult:
    """Symmetric (global) discord of a two-qubit state, in bits.

    For local projective measurements Phi the relative-entropy deficit
    S(rho || Phi(rho)) - sum_j S(rho_j || Phi_j(rho_j)) equals
    I(rho) - I(outcomes), so the search maximizes the classical mutual
    information of the measured outcome table.  A coarse grid over both Bloch
    spheres seeds a coordinate-descent refinement; the earliest grid index
    wins ties.
    """
    _require_two_qubits(rho)
    cfg = cfg or DiscordSearchConfig()
    corr = correlation_tensor(rho)
    i_q = mutual_information(rho)

    nphi, nth = cfg.resolution, cfg.resolution // 2
    # polar angles over (0, pi/2]: n and -n define the same measurement
    thetas = (np.arange(nth) + 0.5) * (np.pi / 2) / nth
    phis = np.arange(nphi) * 2 * np.pi / nphi
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    grid = np.stack([th.ravel(), ph.ravel()], axis=-1)
    grid = np.vstack([[[0.0, 0.0]], grid])  # include the pole exactly
    dirs = _bloch(grid[:, 0], grid[:, 1])
    ia, ib = np.meshgrid(np.arange(len(grid)), np.arange(len(grid)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    pairs = np.stack([dirs[ia], dirs[ib]], axis=1)
    mi = _classical_mi(batch_tables(corr, pairs))
    best = int(np.argmax(mi))
    coarse = max(i_q - float(mi[best]), 0.0)

    x = np.array([*grid[ia[best]], *grid[ib[best]]])

    def objective(v):
        pair = np.stack([_bloch(v[0], v[1]), _bloch(v[2], v[3])])[None]
        return float(_classical_mi(batch_tables(corr, pair))[0])

    fx = float(mi[best])
    step = np.pi / nphi
    converged = False
    for _ in range(cfg.refine_iters):
        improved = 0.0
        for k in range(4):
            for s in (step, -step):
                y = x.copy()
                y[k] += s
                fy = objective(y)
                if fy > fx:
                    improved += fy - fx
                    x, fx = y, fy
        if improved == 0.0:
            step /= 2
            if step < 1e-9:
                converged = True
                break
        elif improved < cfg.tol and step < 1e-6:
            converged = True
            break
    value = max(i_q - fx, 0.0)
    dirs = ((float(x[0]), float(x[1])), (float(x[2]), float(x[3])))
    return DiscordResult(value, coarse, dirs, converged)


# -- relative entropy ---------------------------------------------------------


def relative_entropy(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """S(rho1 || rho2) = Tr rho1 (log2 rho1 - log2 rho2), in bits.

    Raises :class:`SupportError` when rho1 has weight outside the support of
    rho2 (the divergence is infinite).
    """
    if rho1.dims != rho2.dims:
        raise UsageError(f"dimension mismatch {rho1.dims} vs {rho2.dims}")
    p, u = np.linalg.eigh(rho1.matrix)
    q, v = np.linalg.eigh(rho2.matrix)
    p = np.clip(p, 0.0, None)
    # overlap[i, j] = |<u_i|v_j>|^2
    overlap = np.abs(u.conj().T @ v) ** 2
    kernel = q <= EIG_FLOOR
    leak = float(p @ overlap[:, kernel].sum(axis=1)) if kernel.any() else 0.0
    if leak > EIG_FLOOR:
        raise SupportError(f"support of rho1 is not contained in support of rho2 (leak {leak:.3g})")
    pos_p = p > EIG_FLOOR
    s1 = float(np.sum(p[pos_p] * np.log2(p[pos_p])))
    logq = np.where(kernel, 0.0, np.log2(np.where(kernel, 1.0, q)))
    s2 = float(p @ overlap @ logq)
    s = s1 - s2
    return s if s > REL_ENTROPY_RESOLUTION else 0.0


def sanov_fidelity(rho1: DensityMatrix, rho2: DensityMatrix, n: int) -> float:
    """1 - exp(-n S(rho1||rho2)); S is taken in nats (bits times ln 2)."""
    return float(sanov_curve(relative_entropy(rho1, rho2), n))


def sanov_curve(s_bits: float, n):
    if np.any(np.asarray(n) < 0):
        raise UsageError("measurement count must be nonnegative")
    return -np.expm1(-np.asarray(n, dtype=float) * s_bits * np.log(2.0))
