"""Dense linear algebra for few-qubit density matrices.

Plain ``numpy`` complex arrays play the role of generic matrices.  The
:class:`DensityMatrix` wrapper validates and freezes its array, so states can
be shared freely between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ChannelError, InvalidStateError, StateFileError, UsageError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_SLACK = -1e-9
COMPLETENESS_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def matrices_equal(a: np.ndarray, b: np.ndarray, atol: float = 1e-12) -> bool:
    """Entrywise comparison with an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state on a tensor product of qubit spaces.

    ``dims`` lists the per-party dimensions; party 0 is the most significant
    tensor factor.  Construction fails with :class:`InvalidStateError` if the
    matrix is not Hermitian, unit-trace and PSD (up to the module tolerances).
    Pass ``validate=False`` only for matrices known to be valid by construction.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        size = int(np.prod(dims)) if dims else 0
        if not dims or any(d < 1 for d in dims) or m.shape != (size, size):
            raise InvalidStateError(f"matrix shape {m.shape} does not match dims {dims}")
        if self.validate:
            check_density(m)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def tensor(self) -> np.ndarray:
        """The matrix reshaped to (d0, d1, ..., d0, d1, ...) index order."""
        return self.matrix.reshape(self.dims + self.dims)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and matrices_equal(self.matrix, other.matrix, atol)

    def to_json(self) -> str:
        flat = self.matrix.reshape(-1)
        return json.dumps(
            {"dims": list(self.dims), "re": flat.real.tolist(), "im": flat.imag.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        try:
            obj = json.loads(text)
            dims = [int(d) for d in obj["dims"]]
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj["im"], dtype=float)
        except (ValueError, KeyError, TypeError) as exc:
            raise StateFileError(f"malformed state JSON: {exc}") from exc
        size = int(np.prod(dims)) if dims else 0
        if size == 0 or re.shape != (size * size,) or im.shape != (size * size,):
            raise StateFileError(
                f"state JSON needs {size * size} 're' and 'im' entries for dims {dims}"
            )
        return cls(tuple(dims), (re + 1j * im).reshape(size, size))

    @classmethod
    def load(cls, path: str | Path) -> "DensityMatrix":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise StateFileError(f"cannot read state file {path}: {exc}") from exc
        return cls.from_json(text)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())


def check_density(m: np.ndarray) -> None:
    herm = np.max(np.abs(m - m.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"matrix is not Hermitian (deviation {herm:.3g})")
    tr = np.trace(m)
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    lo = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
    if lo < PSD_SLACK:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def tensor_states(*states: DensityMatrix) -> DensityMatrix:
    dims = sum((s.dims for s in states), ())
    return DensityMatrix(dims, kron_all(s.matrix for s in states), validate=False)


def pure_state(psi: Sequence[complex], dims: Sequence[int] | None = None) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    if dims is None:
        n = int(round(np.log2(psi.size)))
        dims = (2,) * n
    return DensityMatrix(tuple(dims), np.outer(psi, psi.conj()))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    keep = sorted(set(int(k) for k in keep))
    n = rho.n_parties
    if not keep:
        raise UsageError("partial_trace needs at least one party to keep")
    if keep[0] < 0 or keep[-1] >= n:
        raise UsageError(f"party indices {keep} out of range for {n} parties")
    traced = [i for i in range(n) if i not in keep]
    t = rho.tensor()
    # Contract each traced party's row and column index; go from the back so
    # positions of the remaining axes stay valid.
    for i in sorted(traced, reverse=True):
        nleft = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + nleft)
    kdims = tuple(rho.dims[k] for k in keep)
    size = int(np.prod(kdims))
    m = t.reshape(size, size)
    return DensityMatrix(kdims, (m + m.conj().T) / 2, validate=False)


def haar_random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix.

    The diagonal of R is rotated onto the positive reals; without that phase
    fix the distribution of Q is not Haar.
    """
    if dim < 1:
        raise UsageError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def apply_unitary(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    m = u @ rho.matrix @ u.conj().T
    return DensityMatrix(rho.dims, (m + m.conj().T) / 2)


def apply_local_unitaries(rho: DensityMatrix, unitaries: Sequence[np.ndarray]) -> DensityMatrix:
    return apply_unitary(rho, kron_all(unitaries))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(_frozen(k) for k in self.operators)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(k.shape != shape for k in ops):
            raise ChannelError("Kraus operators must be square and of equal size")
        object.__setattr__(self, "operators", ops)
        total = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(total - np.eye(shape[0])))
        if dev > COMPLETENESS_TOL:
            raise ChannelError(f"Kraus operators are not complete (deviation {dev:.3g})")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def depolarizing(p: float) -> KrausChannel:
    """Qubit depolarizing channel rho -> (1 - p) rho + p I/2."""
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"depolarizing probability {p} outside [0, 1]")
    return KrausChannel(
        (
            np.sqrt(1 - 3 * p / 4) * I2,
            np.sqrt(p / 4) * SX,
            np.sqrt(p / 4) * SY,
            np.sqrt(p / 4) * SZ,
        )
    )


def apply_channel(rho: DensityMatrix, channel: KrausChannel, party: int) -> DensityMatrix:
    if not 0 <= party < rho.n_parties:
        raise UsageError(f"party {party} out of range")
    if channel.dim != rho.dims[party]:
        raise ChannelError(
            f"channel acts on dimension {channel.dim}, party {party} has {rho.dims[party]}"
        )
    left = int(np.prod(rho.dims[:party]))
    right = int(np.prod(rho.dims[party + 1:]))
    out = np.zeros_like(rho.matrix)
    for k in channel.operators:
        big = np.kron(np.kron(np.eye(left), k), np.eye(right))
        term = big @ rho.matrix @ big.conj().T
        out += (term + term.conj().T) / 2
    return DensityMatrix(rho.dims, out)
