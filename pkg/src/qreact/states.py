"""Named states and the ``name[:param...]`` state mini-language.

``bell`` is (|00> + |11>)/sqrt(2), the state the Werner family is built on.
Some literature calls it a "singlet"; here ``singlet`` is reserved for the
antisymmetric (|01> - |10>)/sqrt(2), which is invariant under U (x) U and is
the state the trapezoid construction needs.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ArityError, DomainError, UnknownStateError
from .qcore import I2, SX, SY, SZ, DensityMatrix, haar_random_unitary, kron_all, pure_state

MAX_QUBITS = 6


def _check_n(n: int) -> int:
    if int(n) != n or not 2 <= n <= MAX_QUBITS:
        raise DomainError(f"number of qubits must be an integer in [2, {MAX_QUBITS}], got {n}")
    return int(n)


def bell() -> DensityMatrix:
    return pure_state([1, 0, 0, 1])


def singlet() -> DensityMatrix:
    return pure_state([0, 1, -1, 0])


def werner(lam: float) -> DensityMatrix:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"werner lambda must lie in [0, 1], got {lam}")
    m = lam * bell().matrix + (1 - lam) / 4 * np.eye(4)
    return DensityMatrix((2, 2), m)


def ghz(n: int) -> DensityMatrix:
    n = _check_n(n)
    psi = np.zeros(2**n)
    psi[0] = psi[-1] = 1
    return pure_state(psi)


def wstate(n: int) -> DensityMatrix:
    n = _check_n(n)
    psi = np.zeros(2**n)
    for k in range(n):
        psi[1 << k] = 1
    return pure_state(psi)


def bloch_state(vec: Sequence[float]) -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-12:
        raise DomainError(f"Bloch vector must be a unit 3-vector, got {vec}")
    return (I2 + v[0] * SX + v[1] * SY + v[2] * SZ) / 2


def product(bloch: Sequence[Sequence[float]]) -> DensityMatrix:
    """Product of pure qubit states; a single vector gives a one-qubit state."""
    n = len(bloch)
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"product takes 1..{MAX_QUBITS} Bloch vectors, got {n}")
    return DensityMatrix((2,) * n, kron_all(bloch_state(v) for v in bloch))


def classical_corr() -> DensityMatrix:
    """Equal mixture of |00> and |11>: perfectly correlated in z only."""
    return DensityMatrix((2, 2), np.diag([0.5, 0, 0, 0.5]).astype(complex))


def random_pure(n: int, seed: int) -> DensityMatrix:
    n = _check_n(n)
    psi = haar_random_unitary(2**n, seed)[:, 0]
    return pure_state(psi)


def random_mixed(n: int, seed: int, rank: int | None = None) -> DensityMatrix:
    """Random mixed state: partial trace of a Haar pure state with an ancilla.

    Used by the property batteries; not part of the mini-language.
    """
    n = _check_n(n)
    d = 2**n
    rank = d if rank is None else rank
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix((2,) * n, m / np.trace(m).real)


def _float(tok: str) -> float:
    try:
        return float(tok)
    except ValueError as exc:
        raise DomainError(f"expected a number, got {tok!r}") from exc


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise DomainError(f"expected an integer, got {tok!r}") from exc


def _product_from_tokens(toks: list[str]) -> DensityMatrix:
    # each token is either a Bloch-axis letter (z, -z, x, ...) or a polar angle
    # in the x-z plane
    axes = {"z": (0, 0, 1), "x": (1, 0, 0), "y": (0, 1, 0)}
    vecs = []
    for t in toks:
        sign = -1 if t.startswith("-") else 1
        key = t.lstrip("+-")
        if key in axes:
            vecs.append(tuple(sign * c for c in axes[key]))
        else:
            a = _float(t)
            vecs.append((np.sin(a), 0.0, np.cos(a)))
    return product(vecs)


# name -> (allowed arities, constructor from string params)
_GRAMMAR: dict[str, tuple[set[int] | None, Callable[[list[str]], DensityMatrix]]] = {
    "bell": ({0}, lambda p: bell()),
    "singlet": ({0}, lambda p: singlet()),
    "werner": ({1}, lambda p: werner(_float(p[0]))),
    "ghz": ({1}, lambda p: ghz(_int(p[0]))),
    "wstate": ({1}, lambda p: wstate(_int(p[0]))),
    "product": (None, _product_from_tokens),
    "classical-corr": ({0}, lambda p: classical_corr()),
    "random-pure": ({2}, lambda p: random_pure(_int(p[0]), _int(p[1]))),
}


def parse_state_spec(text: str) -> DensityMatrix:
    """Build a state from ``name[:param[:param...]]`` or ``file:<path>``.

    >>> parse_state_spec("werner:0.5").dims
    (2, 2)
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    if name == "file":
        if not rest:
            raise ArityError("file: needs a path")
        return DensityMatrix.load(rest)
    params = rest.split(":") if rest else []
    if name not in _GRAMMAR:
        raise UnknownStateError(f"unknown state {name!r}; known: file, {', '.join(_GRAMMAR)}")
    arities, build = _GRAMMAR[name]
    if arities is None:
        if not 1 <= len(params) <= MAX_QUBITS:
            raise ArityError(f"{name} takes 1..{MAX_QUBITS} parameters, got {len(params)}")
    elif len(params) not in arities:
        raise ArityError(f"{name} takes {sorted(arities)} parameters, got {len(params)}")
    return build(params)
