"""Heisenberg spin chains with seeded random longitudinal fields.

H = sum over bonds of sigma_i . sigma_j  +  sum over sites of h_j sigma^z_j,
with h_j drawn from a counter-based splitmix64 stream mapped to [-1, 1).
Sites are 0-based and map directly onto qubits (site j = qubit j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevector import ID2, PAULI_X, PAULI_Y, PAULI_Z, StateVector, _apply_matrix
from .trotter import TwoQubitTerm

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

DENSE_QUBIT_LIMIT = 14
DEGENERACY_ATOL = 1e-9


def splitmix64(seed: int, counter: int) -> int:
    """Counter-based splitmix64 draw: finalizer applied to seed + (counter+1)*golden."""
    z = (seed + (counter + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64

def uniform_pm1(seed: int, counter: int) -> float:
    """Uniform draw in [-1, 1): top 53 bits divided as a mantissa, then affine map."""
    u = (splitmix64(seed, counter) >> 11) / float(1 << 53)
    return 2.0 * u - 1.0


@dataclass(frozen=True)
class HeisenbergChain:
    n: int
    periodic: bool
    seed: int
    fields: np.ndarray          # h_j per site, shape (n,)
    edges: tuple[tuple[int, int], ...]


def build_chain(n: int, periodic: bool, seed: int) -> HeisenbergChain:
    if n < 2:
        raise ValueError("chain needs at least 2 sites")
    edges = [(j, j + 1) for j in range(n - 1)]
    if periodic and n >= 3:
        edges.append((n - 1, 0))
    fields = np.array([uniform_pm1(seed, j) for j in range(n)])
    return HeisenbergChain(n, periodic, seed, fields, tuple(edges))


_SWAP_PLUS = sum(np.kron(p, p) for p in (PAULI_X, PAULI_Y, PAULI_Z))  # sigma.sigma on a pair
_Z_LOW = np.kron(ID2, PAULI_Z)    # Z on sites[0] of a term
_Z_HIGH = np.kron(PAULI_Z, ID2)   # Z on sites[1]


def hamiltonian_dense(chain: HeisenbergChain) -> np.ndarray:
    if chain.n > DENSE_QUBIT_LIMIT:
        raise ValueError(f"dense Hamiltonian limited to {DENSE_QUBIT_LIMIT} sites")
    dim = 2**chain.n
    h = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for i, j in chain.edges:
        h += _apply_matrix(eye, _SWAP_PLUS, (i, j), chain.n)
    for j, hz in enumerate(chain.fields):
        h += hz * _apply_matrix(eye, PAULI_Z, (j,), chain.n)
    return h


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray     # ascending
    eigenvectors: np.ndarray    # columns, matching order
    gap_min: float
    degenerate: bool

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def ground_gap(self) -> float:
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    @property
    def ground_degenerate(self) -> bool:
        return self.ground_gap < DEGENERACY_ATOL

    def ground_state(self) -> StateVector:
        n = int(round(math.log2(self.eigenvectors.shape[0])))
        return StateVector(n, self.eigenvectors[:, 0].astype(complex))

    def function_dense(self, f) -> np.ndarray:
        """f(H) = V f(lambda) V^dagger for a scalar (possibly complex) function f."""
        vals = np.array([f(lam) for lam in self.eigenvalues], dtype=complex)
        return (self.eigenvectors * vals) @ self.eigenvectors.conj().T


def diagonalize(chain: HeisenbergChain) -> Spectrum:
    h = hamiltonian_dense(chain)
    evals, vecs = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(evals))))
    residual = np.max(np.abs(h @ vecs - vecs * evals))
    if residual > 1e-9 * scale:
        raise RuntimeError(f"eigendecomposition residual too large: {residual:.3e}")
    gaps = np.diff(evals)
    gap_min = float(gaps.min()) if gaps.size else math.inf
    return Spectrum(evals, vecs.astype(complex), gap_min, bool(gap_min < DEGENERACY_ATOL))


def even_odd_split(chain: HeisenbergChain) -> tuple[list[TwoQubitTerm], list[TwoQubitTerm]]:
    """Two commuting-layer groups with each field term owned by one bond.

    Group 1 holds bonds (0,1), (2,3), ...; group 2 holds (1,2), (3,4), ... and,
    for periodic even n, the boundary bond (n-1, 0).  Field h_j rides on the
    lowest-index bond touching site j.  The group sum reproduces H exactly.
    """
    n = chain.n
    if chain.periodic and n % 2 and n >= 3:
        raise ValueError("even/odd split needs an even site count on periodic chains")
    groups: tuple[list[TwoQubitTerm], list[TwoQubitTerm]] = ([], [])
    for i, j in chain.edges:
        if (i, j) == (n - 1, 0):
            gen = _SWAP_PLUS.copy()
            groups[1].append(TwoQubitTerm((i, j), gen))
            continue
        gen = _SWAP_PLUS + chain.fields[j] * _Z_HIGH
        if i == 0:
            gen = gen + chain.fields[0] * _Z_LOW
        groups[i % 2].append(TwoQubitTerm((i, j), gen))
    for terms in groups:
        seen: set[int] = set()
        for term in terms:
            if seen & set(term.sites):
                raise RuntimeError("split produced overlapping supports within a group")
            seen |= set(term.sites)
    return groups[0], groups[1]


def group_dense(terms: list[TwoQubitTerm], n: int) -> np.ndarray:
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for term in terms:
        h += _apply_matrix(eye, term.generator, term.sites, n)
    return h


def prepare_initial_state(
    spectrum: Spectrum,
    kind: str = "uniform",
    sigma: float | None = None,
    weights: np.ndarray | None = None,
) -> tuple[StateVector, np.ndarray]:
    """State sum_i c_i |lambda_i> plus its eigenbasis weight vector c.

    kinds: 'uniform' (equal weights), 'gaussian' (c_i ~ exp(-(lam_i-lam_1)^2 /
    (2 sigma^2))), 'explicit' (weights given, must be unit norm).
    """
    nvals = spectrum.eigenvalues.size
    if kind == "uniform":
        c = np.full(nvals, 1.0 / math.sqrt(nvals), dtype=complex)
    elif kind == "gaussian":
        if sigma is None or sigma <= 0:
            raise ValueError("gaussian weights need sigma > 0")
        shifted = spectrum.eigenvalues - spectrum.eigenvalues[0]
        c = np.exp(-(shifted**2) / (2.0 * sigma**2)).astype(complex)
        c /= np.linalg.norm(c)
    elif kind == "explicit":
        if weights is None:
            raise ValueError("explicit weights not provided")
        c = np.asarray(weights, dtype=complex).ravel()
        if c.size != nvals:
            raise ValueError("weight vector length must match the spectrum")
        if abs(np.linalg.norm(c) - 1.0) > 1e-9:
            raise ValueError("explicit weight vector must have unit norm")
    else:
        raise ValueError(f"unknown initial-state kind: {kind}")
    amps = spectrum.eigenvectors @ c
    n = int(round(math.log2(amps.size)))
    return StateVector(n, amps.astype(complex)), c
