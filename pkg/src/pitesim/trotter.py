"""Suzuki product formulas over two-qubit interaction groups.

Sequences target e^{+i t H}; callers pass negative t for forward time
evolution e^{-i t H}.  Group 1 / group 2 are the even/odd bond layers of the
chain; within a group all terms act on disjoint qubit pairs and commute, so a
stage is emitted as one parallel layer of two-qubit gates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevector import Circuit, two_qubit

ATOL_HERMITIAN = 1e-10


@dataclass(frozen=True)
class TwoQubitTerm:
    """Hermitian 4x4 generator attached to an ordered site pair.

    Bit 0 of the generator's index acts on sites[0], bit 1 on sites[1].
    """

    sites: tuple[int, int]
    generator: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=complex)
        if g.shape != (4, 4):
            raise ValueError("two-qubit generator must be 4x4")
        if np.max(np.abs(g - g.conj().T)) > ATOL_HERMITIAN:
            raise ValueError("two-qubit generator must be Hermitian")
        object.__setattr__(self, "generator", g)


def term_unitary(term: TwoQubitTerm, t: float) -> np.ndarray:
    """exp(i t G) for the term's generator, via eigendecomposition."""
    evals, vecs = np.linalg.eigh(term.generator)
    return (vecs * np.exp(1j * t * evals)) @ vecs.conj().T


@dataclass(frozen=True)
class TrotterPlan:
    """Product-formula order (1 or even) and r-fold time subdivision."""

    order: int
    r: int = 1

    def __post_init__(self):
        if self.order != 1 and (self.order < 2 or self.order % 2):
            raise ValueError("order must be 1 or an even integer")
        if self.r < 1:
            raise ValueError("r must be >= 1")


def _recursion_u(k: int) -> float:
    # u_k = 1 / (4 - 4^(1/(2k-1))) for the order-2k <- order-(2k-2) recursion
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def suzuki_stages(order: int) -> list[tuple[int, float]]:
    """(group, coefficient) stages of one S_order(t) block, in application order.

    Coefficients are in units of t.  Order 1 applies e^{itH2} then e^{itH1};
    order 2 is the symmetric splitting; order 2k uses the five-block
    recursion S_{2k}(t) = S_{2k-2}(u_k t)^2 S_{2k-2}((1-4u_k)t) S_{2k-2}(u_k t)^2.
    """
    if order == 1:
        return [(2, 1.0), (1, 1.0)]
    if order == 2:
        return [(1, 0.5), (2, 1.0), (1, 0.5)]
    if order < 2 or order % 2:
        raise ValueError("order must be 1 or an even integer")
    inner = suzuki_stages(order - 2)
    u = _recursion_u(order // 2)
    out: list[tuple[int, float]] = []
    for scale in (u, u, 1.0 - 4.0 * u, u, u):
        out.extend((g, c * scale) for g, c in inner)
    return out


def merge_stages(stages: list[tuple[int, float]]) -> list[tuple[int, float]]:
    """Fuse adjacent stages of the same group (exact: equal generators commute)."""
    merged: list[tuple[int, float]] = []
    for g, c in stages:
        if merged and merged[-1][0] == g:
            merged[-1] = (g, merged[-1][1] + c)
        else:
            merged.append((g, c))
    return merged


def suzuki_sequence(
    plan: TrotterPlan,
    h1_terms: list[TwoQubitTerm],
    h2_terms: list[TwoQubitTerm],
    t: float,
    num_qubits: int,
    merge: bool = True,
) -> Circuit:
    """Circuit for S_order(t/r)^r approximating e^{i t (H1+H2)}.

    metadata records both the pre-merge and the merged stage counts; the
    pre-merge count is what the five-block depth recursion predicts.
    """
    groups = {1: h1_terms, 2: h2_terms}
    base = suzuki_stages(plan.order)
    stages = base * plan.r
    premerge = len(stages)
    if merge:
        stages = merge_stages(stages)
    circ = Circuit(num_qubits)
    dt = t / plan.r
    for g, c in stages:
        for term in groups[g]:
            circ.append(two_qubit(term_unitary(term, c * dt), term.sites, label=f"RTE{g}"))
    circ.metadata.update(
        order=plan.order,
        r=plan.r,
        t=t,
        premerge_stage_count=premerge,
        merged_stage_count=len(stages),
    )
    return circ


def trotter_number(t: float, eps: float, order: int, comm_norm: float) -> int:
    """Subdivision count r = ceil(comm^(1/p) * t^(1+1/p) / eps^(1/p)), at least 1."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t < 0:
        t = -t
    if comm_norm < 0:
        raise ValueError("comm_norm must be nonnegative")
    p = float(order)
    r = math.ceil(comm_norm ** (1.0 / p) * t ** (1.0 + 1.0 / p) / eps ** (1.0 / p))
    return max(1, r)


def commutator_norm(h1: np.ndarray, h2: np.ndarray, order: int) -> float:
    """Max spectral norm of (order+1)-fold nested commutators over group assignments.

    ||[H_{g_{p+1}}, [... [H_{g_2}, H_{g_1}] ...]]|| maximized over g in {1,2}^{p+1};
    assignments with g_1 == g_2 vanish and are skipped.
    """
    mats = {1: np.asarray(h1, dtype=complex), 2: np.asarray(h2, dtype=complex)}
    depth = order + 1
    best = 0.0

    def walk(current: np.ndarray, level: int):
        nonlocal best
        if level == depth:
            best = max(best, float(np.linalg.norm(current, 2)))
            return
        for g in (1, 2):
            m = mats[g]
            walk(m @ current - current @ m, level + 1)

    for g1 in (1, 2):
        for g2 in (1, 2):
            if g1 == g2:
                continue
            walk(mats[g2] @ mats[g1] - mats[g1] @ mats[g2], 2)
    return best
