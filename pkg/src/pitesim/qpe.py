"""Textbook phase estimation as the comparison baseline.

K ancillas are prepared with Hadamards, ancilla j controls 2^j applications of
U = e^{2 pi i (H - offset) t0 / T}, and an inverse QFT turns the accumulated
phases into a binary register.  The amplitude landing on outcome k from
eigenstate i is the geometric sum

    alpha_ik = (1/T) sum_tau e^{2 pi i tau (lambda_i t0 - k) / T}

with lambda pre-shifted by the offset.  The offset is chosen so the ground
phase sits exactly at k = 0 and every eigenphase lies in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spinchain import Spectrum
from .statevector import (
    HADAMARD,
    Circuit,
    GateOp,
    PostSelectionError,
    StateVector,
    adjoint_op,
    cnot,
    controlled_two,
    mcphase,
    phase_gate,
    single,
)
from .trotter import TrotterPlan, TwoQubitTerm, suzuki_stages, term_unitary

_SINGULARITY_ATOL = 1e-12
_DEGENERACY_ATOL = 1e-12


def alpha(lam: float, t0: float, k: int, T: int) -> complex:
    """Closed form of the outcome amplitude; exactly 1 on resonance."""
    if T < 1:
        raise ValueError("T must be >= 1")
    delta = (lam * t0 - k) / T
    if abs(delta - round(delta)) < _SINGULARITY_ATOL:
        return complex(1.0)
    num = 1.0 - np.exp(2j * math.pi * (lam * t0 - k))
    den = 1.0 - np.exp(2j * math.pi * delta)
    return complex(num / den / T)


def alpha_matrix(lams: np.ndarray, t0: float, T: int) -> np.ndarray:
    """alpha_ik for every eigenvalue and every outcome, shape (len(lams), T)."""
    lams = np.asarray(lams, dtype=float)
    delta = (lams[:, None] * t0 - np.arange(T)[None, :]) / T
    on_res = np.abs(delta - np.round(delta)) < _SINGULARITY_ATOL
    den = 1.0 - np.exp(2j * math.pi * np.where(on_res, 0.25, delta))
    num = 1.0 - np.exp(2j * math.pi * delta * T)
    return np.where(on_res, 1.0, num / den / T)


@dataclass(frozen=True)
class QpeConfig:
    """Register size, time scaling, and spectrum shift."""

    ancillas: int
    t0: float
    offset: float
    scale_bits: int
    r: int = 4

    def __post_init__(self):
        if self.ancillas < 1:
            raise ValueError("need at least one ancilla")
        if self.r < 1:
            raise ValueError("r must be >= 1")

    @property
    def T(self) -> int:
        return 2**self.ancillas


def configure_qpe(spectrum: Spectrum, ancillas: int, r: int = 4) -> QpeConfig:
    """Auto scaling: t0 = 2^(K - N_C) with N_C just large enough that
    (lambda_N - lambda_1) / 2^N_C < 1, so all shifted eigenphases fit in [0, 1)."""
    span = spectrum.lambda_max - spectrum.lambda1
    if span <= 0.0:
        raise ValueError("spectrum has no range")
    scale_bits = int(math.floor(math.log2(span))) + 1
    cfg = QpeConfig(ancillas, 2.0 ** (ancillas - scale_bits), spectrum.lambda1, scale_bits, r)
    phases = (spectrum.eigenvalues - cfg.offset) * cfg.t0 / cfg.T
    if phases.min() < 0.0 or phases.max() >= 1.0:
        raise RuntimeError("auto-configured eigenphases left [0, 1)")
    return cfg


@dataclass(frozen=True)
class QpeOutcome:
    """Post-selected result at the ground-energy register value."""

    selected_k: int
    alphas: np.ndarray           # alpha_ik at the selected k, one entry per eigenvalue
    P_k: float
    delta: float
    delta_phase: float           # wrapped distance from k/T to the nearest excited phase
    distribution: np.ndarray     # P(k) over all T outcomes
    post_state: StateVector
    config: QpeConfig


def ground_register_value(spectrum: Spectrum, config: QpeConfig) -> int:
    """Nearest integer to (lambda_1 - offset) t0, ties rounding down, mod T."""
    x = (spectrum.lambda1 - config.offset) * config.t0
    return int(math.ceil(x - 0.5)) % config.T


def qft_ops(qubits: tuple[int, ...], inverse: bool = False) -> list[GateOp]:
    """Gate-level QFT on the given register, bit j of the value on qubits[j].

    H plus controlled phases from the high bit down, then a bit-reversal swap
    layer; the inverse reverses the adjointed list.
    """
    ops: list[GateOp] = []
    K = len(qubits)
    for j in reversed(range(K)):
        ops.append(single(HADAMARD, qubits[j], "H"))
        for l in range(j):
            ops.append(mcphase(((qubits[l], 1), (qubits[j], 1)), math.pi / 2 ** (j - l), "CP"))
    for i in range(K // 2):
        a, b = qubits[i], qubits[K - 1 - i]
        ops.extend([cnot(a, b), cnot(b, a), cnot(a, b)])
    if inverse:
        ops = [adjoint_op(op) for op in reversed(ops)]
    return ops


def _controlled_evolution_exact(spectrum: Spectrum, config: QpeConfig, n: int) -> list[GateOp]:
    ops = []
    shifted = spectrum.eigenvalues - config.offset
    for j in range(config.ancillas):
        power = 2**j
        u = spectrum.function_dense(lambda lams: np.exp(2j * math.pi * shifted * config.t0 * power / config.T))
        ops.append(GateOp("dense", tuple(range(n)), ((n + j, 1),), u, 0.0, f"CU^{power}"))
    return ops


def _controlled_evolution_trotter(
    h1_terms: list[TwoQubitTerm],
    h2_terms: list[TwoQubitTerm],
    config: QpeConfig,
    n: int,
    order: int,
) -> tuple[list[GateOp], int]:
    """2^j repetitions of the r-fold Suzuki step for U, every gate controlled
    on ancilla j; the offset becomes a plain phase gate on the ancilla.
    Returns the ops and the emitted CRTE block count (one block per Suzuki
    sub-step), which must come out to (2^K - 1) r."""
    groups = {1: h1_terms, 2: h2_terms}
    t_app = 2.0 * math.pi * config.t0 / config.T
    stages = suzuki_stages(order)
    offset_phi = -2.0 * math.pi * config.offset * config.t0 / config.T
    ops: list[GateOp] = []
    blocks = 0
    for j in range(config.ancillas):
        control = n + j
        for _ in range(2**j):
            ops.append(single(phase_gate(offset_phi), control, "OFFSET"))
            for _ in range(config.r):
                blocks += 1
                for g, c in stages:
                    dt = c * t_app / config.r
                    for term in groups[g]:
                        ops.append(controlled_two(term_unitary(term, dt), term.sites, control, label=f"CRTE{g}"))
    return ops, blocks


def qpe_circuit(
    spectrum: Spectrum,
    config: QpeConfig,
    num_system_qubits: int,
    mode: str = "exact-unitary",
    order: int = 4,
    h1_terms: list[TwoQubitTerm] | None = None,
    h2_terms: list[TwoQubitTerm] | None = None,
) -> Circuit:
    n, K = num_system_qubits, config.ancillas
    circ = Circuit(n + K)
    for j in range(K):
        circ.append(single(HADAMARD, n + j, "H"))
    blocks = 0
    if mode == "exact-unitary":
        circ.extend(_controlled_evolution_exact(spectrum, config, n))
    elif mode == "trotter":
        if h1_terms is None or h2_terms is None:
            raise ValueError("trotter mode needs the two commuting term groups")
        TrotterPlan(order, config.r)  # validates order/r
        ops, blocks = _controlled_evolution_trotter(h1_terms, h2_terms, config, n, order)
        circ.extend(ops)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    circ.extend(qft_ops(tuple(range(n, n + K)), inverse=True))
    circ.metadata.update(
        mode=mode,
        order=None if mode == "exact-unitary" else order,
        crte_blocks=blocks,
        cu_applications=config.T - 1,
        t0=config.t0,
        offset=config.offset,
    )
    return circ


def qpe_run(
    initial: StateVector,
    spectrum: Spectrum,
    config: QpeConfig,
    mode: str = "exact-unitary",
    order: int = 4,
    h1_terms: list[TwoQubitTerm] | None = None,
    h2_terms: list[TwoQubitTerm] | None = None,
) -> QpeOutcome:
    """Simulate the register, post-select the ground-energy outcome."""
    n = initial.num_qubits
    K, T = config.ancillas, config.T
    circ = qpe_circuit(spectrum, config, n, mode, order, h1_terms, h2_terms)
    amps = np.zeros(2 ** (n + K), dtype=complex)
    amps[: 2**n] = initial.amplitudes
    final = circ.apply(StateVector(n + K, amps))

    rows = final.amplitudes.reshape(T, 2**n)
    distribution = np.sum(np.abs(rows) ** 2, axis=1)
    k_sel = ground_register_value(spectrum, config)
    p_k = float(distribution[k_sel])
    if p_k < 1e-300:
        raise PostSelectionError(f"outcome k={k_sel} has zero probability")
    post = StateVector(n, rows[k_sel] / math.sqrt(p_k))

    gs = spectrum.eigenvectors[:, 0]
    delta = float(max(0.0, 1.0 - abs(np.vdot(gs, post.amplitudes)) ** 2))

    shifted = spectrum.eigenvalues - config.offset
    phases = shifted * config.t0 / T
    excited = phases[spectrum.eigenvalues - spectrum.lambda1 > _DEGENERACY_ATOL]
    if excited.size:
        d = np.abs(excited - k_sel / T) % 1.0
        delta_phase = float(np.minimum(d, 1.0 - d).min())
    else:
        delta_phase = math.inf
    return QpeOutcome(
        selected_k=k_sel,
        alphas=alpha_matrix(shifted, config.t0, T)[:, k_sel],
        P_k=p_k,
        delta=delta,
        delta_phase=delta_phase,
        distribution=distribution,
        post_state=post,
        config=config,
    )


def analytic_distribution(coeffs: np.ndarray, spectrum: Spectrum, config: QpeConfig) -> np.ndarray:
    """P(k) = sum_i |c_i|^2 |alpha_ik|^2 from the closed form."""
    a = alpha_matrix(spectrum.eigenvalues - config.offset, config.t0, config.T)
    return (np.abs(coeffs)[:, None] ** 2 * np.abs(a) ** 2).sum(axis=0)


def infidelity_bound(c1_abs: float, T: int, delta_phase: float) -> float:
    """delta <= (pi / (4 |c1| T Delta))^2 for the post-selected outcome."""
    if c1_abs <= 0.0 or T < 1 or delta_phase <= 0.0:
        raise ValueError("bound needs positive |c1|, T, Delta")
    return (math.pi / (4.0 * c1_abs * T * delta_phase)) ** 2


def ancillas_for_target(c1_abs: float, delta_target: float, delta_phase: float) -> int:
    """Smallest K with infidelity_bound <= delta_target, i.e.
    2^K >= pi / (4 |c1| Delta sqrt(delta))."""
    if delta_target <= 0.0:
        raise ValueError("delta_target must be positive")
    t_needed = math.pi / (4.0 * c1_abs * delta_phase * math.sqrt(delta_target))
    return max(1, int(math.ceil(math.log2(t_needed))))
