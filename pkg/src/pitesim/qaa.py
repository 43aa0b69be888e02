"""Amplitude amplification wrapped around the multi-step PITE block.

The good subspace is "all K step ancillas in |0>", independent of the system
register.  One amplification round is Q(phi1, phi2) = -U_REF S0^(n+K)(phi1)
U_REF^dag S_chi(phi2) with S0^(q)(phi) = e^{i phi |0><0|^q} and
S_chi = I x S0^(K); U_REF maps |0>^(n+K) to the pre-measurement PITE state.
With phi = +-pi both reflections are exact, the dynamics is a rotation in
the good/bad plane, and the good amplitude after m rounds is
sin((2m+1) arcsin sqrt(P_K)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import DepthParams, depth_pite_qaa
from .pite import TauSchedule, _embedding_dense, run_pite, step_params
from .spinchain import Spectrum
from .statevector import (
    Circuit,
    GateOp,
    StateVector,
    adjoint_op,
    apply_gate,
    basis_state,
    mcphase,
    post_select_zero,
    single,
)

_FLOOR_ATOL = 1e-9


@dataclass(frozen=True)
class QaaConfig:
    """Rounds and rotation phases; default phases are all +pi."""

    m: int
    phases: tuple[tuple[float, float], ...] | None = None
    branch: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if self.phases is not None and len(self.phases) != self.m:
            raise ValueError("need one (phi_s0, phi_schi) pair per round")

    def round_phases(self) -> tuple[tuple[float, float], ...]:
        if self.phases is not None:
            return self.phases
        return ((math.pi, math.pi),) * self.m


@dataclass(frozen=True)
class GoodStateGeometry:
    """Good amplitude a = sqrt(P_K), its angle, and the optimal round count."""

    amplitude: float
    theta_a: float
    m_star: int


def optimal_repetitions(P_K: float, branch: int = 0) -> int:
    """m* = floor((2n+1) pi / (4 arcsin sqrt(P_K)))."""
    if not 0.0 < P_K <= 1.0:
        raise ValueError("P_K must lie in (0, 1]")
    theta = math.asin(math.sqrt(P_K))
    return int(math.floor((2 * branch + 1) * math.pi / (4.0 * theta) + _FLOOR_ATOL))


def good_state_geometry(P_K: float, branch: int = 0) -> GoodStateGeometry:
    a = math.sqrt(P_K)
    return GoodStateGeometry(amplitude=a, theta_a=math.asin(a), m_star=optimal_repetitions(P_K, branch))


def amplified_probability(P_K: float, m: int) -> float:
    """sin^2((2m+1) arcsin sqrt(P_K)), the closed-form good probability."""
    return math.sin((2 * m + 1) * math.asin(math.sqrt(P_K))) ** 2


def probability_maximizing_m(P_K: float, branch: int = 0) -> int:
    """The floor in m* can undershoot; pick the best m in [m*-1, m*+1]."""
    m_star = optimal_repetitions(P_K, branch)
    candidates = sorted({max(0, m_star - 1), m_star, m_star + 1})
    return max(candidates, key=lambda m: amplified_probability(P_K, m))


def completion_unitary(psi: np.ndarray) -> np.ndarray:
    """Deterministic unitary whose first column is exactly psi."""
    psi = np.asarray(psi, dtype=complex)
    dim = psi.size
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("initializer column must be normalized")
    basis = np.zeros((dim, dim), dtype=complex)
    basis[:, 0] = psi
    anchor = int(np.argmax(np.abs(psi)))
    col = 1
    for j in range(dim):
        if j != anchor:
            basis[j, col] = 1.0
            col += 1
    q, _ = np.linalg.qr(basis)
    # qr fixes column phases arbitrarily; realign the first column to psi
    align = np.vdot(q[:, 0], psi)
    q[:, 0] *= align / abs(align)
    if np.max(np.abs(q[:, 0] - psi)) > 1e-9:
        raise RuntimeError("completion failed to reproduce the input column")
    return q


class ExactQOperator:
    """Dense-free Q application for exact-step PITE blocks.

    Holds the initializer and the per-step 2^(n+1) embeddings; U_REF applies
    the initializer on the system register followed by step k's embedding on
    (system, ancilla n+k).
    """

    def __init__(self, u_ref: np.ndarray, step_mats: list[np.ndarray], num_system_qubits: int):
        self.u_ref = u_ref
        self.step_mats = step_mats
        self.n = num_system_qubits
        self.steps = len(step_mats)
        self.num_qubits = self.n + self.steps

    def _step_op(self, k: int, adjoint: bool) -> GateOp:
        mat = self.step_mats[k]
        if adjoint:
            mat = mat.conj().T
        targets = tuple(range(self.n)) + (self.n + k,)
        return GateOp(kind="dense", targets=targets, controls=(), matrix=mat, label="U_k")

    def _uref_op(self, adjoint: bool) -> GateOp:
        mat = self.u_ref.conj().T if adjoint else self.u_ref
        return GateOp(kind="dense", targets=tuple(range(self.n)), controls=(), matrix=mat, label="Uref")

    def apply_u_ref(self, state: StateVector, adjoint: bool = False) -> StateVector:
        if adjoint:
            ops = [self._step_op(k, True) for k in reversed(range(self.steps))] + [self._uref_op(True)]
        else:
            ops = [self._uref_op(False)] + [self._step_op(k, False) for k in range(self.steps)]
        for op in ops:
            state = apply_gate(state, op)
        return state

    def _phase_all_zero(self, state: StateVector, qubits: tuple[int, ...], phi: float) -> StateVector:
        idx = np.arange(2**state.num_qubits)
        mask = np.ones(idx.shape, dtype=bool)
        for q in qubits:
            mask &= ((idx >> q) & 1) == 0
        amps = state.amplitudes.copy()
        amps[mask] *= np.exp(1j * phi)
        return StateVector(state.num_qubits, amps)

    def apply_Q(self, state: StateVector, phi_s0: float = math.pi, phi_schi: float = math.pi) -> StateVector:
        ancillas = tuple(range(self.n, self.num_qubits))
        state = self._phase_all_zero(state, ancillas, phi_schi)
        state = self.apply_u_ref(state, adjoint=True)
        state = self._phase_all_zero(state, tuple(range(self.num_qubits)), phi_s0)
        state = self.apply_u_ref(state, adjoint=False)
        return StateVector(state.num_qubits, -state.amplitudes)

    def prepared_state(self) -> StateVector:
        return self.apply_u_ref(basis_state(self.num_qubits))

    def dense_Q(self, phi_s0: float = math.pi, phi_schi: float = math.pi, max_qubits: int = 10) -> np.ndarray:
        if self.num_qubits > max_qubits:
            raise ValueError("dense Q requested on too many qubits")
        dim = 2**self.num_qubits
        cols = []
        for j in range(dim):
            e = np.zeros(dim, dtype=complex)
            e[j] = 1.0
            cols.append(self.apply_Q(StateVector(self.num_qubits, e), phi_s0, phi_schi).amplitudes)
        return np.stack(cols, axis=1)


def build_Q(
    u_ref: np.ndarray,
    step_mats_or_circuits,
    num_system_qubits: int,
    mode: str = "exact",
    phases: tuple[float, float] = (math.pi, math.pi),
) -> "ExactQOperator | Circuit":
    """Q as a composable operator.

    exact mode returns an ExactQOperator over the given per-step dense
    embeddings.  circuit mode expects per-step Circuits on n+K qubits (fresh
    ancillas) and returns one flat Circuit for a single Q round, with both
    reflections compiled as multi-controlled phases and the overall -1 kept
    as an explicit global-phase gate.
    """
    steps = len(step_mats_or_circuits)
    total = num_system_qubits + steps
    if mode == "exact":
        return ExactQOperator(u_ref, list(step_mats_or_circuits), num_system_qubits)
    if mode != "circuit":
        raise ValueError(f"unknown mode {mode!r}")
    phi_s0, phi_schi = phases
    ancillas = tuple(range(num_system_qubits, total))
    circ = Circuit(total)
    circ.append(mcphase(tuple((q, 0) for q in ancillas), phi_schi, label="S_chi"))
    for step in reversed(step_mats_or_circuits):
        for op in reversed(step.ops):
            circ.append(adjoint_op(op))
    circ.append(_dense_op(u_ref, num_system_qubits, adjoint=True))
    circ.append(mcphase(tuple((q, 0) for q in range(total)), phi_s0, label="S_0"))
    circ.append(_dense_op(u_ref, num_system_qubits, adjoint=False))
    for step in step_mats_or_circuits:
        circ.extend(step.ops)
    circ.append(single(-np.eye(2, dtype=complex), 0, label="GLOBAL"))
    return circ


def _dense_op(u_ref: np.ndarray, n: int, adjoint: bool) -> GateOp:
    mat = u_ref.conj().T if adjoint else u_ref
    return GateOp(kind="dense", targets=tuple(range(n)), controls=(), matrix=mat, label="Uref")


@dataclass(frozen=True)
class QaaRunResult:
    """Multi-step PITE with amplification, post-selected on all ancillas."""

    P_before: float
    m_star: int
    m_used: int
    P_after: float
    delta_post: float
    depth_formula: int
    final_state: StateVector
    geometry: GoodStateGeometry


def run_multistep_pite_qaa(
    initial: StateVector,
    spectrum: Spectrum,
    schedule: TauSchedule,
    gammas: float | tuple[float, ...] = 0.8,
    m: int | None = None,
    branch: int = 0,
    shift: bool = True,
    config: QaaConfig | None = None,
    depth_params: DepthParams | None = None,
) -> QaaRunResult:
    """Prepare the K-step PITE state, amplify m times, post-select.

    m defaults to m*(P_K) with P_K from the exact-step run.  The post-selected
    system state is invariant under amplification; only the success weight
    moves.
    """
    n = initial.num_qubits
    steps = schedule.steps
    if isinstance(gammas, (int, float)):
        gammas = (float(gammas),) * steps

    base = run_pite(initial, spectrum, schedule, gammas, mode="exact-step", shift=shift, branch=None)
    p_before = base.P_K
    geometry = good_state_geometry(p_before, branch)
    if config is not None:
        m = config.m
        rounds = config.round_phases()
    else:
        if m is None:
            m = geometry.m_star
        rounds = ((math.pi, math.pi),) * m

    step_mats = []
    for g, dt in zip(gammas, schedule.values):
        p = step_params(g, dt, spectrum.lambda1)
        fvals = p.f_spec(shift).evaluate(spectrum.eigenvalues)
        step_mats.append(_embedding_dense(fvals, spectrum))
    qop = ExactQOperator(completion_unitary(initial.amplitudes), step_mats, n)

    state = qop.prepared_state()
    for phi_s0, phi_schi in rounds:
        state = qop.apply_Q(state, phi_s0, phi_schi)
    final, p_after = post_select_zero(state, tuple(range(n, n + steps)))

    gs = spectrum.eigenvectors[:, 0]
    delta_post = float(max(0.0, 1.0 - abs(np.vdot(gs, final.amplitudes)) ** 2))
    params = depth_params if depth_params is not None else DepthParams(d_crte=1)
    return QaaRunResult(
        P_before=p_before,
        m_star=geometry.m_star,
        m_used=m,
        P_after=p_after,
        delta_post=delta_post,
        depth_formula=depth_pite_qaa(m, steps, n, params),
        final_state=final,
        geometry=geometry,
    )
