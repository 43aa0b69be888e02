"""Probabilistic imaginary-time evolution on a block-encoded Hamiltonian.

A nonunitary Hermitian f(H) with |f| <= 1 embeds in the unitary
U = [[f, g], [g, -f]] with g = sqrt(1 - f^2), realized by the ancilla
circuit W, select-exp(-/+ i kappa Theta), Z(-pi/2), W (up to e^{i pi/4}).
The approximate per-step operator is f_k(H) = sin(phi_k - (H - E_k) t_k)
with t_k = dtau_k s_k; the step circuit is W, select-RTE, Z(theta'), W^dag
on one ancilla.  With the energy shift E_k the ground eigenvalue is pinned
to the sine's extremum, so |f_k(lambda_1)| = 1 and the success probability
stops decaying with the step count.

Phase-gate convention: Z(theta) = diag(1, e^{i theta}).  In this convention
the shifted ancilla angle is theta' = pi - 2 phi_k - 2 E_k s_k dtau_k (the
sign of the shift term flips if Z is defined with the conjugate phase).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import pite_query_plan
from .spinchain import Spectrum, group_dense
from .statevector import (
    Circuit,
    GateOp,
    PAULI_X,
    StateVector,
    W_GATE,
    apply_gate,
    from_amplitudes,
    phase_gate,
    post_select_zero,
    single,
)
from .trotter import TrotterPlan, TwoQubitTerm, suzuki_sequence
from .kak import controlled_two_qubit

SINGULARITY_ATOL = 1e-9


@dataclass(frozen=True)
class FunctionSpec:
    """Scalar filter function f(lambda) selecting what the block encodes.

    kind "ite":       f = gamma * exp(-tau * lambda)
    kind "cosine":    f = cos((lambda - energy) * time)
    kind "pite-step": f = sin(phi - (lambda - energy) * dtau * s), the
                      first-order step with phi = arcsin(gamma), s = tan(phi)
    """

    kind: str
    gamma: float = 1.0
    tau: float = 0.0
    energy: float = 0.0
    time: float = 0.0
    dtau: float = 0.0

    def evaluate(self, lams: np.ndarray) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        if self.kind == "ite":
            return self.gamma * np.exp(-self.tau * lams)
        if self.kind == "cosine":
            return np.cos((lams - self.energy) * self.time)
        if self.kind == "pite-step":
            phi = math.asin(self.gamma)
            s = math.tan(phi)
            return np.sin(phi - (lams - self.energy) * self.dtau * s)
        raise ValueError(f"unknown function kind {self.kind!r}")


def ite_spec(gamma: float, tau: float) -> FunctionSpec:
    return FunctionSpec(kind="ite", gamma=gamma, tau=tau)


def cosine_spec(energy: float, time: float) -> FunctionSpec:
    return FunctionSpec(kind="cosine", energy=energy, time=time)


def _embedding_dense(fvals: np.ndarray, spectrum: Spectrum) -> np.ndarray:
    """[[f(H), g(H)], [g(H), -f(H)]] with g = sqrt(1 - f^2); ancilla is the high qubit."""
    gvals = np.sqrt(np.clip(1.0 - fvals**2, 0.0, None))
    fm = spectrum.function_dense(lambda lams: fvals)
    gm = spectrum.function_dense(lambda lams: gvals)
    dim = fm.shape[0]
    out = np.empty((2 * dim, 2 * dim), dtype=complex)
    out[:dim, :dim] = fm
    out[:dim, dim:] = gm
    out[dim:, :dim] = gm
    out[dim:, dim:] = -fm
    return out


@dataclass(frozen=True)
class ExactBlockEncoding:
    """Unitary embedding of f(H) plus its generator data.

    theta is the Hermitian arccos[(f + sqrt(1-f^2))/sqrt(2)]; kappa_sign is
    sgn(||f(H)|| - 1/sqrt(2)).  signed_theta carries the pointwise sign
    sgn(f - sqrt(1-f^2)) so that sin(signed_theta) = (f - sqrt(1-f^2))/sqrt(2)
    on every eigenvalue; it equals kappa_sign * theta whenever f stays on one
    side of 1/sqrt(2) across the spectrum.  embedding is the 2*2^n unitary
    whose ancilla-|0> block is f(H).
    """

    f_spec: FunctionSpec
    theta: np.ndarray
    kappa_sign: int
    signed_theta: np.ndarray
    embedding: np.ndarray
    num_system_qubits: int

    def circuit_form_dense(self) -> np.ndarray:
        """e^{i pi/4} Z(-pi/2) W select-e^{-/+ i kappa Theta} W, densely.

        The select gate applies e^{-i kappa Theta} on the ancilla-|0> branch
        and e^{+i kappa Theta} on the |1> branch; reproduces `embedding`.
        """
        dim = 2**self.num_system_qubits
        evals, vecs = np.linalg.eigh(self.signed_theta)
        expm = lambda sign: (vecs * np.exp(1j * sign * evals)) @ vecs.conj().T
        select = np.zeros((2 * dim, 2 * dim), dtype=complex)
        select[:dim, :dim] = expm(-1)
        select[dim:, dim:] = expm(+1)
        w = np.kron(W_GATE, np.eye(dim))
        zfix = np.kron(phase_gate(-math.pi / 2), np.eye(dim))
        return np.exp(1j * math.pi / 4) * zfix @ w @ select @ w


def exact_block_encoding(f_spec: FunctionSpec, spectrum: Spectrum) -> ExactBlockEncoding:
    fvals = f_spec.evaluate(spectrum.eigenvalues)
    if np.max(np.abs(fvals)) > 1.0 + 1e-12:
        raise ValueError("f(lambda) exceeds 1 in magnitude; not block-encodable")
    fvals = np.clip(fvals, -1.0, 1.0)
    fnorm = float(np.max(np.abs(fvals)))
    if abs(fnorm - 1.0 / math.sqrt(2.0)) < SINGULARITY_ATOL:
        raise ValueError("||f(H)|| at 1/sqrt(2): kappa sign undefined")
    kappa = 1 if fnorm > 1.0 / math.sqrt(2.0) else -1
    gvals = np.sqrt(np.clip(1.0 - fvals**2, 0.0, None))
    theta_vals = np.arccos(np.clip((fvals + gvals) / math.sqrt(2.0), -1.0, 1.0))
    signs = np.where(fvals > gvals, 1.0, -1.0)
    theta = spectrum.function_dense(lambda lams: theta_vals)
    signed_theta = spectrum.function_dense(lambda lams: signs * theta_vals)
    n = int(round(math.log2(spectrum.eigenvalues.size)))
    return ExactBlockEncoding(
        f_spec=f_spec,
        theta=theta,
        kappa_sign=kappa,
        signed_theta=signed_theta,
        embedding=_embedding_dense(fvals, spectrum),
        num_system_qubits=n,
    )


@dataclass(frozen=True)
class PiteStepParams:
    """One first-order PITE step: f_k = sin(phi - (H - E) dtau s)."""

    gamma: float
    dtau: float
    phi: float
    s: float
    a0: float
    a1: float
    energy_shift: float
    branch: int
    theta: float  # ancilla phase-gate half-angle, pi/2 - phi

    def rte_time(self) -> float:
        return self.dtau * self.s

    def phase_angle(self, use_energy_shift: bool = True) -> float:
        out = 2.0 * self.theta
        if use_energy_shift:
            out -= 2.0 * self.energy_shift * self.rte_time()
        return out

    def f_spec(self, use_energy_shift: bool = True) -> FunctionSpec:
        e = self.energy_shift if use_energy_shift else 0.0
        return FunctionSpec(kind="pite-step", gamma=self.gamma, dtau=self.dtau, energy=e)


def step_params(gamma: float, dtau: float, lambda1: float, branch: int | None = None) -> PiteStepParams:
    """Per-step parameters with the ground-pinning energy shift.

    E_k = lambda1 - [arctan(s) - (pi/2)(2n+1)] / (dtau s); the default branch
    n minimizes |E_k|.  With this shift sin(phi - (lambda1 - E_k) dtau s) has
    magnitude exactly 1.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if abs(gamma - 1.0 / math.sqrt(2.0)) < SINGULARITY_ATOL:
        raise ValueError("gamma at 1/sqrt(2) is singular")
    if dtau <= 0.0:
        raise ValueError("dtau must be positive")
    phi = math.asin(gamma)
    s = math.tan(phi)
    kappa = 1 if gamma > 1.0 / math.sqrt(2.0) else -1
    a0 = kappa * math.acos((gamma + math.sqrt(1.0 - gamma**2)) / math.sqrt(2.0))
    t = dtau * s

    def shift_for(n: int) -> float:
        return lambda1 - (math.atan(s) - (math.pi / 2.0) * (2 * n + 1)) / t

    if branch is None:
        n_star = (2.0 / math.pi) * (phi - lambda1 * t)
        candidates = {math.floor((n_star - 1.0) / 2.0) + d for d in (-1, 0, 1, 2)}
        branch = min(candidates, key=lambda n: abs(shift_for(n)))
    return PiteStepParams(
        gamma=gamma,
        dtau=dtau,
        phi=phi,
        s=s,
        a0=a0,
        a1=s,
        energy_shift=shift_for(branch),
        branch=branch,
        theta=math.pi / 2.0 - phi,
    )


@dataclass(frozen=True)
class TauSchedule:
    """Exponential-approach step sizes dtau_1..dtau_K."""

    dtau_min: float
    dtau_max: float
    kappa_bar: float
    steps: int
    values: tuple[float, ...]


def build_tau_schedule(steps: int, dtau_min: float, dtau_max: float, kappa_bar: float = 1.0) -> TauSchedule:
    """dtau_k = (1 - e^{-(k-1)/kappa_sched})(dtau_max - dtau_min) + dtau_min."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0.0 < dtau_min <= dtau_max:
        raise ValueError("need 0 < dtau_min <= dtau_max")
    if kappa_bar <= 0.0:
        raise ValueError("kappa_bar must be positive")
    kappa_sched = kappa_bar * steps
    values = tuple(
        (1.0 - math.exp(-(k - 1) / kappa_sched)) * (dtau_max - dtau_min) + dtau_min
        for k in range(1, steps + 1)
    )
    return TauSchedule(dtau_min=dtau_min, dtau_max=dtau_max, kappa_bar=kappa_bar, steps=steps, values=values)


def schedule_from_spectrum(spectrum: Spectrum, steps: int, gamma: float = 0.8, kappa_bar: float = 1.0) -> TauSchedule:
    """Default bounds from the ground-shifted spectrum.

    dtau_min = pi / (2 s (lambda_N - lambda_1)), dtau_max = pi / (s (lambda_2 - lambda_1)).
    """
    s = math.tan(math.asin(gamma))
    span = spectrum.lambda_max - spectrum.lambda1
    gap = spectrum.lambda2 - spectrum.lambda1
    if span <= 0.0 or gap <= 0.0:
        raise ValueError("spectrum must have positive range and ground gap")
    return build_tau_schedule(steps, math.pi / (2.0 * s * span), math.pi / (s * gap), kappa_bar)


def _select_rte_dense(h_dense: np.ndarray, t: float, system: tuple[int, ...], ancilla: int) -> list[GateOp]:
    """Exact select-RTE: e^{-iHt} on ancilla |0>, e^{+iHt} on |1>."""
    evals, vecs = np.linalg.eigh(h_dense)
    forward = (vecs * np.exp(-1j * t * evals)) @ vecs.conj().T
    backward = (vecs * np.exp(+1j * t * evals)) @ vecs.conj().T
    return [
        GateOp(kind="ctrl-dense", targets=system, controls=((ancilla, 0),), matrix=forward, label="CRTE"),
        GateOp(kind="ctrl-dense", targets=system, controls=((ancilla, 1),), matrix=backward, label="CRTE"),
    ]


def _select_rte_trotter(
    h1_terms: list[TwoQubitTerm],
    h2_terms: list[TwoQubitTerm],
    t: float,
    num_qubits: int,
    ancilla: int,
    trotter: TrotterPlan,
    compile_crte: str,
) -> tuple[list[GateOp], int]:
    """Trotterized select-RTE; returns ops and the two-qubit CRTE gate count."""
    ops: list[GateOp] = []
    crte_count = 0
    for polarity, sign in ((0, -1.0), (1, +1.0)):
        seq = suzuki_sequence(trotter, h1_terms, h2_terms, sign * t, num_qubits)
        if compile_crte == "kak":
            # X-conjugation turns the |0> branch into plain polarity-1 controls
            if polarity == 0:
                ops.append(single(PAULI_X, ancilla, "X"))
            for gate in seq.ops:
                sub = controlled_two_qubit(gate.matrix, gate.targets, ancilla, polarity=1, num_qubits=num_qubits)
                ops.extend(sub.ops)
                crte_count += 1
            if polarity == 0:
                ops.append(single(PAULI_X, ancilla, "X"))
        else:
            from .statevector import controlled_two

            for gate in seq.ops:
                ops.append(controlled_two(gate.matrix, gate.targets, ancilla, polarity=polarity, label="CRTE"))
                crte_count += 1
    return ops, crte_count


def build_step_circuit(
    params: PiteStepParams,
    h1_terms: list[TwoQubitTerm],
    h2_terms: list[TwoQubitTerm],
    num_system_qubits: int,
    ancilla: int,
    trotter: TrotterPlan | None = None,
    use_energy_shift: bool = True,
    compile_crte: str = "kak",
    num_qubits: int | None = None,
) -> Circuit:
    """One PITE step: W, select-RTE(t = dtau s), Z(theta'), W^dag on the ancilla.

    With trotter=None the RTE branches are exact dense exponentials; the
    ancilla-|0> block of the dense product then equals
    sin(phi - (H - E [if shift]) dtau s) up to one constant phase.
    """
    n_total = num_qubits if num_qubits is not None else max(num_system_qubits, ancilla + 1)
    system = tuple(range(num_system_qubits))
    t = params.rte_time()
    circ = Circuit(n_total)
    circ.append(single(W_GATE, ancilla, "W"))
    if trotter is None:
        h_dense = group_dense(h1_terms, num_system_qubits) + group_dense(h2_terms, num_system_qubits)
        ops = _select_rte_dense(h_dense, t, system, ancilla)
        crte_count = 2
    else:
        ops, crte_count = _select_rte_trotter(
            h1_terms, h2_terms, t, n_total, ancilla, trotter, compile_crte
        )
    circ.extend(ops)
    circ.append(single(phase_gate(params.phase_angle(use_energy_shift)), ancilla, "PHASE"))
    circ.append(single(W_GATE.conj().T, ancilla, "Wdg"))
    circ.metadata.update(
        rte_time=t,
        crte_gate_count=crte_count,
        use_energy_shift=use_energy_shift,
        compile_crte="dense" if trotter is None else compile_crte,
    )
    return circ


def build_linear_query_circuit(
    steps: int,
    dtau_unit: float,
    gamma: float,
    lambda1: float,
    h1_terms: list[TwoQubitTerm],
    h2_terms: list[TwoQubitTerm],
    num_system_qubits: int,
    trotter: TrotterPlan | None = None,
    compile_crte: str = "kak",
) -> Circuit:
    """Instrumented multi-step circuit under the linear query plan.

    Step k runs at dtau_k = (k-1) dtau_unit, realized as 2(k-1) unit-time
    select blocks (k-1 per branch), so the counted CRTE queries total exactly
    K(K-1).  Step 1 has no evolution and acts as a pure gamma attenuation.
    The circuit reuses one ancilla and is meant for query counting and depth
    layering; running it end to end skips the per-step post-selections.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if dtau_unit <= 0.0:
        raise ValueError("dtau_unit must be positive")
    n = num_system_qubits
    ancilla = n
    circ = Circuit(n + 1)
    queries = 0
    for k in range(1, steps + 1):
        if k == 1:
            base = step_params(gamma, dtau_unit, lambda1)
            params = PiteStepParams(
                gamma=gamma, dtau=0.0, phi=base.phi, s=base.s, a0=base.a0,
                a1=base.a1, energy_shift=0.0, branch=0, theta=base.theta,
            )
            unit_ops: list[GateOp] = []
        else:
            params = step_params(gamma, (k - 1) * dtau_unit, lambda1)
            t_unit = dtau_unit * params.s
            if trotter is None:
                h_dense = group_dense(h1_terms, n) + group_dense(h2_terms, n)
                unit_ops = _select_rte_dense(h_dense, t_unit, tuple(range(n)), ancilla)
            else:
                unit_ops, _ = _select_rte_trotter(
                    h1_terms, h2_terms, t_unit, n + 1, ancilla, trotter, compile_crte
                )
        circ.append(single(W_GATE, ancilla, "W"))
        for _ in range(k - 1):
            circ.extend(unit_ops)
            queries += 2
        circ.append(single(phase_gate(params.phase_angle()), ancilla, "PHASE"))
        circ.append(single(W_GATE.conj().T, ancilla, "Wdg"))
    circ.metadata.update(
        crte_blocks=queries,
        query_plan=pite_query_plan(steps),
        dtau_unit=dtau_unit,
    )
    return circ


def step_block_oracle(params: PiteStepParams, spectrum: Spectrum, use_energy_shift: bool = True) -> np.ndarray:
    """Dense sin(phi - (H - E) dtau s) for contract tests."""
    spec = params.f_spec(use_energy_shift)
    return spectrum.function_dense(lambda lams: spec.evaluate(lams))


@dataclass(frozen=True)
class PiteRunResult:
    """Multi-step run outcome after post-selecting every ancilla on |0>."""

    P_K: float
    delta_K: float
    F_K_at_gs: float
    eps_tilde: float
    final_state: StateVector
    depth: int
    mode: str
    steps: int
    step_probs: tuple[float, ...]
    entangled_state: StateVector | None = None


def _ground_infidelity(state: StateVector, spectrum: Spectrum) -> float:
    gs = spectrum.eigenvectors[:, 0]
    overlap = np.vdot(gs, state.amplitudes)
    return float(max(0.0, 1.0 - abs(overlap) ** 2))


def run_pite(
    initial: StateVector,
    spectrum: Spectrum,
    schedule: TauSchedule,
    gammas: float | tuple[float, ...] = 0.8,
    mode: str = "exact-step",
    trotter: TrotterPlan | None = None,
    shift: bool = True,
    h1_terms: list[TwoQubitTerm] | None = None,
    h2_terms: list[TwoQubitTerm] | None = None,
    ancilla_mode: str = "reuse",
    compile_crte: str = "kak",
    branch: int | None = None,
) -> PiteRunResult:
    """Run K PITE steps and post-select all ancillas on |0>.

    mode "exact-step" applies the exact unitary embedding of each f_k; mode
    "circuit" applies the compiled step circuits (exact dense RTE branches if
    trotter is None).  ancilla_mode "reuse" post-selects one ancilla after
    every step; "fresh" keeps one ancilla per step and post-selects all of
    them at the end (identical statistics, exposes the pre-measurement state).
    """
    if mode not in ("exact-step", "circuit"):
        raise ValueError(f"unknown mode {mode!r}")
    if ancilla_mode not in ("reuse", "fresh"):
        raise ValueError(f"unknown ancilla_mode {ancilla_mode!r}")
    steps = schedule.steps
    if isinstance(gammas, (int, float)):
        gammas = (float(gammas),) * steps
    if len(gammas) != steps:
        raise ValueError("need one gamma per step")
    if mode == "circuit" and trotter is not None and (h1_terms is None or h2_terms is None):
        raise ValueError("circuit mode with a Trotter plan needs the term groups")

    n = initial.num_qubits
    params = [
        step_params(g, dt, spectrum.lambda1, branch) for g, dt in zip(gammas, schedule.values)
    ]
    f_gs = 1.0
    for p in params:
        f_gs *= float(p.f_spec(shift).evaluate(np.array([spectrum.lambda1]))[0])

    step_mats: list[np.ndarray] = []
    step_circs: list[Circuit] = []
    depth = 0
    if mode == "exact-step":
        for p in params:
            fvals = p.f_spec(shift).evaluate(spectrum.eigenvalues)
            step_mats.append(_embedding_dense(fvals, spectrum))
    else:
        for k, p in enumerate(params):
            anc = n if ancilla_mode == "reuse" else n + k
            total = n + 1 if ancilla_mode == "reuse" else n + steps
            circ = build_step_circuit(
                p, h1_terms or [], h2_terms or [], n, anc,
                trotter=trotter, use_energy_shift=shift,
                compile_crte=compile_crte, num_qubits=total,
            )
            step_circs.append(circ)
            depth += circ.depth_by_layer()

    step_probs: list[float] = []
    entangled = None
    if ancilla_mode == "reuse":
        state = initial
        for k in range(steps):
            amps = np.concatenate([state.amplitudes, np.zeros_like(state.amplitudes)])
            work = from_amplitudes(amps)
            if mode == "exact-step":
                work = apply_gate(
                    work,
                    GateOp(kind="dense", targets=tuple(range(n + 1)), controls=(), matrix=step_mats[k], label="U_k"),
                )
            else:
                work = step_circs[k].apply(work)
            state, prob = post_select_zero(work, (n,))
            step_probs.append(prob)
        final = state
        p_total = float(np.prod(step_probs))
    else:
        total = n + steps
        amps = np.zeros(2**total, dtype=complex)
        amps[: 2**n] = initial.amplitudes
        work = from_amplitudes(amps)
        for k in range(steps):
            if mode == "exact-step":
                targets = tuple(range(n)) + (n + k,)
                work = apply_gate(
                    work,
                    GateOp(kind="dense", targets=targets, controls=(), matrix=step_mats[k], label="U_k"),
                )
            else:
                work = step_circs[k].apply(work)
        entangled = work
        final, p_total = post_select_zero(work, tuple(range(n, total)))
        # per-step probabilities are not individually resolved in this mode
        step_probs = [p_total]

    delta = _ground_infidelity(final, spectrum)
    eps_tilde = delta / (1.0 - delta) if delta < 1.0 else math.inf
    return PiteRunResult(
        P_K=p_total,
        delta_K=delta,
        F_K_at_gs=f_gs,
        eps_tilde=eps_tilde,
        final_state=final,
        depth=depth,
        mode=mode,
        steps=steps,
        step_probs=tuple(step_probs),
        entangled_state=entangled,
    )


def exact_ite_oracle(initial: StateVector, spectrum: Spectrum, tau: float, gamma_total: float = 1.0) -> tuple[StateVector, float]:
    """Normalized Gamma e^{-tau H} |psi> and its squared norm.

    Weights are rescaled by e^{-tau lambda_1} internally so large tau stays
    finite; the reported norm^2 is exact (inf if it overflows float range).
    """
    if tau < 0.0:
        raise ValueError("tau must be nonnegative")
    coeffs = spectrum.eigenvectors.conj().T @ initial.amplitudes
    log_peak = -tau * spectrum.lambda1
    stable = coeffs * np.exp(-tau * spectrum.eigenvalues - log_peak)
    stable_sq = float(np.sum(np.abs(stable) ** 2))
    if stable_sq <= 0.0:
        raise ValueError("evolved state has zero norm")
    log_norm_sq = 2.0 * (math.log(gamma_total) if gamma_total != 1.0 else 0.0) + 2.0 * log_peak + math.log(stable_sq)
    norm_sq = math.exp(log_norm_sq) if log_norm_sq < 709.0 else math.inf
    amps = spectrum.eigenvectors @ (stable / math.sqrt(stable_sq))
    return from_amplitudes(amps), norm_sq


@dataclass(frozen=True)
class CosineStep:
    """One cosine-filter step block, plain or phase-dressed.

    plain:       cos((H - E) t), Hermitian
    single-crte: e^{-i(H-E)t} cos((H - E) t) = (I + e^{-2i(H-E)t}) / 2
    Both have per-eigenstate success probability cos^2((lambda - E) t).
    """

    block: np.ndarray
    mode: str
    energy: float
    time: float

    def apply(self, state: StateVector) -> tuple[StateVector, float]:
        new = self.block @ state.amplitudes
        norm_sq = float(np.sum(np.abs(new) ** 2))
        if norm_sq <= 0.0:
            raise ValueError("cosine step annihilated the state")
        return from_amplitudes(new / math.sqrt(norm_sq)), norm_sq

    def success_probabilities(self, spectrum: Spectrum) -> np.ndarray:
        return np.cos((spectrum.eigenvalues - self.energy) * self.time) ** 2


def cosine_step(energy: float, t_k: float, spectrum: Spectrum, mode: str = "plain") -> CosineStep:
    if mode == "plain":
        block = spectrum.function_dense(lambda lams: np.cos((lams - energy) * t_k))
    elif mode == "single-crte":
        block = spectrum.function_dense(
            lambda lams: np.exp(-1j * (lams - energy) * t_k) * np.cos((lams - energy) * t_k)
        )
    else:
        raise ValueError(f"unknown cosine mode {mode!r}")
    return CosineStep(block=block, mode=mode, energy=energy, time=t_k)
