import math

import numpy as np
import pytest

from helpers import random_state
from pitesim.costs import DepthParams, depth_pite_qaa
from pitesim.pite import run_pite, schedule_from_spectrum, step_params, _embedding_dense
from pitesim.qaa import (
    ExactQOperator,
    QaaConfig,
    amplified_probability,
    build_Q,
    completion_unitary,
    good_state_geometry,
    optimal_repetitions,
    probability_maximizing_m,
    run_multistep_pite_qaa,
)
from pitesim.spinchain import prepare_initial_state
from pitesim.statevector import Circuit, GateOp, StateVector, fidelity, post_select_zero

RNG = np.random.default_rng(314)
GAMMA = 0.8


def _exact_q(spectrum, initial, gammas_dtaus, n):
    mats = [
        _embedding_dense(
            step_params(g, dt, spectrum.lambda1).f_spec(True).evaluate(spectrum.eigenvalues),
            spectrum,
        )
        for g, dt in gammas_dtaus
    ]
    return ExactQOperator(completion_unitary(initial.amplitudes), mats, n)


def test_optimal_repetitions_known_points():
    assert optimal_repetitions(1.0) == 0
    assert optimal_repetitions(0.5) == 1
    assert optimal_repetitions(0.25) == 1
    assert optimal_repetitions(0.06307514963228218) == 3
    with pytest.raises(ValueError):
        optimal_repetitions(0.0)
    with pytest.raises(ValueError):
        optimal_repetitions(1.2)


def test_m_star_bracketing_property():
    for p in np.linspace(1e-4, 0.5, 997):
        m = optimal_repetitions(float(p))
        if m == 0:
            continue
        a = math.sqrt(p)
        assert math.sin(math.pi / (4.0 * (m + 1))) < a + 1e-15
        assert a <= math.sin(math.pi / (4.0 * m)) + 1e-15


def test_geometry_and_rotation_law():
    p = 0.0625
    geo = good_state_geometry(p)
    assert geo.amplitude == pytest.approx(0.25)
    assert geo.theta_a == pytest.approx(math.asin(0.25))
    for m in range(5):
        want = math.sin((2 * m + 1) * geo.theta_a) ** 2
        assert amplified_probability(p, m) == pytest.approx(want, abs=1e-15)
    best = probability_maximizing_m(p)
    for cand in (best - 1, best + 1):
        if cand >= 0:
            assert amplified_probability(p, best) >= amplified_probability(p, cand) - 1e-15


def test_completion_unitary():
    psi = random_state(3, RNG)
    u = completion_unitary(psi)
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-12
    assert np.max(np.abs(u[:, 0] - psi)) < 1e-12
    with pytest.raises(ValueError):
        completion_unitary(psi * 2.0)


def test_apply_q_matches_dense(inst4):
    # small instance: 2 system qubits from a truncated spectrum will not do,
    # use the full n=4 chain with two steps (6 qubits total)
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    qop = _exact_q(spec, init, [(GAMMA, 0.3), (GAMMA, 0.5)], 4)
    phi1, phi2 = 2.1, -0.7
    dense = qop.dense_Q(phi1, phi2, max_qubits=10)
    assert np.max(np.abs(dense.conj().T @ dense - np.eye(64))) < 1e-12
    psi = random_state(6, RNG)
    got = qop.apply_Q(StateVector(6, psi.copy()), phi1, phi2).amplitudes
    assert np.max(np.abs(got - dense @ psi)) < 1e-12


def test_prepared_state_probability(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 3, GAMMA)
    base = run_pite(init, spec, sched, GAMMA, mode="exact-step")
    qop = _exact_q(spec, init, [(GAMMA, dt) for dt in sched.values], 4)
    prepared = qop.prepared_state()
    _, p0 = post_select_zero(prepared, tuple(range(4, 7)))
    assert p0 == pytest.approx(base.P_K, abs=1e-12)


def test_run_frozen_instance(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 6, GAMMA)
    res = run_multistep_pite_qaa(init, spec, sched, GAMMA)
    assert res.P_before == pytest.approx(0.06307514963228218, abs=1e-13)
    assert res.m_star == 3 and res.m_used == 3
    assert res.P_after == pytest.approx(0.9580551628726843, abs=1e-10)
    want = amplified_probability(res.P_before, res.m_used)
    assert res.P_after == pytest.approx(want, abs=1e-10)
    assert res.depth_formula == depth_pite_qaa(3, 6, 4, DepthParams(d_crte=1))


def test_amplification_preserves_post_selected_state(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 4, GAMMA)
    base = run_pite(init, spec, sched, GAMMA, mode="exact-step")
    res = run_multistep_pite_qaa(init, spec, sched, GAMMA)
    assert fidelity(res.final_state, base.final_state) > 1.0 - 1e-12
    assert res.delta_post == pytest.approx(base.delta_K, abs=1e-12)


def test_m_sweep_follows_rotation_law(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 3, GAMMA)
    p0 = run_pite(init, spec, sched, GAMMA, mode="exact-step").P_K
    for m in range(5):
        res = run_multistep_pite_qaa(init, spec, sched, GAMMA, m=m)
        assert res.P_after == pytest.approx(amplified_probability(p0, m), abs=1e-10)
        assert res.m_used == m


def test_config_round_phases(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 3, GAMMA)
    cfg = QaaConfig(m=2)
    res = run_multistep_pite_qaa(init, spec, sched, GAMMA, config=cfg)
    assert res.m_used == 2
    assert len(cfg.round_phases()) == 2
    # pi phases reproduce the plain reflections
    plain = run_multistep_pite_qaa(init, spec, sched, GAMMA, m=2)
    assert res.P_after == pytest.approx(plain.P_after, abs=1e-12)


def test_circuit_q_matches_amplitude_law(inst4):
    _, spec = inst4
    init, _ = prepare_initial_state(spec, "uniform")
    sched = schedule_from_spectrum(spec, 2, GAMMA)
    base = run_pite(init, spec, sched, GAMMA, mode="exact-step")
    mats = [
        _embedding_dense(
            step_params(GAMMA, dt, spec.lambda1).f_spec(True).evaluate(spec.eigenvalues),
            spec,
        )
        for dt in sched.values
    ]
    step_circuits = []
    for k, mat in enumerate(mats):
        c = Circuit(6)
        c.append(GateOp(kind="dense", targets=(0, 1, 2, 3, 4 + k), controls=(), matrix=mat, label="U_k"))
        step_circuits.append(c)
    uref = completion_unitary(init.amplitudes)
    circ = build_Q(uref, step_circuits, 4, mode="circuit")
    q = circ.dense(max_qubits=8)
    assert np.max(np.abs(q.conj().T @ q - np.eye(64))) < 1e-12
    # prepared state, one round of Q, then the good-subspace weight
    qop = ExactQOperator(uref, mats, 4)
    state = qop.prepared_state()
    assert np.max(np.abs(q @ state.amplitudes - qop.apply_Q(state).amplitudes)) < 1e-10
    rotated = StateVector(6, q @ state.amplitudes)
    _, p1 = post_select_zero(rotated, (4, 5))
    assert p1 == pytest.approx(amplified_probability(base.P_K, 1), abs=1e-10)


def test_build_q_rejects_unknown_mode():
    psi = random_state(2, RNG)
    with pytest.raises(ValueError):
        build_Q(completion_unitary(psi), [], 2, mode="banana")
