"""Analytic depth and total-cost models for the three preparation routes.

Depth formulas count CRTE blocks: d_PITE = 4 + K(K-1) d_CRTE assumes the
linear query schedule where step k issues 2(k-1) CRTE queries; QPE issues
(2^K - 1) r of them.  Total costs are the repetition-weighted asymptotic
forms; the exponents in 1/|c_1| (2 for PITE, 3 for QPE, 2 for QPE+AA,
1 for PITE+QAA) are what the sweep fits extract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DepthParams:
    """Unit depths entering the composite formulas.

    d_s0(q) = s0_c0 * q + s0_c1 models the q-qubit zero reflection compiled
    with one work ancilla (linear depth); d_uref is the initializer depth,
    free by default.
    """

    d_crte: int
    s0_c0: int = 4
    s0_c1: int = 2
    d_uref: int = 0

    def d_s0(self, q: int) -> int:
        if q < 1:
            raise ValueError("reflection needs at least one qubit")
        return self.s0_c0 * q + self.s0_c1


def pite_query_plan(steps: int) -> tuple[int, ...]:
    """CRTE queries per step under the linear schedule: q_k = 2(k-1)."""
    return tuple(2 * (k - 1) for k in range(1, steps + 1))


def depth_pite(steps: int, d_crte: int) -> int:
    """4 + K(K-1) d_CRTE; the K(K-1) is the linear query plan summed."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return 4 + steps * (steps - 1) * d_crte


def d_qft(ancillas: int) -> int:
    """Controlled-phase triangle plus the Hadamard column."""
    return ancillas * (ancillas + 1) // 2 + ancillas


def depth_qpe(ancillas: int, r: int, d_crte: int, qft_depth: int | None = None) -> int:
    """1 + (2^K - 1) r d_CRTE + d_QFT."""
    if ancillas < 1 or r < 1:
        raise ValueError("need ancillas >= 1 and r >= 1")
    if qft_depth is None:
        qft_depth = d_qft(ancillas)
    return 1 + (2**ancillas - 1) * r * d_crte + qft_depth


def depth_pite_qaa(m_star: int, steps: int, n: int, params: DepthParams) -> int:
    """m*(2 d_PITE + d_S0(K) + d_S0(n+K) + 2 d_Uref) + d_PITE."""
    if m_star < 0:
        raise ValueError("m_star must be >= 0")
    d_p = depth_pite(steps, params.d_crte)
    per_round = 2 * d_p + params.d_s0(steps) + params.d_s0(n + steps) + 2 * params.d_uref
    return m_star * per_round + d_p


def qaa_benefit(
    d_pite: float,
    c1_abs: float,
    reflection_sum: float,
    d_uref: float = 0.0,
    P_K: float | None = None,
) -> tuple[bool, float]:
    """Whether QAA pays off: d_PITE >= pi |c1| / (4(1-|c1|^2)) * (reflections + 2 d_Uref).

    Returns (benefit, threshold).  When the supplied P_K exceeds 1/2 a single
    amplification round already overshoots, so the answer is False regardless
    of the threshold.
    """
    if not 0.0 < c1_abs < 1.0:
        raise ValueError("|c1| must lie in (0, 1)")
    threshold = (math.pi * c1_abs / (4.0 * (1.0 - c1_abs**2))) * (reflection_sum + 2.0 * d_uref)
    if P_K is not None and P_K > 0.5:
        return False, float(threshold)
    return bool(d_pite >= threshold), float(threshold)


def steps_estimate(c1_abs: float, delta: float) -> float:
    """ln((1-delta)(1-|c1|^2) / (delta |c1|^2)), the linear-regime K."""
    if not 0.0 < c1_abs < 1.0:
        raise ValueError("|c1| must lie in (0, 1)")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.log((1.0 - delta) * (1.0 - c1_abs**2) / (delta * c1_abs**2))


def total_cost(
    method: str,
    c1_abs: float,
    delta: float,
    d_crte: float = 1.0,
    gap_scaled: float = 1.0,
) -> float:
    """Repetition-weighted cost of one route to infidelity delta.

    pite:     d K / P_K           = d K_est (1-delta) / |c1|^2
    qpe:      d_QPE / P_k         = d (1-delta) / (sqrt(delta) |c1|^3 gap)
    qpe+aa:   amplified QPE       = d (1-delta) / (sqrt(delta) |c1|^2 gap)
    pite+qaa: d K m*              = d K_est pi sqrt(1-delta) / (4 |c1|)
    gap_scaled is the t0-scaled phase distance entering the QPE bound.
    """
    if method in ("pite", "pite+qaa"):
        k_est = steps_estimate(c1_abs, delta)
        if method == "pite":
            return d_crte * k_est * (1.0 - delta) / c1_abs**2
        return d_crte * k_est * math.pi * math.sqrt(1.0 - delta) / (4.0 * c1_abs)
    if method in ("qpe", "qpe+aa"):
        power = 3 if method == "qpe" else 2
        return d_crte * (1.0 - delta) / (math.sqrt(delta) * c1_abs**power * gap_scaled)
    raise ValueError(f"unknown method {method!r}")
