"""Two-qubit gate synthesis via the magic-basis Cartan decomposition.

Any U in U(4) factors as e^{i phase} (A1 x A0) R_d(x, y, z) (B1 x B0) with
R_d(v) = exp(i (v_x XX + v_y YY + v_z ZZ)) and canonical angles in the Weyl
chamber pi/4 >= x >= y >= |z|.  The canonical interaction is emitted as a
3-CNOT circuit C_d with R_d(v) = e^{i pi/4} C_d(-2 v), and a controlled
version of a full two-qubit gate costs exactly 13 CNOTs (angle-switched C_d
plus two controlled local rotations).

Tensor-order convention matches the statevector kernel: in kron(A1, A0) the
factor A0 acts on targets[0] (the low bit), A1 on targets[1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevector import (
    Circuit,
    GateOp,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    cnot,
    controlled_single,
    phase_gate,
    rx,
    ry,
    rz,
    single,
)

MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]],
    dtype=complex,
) / math.sqrt(2.0)

# maps magic-basis eigenphases to (global, x, y, z)
GAMMA = 0.25 * np.array(
    [[1, 1, 1, 1], [1, 1, -1, -1], [-1, 1, -1, 1], [1, -1, -1, 1]], dtype=float
)

_XX = np.kron(PAULI_X, PAULI_X)
_YY = np.kron(PAULI_Y, PAULI_Y)
_ZZ = np.kron(PAULI_Z, PAULI_Z)
_PAULI_BY_AXIS = (PAULI_X, PAULI_Y, PAULI_Z)


def rd_dense(theta: tuple[float, float, float]) -> np.ndarray:
    """exp(i (x XX + y YY + z ZZ)) as a dense 4x4."""
    gen = theta[0] * _XX + theta[1] * _YY + theta[2] * _ZZ
    evals, vecs = np.linalg.eigh(gen)
    return (vecs * np.exp(1j * evals)) @ vecs.conj().T


def phase_equal(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    """Equality up to one global phase: |tr(A^dagger B)| / dim == 1."""
    dim = a.shape[0]
    return abs(abs(np.trace(a.conj().T @ b)) / dim - 1.0) < atol


@dataclass(frozen=True)
class KakDecomposition:
    """U = e^{i phase} kron(after1, after0) R_d(angles) kron(before1, before0)."""

    phase: float
    angles: tuple[float, float, float]
    after: tuple[np.ndarray, np.ndarray]   # (on targets[1], on targets[0])
    before: tuple[np.ndarray, np.ndarray]

    def reconstruct(self) -> np.ndarray:
        left = np.kron(self.after[0], self.after[1])
        right = np.kron(self.before[0], self.before[1])
        return np.exp(1j * self.phase) * left @ rd_dense(self.angles) @ right


def _joint_orthogonal_diagonalization(s: np.ndarray) -> np.ndarray:
    """Real orthogonal P (det +1) with P^T S P diagonal, for unitary symmetric S.

    Re(S) and Im(S) are commuting real symmetric matrices; eigh the first and
    re-diagonalize the second inside each degenerate cluster.
    """
    a, b = s.real.copy(), s.imag.copy()
    evals, p = np.linalg.eigh(a)
    start = 0
    for stop in range(1, 5):
        if stop == 4 or evals[stop] - evals[stop - 1] > 1e-7:
            if stop - start > 1:
                block = p[:, start:stop]
                sub = block.T @ b @ block
                _, q = np.linalg.eigh(0.5 * (sub + sub.T))
                p[:, start:stop] = block @ q
            start = stop
    if np.linalg.det(p) < 0:
        p[:, -1] = -p[:, -1]
    return p


def _kron_factor(mat: np.ndarray) -> tuple[complex, np.ndarray, np.ndarray]:
    """Split mat = g * kron(f1, f0) with f1, f0 in SU(2)."""
    idx = int(np.argmax(np.abs(mat)))
    r, c = divmod(idx, 4)
    i0, j0 = r >> 1, c >> 1
    k0, l0 = r & 1, c & 1
    f0 = mat[2 * i0 : 2 * i0 + 2, 2 * j0 : 2 * j0 + 2].copy()
    f1 = mat[k0::2, l0::2].copy()
    pivot = mat[r, c]
    if abs(pivot) < 1e-12:
        raise ValueError("matrix is not a tensor product of single-qubit factors")
    f0 /= np.sqrt(np.linalg.det(f0) + 0j)
    f1 /= np.sqrt(np.linalg.det(f1) + 0j)
    g = pivot / (f1[i0, j0] * f0[k0, l0])
    if abs(abs(g) - 1.0) > 1e-7 or np.max(np.abs(g * np.kron(f1, f0) - mat)) > 1e-7:
        raise ValueError("matrix is not a tensor product of single-qubit factors")
    return g, f1, f0


def _canonicalize(x: float, y: float, z: float):
    """Map angles into the Weyl chamber, tracking phase and local corrections.

    Returns (phase, left (l1, l0), right (r1, r0), angles) such that
    R_d(x, y, z) = e^{i phase} kron(l1, l0) R_d(angles) kron(r1, r0).
    """
    phase = 0.0
    left = [np.eye(2, dtype=complex), np.eye(2, dtype=complex)]
    right = [np.eye(2, dtype=complex), np.eye(2, dtype=complex)]
    v = [x, y, z]

    def absorb(mat1: np.ndarray, mat0: np.ndarray, side_both: bool = False):
        # multiply a correction onto the outer locals; same pair on both sides
        left[0] = left[0] @ mat1
        left[1] = left[1] @ mat0
        if side_both:
            right[0] = mat1.conj().T @ right[0]
            right[1] = mat0.conj().T @ right[1]

    # shift each angle into (-pi/4, pi/4] by multiples of pi/2
    for k in range(3):
        n = math.floor(v[k] / (math.pi / 2) + 0.5)
        v[k] -= n * math.pi / 2
        if v[k] < -math.pi / 4 + 1e-12:
            v[k] += math.pi / 2
            n -= 1
        if n:
            phase += n * math.pi / 2
            if n % 2:
                p = _PAULI_BY_AXIS[k]
                absorb(p, p)

    # sort by magnitude (descending) with axis-exchange rotations on both sides
    swappers = {
        (0, 1): rz(math.pi / 2),
        (1, 2): rx(math.pi / 2),
        (0, 2): ry(math.pi / 2),
    }
    for i in range(2):
        j = max(range(i, 3), key=lambda k: abs(v[k]))
        if j != i:
            c = swappers[(i, j)]
            absorb(c.conj().T, c.conj().T, side_both=True)
            v[i], v[j] = v[j], v[i]

    # make x and y nonnegative, dumping signs onto z
    for k in (0, 1):
        if v[k] < 0:
            pair_axis = 3 - k - 2  # the remaining axis not in (k, 2)
            f = _PAULI_BY_AXIS[pair_axis]
            absorb(f, np.eye(2, dtype=complex), side_both=True)
            v[k] = -v[k]
            v[2] = -v[2]

    return phase, (left[0], left[1]), (right[0], right[1]), (v[0], v[1], v[2])


def kak_decompose(unitary: np.ndarray) -> KakDecomposition:
    """Cartan decomposition of a 4x4 unitary with Weyl-canonical angles.

    Deterministic for a fixed input; reconstruct() reproduces the input to
    float precision including the global phase.
    """
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError("expected a 4x4 unitary")
    if np.max(np.abs(u.conj().T @ u - np.eye(4))) > 1e-9:
        raise ValueError("input is not unitary")

    m = MAGIC.conj().T @ u @ MAGIC
    s = m.T @ m
    p = _joint_orthogonal_diagonalization(s)
    d2 = p.T @ s @ p
    if np.max(np.abs(d2 - np.diag(np.diag(d2)))) > 1e-7:
        raise RuntimeError("joint diagonalization failed")
    phi = 0.5 * np.angle(np.diag(d2))
    d = np.exp(1j * phi)
    k1 = m @ p / d[np.newaxis, :]
    if np.linalg.det(k1).real < 0:
        d = d.copy()
        d[0] = -d[0]
        phi = phi.copy()
        phi[0] += math.pi
        k1 = m @ p / d[np.newaxis, :]

    w, x, y, z = GAMMA @ phi
    g_after, a1, a0 = _kron_factor(MAGIC @ k1 @ MAGIC.conj().T)
    g_before, b1, b0 = _kron_factor(MAGIC @ p.T @ MAGIC.conj().T)
    phase = w + np.angle(g_after) + np.angle(g_before)

    dphase, (l1, l0), (r1, r0), angles = _canonicalize(x, y, z)
    return KakDecomposition(
        phase=float(phase + dphase),
        angles=angles,
        after=(a1 @ l1, a0 @ l0),
        before=(r1 @ b1, r0 @ b0),
    )


def cd_circuit(theta: tuple[float, float, float], targets: tuple[int, int] = (0, 1), num_qubits: int | None = None) -> Circuit:
    """3-CNOT circuit for the canonical block C_d(theta) = e^{-i pi/4} R_d(-theta/2).

    The dense product equals C_d exactly (global phase pinned), so
    e^{i pi/4} C_d(-2 v) reproduces R_d(v).
    """
    tx, ty, tz = theta
    q0, q1 = targets
    n = num_qubits if num_qubits is not None else max(targets) + 1
    circ = Circuit(n)
    circ.append(single(rz(math.pi / 2), q0, "RZ"))
    circ.append(cnot(q1, q0))
    circ.append(single(rz(tz - math.pi / 2), q0, "RZ"))
    circ.append(single(ry(math.pi / 2 - ty), q1, "RY"))
    circ.append(cnot(q0, q1))
    circ.append(single(ry(tx - math.pi / 2), q1, "RY"))
    circ.append(cnot(q1, q0))
    circ.append(single(-1j * rz(-math.pi / 2), q1, "RZPH"))
    return circ


def zyz_decompose(v: np.ndarray) -> tuple[float, float, float, float]:
    """v = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    v = np.asarray(v, dtype=complex)
    alpha = 0.5 * np.angle(np.linalg.det(v) + 0j)
    su = v * np.exp(-1j * alpha)
    gamma = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[0, 0]) > 1e-9 and abs(su[1, 0]) > 1e-9:
        plus = -2.0 * np.angle(su[0, 0])   # beta + delta
        minus = 2.0 * np.angle(su[1, 0])   # beta - delta
        beta = 0.5 * (plus + minus)
        delta = 0.5 * (plus - minus)
    elif abs(su[1, 0]) <= 1e-9:
        beta = -np.angle(su[0, 0])
        delta = beta
        beta_delta = beta + delta
        beta = delta = 0.5 * beta_delta
    else:
        beta = np.angle(su[1, 0])
        delta = -beta
    return float(alpha), float(beta), float(gamma), float(delta)


def controlled_single_ops(v: np.ndarray, target: int, control: int) -> list[GateOp]:
    """Exact controlled-V from the ABC construction: 2 CNOTs + singles + control phase."""
    alpha, beta, gamma, delta = zyz_decompose(v)
    a = rz(beta) @ ry(gamma / 2.0)
    b = ry(-gamma / 2.0) @ rz(-(delta + beta) / 2.0)
    c = rz((delta - beta) / 2.0)
    ops = [
        single(c, target, "V1"),
        cnot(control, target),
        single(b, target, "V1"),
        cnot(control, target),
        single(a, target, "V1"),
    ]
    if abs(alpha) > 1e-15:
        ops.append(single(phase_gate(alpha), control, "PHASE"))
    return ops


def _controlled_rotation_ops(kind: str, theta: float, target: int, control: int) -> list[GateOp]:
    rot = rz if kind == "z" else ry
    label = "RZ" if kind == "z" else "RY"
    return [
        single(rot(theta / 2.0), target, label),
        cnot(control, target),
        single(rot(-theta / 2.0), target, label),
        cnot(control, target),
    ]


def controlled_two_qubit(
    unitary: np.ndarray,
    targets: tuple[int, int],
    control: int,
    polarity: int = 1,
    num_qubits: int | None = None,
) -> Circuit:
    """Controlled arbitrary two-qubit gate with exactly 13 CNOTs.

    Dense product equals e^{-i pi/4} (|1-pol><1-pol| x I + |pol><pol| x U) on
    (control, targets); i.e. the target block fires when the control qubit is
    in state `polarity`.
    """
    kak = kak_decompose(unitary)
    q0, q1 = targets
    n = num_qubits if num_qubits is not None else max(q0, q1, control) + 1
    circ = Circuit(n)
    if polarity == 0:
        circ.append(single(PAULI_X, control, "X"))

    a1, a0 = kak.after
    b1, b0 = kak.before
    tx, ty, tz = (-2.0 * a for a in kak.angles)

    circ.append(single(a0.conj().T, q0, "V1"))
    circ.append(single(a1.conj().T, q1, "V1"))
    circ.extend(controlled_single_ops(b0 @ a0, q0, control))
    circ.extend(controlled_single_ops(b1 @ a1, q1, control))

    # angle-switched canonical block: C_d(-2 angles) when on, C_d(0) when off
    circ.append(single(rz(math.pi / 2), q0, "RZ"))
    circ.append(cnot(q1, q0))
    circ.append(single(rz(-math.pi / 2), q0, "RZ"))
    circ.extend(_controlled_rotation_ops("z", tz, q0, control))
    circ.append(single(ry(math.pi / 2), q1, "RY"))
    circ.extend(_controlled_rotation_ops("y", -ty, q1, control))
    circ.append(cnot(q0, q1))
    circ.append(single(ry(-math.pi / 2), q1, "RY"))
    circ.extend(_controlled_rotation_ops("y", tx, q1, control))
    circ.append(cnot(q1, q0))
    circ.append(single(-1j * rz(-math.pi / 2), q1, "RZPH"))

    circ.append(single(a0, q0, "V1"))
    circ.append(single(a1, q1, "V1"))
    circ.append(single(phase_gate(kak.phase), control, "PHASE"))

    if polarity == 0:
        circ.append(single(PAULI_X, control, "X"))
    return circ
