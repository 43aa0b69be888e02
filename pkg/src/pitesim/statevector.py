"""Dense statevector simulation with an explicit little-endian qubit convention.

Qubit j is bit j of the basis index: amplitude i belongs to the computational
state |b_{n-1} ... b_1 b_0> with b_j = (i >> j) & 1.  Every dense operator the
kernel accepts uses the same convention internally, i.e. bit j of the operator
row/column index corresponds to qubits[j] of the application call.  One shared
kernel (`_apply_matrix`) is used by gates, dense blocks and circuit-to-matrix
conversion so the convention cannot drift between code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ATOL_UNITARY = 1e-10

# single-qubit constants
ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
# ancilla basis change used by the imaginary-time step blocks
W_GATE = np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2.0)

PAULIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z, "e": ID2}


def phase_gate(theta: float) -> np.ndarray:
    """diag(1, e^{i theta})."""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * theta)]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    """exp(-i theta Z / 2)."""
    h = 0.5 * theta
    return np.array([[np.exp(-1j * h), 0.0], [0.0, np.exp(1j * h)]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    """exp(-i theta Y / 2)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    """exp(-i theta X / 2)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


class PostSelectionError(RuntimeError):
    """Raised when a post-selection branch carries (numerically) zero weight."""


def _check_unitary(mat: np.ndarray, what: str = "matrix") -> None:
    d = mat.shape[0]
    if mat.shape != (d, d) or d & (d - 1):
        raise ValueError(f"{what} must be square with power-of-two dimension, got {mat.shape}")
    err = np.max(np.abs(mat.conj().T @ mat - np.eye(d)))
    if err > ATOL_UNITARY:
        raise ValueError(f"{what} is not unitary (deviation {err:.3e})")


@dataclass(frozen=True)
class StateVector:
    """Immutable-by-convention dense state on `num_qubits` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError("amplitude length does not match qubit count")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probability(self, index: int) -> float:
        return float(abs(self.amplitudes[index]) ** 2)


def basis_state(num_qubits: int, index: int = 0) -> StateVector:
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def from_amplitudes(amps: np.ndarray, normalize: bool = False) -> StateVector:
    amps = np.asarray(amps, dtype=complex).ravel()
    n = int(round(math.log2(amps.size)))
    if 2**n != amps.size:
        raise ValueError("amplitude vector length must be a power of two")
    if normalize:
        amps = amps / np.linalg.norm(amps)
    return StateVector(n, amps.copy())


def _apply_matrix(amps: np.ndarray, mat: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the listed qubits of a (batched) amplitude array.

    `amps` has shape (2^n,) or (2^n, B).  Bit j of the matrix index acts on
    qubits[j].  Returns a new array.
    """
    k = len(qubits)
    if len(set(qubits)) != k:
        raise ValueError("duplicate qubit in application")
    if any(q < 0 or q >= num_qubits for q in qubits):
        raise ValueError("qubit index out of range")
    batched = amps.ndim == 2
    shape = [2] * num_qubits + ([amps.shape[1]] if batched else [])
    tensor = amps.reshape(shape)
    # axis of qubit q is (n-1-q); most-significant gate bit first for C-order flatten
    front = [num_qubits - 1 - q for q in reversed(qubits)]
    rest = [a for a in range(num_qubits) if a not in front]
    if batched:
        rest = rest + [num_qubits]
    perm = front + rest
    moved = np.transpose(tensor, perm).reshape(2**k, -1)
    moved = mat @ moved
    out = moved.reshape([shape[p] for p in perm])
    out = np.transpose(out, np.argsort(perm))
    return np.ascontiguousarray(out).reshape(amps.shape)


@dataclass(frozen=True)
class GateOp:
    """One circuit operation.

    kind is one of 'single', 'two', 'controlled-single', 'controlled-two',
    'mcphase'.  `matrix` is the base (uncontrolled) matrix; controls carry
    (qubit, polarity) pairs where polarity 1 means control-on-|1>.  For
    'mcphase' there is no target matrix: the op multiplies the amplitudes of
    the subspace selected by all controls with e^{i phi}.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    matrix: np.ndarray | None = None
    phi: float = 0.0
    label: str = ""

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)


def single(matrix: np.ndarray, qubit: int, label: str = "U1") -> GateOp:
    matrix = np.asarray(matrix, dtype=complex)
    _check_unitary(matrix, "single-qubit gate")
    if matrix.shape != (2, 2):
        raise ValueError("single-qubit gate must be 2x2")
    return GateOp("single", (qubit,), (), matrix, 0.0, label)


def two_qubit(matrix: np.ndarray, qubits: tuple[int, int], label: str = "U2") -> GateOp:
    matrix = np.asarray(matrix, dtype=complex)
    _check_unitary(matrix, "two-qubit gate")
    if matrix.shape != (4, 4):
        raise ValueError("two-qubit gate must be 4x4")
    return GateOp("two", tuple(qubits), (), matrix, 0.0, label)


def controlled_single(matrix: np.ndarray, target: int, control: int, polarity: int = 1, label: str = "CU1") -> GateOp:
    matrix = np.asarray(matrix, dtype=complex)
    _check_unitary(matrix, "controlled single-qubit gate")
    return GateOp("controlled-single", (target,), ((control, polarity),), matrix, 0.0, label)


def controlled_two(matrix: np.ndarray, targets: tuple[int, int], control: int, polarity: int = 1, label: str = "CU2") -> GateOp:
    matrix = np.asarray(matrix, dtype=complex)
    _check_unitary(matrix, "controlled two-qubit gate")
    return GateOp("controlled-two", tuple(targets), ((control, polarity),), matrix, 0.0, label)


def cnot(control: int, target: int) -> GateOp:
    return controlled_single(PAULI_X, target, control, 1, label="CNOT")


def mcphase(controls: tuple[tuple[int, int], ...], phi: float, label: str = "MCP") -> GateOp:
    """e^{i phi} on the subspace where every (qubit, polarity) control matches."""
    if not controls:
        raise ValueError("mcphase needs at least one control qubit")
    return GateOp("mcphase", (), tuple(controls), None, float(phi), label)


def adjoint_op(op: GateOp) -> GateOp:
    """The inverse gate: conjugate-transposed matrix, or negated mcphase angle."""
    if op.kind == "mcphase":
        return GateOp(op.kind, op.targets, op.controls, None, -op.phi, op.label)
    return GateOp(op.kind, op.targets, op.controls, op.matrix.conj().T, 0.0, op.label)


def embedded_matrix(op: GateOp) -> tuple[np.ndarray, tuple[int, ...]]:
    """Dense matrix for the op on its own qubit tuple (targets low bits, controls high)."""
    if op.kind == "mcphase":
        qs = tuple(q for q, _ in op.controls)
        dim = 2 ** len(qs)
        diag = np.ones(dim, dtype=complex)
        idx = np.arange(dim)
        sel = np.ones(dim, dtype=bool)
        for j, (_, pol) in enumerate(op.controls):
            sel &= ((idx >> j) & 1) == pol
        diag[sel] = np.exp(1j * op.phi)
        return np.diag(diag), qs
    if not op.controls:
        return op.matrix, op.targets
    k = len(op.targets)
    c = len(op.controls)
    dim = 2 ** (k + c)
    big = np.eye(dim, dtype=complex)
    pattern = sum(pol << j for j, (_, pol) in enumerate(op.controls))
    rows = pattern * 2**k + np.arange(2**k)
    big[np.ix_(rows, rows)] = op.matrix
    return big, op.targets + tuple(q for q, _ in op.controls)


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    if op.kind == "mcphase":
        idx = np.arange(2**state.num_qubits)
        sel = np.ones(idx.shape, dtype=bool)
        for q, pol in op.controls:
            sel &= ((idx >> q) & 1) == pol
        amps = state.amplitudes.copy()
        amps[sel] *= np.exp(1j * op.phi)
        return StateVector(state.num_qubits, amps)
    mat, qubits = embedded_matrix(op)
    return StateVector(state.num_qubits, _apply_matrix(state.amplitudes, mat, qubits, state.num_qubits))


def apply_dense(state: StateVector, matrix: np.ndarray, qubits: tuple[int, ...]) -> StateVector:
    """Apply a dense unitary block to the listed qubits (bit j of the block <-> qubits[j])."""
    matrix = np.asarray(matrix, dtype=complex)
    _check_unitary(matrix, "dense block")
    return StateVector(state.num_qubits, _apply_matrix(state.amplitudes, matrix, tuple(qubits), state.num_qubits))


def apply_dense_nonunitary(state: StateVector, matrix: np.ndarray, qubits: tuple[int, ...]) -> tuple[StateVector, float]:
    """Apply a flagged non-unitary block; returns (renormalized state, pre-normalization norm^2)."""
    matrix = np.asarray(matrix, dtype=complex)
    raw = _apply_matrix(state.amplitudes, matrix, tuple(qubits), state.num_qubits)
    nsq = float(np.vdot(raw, raw).real)
    if nsq < 1e-300:
        raise PostSelectionError("non-unitary block annihilated the state")
    return StateVector(state.num_qubits, raw / math.sqrt(nsq)), nsq


def post_select_zero(state: StateVector, qubits: tuple[int, ...]) -> tuple[StateVector, float]:
    """Project the listed qubits onto |0>, drop them, renormalize.

    Returns the reduced state over the remaining qubits (relative order kept)
    and the branch probability.  Raises PostSelectionError on an (effectively)
    impossible outcome.
    """
    n = state.num_qubits
    qubits = tuple(qubits)
    if len(set(qubits)) != len(qubits) or any(q < 0 or q >= n for q in qubits):
        raise ValueError("bad post-selection qubit list")
    tensor = state.amplitudes.reshape([2] * n)
    slicer: list[object] = [slice(None)] * n
    for q in qubits:
        slicer[n - 1 - q] = 0
    block = tensor[tuple(slicer)].ravel()
    prob = float(np.vdot(block, block).real)
    if prob < 1e-300:
        raise PostSelectionError("post-selection branch has zero probability")
    reduced = StateVector(n - len(qubits), np.ascontiguousarray(block) / math.sqrt(prob))
    return reduced, prob


def fidelity(state: StateVector, reference: StateVector) -> float:
    """|<reference|state>|^2 (both assumed normalized)."""
    if state.num_qubits != reference.num_qubits:
        raise ValueError("qubit-count mismatch in fidelity")
    return float(abs(np.vdot(reference.amplitudes, state.amplitudes)) ** 2)


@dataclass
class Circuit:
    """Ordered gate list; gates apply first-to-last."""

    num_qubits: int
    ops: list[GateOp] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, op: GateOp) -> None:
        if any(q >= self.num_qubits for q in op.qubits):
            raise ValueError("op addresses a qubit outside the circuit")
        self.ops.append(op)

    def extend(self, ops) -> None:
        for op in ops:
            self.append(op)

    @property
    def gate_count(self) -> int:
        return len(self.ops)

    def cnot_count(self) -> int:
        return sum(1 for op in self.ops if op.label == "CNOT")

    def depth_by_layer(self) -> int:
        """Greedy layering: an op starts after the last layer touching any of its qubits."""
        last = [0] * self.num_qubits
        depth = 0
        for op in self.ops:
            layer = 1 + max(last[q] for q in op.qubits)
            for q in op.qubits:
                last[q] = layer
            depth = max(depth, layer)
        return depth

    def apply(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ValueError("state size does not match circuit")
        amps = state.amplitudes
        for op in self.ops:
            if op.kind == "mcphase":
                amps = apply_gate(StateVector(self.num_qubits, amps), op).amplitudes
            else:
                mat, qubits = embedded_matrix(op)
                amps = _apply_matrix(amps, mat, qubits, self.num_qubits)
        return StateVector(self.num_qubits, amps)

    def dense(self, max_qubits: int = 12) -> np.ndarray:
        """Full 2^n x 2^n matrix of the circuit (batched kernel over identity columns)."""
        if self.num_qubits > max_qubits:
            raise ValueError(f"dense() limited to {max_qubits} qubits")
        mat = np.eye(2**self.num_qubits, dtype=complex)
        for op in self.ops:
            opm, qubits = embedded_matrix(op)
            mat = _apply_matrix(mat, opm, qubits, self.num_qubits)
        return mat
