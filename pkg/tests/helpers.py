"""Shared test utilities: Haar sampling and an independent gate-embedding oracle."""

import numpy as np


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_state(num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    amps = rng.standard_normal(2**num_qubits) + 1j * rng.standard_normal(2**num_qubits)
    return amps / np.linalg.norm(amps)


def embed_matrix_ref(mat: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Reference embedding: operator bit i of `mat` acts on qubits[i].

    Built by plain index arithmetic, independent of the simulator kernel.
    """
    dim = 2**num_qubits
    k = len(qubits)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        col_local = sum(((col >> q) & 1) << i for i, q in enumerate(qubits))
        base = col
        for q in qubits:
            base &= ~(1 << q)
        for row_local in range(2**k):
            row = base
            for i, q in enumerate(qubits):
                row |= ((row_local >> i) & 1) << q
            out[row, col] = mat[row_local, col_local]
    return out


def lin_fit(x, y):
    """Least-squares slope, intercept, R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), r2
