"""Extra-dimensional correction synthesis.

A projection onto a two-qudit state of the form

    |Psi> = (1/sqrt(d)) sum_k |k> |psi_k>,

with linearly independent (not necessarily orthogonal or normalized)
conditional states |psi_k>, can be converted into a heralded Bell projection.
Writing A for the inverse of the matrix whose columns are the |psi_k>, the
matrix sqrt(lambda) A has maximum singular value 1, where lambda is the
smallest eigenvalue of the Gram matrix B = (<psi_j|psi_i>)_ij.  Appending
s vacuum modes (s = number of Gram eigenvalues above lambda) lets
sqrt(lambda) A extend first to a (d+s) x d isometry and then, by
Gram-Schmidt, to a unitary U.  Applying U to the second qudit and
post-selecting on no photon in the s new modes heralds the Bell projection
with probability exactly lambda.

The same lambda equals d times the smallest squared Schmidt coefficient of
the normalized state, which is how the fusion engine evaluates it per
measurement pattern without synthesizing U.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "CorrectionInput",
    "CorrectionResult",
    "DegenerateInputError",
    "gram_matrix",
    "isometry_extension",
    "complete_isometry",
    "correction_unitary",
    "conversion_probability",
    "schmidt_coefficients",
    "usd_povm",
]

# Eigenvalues within this relative band of the minimum count as equal to it
# when the number of extra dimensions is determined.
DEGENERACY_RTOL = 1e-8
INDEPENDENCE_TOL = 1e-9
RESIDUAL_TOL = 1e-10


class DegenerateInputError(ValueError):
    """Conditional states are linearly dependent; no correction exists.

    Carries lam = 0 so pattern-level callers can treat the outcome as a
    failure instead of aborting a whole enumeration.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.lam = 0.0


@dataclass(frozen=True)
class CorrectionInput:
    """The d conditional states |psi_k>, stored as columns of a d x d matrix."""

    psi_columns: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.psi_columns, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"need d vectors of dimension d, got shape {m.shape}")
        object.__setattr__(self, "psi_columns", m)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]]) -> "CorrectionInput":
        cols = np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors])
        return cls(cols)

    @property
    def d(self) -> int:
        return self.psi_columns.shape[0]

    def vector(self, k: int) -> np.ndarray:
        return self.psi_columns[:, k]


@dataclass(frozen=True)
class CorrectionResult:
    """Synthesized correction: unitary U, heralding factor, extra-dim count."""

    unitary: np.ndarray
    lam: float
    s: int
    gram: np.ndarray

    @property
    def total_dim(self) -> int:
        return self.unitary.shape[0]


def gram_matrix(inp: CorrectionInput) -> np.ndarray:
    """B[i, j] = <psi_j | psi_i>; Hermitian, PSD, positive definite iff the
    conditional states are independent."""
    phi = inp.psi_columns
    return np.conj(phi.conj().T @ phi)


def _canonical_row_phase(row: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its first significant entry is
    real positive (determinism of goldens)."""
    for x in row:
        if abs(x) > RESIDUAL_TOL:
            return row * (abs(x) / x)
    return row


def isometry_extension(
    m: np.ndarray, *, atol: float = 1e-9, n_rows: int | None = None
) -> np.ndarray:
    """Rows S completing a contraction M (max singular value 1) to an
    isometry [M; S].

    S has one row per singular value strictly below 1, built from the
    corresponding right singular vectors: row i is
    sqrt(1 - m_i^2) <v_i|, ordered by ascending singular value.  The row
    count is minimal: any isometry extending M needs at least that many.
    `n_rows` overrides the count when the caller has already resolved the
    degeneracy structure by other means.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"need a square matrix, got shape {m.shape}")
    d = m.shape[0]
    _, sing, vh = np.linalg.svd(m)
    if abs(sing[0] - 1.0) > atol:
        raise ValueError(f"maximum singular value must be 1, got {sing[0]:.12f}")
    if n_rows is None:
        n_rows = int(np.sum(sing < 1.0 - DEGENERACY_RTOL))
    rows = []
    for i in range(d - 1, d - 1 - n_rows, -1):  # ascending singular value
        row = math.sqrt(max(0.0, 1.0 - sing[i] ** 2)) * vh[i, :]
        rows.append(_canonical_row_phase(row))
    if not rows:
        return np.zeros((0, d), dtype=np.complex128)
    return np.array(rows, dtype=np.complex128)


def complete_isometry(isometry: np.ndarray) -> np.ndarray:
    """Complete an (n x k) isometry to an n x n unitary.

    New columns come from Gram-Schmidt against the standard basis in index
    order, skipping candidates whose residual norm falls below tolerance;
    each completed column is phased so its first significant entry is real
    positive.
    """
    v = np.asarray(isometry, dtype=np.complex128)
    n, k = v.shape
    cols = [v[:, i] for i in range(k)]
    for idx in range(n):
        if len(cols) == n:
            break
        e = np.zeros(n, dtype=np.complex128)
        e[idx] = 1.0
        r = e.copy()
        for c in cols:
            r -= np.vdot(c, e) * c
        norm = np.linalg.norm(r)
        if norm < RESIDUAL_TOL:
            continue
        cols.append(_canonical_row_phase(r / norm))
    if len(cols) != n:
        raise RuntimeError("Gram-Schmidt completion failed to span the space")
    return np.column_stack(cols)


def correction_unitary(inp: CorrectionInput) -> CorrectionResult:
    """Synthesize the heralded correction for the given conditional states.

    Raises DegenerateInputError when the states are not linearly
    independent (smallest Gram eigenvalue below tolerance).
    """
    d = inp.d
    b = gram_matrix(inp)
    eigs = np.linalg.eigvalsh(b)
    lam = float(eigs[0])
    if lam <= INDEPENDENCE_TOL:
        raise DegenerateInputError(
            f"states not linearly independent (smallest Gram eigenvalue {lam:.3e})"
        )
    band = DEGENERACY_RTOL * float(eigs[-1])
    s = int(np.sum(eigs > lam + band))
    a = np.linalg.inv(inp.psi_columns)
    m = math.sqrt(lam) * a
    rows = isometry_extension(m, atol=1e-7, n_rows=s)
    iso = np.vstack([m, rows]) if s else m
    u = complete_isometry(iso)
    return CorrectionResult(unitary=u, lam=lam, s=s, gram=b)


def conversion_probability(
    source_schmidt: Sequence[float], target_schmidt: Sequence[float]
) -> float:
    """Optimal local-POVM probability of converting one bipartite pure state
    into another, from the partial sums of squared Schmidt coefficients.

    With a Bell-pair target this reduces to d times the smallest squared
    source coefficient.
    """
    lam = np.sort(np.asarray(source_schmidt, dtype=np.float64))
    mu = np.sort(np.asarray(target_schmidt, dtype=np.float64))
    if lam.shape != mu.shape:
        raise ValueError("Schmidt lists must have equal length")
    if np.any(lam < -1e-12) or np.any(mu < -1e-12):
        raise ValueError("Schmidt coefficients must be non-negative")
    for name, v in (("source", lam), ("target", mu)):
        total = float(np.sum(v**2))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{name} squared coefficients sum to {total}, not 1")
    best = 1.0
    num = 0.0
    den = 0.0
    for t in range(len(lam) - 1):
        num += lam[t] ** 2
        den += mu[t] ** 2
        if den > 0:
            best = min(best, num / den)
        elif num > 0:
            # Zero target coefficient with nonzero source mass: ratio is
            # unconstrained, skip.
            continue
    return float(best)


def schmidt_coefficients(state) -> np.ndarray:
    """Ascending singular values of the two-qudit amplitude matrix.

    Squares sum to the squared norm of the state.
    """
    mat = state.amplitude_matrix() if hasattr(state, "amplitude_matrix") else state
    return np.linalg.svd(np.asarray(mat, dtype=np.complex128), compute_uv=False)[::-1]


def usd_povm(result: CorrectionResult, inp: CorrectionInput) -> list[np.ndarray]:
    """POVM on the extended space that unambiguously discriminates the
    conditional states.

    Element k projects onto output mode k after the correction unitary
    (E_k = U^dag |k><k| U), so <psi_j| E_k |psi_j> is proportional to
    delta_jk; the final element completes the sum to the identity and is the
    inconclusive outcome.
    """
    u = result.unitary
    n = result.total_dim
    d = inp.d
    elements = []
    for k in range(d):
        row = u[k, :]
        elements.append(np.outer(row.conj(), row))
    completion = np.eye(n, dtype=np.complex128) - sum(elements)
    elements.append(completion)
    return elements
