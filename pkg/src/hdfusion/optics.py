"""Interferometer construction and composition.

Every circuit used by the fusion protocols is assembled from four
constructors: discrete-Fourier interferometers, mode permutations, the
parameterized two-mode coupler, and embeddings of small blocks into larger
mode sets.  All constructors validate unitarity on construction.

The root of unity is fixed to omega = exp(+2*pi*i/n).  Success probabilities
are invariant under complex conjugation of every circuit, so the sign choice
only pins down reported amplitudes.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "ModeUnitary",
    "NonUnitaryError",
    "fourier_matrix",
    "permutation_unitary",
    "embed",
    "compose",
    "beamsplitter_r",
]

UNITARITY_TOL = 1e-10


class NonUnitaryError(ValueError):
    """A matrix supplied as an interferometer fails the unitarity check."""


class ModeUnitary:
    """An n x n complex matrix acting linearly on mode creation operators."""

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"mode unitary must be square, got shape {m.shape}")
        dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if dev > UNITARITY_TOL:
            raise NonUnitaryError(
                f"matrix is not unitary: max |U^dag U - I| = {dev:.3e}"
            )
        m.setflags(write=False)
        self.matrix = m

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self.matrix.conj().T)

    def __repr__(self) -> str:
        return f"ModeUnitary(n_modes={self.n_modes})"


def fourier_matrix(n: int) -> ModeUnitary:
    """Discrete Fourier interferometer F_n[i, j] = omega^(i j) / sqrt(n).

    The 1/sqrt(n) normalization makes the matrix unitary; F_2 is the
    Hadamard beamsplitter.
    """
    if n < 1:
        raise ValueError("Fourier dimension must be at least 1")
    idx = np.arange(n)
    omega = np.exp(2j * np.pi / n)
    return ModeUnitary(omega ** np.outer(idx, idx) / np.sqrt(n))


def permutation_unitary(perm: Sequence[int]) -> ModeUnitary:
    """Permutation matrix sending a photon in mode i to mode perm[i]."""
    perm = [int(p) for p in perm]
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
    m = np.zeros((n, n), dtype=np.complex128)
    for i, p in enumerate(perm):
        m[p, i] = 1.0
    return ModeUnitary(m)


def embed(unitary: ModeUnitary, target_modes: Sequence[int], total_modes: int) -> ModeUnitary:
    """Act with `unitary` on the listed modes (in order), identity elsewhere."""
    targets = [int(t) for t in target_modes]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target modes: {targets}")
    if len(targets) != unitary.n_modes:
        raise ValueError(
            f"{len(targets)} target modes for a {unitary.n_modes}-mode unitary"
        )
    if any(t < 0 or t >= total_modes for t in targets):
        raise ValueError(f"target mode out of range 0..{total_modes - 1}: {targets}")
    m = np.eye(total_modes, dtype=np.complex128)
    for a, ta in enumerate(targets):
        for b, tb in enumerate(targets):
            m[ta, tb] = unitary.matrix[a, b]
    return ModeUnitary(m)


def compose(first: ModeUnitary, second: ModeUnitary) -> ModeUnitary:
    """Circuit composition: `first` is applied first, so the matrix is
    second @ first."""
    if first.n_modes != second.n_modes:
        raise ValueError(
            f"mode-count mismatch: {first.n_modes} vs {second.n_modes}"
        )
    return ModeUnitary(second.matrix @ first.matrix)


def beamsplitter_r(reflectivity: float) -> ModeUnitary:
    """Two-mode coupler [[sqrt(R), i sqrt(1-R)], [i sqrt(1-R), sqrt(R)]].

    R = 1 is the identity, R = 0 a full swap (times i), R = 0.5 a balanced
    splitter.
    """
    r = float(reflectivity)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity must lie in [0, 1], got {r}")
    t = 1j * np.sqrt(1.0 - r)
    s = np.sqrt(r)
    return ModeUnitary(np.array([[s, t], [t, s]], dtype=np.complex128))
