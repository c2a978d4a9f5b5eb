"""Named qudit and photonic ancilla states used across the fusion protocols.

A linear optical qudit of dimension d is one photon across d modes; the
computational value k puts the photon in time bin k.  Multi-qudit states are
stored sparsely as a map from value tuples to amplitudes and convert
losslessly to Fock vectors through that encoding (port-major mode ordering:
flat mode = d * port + bin).  The reverse conversion fails loudly when any
term leaves the one-photon-per-qudit subspace.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

import numpy as np

from .fock import FockPattern, FockVector

__all__ = [
    "QuditState",
    "QuditPauli",
    "pauli_matrix",
    "bell_state",
    "w_state",
    "ancilla_A",
    "bunched_state",
    "boost_ancilla",
    "qudit_state_from_fock",
    "lookup_state",
]


class QuditState:
    """Sparse amplitudes over the n-qudit computational basis (dimension d)."""

    def __init__(self, d: int, n_qudits: int, amplitudes: Optional[dict] = None):
        if d < 2:
            raise ValueError("qudit dimension must be at least 2")
        self.d = int(d)
        self.n_qudits = int(n_qudits)
        self.amplitudes: dict[tuple[int, ...], complex] = {}
        if amplitudes:
            for values, amp in amplitudes.items():
                values = tuple(int(v) for v in values)
                if len(values) != self.n_qudits:
                    raise ValueError(f"expected {self.n_qudits} qudit values, got {values}")
                if any(not 0 <= v < self.d for v in values):
                    raise ValueError(f"qudit value out of range [0, {self.d}): {values}")
                if amp != 0:
                    self.amplitudes[values] = complex(amp)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) < 1e-10

    def normalized(self) -> "QuditState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return QuditState(
            self.d, self.n_qudits, {v: a / n for v, a in self.amplitudes.items()}
        )

    def tensor(self, other: "QuditState") -> "QuditState":
        if other.d != self.d:
            raise ValueError("qudit dimensions differ")
        out = {}
        for v1, a1 in self.amplitudes.items():
            for v2, a2 in other.amplitudes.items():
                out[v1 + v2] = a1 * a2
        return QuditState(self.d, self.n_qudits + other.n_qudits, out)

    def overlap(self, other: "QuditState") -> complex:
        """<self|other>."""
        if (self.d, self.n_qudits) != (other.d, other.n_qudits):
            raise ValueError("shape mismatch")
        return complex(
            sum(
                np.conj(a) * other.amplitudes[v]
                for v, a in self.amplitudes.items()
                if v in other.amplitudes
            )
        )

    def to_fock_vector(self) -> FockVector:
        """One-photon-per-qudit encoding: value k -> photon in bin k."""
        n_modes = self.d * self.n_qudits
        terms = {}
        for values, amp in self.amplitudes.items():
            occ = [0] * n_modes
            for port, k in enumerate(values):
                occ[self.d * port + k] = 1
            terms[FockPattern(occ)] = amp
        return FockVector(n_modes, terms)

    def amplitude_matrix(self) -> np.ndarray:
        """Dense d x d coefficient matrix of a two-qudit state."""
        if self.n_qudits != 2:
            raise ValueError("amplitude_matrix requires a two-qudit state")
        mat = np.zeros((self.d, self.d), dtype=np.complex128)
        for (k, l), amp in self.amplitudes.items():
            mat[k, l] = amp
        return mat

    def __repr__(self) -> str:
        return f"QuditState(d={self.d}, n_qudits={self.n_qudits}, terms={len(self.amplitudes)})"


def qudit_state_from_fock(state: FockVector, d: int) -> QuditState:
    """Inverse of the qudit encoding; raises if any term is outside the
    one-photon-per-qudit subspace."""
    if state.n_modes % d != 0:
        raise ValueError(f"{state.n_modes} modes do not split into qudits of dimension {d}")
    n_qudits = state.n_modes // d
    amps = {}
    for pat, amp in state.terms.items():
        values = []
        for port in range(n_qudits):
            block = pat[d * port : d * (port + 1)]
            if sum(block) != 1 or max(block) != 1:
                raise ValueError(
                    f"pattern {tuple(pat)} is not one photon per qudit in port {port}"
                )
            values.append(block.index(1))
        amps[tuple(values)] = amp
    return QuditState(d, n_qudits, amps)


# ----------------------------------------------------------------------
# Qudit Paulis
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuditPauli:
    """X^a Z^b in dimension d, with X|k> = |k+1 mod d> and Z|k> = omega^k |k>."""

    d: int
    x_power: int = 0
    z_power: int = 0


def pauli_matrix(pauli: QuditPauli) -> np.ndarray:
    d = pauli.d
    omega = np.exp(2j * np.pi / d)
    x = np.zeros((d, d), dtype=np.complex128)
    for k in range(d):
        x[(k + 1) % d, k] = 1.0
    z = np.diag(omega ** np.arange(d))
    return np.linalg.matrix_power(x, pauli.x_power % d) @ np.linalg.matrix_power(
        z, pauli.z_power % d
    )


# ----------------------------------------------------------------------
# Named states
# ----------------------------------------------------------------------


def bell_state(d: int) -> QuditState:
    """|B_0> = (1/sqrt(d)) sum_k |kk>."""
    if d < 2:
        raise ValueError("qudit dimension must be at least 2")
    amp = 1.0 / math.sqrt(d)
    return QuditState(d, 2, {(k, k): amp for k in range(d)})


def w_state(d: int) -> QuditState:
    """Single-qudit uniform superposition (1/sqrt(d)) sum_k |k>; one photon
    spread over d modes."""
    if d < 2:
        raise ValueError("qudit dimension must be at least 2")
    amp = 1.0 / math.sqrt(d)
    return QuditState(d, 1, {(k,): amp for k in range(d)})


def ancilla_A(d: int) -> QuditState:
    """Entangled (d-2)-qudit ancilla for the even-dimensional fusion circuit.

    Term r assigns qudit m the value (m + 2r) mod d, for r = 0..d/2-1, all
    with coefficient +1/sqrt(d/2):

        d=4:  (|01> + |23>)/sqrt(2)
        d=6:  (|0123> + |2345> + |4501>)/sqrt(3)

    Deleting the bins each qudit never occupies turns this into a
    (d-2)-partite GHZ state of local dimension d/2, up to cyclic relabeling.
    """
    if d < 4 or d % 2 != 0:
        raise ValueError("ancilla_A requires even d >= 4")
    amp = 1.0 / math.sqrt(d // 2)
    terms = {}
    for r in range(d // 2):
        values = tuple((m + 2 * r) % d for m in range(d - 2))
        terms[values] = amp
    return QuditState(d, d - 2, terms)


def bunched_state(r: int, mode: int, n_modes: int) -> FockVector:
    """|0...0 r 0...0>: r photons bunched in a single mode."""
    if r < 0:
        raise ValueError("photon count must be non-negative")
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode {mode} out of range for {n_modes} modes")
    occ = [0] * n_modes
    occ[mode] = r
    return FockVector.basis_state(occ)


def boost_ancilla(d: int) -> FockVector:
    """(1/sqrt(d)) (|d,0,..,0> + |0,d,..,0> + ... + |0,..,0,d>) on d modes.

    Every term has all its photons bunched in one mode, so each mode count
    is a multiple of d; interfering it with a fusion output port can convert
    certain failure patterns into successes without disturbing the rest.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    amp = 1.0 / math.sqrt(d)
    terms = {}
    for k in range(d):
        occ = [0] * d
        occ[k] = d
        terms[FockPattern(occ)] = amp
    return FockVector(d, terms)


# ----------------------------------------------------------------------
# Named-state lookup (CLI helper)
# ----------------------------------------------------------------------

_BUNCHED_RE = re.compile(r"^bunched:(\d+)@(\d+)/(\d+)$")


def lookup_state(name: str) -> FockVector:
    """Resolve a compact state name to a Fock vector.

    Supported forms: "A4" (entangled ancilla), "W3" (single-qudit uniform),
    "B3" (Bell pair), "boost:3", and "bunched:5@0/11" for r photons at a
    mode within a mode count.
    """
    name = name.strip()
    m = _BUNCHED_RE.match(name)
    if m:
        r, mode, n_modes = (int(g) for g in m.groups())
        return bunched_state(r, mode, n_modes)
    if name.startswith("boost:"):
        return boost_ancilla(int(name.split(":", 1)[1]))
    if name[:1] == "A" and name[1:].isdigit():
        return ancilla_A(int(name[1:])).to_fock_vector()
    if name[:1] == "W" and name[1:].isdigit():
        return w_state(int(name[1:])).to_fock_vector()
    if name[:1] == "B" and name[1:].isdigit():
        return bell_state(int(name[1:])).to_fock_vector()
    raise ValueError(f"unknown state name: {name!r}")
