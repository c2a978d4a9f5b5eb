"""Bosonic Fock states on a finite set of optical modes.

An m-mode Fock state |n_0 n_1 ... n_{m-1}> is a tuple of occupation numbers.
A linear optical unitary U acts on creation operators as

    a_k^dag  ->  sum_m U[m, k] a_m^dag,

so a single photon entering mode k exits in the superposition given by column
k of U.  The amplitude between two Fock states is the permanent of the
submatrix of U obtained by repeating row m once per output photon in mode m
and column k once per input photon in mode k, divided by the square root of
the product of all occupation factorials.

Permanents are evaluated with the Gray-code Ryser formula, O(n * 2^n) for n
photons; the naive permutation sum is kept in the test suite as an
independent oracle.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable, Iterable, Iterator, Optional

import numpy as np
from numba import njit

__all__ = [
    "FockPattern",
    "FockVector",
    "QuditIndex",
    "permanent",
    "transition_amplitude",
    "apply_unitary",
    "enumerate_patterns",
    "pattern_count",
]

PRUNE_TOL = 1e-14


class FockPattern(tuple):
    """Occupation numbers of m modes; hashable and usable as a dict key."""

    def __new__(cls, occupations: Iterable[int]) -> "FockPattern":
        pat = super().__new__(cls, (int(n) for n in occupations))
        if any(n < 0 for n in pat):
            raise ValueError(f"occupation numbers must be non-negative: {tuple(pat)}")
        return pat

    @property
    def n_modes(self) -> int:
        return len(self)

    @property
    def total_photons(self) -> int:
        return sum(self)

    def modes(self) -> tuple[int, ...]:
        """Mode index of every photon, with repetition (sorted ascending)."""
        return tuple(m for m, n in enumerate(self) for _ in range(n))

    def factorial_product(self) -> int:
        return math.prod(math.factorial(n) for n in self)

    def __repr__(self) -> str:
        return f"FockPattern({tuple(self)})"


class QuditIndex:
    """Two-level mode address: a qudit (port) and a time bin within it.

    The flat mode index is d * port + time_bin, so consecutive blocks of d
    modes make up one qudit.
    """

    __slots__ = ("port", "time_bin")

    def __init__(self, port: int, time_bin: int):
        self.port = int(port)
        self.time_bin = int(time_bin)

    def flat(self, d: int) -> int:
        if not 0 <= self.time_bin < d:
            raise ValueError(f"time bin {self.time_bin} outside [0, {d})")
        return d * self.port + self.time_bin

    @classmethod
    def from_flat(cls, mode: int, d: int) -> "QuditIndex":
        port, time_bin = divmod(mode, d)
        return cls(port, time_bin)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuditIndex)
            and self.port == other.port
            and self.time_bin == other.time_bin
        )

    def __hash__(self) -> int:
        return hash((self.port, self.time_bin))

    def __repr__(self) -> str:
        return f"QuditIndex(port={self.port}, time_bin={self.time_bin})"


class FockVector:
    """Sparse superposition of Fock states: map from pattern to amplitude.

    The states used here have very few terms while the ambient enumeration
    space is enormous, so a dict keyed by pattern is the right storage.
    """

    def __init__(self, n_modes: int, terms: Optional[dict] = None):
        self.n_modes = int(n_modes)
        self.terms: dict[FockPattern, complex] = {}
        if terms:
            for pat, amp in terms.items():
                pat = FockPattern(pat)
                if pat.n_modes != self.n_modes:
                    raise ValueError(
                        f"pattern {tuple(pat)} has {pat.n_modes} modes, expected {self.n_modes}"
                    )
                if amp != 0:
                    self.terms[pat] = complex(amp)

    @classmethod
    def basis_state(cls, pattern: Iterable[int]) -> "FockVector":
        pat = FockPattern(pattern)
        return cls(pat.n_modes, {pat: 1.0})

    @classmethod
    def vacuum(cls, n_modes: int) -> "FockVector":
        return cls(n_modes, {FockPattern((0,) * n_modes): 1.0})

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) < 1e-10

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.n_modes, {p: a / n for p, a in self.terms.items()})

    def scaled(self, factor: complex) -> "FockVector":
        return FockVector(self.n_modes, {p: a * factor for p, a in self.terms.items()})

    def pruned(self, tol: float = PRUNE_TOL) -> "FockVector":
        return FockVector(
            self.n_modes, {p: a for p, a in self.terms.items() if abs(a) > tol}
        )

    def tensor(self, other: "FockVector") -> "FockVector":
        out: dict[FockPattern, complex] = {}
        for p1, a1 in self.terms.items():
            for p2, a2 in other.terms.items():
                out[FockPattern(tuple(p1) + tuple(p2))] = a1 * a2
        return FockVector(self.n_modes + other.n_modes, out)

    def overlap(self, other: "FockVector") -> complex:
        """<self|other> over matching patterns."""
        if self.n_modes != other.n_modes:
            raise ValueError("mode-count mismatch")
        small, large = (
            (self.terms, other.terms)
            if len(self.terms) <= len(other.terms)
            else (other.terms, self.terms)
        )
        acc = 0.0 + 0.0j
        for pat, amp in small.items():
            if pat in large:
                if small is self.terms:
                    acc += np.conj(amp) * large[pat]
                else:
                    acc += np.conj(large[pat]) * amp
        return complex(acc)

    def total_photons(self) -> set[int]:
        return {p.total_photons for p in self.terms}

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"FockVector(n_modes={self.n_modes}, terms={len(self.terms)})"


# ----------------------------------------------------------------------
# Permanents
# ----------------------------------------------------------------------


@njit("complex128(complex128[:, ::1])", cache=True, nogil=True)
def _permanent_ryser(a):  # pragma: no cover - exercised via permanent()
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    row_sums = np.zeros(n, np.complex128)
    total = 0.0 + 0.0j
    gray = 0
    sign = 1.0
    # Iterate subsets in Gray-code order; |S| parity tracked via `sign`.
    for k in range(1, 2**n):
        g = k ^ (k >> 1)
        bit = g ^ gray
        j = 0
        while (bit >> j) & 1 == 0:
            j += 1
        if g & bit:
            for i in range(n):
                row_sums[i] += a[i, j]
            sign = -sign
        else:
            for i in range(n):
                row_sums[i] -= a[i, j]
            sign = -sign
        gray = g
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= row_sums[i]
        total += sign * prod
    if n % 2 == 1:
        total = -total
    return total


def permanent(matrix: np.ndarray) -> complex:
    """Permanent of a square complex matrix (Gray-code Ryser, O(n 2^n)).

    The 0x0 permanent is 1 by the empty-product convention.
    """
    a = np.ascontiguousarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {a.shape}")
    if not a.flags.writeable:
        a = a.copy()
    return complex(_permanent_ryser(a))


# ----------------------------------------------------------------------
# Transition amplitudes
# ----------------------------------------------------------------------


def transition_amplitude(unitary, input_pattern, output_pattern) -> complex:
    """<output| U |input> for a linear optical unitary acting on Fock states.

    Photon-number mismatch gives exactly 0 (the unitary conserves photon
    number); a mode-count mismatch is a usage error and raises.
    """
    matrix = getattr(unitary, "matrix", unitary)
    matrix = np.asarray(matrix, dtype=np.complex128)
    inp = FockPattern(input_pattern)
    out = FockPattern(output_pattern)
    m = matrix.shape[0]
    if inp.n_modes != m or out.n_modes != m:
        raise ValueError(
            f"pattern length ({inp.n_modes}, {out.n_modes}) does not match "
            f"unitary dimension {m}"
        )
    if inp.total_photons != out.total_photons:
        return 0.0 + 0.0j
    if inp.total_photons == 0:
        return 1.0 + 0.0j
    sub = matrix[np.ix_(out.modes(), inp.modes())]
    norm = math.sqrt(inp.factorial_product() * out.factorial_product())
    return complex(permanent(sub) / norm)


def apply_unitary(state: FockVector, unitary) -> FockVector:
    """Evolve a sparse Fock superposition through a mode unitary.

    Output amplitudes are summed over all input terms; patterns below the
    pruning threshold are dropped so sparse maps stay small.
    """
    matrix = getattr(unitary, "matrix", unitary)
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape[0] != state.n_modes:
        raise ValueError(
            f"unitary dimension {matrix.shape[0]} does not match state on "
            f"{state.n_modes} modes"
        )
    out: dict[FockPattern, complex] = {}
    for n_photons in sorted(state.total_photons()):
        group = {p: a for p, a in state.terms.items() if p.total_photons == n_photons}
        for target in enumerate_patterns(state.n_modes, n_photons):
            acc = 0.0 + 0.0j
            for pat, amp in group.items():
                acc += amp * transition_amplitude(matrix, pat, target)
            if abs(acc) > PRUNE_TOL:
                out[target] = out.get(target, 0.0) + acc
    return FockVector(state.n_modes, out).pruned()


# ----------------------------------------------------------------------
# Pattern enumeration
# ----------------------------------------------------------------------


def enumerate_patterns(
    n_modes: int,
    n_photons: int,
    pattern_filter: Optional[Callable[[FockPattern], bool]] = None,
) -> Iterator[FockPattern]:
    """All weak compositions of n_photons into n_modes parts, each once.

    Order places photons in the earliest modes first: (2,0), (1,1), (0,2).
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    if n_photons < 0:
        raise ValueError("n_photons must be non-negative")

    def rec(prefix: tuple, modes_left: int, photons_left: int):
        if modes_left == 1:
            yield prefix + (photons_left,)
            return
        for k in range(photons_left, -1, -1):
            yield from rec(prefix + (k,), modes_left - 1, photons_left - k)

    for tup in rec((), n_modes, n_photons):
        pat = FockPattern(tup)
        if pattern_filter is None or pattern_filter(pat):
            yield pat


def pattern_count(n_modes: int, n_photons: int) -> int:
    """Stars-and-bars count C(n_photons + n_modes - 1, n_modes - 1)."""
    return math.comb(n_photons + n_modes - 1, n_modes - 1)
