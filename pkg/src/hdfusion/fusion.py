"""Fusion protocol catalog and the success-probability engine.

A protocol consists of a circuit on the active modes, an ancillary photonic
state, the mode placement of the two input qudits, and a pattern policy that
enumerates and classifies photon-number-resolving measurement patterns.

For each good pattern p the engine computes the conditional two-qudit state
by back-propagating the measurement through the circuit:

    M_p[i, j] = <p| U |i, j, anc>,      w_p = sum_ij |M_p[i, j]|^2.

Patterns classified as phase-correctable keep a correction factor
lambda_p = 1.  Patterns eligible for extra-dimensional corrections get
lambda_p = d * sigma_min^2 of the normalized conditional state (equal to the
smallest Gram eigenvalue of the conditional decomposition, and hence to the
heralding probability of the synthesized correction unitary).  The success
probability for random input states is (1/d^2) * sum_p w_p lambda_p.

Pattern enumeration is filter-first: each policy generates only the patterns
its structural constraints allow, so large protocols never walk the full
composition space.  Per-pattern results are computed independently (thread
workers share nothing) and reduced in a canonical order, making reported
totals bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

from .fock import FockPattern, FockVector, enumerate_patterns, _permanent_ryser
from .optics import (
    ModeUnitary,
    compose,
    embed,
    fourier_matrix,
    permutation_unitary,
)
from .states import (
    QuditState,
    ancilla_A,
    bell_state,
    boost_ancilla,
    bunched_state,
    w_state,
)

__all__ = [
    "GOOD_EXACT",
    "GOOD_EDC",
    "FAIL",
    "FusionProtocol",
    "PatternOutcome",
    "FusionReport",
    "pattern_outcome",
    "success_probability",
    "completeness_by_input",
    "bell_overlap",
    "fourier_projection_state",
    "protocol_even",
    "protocol_odd",
    "protocol_wstate",
    "protocol_ztl",
    "protocol_boost_qubit",
    "protocol_boost_qutrit",
    "protocol_ghz_boost",
    "protocol_appendix_d",
    "resolve_workers",
]

GOOD_EXACT = "good-exact"
GOOD_EDC = "good-with-edc"
FAIL = "fail"

WEIGHT_TOL = 1e-13
MAXENT_TOL = 1e-9
# Squared-Schmidt degeneracy band for counting extra dimensions, relative to
# the largest squared coefficient.
S_COUNT_RTOL = 1e-8

WORKERS_ENV_VAR = "HDFUSION_WORKERS"


def resolve_workers(flag_value: Optional[int] = None) -> int:
    """Worker count: explicit flag wins, then the environment variable."""
    if flag_value is not None and flag_value > 0:
        return int(flag_value)
    env = os.environ.get(WORKERS_ENV_VAR, "").strip()
    if env:
        try:
            n = int(env)
            if n > 0:
                return n
        except ValueError:
            pass
    return 1


# ----------------------------------------------------------------------
# Pattern policies
# ----------------------------------------------------------------------


class FourierBinPolicy:
    """One photon per time bin across a grid of n_ports x n_bins modes.

    Good patterns are indexed by the port receiving the photon in each bin;
    `restrict_same_port` keeps only patterns with every photon in a single
    port.  Classification of accepted patterns is supplied by the protocol
    (phase-correctable or correction-eligible).
    """

    def __init__(
        self,
        n_ports: int,
        n_bins: int,
        kind: str,
        restrict_same_port: bool = False,
    ):
        self.n_ports = n_ports
        self.n_bins = n_bins
        self.kind = kind
        self.restrict_same_port = restrict_same_port
        self.n_modes = n_ports * n_bins
        self.n_photons = n_bins

    def patterns(self) -> Iterable[tuple[tuple[int, ...], str, str]]:
        bins = self.n_bins
        if self.restrict_same_port:
            assignments = (((q,) * bins) for q in range(self.n_ports))
        else:
            assignments = product(range(self.n_ports), repeat=bins)
        for q in assignments:
            occ = [0] * self.n_modes
            for j, port in enumerate(q):
                occ[bins * port + j] = 1
            yield tuple(occ), self.kind, ""

    def classify(self, pattern: Sequence[int]) -> str:
        occ = tuple(pattern)
        if sum(occ) != self.n_photons or max(occ, default=0) > 1:
            return FAIL
        if any(occ[self.n_ports * self.n_bins :]):
            return FAIL
        for j in range(self.n_bins):
            if sum(occ[self.n_bins * i + j] for i in range(self.n_ports)) != 1:
                return FAIL
        if self.restrict_same_port:
            ports = {m // self.n_bins for m, n in enumerate(occ) if n}
            if len(ports) != 1:
                return FAIL
        return self.kind


class AllPatternsPolicy:
    """Every photon-count-compatible pattern is eligible (with corrections)."""

    def __init__(self, n_modes: int, n_photons: int, kind: str = GOOD_EDC):
        self.n_modes = n_modes
        self.n_photons = n_photons
        self.kind = kind

    def patterns(self) -> Iterable[tuple[tuple[int, ...], str, str]]:
        for pat in enumerate_patterns(self.n_modes, self.n_photons):
            yield tuple(pat), self.kind, ""

    def classify(self, pattern: Sequence[int]) -> str:
        return self.kind if sum(pattern) == self.n_photons else FAIL


class GhzBoostPolicy:
    """Measurement rules for the boosted Fourier-projection fusion.

    The active modes are d fusion ports plus d-1 bunched-ancilla groups of d
    modes each; mode position within a group is its time bin.  A pattern is

      * a direct success when every time-bin total is congruent to 1 mod d
        (the bunched ancillae shift bins only in multiples of d, so this
        pins the original photons to one per bin), or
      * a boosted success when the non-boosted ports are empty, every bin
        total equals d, and the group totals m_j satisfy
        sum_j j * m_j = 0 mod d,

    and a failure otherwise.  Direct patterns still go through the usual
    correction weighting; boosted patterns project onto maximally entangled
    states, which the engine confirms numerically rather than assuming.
    """

    def __init__(self, d: int):
        self.d = d
        # slots: ports 0..d-1, then ancilla groups 1..d-1
        self.n_slots = 2 * d - 1
        self.n_modes = d * self.n_slots
        self.n_photons = d + d * (d - 1)

    def _mode(self, slot: int, time_bin: int) -> int:
        d = self.d
        if slot < d:
            return d * slot + time_bin
        return d * d + d * (slot - d) + time_bin

    def patterns(self) -> Iterable[tuple[tuple[int, ...], str, str]]:
        yield from self._direct_patterns()
        yield from self._boosted_patterns()

    def _bin_fillings(self, total: int, slots: Sequence[int]):
        """Weak compositions of `total` over the given slot list."""

        def rec(prefix, remaining, k):
            if k == len(slots) - 1:
                yield prefix + (remaining,)
                return
            for take in range(remaining, -1, -1):
                yield from rec(prefix + (take,), remaining - take, k + 1)

        yield from rec((), total, 0)

    def _direct_patterns(self):
        d = self.d
        slots = list(range(self.n_slots))
        max_total = self.n_photons
        bin_totals = [t for t in range(1, max_total + 1) if t % d == 1]

        def totals_rec(prefix, remaining, bins_left):
            if bins_left == 1:
                if remaining in bin_totals:
                    yield prefix + (remaining,)
                return
            for t in bin_totals:
                if t <= remaining:
                    yield from totals_rec(prefix + (t,), remaining - t, bins_left - 1)

        for totals in totals_rec((), self.n_photons, d):
            per_bin = [list(self._bin_fillings(t, slots)) for t in totals]
            for combo in product(*per_bin):
                occ = [0] * self.n_modes
                for b in range(d):
                    for slot, count in enumerate(combo[b]):
                        if count:
                            occ[self._mode(slot, b)] += count
                yield tuple(occ), GOOD_EDC, "direct"

    def _boosted_patterns(self):
        d = self.d
        # photons confined to port 0 and the ancilla groups; d per bin
        boost_slots = [0] + list(range(d, self.n_slots))
        per_bin = list(self._bin_fillings(d, boost_slots))
        for combo in product(per_bin, repeat=d):
            group_totals = [0] * d  # index 0 = port-0 block, then groups
            occ = [0] * self.n_modes
            for b in range(d):
                for pos, slot in enumerate(boost_slots):
                    count = combo[b][pos]
                    if count:
                        occ[self._mode(slot, b)] += count
                        group_totals[pos] += count
            if sum(j * m for j, m in enumerate(group_totals)) % d == 0:
                yield tuple(occ), GOOD_EDC, "boosted"

    def classify(self, pattern: Sequence[int]) -> str:
        d = self.d
        occ = tuple(pattern)
        if sum(occ) != self.n_photons:
            return FAIL
        bins = [0] * d
        for m, n in enumerate(occ):
            bins[m % d] += n
        if all(t % d == 1 for t in bins):
            return GOOD_EDC  # direct
        ports_rest = occ[d : d * d]
        if not any(ports_rest) and all(t == d for t in bins):
            group_totals = [sum(occ[0:d])] + [
                sum(occ[d * d + d * g : d * d + d * (g + 1)]) for g in range(d - 1)
            ]
            if sum(j * m for j, m in enumerate(group_totals)) % d == 0:
                return GOOD_EDC  # boosted
        return FAIL

    def subclass(self, pattern: Sequence[int]) -> str:
        d = self.d
        bins = [0] * d
        for m, n in enumerate(pattern):
            bins[m % d] += n
        return "direct" if all(t % d == 1 for t in bins) else "boosted"


# ----------------------------------------------------------------------
# Protocol container
# ----------------------------------------------------------------------


@dataclass
class FusionProtocol:
    """Everything the engine needs to evaluate one fusion variant."""

    name: str
    d: int
    circuit: ModeUnitary
    ancilla: FockVector
    ancilla_modes: tuple[int, ...]
    qudit0_modes: tuple[int, ...]
    qudit1_modes: tuple[int, ...]
    policy: object
    corrections_enabled: bool = True
    d_embed: Optional[int] = None
    params: dict = field(default_factory=dict)

    @property
    def n_modes(self) -> int:
        return self.circuit.n_modes

    @property
    def n_photons(self) -> int:
        anc = self.ancilla.total_photons()
        if len(anc) != 1:
            raise ValueError("ancilla must have a definite photon number")
        return 2 + next(iter(anc))


@dataclass
class PatternOutcome:
    pattern: FockPattern
    weight: float
    lam: float
    s_extra: int
    kind: str
    tag: str
    projected_state: Optional[QuditState]


@dataclass
class FusionReport:
    protocol: str
    d: int
    params: dict
    success_probability: float
    avg_extra_dims: float
    pattern_count: int
    sum_weight_lambda: float
    extras: dict = field(default_factory=dict)
    outcomes: Optional[list[PatternOutcome]] = None

    def to_jsonable(self, per_pattern: bool = False) -> dict:
        doc = {
            "protocol": self.protocol,
            "d": self.d,
            "params": self.params,
            "success_probability": self.success_probability,
            "avg_extra_dims": self.avg_extra_dims,
            "pattern_count": self.pattern_count,
        }
        doc.update(self.extras)
        if per_pattern and self.outcomes is not None:
            doc["per_pattern"] = [
                {
                    "pattern": list(o.pattern),
                    "w": o.weight,
                    "lambda": o.lam,
                    "s": o.s_extra,
                }
                for o in self.outcomes
            ]
        return doc


# ----------------------------------------------------------------------
# Conditional-state kernel
# ----------------------------------------------------------------------


@njit(
    "void(complex128[:, ::1], int64[:, ::1], float64[::1], int64, int64,"
    " int64[:, ::1], complex128[::1], int64[::1], complex128[:, ::1])",
    cache=True,
    nogil=True,
)
def _accumulate_conditionals(
    u, pat_rows, pat_inv_norm, start, stop, term_cols, term_coef, term_cell, out
):  # pragma: no cover - exercised via the engine
    n = pat_rows.shape[1]
    n_terms = term_cols.shape[0]
    sub = np.empty((n, n), np.complex128)
    for p in range(start, stop):
        for t in range(n_terms):
            # Submatrix with an all-zero row or column has permanent 0;
            # catching it here skips most of the O(n 2^n) work on sparse
            # block circuits.
            skip = False
            for i in range(n):
                ri = pat_rows[p, i]
                row_zero = True
                for j in range(n):
                    v = u[ri, term_cols[t, j]]
                    sub[i, j] = v
                    if row_zero and (v.real != 0.0 or v.imag != 0.0):
                        row_zero = False
                if row_zero:
                    skip = True
                    break
            if skip:
                continue
            for j in range(n):
                col_zero = True
                for i in range(n):
                    v = sub[i, j]
                    if v.real != 0.0 or v.imag != 0.0:
                        col_zero = False
                        break
                if col_zero:
                    skip = True
                    break
            if skip:
                continue
            perm = _permanent_ryser(sub)
            out[p, term_cell[t]] += term_coef[t] * perm * pat_inv_norm[p]


def _input_terms(protocol: FusionProtocol):
    """Flattened (columns, coefficient, cell) list over two-qudit basis
    inputs and ancilla terms."""
    d = protocol.d
    cols_list = []
    coef_list = []
    cell_list = []
    anc_terms = list(protocol.ancilla.terms.items()) or [(FockPattern(()), 1.0)]
    for i in range(d):
        for j in range(d):
            base = [protocol.qudit0_modes[i], protocol.qudit1_modes[j]]
            for anc_pat, anc_amp in anc_terms:
                cols = list(base)
                for local_mode, count in enumerate(anc_pat):
                    cols.extend([protocol.ancilla_modes[local_mode]] * count)
                norm = math.sqrt(anc_pat.factorial_product())
                cols_list.append(cols)
                coef_list.append(complex(anc_amp) / norm)
                cell_list.append(i * d + j)
    term_cols = np.array(cols_list, dtype=np.int64)
    term_coef = np.array(coef_list, dtype=np.complex128)
    term_cell = np.array(cell_list, dtype=np.int64)
    return term_cols, term_coef, term_cell


def _pattern_arrays(patterns: list[tuple[int, ...]], n_photons: int):
    n_pat = len(patterns)
    rows = np.empty((n_pat, n_photons), dtype=np.int64)
    inv_norm = np.empty(n_pat, dtype=np.float64)
    for p, occ in enumerate(patterns):
        k = 0
        norm = 1.0
        for mode, count in enumerate(occ):
            for _ in range(count):
                rows[p, k] = mode
                k += 1
            if count > 1:
                norm *= math.factorial(count)
        if k != n_photons:
            raise ValueError(
                f"pattern {occ} has {k} photons, protocol expects {n_photons}"
            )
        inv_norm[p] = 1.0 / math.sqrt(norm)
    return rows, inv_norm


def conditional_matrices(
    protocol: FusionProtocol,
    patterns: list[tuple[int, ...]],
    workers: int = 1,
) -> np.ndarray:
    """Stack of unnormalized conditional matrices M_p for the given patterns."""
    d = protocol.d
    n_photons = protocol.n_photons
    u = protocol.circuit.matrix.copy(order="C")
    term_cols, term_coef, term_cell = _input_terms(protocol)
    rows, inv_norm = _pattern_arrays(patterns, n_photons)
    out = np.zeros((len(patterns), d * d), dtype=np.complex128)
    workers = max(1, workers)
    if workers == 1 or len(patterns) < 256:
        _accumulate_conditionals(
            u, rows, inv_norm, 0, len(patterns), term_cols, term_coef, term_cell, out
        )
    else:
        bounds = np.linspace(0, len(patterns), workers + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _accumulate_conditionals,
                    u,
                    rows,
                    inv_norm,
                    int(bounds[k]),
                    int(bounds[k + 1]),
                    term_cols,
                    term_coef,
                    term_cell,
                    out,
                )
                for k in range(workers)
            ]
            for f in futures:
                f.result()
    return out.reshape(len(patterns), d, d)


def _weights_and_corrections(protocol, mats, kinds):
    """Per-pattern (w, lambda, s) from the conditional matrices."""
    d = protocol.d
    sing = np.linalg.svd(mats, compute_uv=False)  # descending, [P, d]
    sq = sing**2
    w = sq.sum(axis=1)
    safe_w = np.where(w > 0, w, 1.0)
    lam_edc = d * sq[:, -1] / safe_w
    s_extra = np.sum(
        sq - sq[:, -1:] > S_COUNT_RTOL * sq[:, :1], axis=1
    ).astype(np.int64)
    lam = np.zeros_like(w)
    is_exact = kinds == GOOD_EXACT
    is_edc = kinds == GOOD_EDC
    lam[is_exact] = 1.0
    s_extra[is_exact] = 0
    if protocol.corrections_enabled:
        lam[is_edc] = lam_edc[is_edc]
    else:
        maxent = np.abs(lam_edc - 1.0) < MAXENT_TOL
        lam[is_edc & maxent] = 1.0
    lam[w <= WEIGHT_TOL] = 0.0
    return w, lam, s_extra


# ----------------------------------------------------------------------
# Engine entry points
# ----------------------------------------------------------------------


def pattern_outcome(protocol: FusionProtocol, pattern) -> PatternOutcome:
    """Evaluate a single measurement pattern."""
    pat = FockPattern(pattern)
    if pat.n_modes != protocol.n_modes:
        raise ValueError(
            f"pattern on {pat.n_modes} modes, protocol has {protocol.n_modes}"
        )
    if pat.total_photons != protocol.n_photons:
        raise ValueError(
            f"pattern has {pat.total_photons} photons, protocol expects "
            f"{protocol.n_photons}"
        )
    kind = protocol.policy.classify(pat)
    tag = (
        protocol.policy.subclass(pat)
        if kind != FAIL and hasattr(protocol.policy, "subclass")
        else ""
    )
    if kind == FAIL:
        return PatternOutcome(pat, 0.0, 0.0, 0, FAIL, tag, None)
    mats = conditional_matrices(protocol, [tuple(pat)])
    kinds = np.array([kind])
    w, lam, s = _weights_and_corrections(protocol, mats, kinds)
    projected = None
    if w[0] > WEIGHT_TOL:
        c = np.conj(mats[0]) / math.sqrt(w[0])
        amps = {
            (i, j): c[i, j]
            for i in range(protocol.d)
            for j in range(protocol.d)
            if abs(c[i, j]) > 1e-15
        }
        projected = QuditState(protocol.d, 2, amps)
    return PatternOutcome(pat, float(w[0]), float(lam[0]), int(s[0]), kind, tag, projected)


def success_probability(
    protocol: FusionProtocol,
    *,
    workers: Optional[int] = None,
    per_pattern: bool = False,
    input_overlap: Optional[float] = None,
) -> FusionReport:
    """Sum w_p * lambda_p over good patterns and scale by the input overlap
    (1/d^2 for random input states)."""
    workers = resolve_workers(workers)
    entries = list(protocol.policy.patterns())
    patterns = [e[0] for e in entries]
    kinds = np.array([e[1] for e in entries])
    tags = [e[2] for e in entries]
    if not patterns:
        raise ValueError("policy enumerates no candidate patterns")
    mats = conditional_matrices(protocol, patterns, workers=workers)
    w, lam, s_extra = _weights_and_corrections(protocol, mats, kinds)

    wl = w * lam
    total = float(np.sum(wl))
    overlap = (1.0 / protocol.d**2) if input_overlap is None else float(input_overlap)
    contributing = w > WEIGHT_TOL
    corrected = contributing & (lam > 1e-12)
    avg_s = float(np.mean(s_extra[corrected])) if np.any(corrected) else 0.0

    extras: dict = {
        "avg_extra_dims_weighted": (
            float(np.sum(s_extra[corrected] * wl[corrected]) / np.sum(wl[corrected]))
            if np.any(corrected) and np.sum(wl[corrected]) > 0
            else 0.0
        )
    }
    if any(tags):
        tag_arr = np.array(tags)
        for tag in sorted(set(tags)):
            if tag:
                sel = tag_arr == tag
                extras[f"sum_weight_lambda_{tag}"] = float(np.sum(wl[sel]))
                extras[f"probability_{tag}"] = float(np.sum(wl[sel])) * overlap

    outcomes = None
    if per_pattern:
        outcomes = [
            PatternOutcome(
                FockPattern(patterns[p]),
                float(w[p]),
                float(lam[p]),
                int(s_extra[p]),
                str(kinds[p]),
                tags[p],
                None,
            )
            for p in range(len(patterns))
            if w[p] > WEIGHT_TOL
        ]

    return FusionReport(
        protocol=protocol.name,
        d=protocol.d,
        params=dict(protocol.params),
        success_probability=total * overlap,
        avg_extra_dims=avg_s,
        pattern_count=int(np.sum(contributing)),
        sum_weight_lambda=total,
        extras=extras,
        outcomes=outcomes,
    )


def completeness_by_input(protocol: FusionProtocol) -> np.ndarray:
    """sum_p |<p|U|i,j,anc>|^2 over the full pattern space, per basis input.

    Equals 1 for every input when the circuit is unitary; used as the
    detector-completeness invariant on small instances.
    """
    patterns = [
        tuple(p) for p in enumerate_patterns(protocol.n_modes, protocol.n_photons)
    ]
    mats = conditional_matrices(protocol, patterns)
    return np.sum(np.abs(mats) ** 2, axis=0)


def bell_overlap(chi0: QuditState, chi1: Optional[QuditState] = None) -> float:
    """|<B_0| (|chi0>|chi1>) |^2; with one argument, chi0 is the two-qudit
    state itself."""
    state = chi0 if chi1 is None else chi0.tensor(chi1)
    if state.n_qudits != 2:
        raise ValueError("bell_overlap needs a two-qudit state")
    return abs(bell_state(state.d).overlap(state)) ** 2


def fourier_projection_state(d: int, q: Sequence[int]) -> QuditState:
    """Unnormalized d-qudit state onto which a successful Fourier projection
    with pattern q projects.

    q[i] is the port registering the photon of time bin i.  The coefficient
    of the basis ket assigning value k_i to qudit i is
    d^(-d/2) * omega^(-sum_i i q[k_i]), summed over all value assignments in
    which the k_i are distinct (labels follow the direct amplitude
    computation <p| U |k>).
    """
    q = tuple(int(x) for x in q)
    if len(q) != d or any(not 0 <= x < d for x in q):
        raise ValueError(f"need d port indices in [0, {d}), got {q}")
    omega = np.exp(2j * np.pi / d)
    scale = d ** (-d / 2)
    amps = {}
    for k in permutations(range(d)):
        phase = sum(i * q[k[i]] for i in range(d))
        amps[k] = scale * omega ** (-phase)
    return QuditState(d, d, amps)


# ----------------------------------------------------------------------
# Circuit builders
# ----------------------------------------------------------------------


def _fourier_projection_layer(n_ports: int, n_bins: int, total_modes: int) -> ModeUnitary:
    """F_{n_ports} across the ports of every time bin (port-major layout)."""
    f = fourier_matrix(n_ports)
    layer = ModeUnitary(np.eye(total_modes))
    for j in range(n_bins):
        targets = [n_bins * i + j for i in range(n_ports)]
        layer = compose(layer, embed(f, targets, total_modes))
    return layer


def _port1_bin_swap(n_bins: int, total_modes: int) -> ModeUnitary:
    """Permutation (01)(23)... applied to the time bins of port 1."""
    perm = list(range(total_modes))
    for j in range(0, n_bins - 1, 2):
        a = n_bins * 1 + j
        perm[a], perm[a + 1] = perm[a + 1], perm[a]
    return permutation_unitary(perm)


# ----------------------------------------------------------------------
# Protocol catalog
# ----------------------------------------------------------------------


def protocol_even(d: int) -> FusionProtocol:
    """Fourier-projection fusion for even d: success probability 2/d^2.

    Port 1's time bins are swapped pairwise, ports 2..d-1 carry the
    entangled ancilla, and every one-photon-per-bin pattern succeeds up to
    phase corrections.
    """
    if d < 2 or d % 2 != 0:
        raise ValueError("protocol_even requires even d >= 2")
    total = d * d
    circuit = compose(_port1_bin_swap(d, total), _fourier_projection_layer(d, d, total))
    if d >= 4:
        anc = ancilla_A(d).to_fock_vector()
        anc_modes = tuple(range(2 * d, total))
    else:
        anc = FockVector(0, {FockPattern(()): 1.0})
        anc_modes = ()
    policy = FourierBinPolicy(d, d, GOOD_EXACT)
    return FusionProtocol(
        name="even",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=anc_modes,
        qudit0_modes=tuple(range(d)),
        qudit1_modes=tuple(range(d, 2 * d)),
        policy=policy,
        params={"d": d},
    )


def protocol_odd(d: int, embed_dim: int) -> FusionProtocol:
    """Fusion for arbitrary d via embedding into an even dimension D >= d.

    Each input qudit gains D-d vacuum time bins and the D-dimensional
    even protocol runs unchanged; only input values below d are physical,
    giving success probability 2/(d*D).
    """
    D = embed_dim
    if D % 2 != 0 or D < d:
        raise ValueError("embedding dimension must be even and >= d")
    if d < 2:
        raise ValueError("qudit dimension must be at least 2")
    total = D * D
    circuit = compose(_port1_bin_swap(D, total), _fourier_projection_layer(D, D, total))
    if D >= 4:
        anc = ancilla_A(D).to_fock_vector()
        anc_modes = tuple(range(2 * D, total))
    else:
        anc = FockVector(0, {FockPattern(()): 1.0})
        anc_modes = ()
    policy = FourierBinPolicy(D, D, GOOD_EXACT)
    return FusionProtocol(
        name="odd",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=anc_modes,
        qudit0_modes=tuple(range(d)),
        qudit1_modes=tuple(range(D, D + d)),
        policy=policy,
        d_embed=D,
        params={"d": d, "embed_dim": D},
    )


def protocol_wstate(d: int, edc: bool = True, restricted: bool = False) -> FusionProtocol:
    """Fourier-projection fusion with d-2 single-photon uniform ancillae.

    The conditional states are never maximally entangled, so good patterns
    need extra-dimensional corrections.  `restricted` keeps only patterns
    with all photons in one port (the original few-pattern variant, success
    ((d-2)!/d^(d-1))^2); otherwise every one-photon-per-bin pattern is
    weighted by its correction factor.
    """
    if d < 3:
        raise ValueError("w-state fusion requires d >= 3")
    total = d * d
    circuit = _fourier_projection_layer(d, d, total)
    anc_qudits = w_state(d)
    for _ in range(d - 3):
        anc_qudits = anc_qudits.tensor(w_state(d))
    anc = anc_qudits.to_fock_vector()
    policy = FourierBinPolicy(d, d, GOOD_EDC, restrict_same_port=restricted)
    return FusionProtocol(
        name="wstate",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=tuple(range(2 * d, total)),
        qudit0_modes=tuple(range(d)),
        qudit1_modes=tuple(range(d, 2 * d)),
        policy=policy,
        corrections_enabled=edc or restricted,
        params={"d": d, "edc": edc, "restricted": restricted},
    )


def protocol_ztl(d: int, r: int) -> FusionProtocol:
    """Fusion from the reversed bunched-ancilla Bell-generation circuit.

    A single mode carries r bunched ancilla photons, the second qudit's
    modes are reversed, and one Fourier transform over all 2d+1 modes
    interferes everything; every measurement pattern is eligible for
    extra-dimensional corrections.
    """
    if d < 2 or r < 0:
        raise ValueError("need d >= 2 and r >= 0")
    total = 2 * d + 1
    reversal = list(range(total))
    for k in range(d):
        reversal[d + 1 + k] = 2 * d - k
    circuit = compose(permutation_unitary(reversal), fourier_matrix(total))
    return FusionProtocol(
        name="ztl",
        d=d,
        circuit=circuit,
        ancilla=bunched_state(r, 0, 1),
        ancilla_modes=(0,),
        qudit0_modes=tuple(range(1, d + 1)),
        qudit1_modes=tuple(range(d + 1, 2 * d + 1)),
        policy=AllPatternsPolicy(total, 2 + r),
        params={"d": d, "r": r},
    )


def protocol_boost_qubit(r: int, both_sides: bool = False, edc: bool = True) -> FusionProtocol:
    """Qubit fusion boosted by feeding one (or both) output ports into a
    larger Fourier transform with r single-photon ancillae.

    r = 1 with corrections disabled recovers the 7/12 baseline; at most one
    extra dimension is ever needed for the corrections.
    """
    if r < 1:
        raise ValueError("need at least one ancillary photon")
    d = 2
    n_anc = 2 * r if both_sides else r
    total = 4 + n_anc
    circuit = ModeUnitary(np.eye(total))
    for j in range(2):
        circuit = compose(circuit, embed(fourier_matrix(2), [j, 2 + j], total))
    boost = fourier_matrix(2 + r)
    circuit = compose(circuit, embed(boost, [0, 1] + list(range(4, 4 + r)), total))
    if both_sides:
        circuit = compose(
            circuit, embed(boost, [2, 3] + list(range(4 + r, 4 + 2 * r)), total)
        )
    anc = FockVector.basis_state((1,) * n_anc)
    return FusionProtocol(
        name="boost_qubit",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=tuple(range(4, total)),
        qudit0_modes=(0, 1),
        qudit1_modes=(2, 3),
        policy=AllPatternsPolicy(total, 2 + n_anc),
        corrections_enabled=edc,
        params={"r": r, "both_sides": both_sides, "edc": edc},
    )


def protocol_boost_qutrit(r: int, edc: bool = True) -> FusionProtocol:
    """The qutrit analogue of the boosted qubit fusion: one output port of
    the uniform-ancilla circuit feeds an F_{3+r} with r single photons."""
    if r < 1:
        raise ValueError("need at least one ancillary photon")
    d = 3
    total = d * d + r
    circuit = ModeUnitary(np.eye(total))
    f = fourier_matrix(d)
    for j in range(d):
        circuit = compose(circuit, embed(f, [d * i + j for i in range(d)], total))
    boost = fourier_matrix(d + r)
    circuit = compose(
        circuit, embed(boost, list(range(d)) + list(range(d * d, total)), total)
    )
    anc = w_state(d).to_fock_vector().tensor(FockVector.basis_state((1,) * r))
    return FusionProtocol(
        name="boost_qutrit",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=tuple(range(2 * d, d * d)) + tuple(range(d * d, total)),
        qudit0_modes=tuple(range(d)),
        qudit1_modes=tuple(range(d, 2 * d)),
        policy=AllPatternsPolicy(total, d + r),
        corrections_enabled=edc,
        params={"r": r, "edc": edc},
    )


def protocol_ghz_boost(d: int) -> FusionProtocol:
    """Boosted Fourier-projection fusion: port 0's output feeds a second
    Fourier stage with d-1 bunched ancilla states of d photons each.

    The measurement policy accepts the direct one-photon-per-bin successes
    and the all-bunched boosted successes; the report splits the two
    contributions and extrapolates the all-ports total by symmetry.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    total = d * d + d * (d - 1)
    circuit = ModeUnitary(np.eye(total))
    f = fourier_matrix(d)
    for j in range(d):
        circuit = compose(circuit, embed(f, [d * i + j for i in range(d)], total))
    for j in range(d):
        targets = [j] + [d * d + d * g + j for g in range(d - 1)]
        circuit = compose(circuit, embed(f, targets, total))
    anc = FockVector(0, {FockPattern(()): 1.0})
    if d >= 3:
        anc_qudits = w_state(d)
        for _ in range(d - 3):
            anc_qudits = anc_qudits.tensor(w_state(d))
        anc = anc_qudits.to_fock_vector()
    for _ in range(d - 1):
        anc = anc.tensor(boost_ancilla(d))
    anc_modes = tuple(range(2 * d, d * d)) + tuple(range(d * d, total))
    return FusionProtocol(
        name="ghz_boost",
        d=d,
        circuit=circuit,
        ancilla=anc,
        ancilla_modes=anc_modes,
        qudit0_modes=tuple(range(d)),
        qudit1_modes=tuple(range(d, 2 * d)),
        policy=GhzBoostPolicy(d),
        params={"d": d},
    )


def ghz_boost_report(d: int, workers: Optional[int] = None, per_pattern: bool = False) -> FusionReport:
    """Run the boosted fusion and derive the multi-port totals.

    Boosting a port multiplies through independent unitary stages, so the
    direct-success sum is unchanged and each port contributes the same
    increment; the all-ports total is direct + d * increment.
    """
    report = success_probability(protocol_ghz_boost(d), workers=workers, per_pattern=per_pattern)
    direct = report.extras.get("probability_direct", 0.0)
    inc = report.extras.get("probability_boosted", 0.0)
    report.extras["boost_increment"] = inc
    report.extras["unboosted_probability"] = direct
    report.extras["total_all_ports"] = direct + d * inc
    return report


def protocol_appendix_d(circuit_id: int, variant: str = "A", reflectivity: float = 0.5) -> FusionProtocol:
    """Fusion circuits obtained by reversing two heralded Bell-generation
    schemes built from beamsplitter couplers and Fourier blocks (d = 3).

    Placeholder: reconstructed numerically; see _appendix_d module.
    """
    from . import appendix_d

    return appendix_d.build_protocol(circuit_id, variant, reflectivity)
