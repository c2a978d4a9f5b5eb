"""Fusion circuits reversed from two compact heralded Bell-generation
schemes (d = 3).

Both schemes generate a qutrit Bell pair from 2d single photons: each
source mode is coupled to an initially empty output rail by a reflectivity-R
beamsplitter, the sources then interfere in a 2d-mode transform, and
detecting two double-clicks on the right source pairs heralds a maximally
entangled pair on the rails.  Reversing the circuit (and feeding the herald
superposition back in as the ancilla) turns the generator into a Type-II
fusion; every measurement pattern is then eligible for extra-dimensional
corrections.

Circuit 1 uses a full 2d-mode transform for the source interference, in one
of three variants: a single 2d-dimensional Fourier transform, or two
d-dimensional Fourier blocks combined with d two-mode couplers (in either
order).  Circuit 2 is reconstructed in `_circuit2_unitary`.
"""

from __future__ import annotations

import math

import numpy as np

from .fock import FockPattern, FockVector
from .fusion import AllPatternsPolicy, FusionProtocol
from .optics import ModeUnitary, beamsplitter_r, compose, embed, fourier_matrix

__all__ = ["build_protocol", "CIRCUIT1_ANCILLA", "CIRCUIT2_ANCILLA"]

D = 3
TOTAL = 4 * D  # two input qudits plus the 2d-mode ancilla

# Optimal herald superpositions (4 photons in 6 modes).
CIRCUIT1_ANCILLA = ((2, 0, 0, 0, 2, 0), (0, 2, 0, 2, 0, 0))
CIRCUIT2_ANCILLA = ((0, 0, 0, 2, 0, 2), (0, 0, 2, 0, 2, 0))


def _h2d_variant(variant: str) -> ModeUnitary:
    """The 2d-mode source transform of circuit 1.

    Variant A is the plain 2d-dimensional Fourier matrix.  Variants B and C
    factor it into two d-dimensional Fourier blocks on (0..d-1) and
    (d..2d-1) plus d two-mode couplers joining mode j with mode d+j, applied
    in the two possible orders.
    """
    if variant == "A":
        return fourier_matrix(2 * D)
    f_d = fourier_matrix(D)
    f_2 = fourier_matrix(2)
    blocks = ModeUnitary(np.eye(2 * D))
    blocks = compose(blocks, embed(f_d, list(range(D)), 2 * D))
    blocks = compose(blocks, embed(f_d, list(range(D, 2 * D)), 2 * D))
    pairs = ModeUnitary(np.eye(2 * D))
    for j in range(D):
        pairs = compose(pairs, embed(f_2, [j, D + j], 2 * D))
    if variant == "B":
        return compose(blocks, pairs)
    if variant == "C":
        return compose(pairs, blocks)
    raise ValueError(f"circuit 1 variant must be A, B or C, got {variant!r}")


def _leak_layer(reflectivity: float) -> ModeUnitary:
    """One R-beamsplitter per source mode, coupling it to its output rail.

    Rails are modes 0..2d-1 (the fused qudits), sources are 2d..4d-1."""
    coupler = beamsplitter_r(reflectivity)
    layer = ModeUnitary(np.eye(TOTAL))
    for j in range(2 * D):
        layer = compose(layer, embed(coupler, [2 * D + j, j], TOTAL))
    return layer


def _circuit1_unitary(variant: str, reflectivity: float) -> ModeUnitary:
    generation = compose(
        _leak_layer(reflectivity),
        embed(_h2d_variant(variant), list(range(2 * D, 4 * D)), TOTAL),
    )
    return generation.dagger()


def _circuit2_unitary(reflectivity: float) -> ModeUnitary:
    raise NotImplementedError("circuit 2 reconstruction pending")


def build_protocol(circuit_id: int, variant: str = "A", reflectivity: float = 0.5) -> FusionProtocol:
    if not 0.0 <= reflectivity <= 1.0:
        raise ValueError(f"reflectivity must lie in [0, 1], got {reflectivity}")
    if circuit_id == 1:
        circuit = _circuit1_unitary(variant, reflectivity)
        herald_patterns = CIRCUIT1_ANCILLA
        name = f"appendix_d_circuit1_{variant}"
    elif circuit_id == 2:
        circuit = _circuit2_unitary(reflectivity)
        herald_patterns = CIRCUIT2_ANCILLA
        name = "appendix_d_circuit2"
    else:
        raise ValueError(f"circuit id must be 1 or 2, got {circuit_id}")
    amp = 1.0 / math.sqrt(len(herald_patterns))
    ancilla = FockVector(
        2 * D, {FockPattern(p): amp for p in herald_patterns}
    )
    return FusionProtocol(
        name=name,
        d=D,
        circuit=circuit,
        ancilla=ancilla,
        ancilla_modes=tuple(range(2 * D, 4 * D)),
        qudit0_modes=tuple(range(D)),
        qudit1_modes=tuple(range(D, 2 * D)),
        policy=AllPatternsPolicy(TOTAL, 2 + sum(herald_patterns[0])),
        params={
            "circuit": circuit_id,
            "variant": variant if circuit_id == 1 else None,
            "reflectivity": reflectivity,
        },
    )
