"""JSON encodings for the documented file formats.

Complex numbers are two-element [re, im] arrays; Fock patterns are integer
arrays; mode unitaries are {n_modes, rows} with row-major [re, im] entries.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .edc import CorrectionInput, CorrectionResult
from .fock import FockPattern, FockVector
from .optics import ModeUnitary

__all__ = [
    "complex_to_json",
    "complex_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "pattern_to_json",
    "pattern_from_json",
    "fock_vector_to_json",
    "fock_vector_from_json",
    "unitary_to_json",
    "unitary_from_json",
    "correction_input_from_json",
    "correction_result_to_json",
]


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(doc: Any) -> complex:
    if not isinstance(doc, (list, tuple)) or len(doc) != 2:
        raise ValueError(f"complex values are [re, im] pairs, got {doc!r}")
    return complex(float(doc[0]), float(doc[1]))


def matrix_to_json(matrix: np.ndarray) -> list[list[list[float]]]:
    m = np.asarray(matrix, dtype=np.complex128)
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_from_json(doc: Any) -> np.ndarray:
    return np.array([[complex_from_json(z) for z in row] for row in doc],
                    dtype=np.complex128)


def pattern_to_json(pattern: FockPattern) -> list[int]:
    return [int(n) for n in pattern]


def pattern_from_json(doc: Any) -> FockPattern:
    return FockPattern(doc)


def fock_vector_to_json(state: FockVector) -> dict:
    return {
        "n_modes": state.n_modes,
        "terms": [
            {"pattern": pattern_to_json(p), "amp": complex_to_json(a)}
            for p, a in sorted(state.terms.items())
        ],
    }


def fock_vector_from_json(doc: Any) -> FockVector:
    terms = {
        pattern_from_json(t["pattern"]): complex_from_json(t["amp"])
        for t in doc["terms"]
    }
    return FockVector(int(doc["n_modes"]), terms)


def unitary_to_json(unitary: ModeUnitary) -> dict:
    return {"n_modes": unitary.n_modes, "rows": matrix_to_json(unitary.matrix)}


def unitary_from_json(doc: Any) -> ModeUnitary:
    rows = matrix_from_json(doc["rows"])
    if "n_modes" in doc and int(doc["n_modes"]) != rows.shape[0]:
        raise ValueError(
            f"n_modes={doc['n_modes']} does not match {rows.shape[0]} rows"
        )
    return ModeUnitary(rows)


def correction_input_from_json(doc: Any) -> CorrectionInput:
    d = int(doc["d"])
    psi = doc["psi"]
    if len(psi) != d:
        raise ValueError(f"need {d} conditional states, got {len(psi)}")
    vectors = []
    for vec in psi:
        if len(vec) != d:
            raise ValueError(f"conditional states must have dimension {d}")
        vectors.append([complex_from_json(z) for z in vec])
    return CorrectionInput.from_vectors(vectors)


def correction_result_to_json(result: CorrectionResult) -> dict:
    return {
        "lambda": result.lam,
        "s": result.s,
        "gram": matrix_to_json(result.gram),
        "unitary": matrix_to_json(result.unitary),
    }
