"""File formats for the CLI: matrices as nested [re, im] pairs.

Floats are written as plain decimals by default; with ``hexfloat=True``
every entry becomes a ``float.hex()`` string, which round-trips doubles
losslessly.  The readers accept both.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .hamiltonian import HamiltonianSpec
from .linalg import DensityMatrix, PureState


def _num_out(x: float, hexfloat: bool):
    return float.hex(float(x)) if hexfloat else float(x)


def _num_in(x) -> float:
    if isinstance(x, str):
        return float.fromhex(x)
    return float(x)


def encode_matrix(m: np.ndarray, hexfloat: bool = False):
    m = np.asarray(m, dtype=complex)
    return [
        [[_num_out(v.real, hexfloat), _num_out(v.imag, hexfloat)] for v in row]
        for row in m
    ]


def decode_matrix(data) -> np.ndarray:
    rows = []
    for row in data:
        rows.append([complex(_num_in(re), _num_in(im)) for re, im in row])
    return np.array(rows, dtype=complex)


def encode_vector(v: np.ndarray, hexfloat: bool = False):
    return [[_num_out(x.real, hexfloat), _num_out(x.imag, hexfloat)] for x in np.asarray(v, dtype=complex)]


def decode_vector(data) -> np.ndarray:
    return np.array([complex(_num_in(re), _num_in(im)) for re, im in data], dtype=complex)


def load_state(path: str):
    """Read a state file: {"matrix"|"vector": ..., "dims": [...]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    dims = tuple(int(d) for d in data.get("dims", []))
    if "vector" in data:
        vec = decode_vector(data["vector"])
        return PureState(vec, dims or (vec.size,))
    if "matrix" in data:
        m = decode_matrix(data["matrix"])
        return DensityMatrix(m, dims or (m.shape[0],))
    raise ValueError(f"state file {path} needs a 'vector' or 'matrix' entry")


def load_hamiltonian(path: str) -> HamiltonianSpec:
    """Read {"dense": ...} or {"terms": [{"matrix", "support"}...]} with "dims"."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "dims" not in data:
        raise ValueError(f"hamiltonian file {path} is missing 'dims'")
    dims = tuple(int(d) for d in data["dims"])
    if "dense" in data:
        return HamiltonianSpec.from_dense(decode_matrix(data["dense"]), dims)
    if "terms" in data:
        terms = [
            (decode_matrix(t["matrix"]), tuple(int(i) for i in t["support"]))
            for t in data["terms"]
        ]
        return HamiltonianSpec.from_terms(terms, dims)
    raise ValueError(f"hamiltonian file {path} needs 'dense' or 'terms'")


def load_unitary_table(path: str) -> list[np.ndarray]:
    """Read {"matrices": [matrix, ...]} for table:<file> group specs."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "matrices" not in data:
        raise ValueError(f"group table file {path} needs a 'matrices' list")
    return [decode_matrix(m) for m in data["matrices"]]


def save_state(path: str, state, hexfloat: bool = False) -> None:
    if isinstance(state, PureState):
        payload = {"vector": encode_vector(state.vector, hexfloat), "dims": list(state.dims)}
    else:
        payload = {"matrix": encode_matrix(state.matrix, hexfloat), "dims": list(state.dims)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)


def parse_t_grid(spec: str) -> list[float]:
    """Parse "start..end:count" into an inclusive uniform grid."""
    head, _, count = spec.partition(":")
    start, _, end = head.partition("..")
    if not end:
        return [float(start)]
    n = int(count) if count else 2
    if n < 1:
        raise ValueError("grid count must be >= 1")
    a, b = float(start), float(end)
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def parse_k_grid(spec: str) -> list[int]:
    """Parse "a..b" (inclusive) or a single integer."""
    head, _, tail = spec.partition("..")
    if not tail:
        return [int(head)]
    lo, hi = int(head), int(tail)
    if hi < lo:
        raise ValueError("empty k range")
    return list(range(lo, hi + 1))


def is_finite_number(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)
