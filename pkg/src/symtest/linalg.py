"""Dense complex linear algebra primitives.

Everything here works on plain ``numpy`` arrays of ``complex128``.  States
carry an explicit list of subsystem dimensions so partial traces and factor
permutations never have to guess the tensor structure.  All values are
immutable after construction (arrays are marked read-only); randomness is
always routed through an explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Desk-scale cap on any dense operator dimension (2**12).
MAX_DIM = 4096

HERMITIAN_INPUT_ATOL = 1e-8   # tolerance accepted on inputs before symmetrizing
STATE_ATOL = 1e-10            # trace / hermiticity / PSD tolerance for states


class DimensionError(ValueError):
    """Raised when operator or subsystem dimensions are inconsistent."""


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitian_defect(m: np.ndarray) -> float:
    """Largest absolute entry of m - m† (0 for exactly Hermitian input)."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


@dataclass(frozen=True)
class PureState:
    """State vector with explicit subsystem dimensions (unit 2-norm)."""

    vector: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        vec = _as_complex(self.vector).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if math.prod(dims) != vec.size:
            raise DimensionError(f"dims {dims} do not match vector size {vec.size}")
        if vec.size > MAX_DIM:
            raise DimensionError(f"dimension {vec.size} exceeds dense cap {MAX_DIM}")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > STATE_ATOL:
            raise ValueError(f"state vector norm {norm} is not 1 within {STATE_ATOL}")
        object.__setattr__(self, "vector", _freeze(vec))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.vector, self.vector.conj()), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD matrix with explicit subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = _as_complex(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        d = math.prod(dims)
        if m.shape != (d, d):
            raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
        if d > MAX_DIM:
            raise DimensionError(f"dimension {d} exceeds dense cap {MAX_DIM}")
        if hermitian_defect(m) > STATE_ATOL:
            raise ValueError(f"density matrix not Hermitian within {STATE_ATOL}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > STATE_ATOL:
            raise ValueError(f"density matrix trace {tr} is not 1 within {STATE_ATOL}")
        min_eig = float(np.linalg.eigvalsh((m + dagger(m)) / 2).min())
        if min_eig < -STATE_ATOL:
            raise ValueError(f"density matrix has eigenvalue {min_eig} < -{STATE_ATOL}")
        object.__setattr__(self, "matrix", _freeze(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def tensor(*operands: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    out = _as_complex(operands[0])
    for op in operands[1:]:
        out = np.kron(out, _as_complex(op))
    return out


def tensor_states(*states: PureState) -> PureState:
    vec = states[0].vector
    dims: tuple[int, ...] = states[0].dims
    for s in states[1:]:
        vec = np.kron(vec, s.vector)
        dims = dims + s.dims
    return PureState(vec, dims)


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    Kept factors stay in ascending index order.  Preserves the trace.
    """
    m = _as_complex(m)
    dims = [int(d) for d in dims]
    d = math.prod(dims)
    if m.shape != (d, d):
        raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
    keep = sorted(set(int(i) for i in keep))
    if keep and (keep[0] < 0 or keep[-1] >= len(dims)):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = m.reshape(dims + dims)
    # Contract row/column axes of each traced factor, highest index first so
    # the remaining axis numbers stay valid.
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(sorted(traced, reverse=True)):
        axes_left = n - count
        t = np.trace(t, axis1=i, axis2=i + axes_left)
    dk = math.prod(dims[i] for i in keep) if keep else 1
    return t.reshape(dk, dk)


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary e^{-i h t} via eigendecomposition of the symmetrized input.

    The input must be Hermitian within 1e-8; (h + h†)/2 is decomposed, which
    absorbs roundoff accumulated by products of exponentials.
    """
    h = _as_complex(h)
    defect = hermitian_defect(h)
    if defect > HERMITIAN_INPUT_ATOL:
        raise ValueError(f"input not Hermitian: defect {defect} > {HERMITIAN_INPUT_ATOL}")
    hs = (h + dagger(h)) / 2
    w, v = np.linalg.eigh(hs)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix (negatives clipped to 0)."""
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2."""
    if rho.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch {rho.dim} vs {sigma.dim}")
    return fidelity_matrices(rho.matrix, sigma.matrix)


def fidelity_matrices(rho: np.ndarray, sigma: np.ndarray) -> float:
    # singular values of sqrt(rho) sqrt(sigma): backward stable, unlike an
    # eigendecomposition of sqrt(rho) sigma sqrt(rho) whose square roots
    # amplify errors of near-zero eigenvalues
    s = np.linalg.svd(sqrtm_psd(rho) @ sqrtm_psd(sigma), compute_uv=False)
    root = float(s.sum())
    return min(root * root, 1.0 + 1e-12)


def schatten_norm(m: np.ndarray, p) -> float:
    """Schatten p-norm; p = 1 trace norm, p = 2 Hilbert-Schmidt, p = inf spectral."""
    m = _as_complex(m)
    s = np.linalg.svd(m, compute_uv=False)
    if p == np.inf or p == "inf":
        return float(s.max()) if s.size else 0.0
    p = float(p)
    if p < 1:
        raise ValueError(f"schatten norm requires p >= 1, got {p}")
    return float((s**p).sum() ** (1.0 / p))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return schatten_norm(a - b, 1)


def purify(rho: DensityMatrix) -> PureState:
    """Spectral purification on reference ⊗ system.

    Eigenvalues are sorted descending, so a pure input purifies to a fixed
    reference ket |0>.  Tracing out the reference (factor 0) returns ``rho``.
    """
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    w = np.clip(w[order], 0.0, None)
    v = v[:, order]
    d = rho.dim
    vec = np.zeros(d * d, dtype=complex)
    for j in range(d):
        if w[j] <= 0.0:
            continue
        ref = np.zeros(d, dtype=complex)
        ref[j] = 1.0
        vec += np.sqrt(w[j]) * np.kron(ref, v[:, j])
    vec /= np.linalg.norm(vec)
    return PureState(vec, (d,) + rho.dims)


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian with phase-fixed R."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_density(d: int, rank: int, seed: int, dims=None) -> DensityMatrix:
    """Random rank-limited density matrix: normalized G G† for Gaussian G."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} out of range [1, {d}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ dagger(g)
    m /= np.trace(m).real
    return DensityMatrix((m + dagger(m)) / 2, dims if dims is not None else (d,))


def random_pure(d: int, seed: int, dims=None) -> PureState:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), dims if dims is not None else (d,))


def nested_commutator(h: np.ndarray, u: np.ndarray, n: int) -> np.ndarray:
    """Left-nested commutator: n = 0 returns u, n = 1 returns [h, u], etc."""
    h = _as_complex(h)
    out = _as_complex(u)
    if h.shape != out.shape or h.shape[0] != h.shape[1]:
        raise DimensionError(f"shape mismatch {h.shape} vs {out.shape}")
    if n < 0:
        raise ValueError("nesting depth must be >= 0")
    for _ in range(n):
        out = h @ out - out @ h
    return out


def maximally_mixed(d: int, dims=None) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d, dims if dims is not None else (d,))


def maximally_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_i |ii> on two d-dimensional factors."""
    vec = np.zeros(d * d, dtype=complex)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(vec, (d, d))
