"""State symmetry tests: the Bose test, prover-assisted tests as classical
optimizations, maximum symmetric fidelities, and their specializations.

Two independent optimizers realize the prover theorems numerically:

* ``max_symmetric_fidelity`` works on the state side, ascending
  F(rho, candidate) over a parameterized candidate set (twirled states for
  conjugation symmetry, reductions of projected extensions for the
  extendibility modes).
* ``prover_acceptance`` works on the circuit side, ascending the projected
  squared norm over the prover unitary V on the purifying-plus-ancilla
  space, by Riemannian gradient steps on the unitary manifold.

Both are non-convex local ascents with restarts; the theorems guarantee the
true optima coincide, so cross-validation between them carries a loose
1e-3 tolerance, not the solver tolerance.  Restart batches may run in
threads when SYMTEST_THREADS is set; results merge by max over a fixed seed
list, so the outcome is deterministic either way.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groups import (
    Permutation,
    UnitaryRepTable,
    basis_index_map,
    group_projector,
    permute_vector_factors,
    symmetric_group,
    twirl,
)
from .linalg import (
    MAX_DIM,
    DensityMatrix,
    DimensionError,
    PureState,
    dagger,
    maximally_entangled,
    partial_trace,
    purify,
    random_unitary,
    sqrtm_psd,
)
from .report import AcceptanceReport, OptimizationOutcome

MODES = ("gsym", "bse", "se")


@dataclass(frozen=True)
class ProverConfig:
    """Knobs for both optimizers; defaults follow the desk-scale setup."""

    ancilla_dim: int | None = None
    restarts: int = 8
    max_iters: int = 500
    step: float = 0.25
    tolerance: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.ancilla_dim is not None and self.ancilla_dim < 1:
            raise ValueError("ancilla dimension must be >= 1")


def phase_rep(d: int) -> UnitaryRepTable:
    """Cyclic phase group: Z(z) = sum_j exp(2 pi i j z / d) |j><j|, z = 0..d-1."""
    mats = tuple(
        np.diag(np.exp(2j * np.pi * np.arange(d) * z / d)) for z in range(d)
    )
    return UnitaryRepTable(mats, name=f"phase-C{d}", labels=tuple(range(d)))


def bose_acceptance(rho: DensityMatrix, rep) -> AcceptanceReport:
    """Tr[Pi_G rho], computed from the projector and from the circuit.

    The circuit simulation keeps a |G|-dimensional control register in the
    uniform superposition, applies the controlled representation to a
    purification, and projects the control back onto the superposition.
    Both values are recorded and must agree to 1e-10.
    """
    if rep.dim != rho.dim:
        raise DimensionError(f"rep dim {rep.dim} does not match state dim {rho.dim}")
    projector_value = float(np.trace(group_projector(rep) @ rho.matrix).real)

    psi = purify(rho)
    d = rho.dim
    psi_mat = psi.vector.reshape(psi.dim // d, d)  # axes (reference, system)
    avg = np.zeros_like(psi_mat)
    for u in rep.unitaries():
        avg += psi_mat @ u.T
    avg /= rep.size
    circuit_value = float(np.linalg.norm(avg) ** 2)
    return AcceptanceReport(
        simulated=circuit_value,
        closed_form=projector_value,
        method="bose-circuit/projector",
    )


def bose_circuit_sample(psi: PureState, rep, shots: int, seed: int) -> AcceptanceReport:
    """Monte Carlo estimate of the Bose-test acceptance on a pure input."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if rep.dim != psi.dim:
        raise DimensionError(f"rep dim {rep.dim} does not match state dim {psi.dim}")
    avg = np.zeros_like(psi.vector)
    for u in rep.unitaries():
        avg += u @ psi.vector
    p = float(np.linalg.norm(avg / rep.size) ** 2)
    p = min(max(p, 0.0), 1.0)
    rng = np.random.default_rng(seed)
    estimate = rng.binomial(shots, p) / shots
    return AcceptanceReport(
        simulated=float(estimate),
        closed_form=p,
        shots=shots,
        seed=seed,
        method="bose-sample",
    )


def _thread_cap() -> int:
    raw = os.environ.get("SYMTEST_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_restarts(runner, starts):
    cap = _thread_cap()
    if cap == 1 or len(starts) == 1:
        return [runner(s) for s in starts]
    with ThreadPoolExecutor(max_workers=min(cap, len(starts))) as pool:
        return list(pool.map(runner, starts))


def _merge_outcomes(results) -> OptimizationOutcome:
    values = tuple(v for v, _, _ in results)
    best = int(np.argmax(values))
    converged = results[best][1]
    iters = sum(r[2] for r in results)
    return OptimizationOutcome(
        value=float(values[best]),
        converged=converged,
        iterations=iters,
        restart_values=values,
        message="" if converged else "best restart stopped on iteration budget",
    )


def _infer_ref_dim(rep, rho: DensityMatrix) -> int:
    if rep.dim % rho.dim != 0:
        raise DimensionError(
            f"extendibility mode needs rep dim {rep.dim} to be a multiple of the "
            f"state dim {rho.dim}"
        )
    return rep.dim // rho.dim


# ---------------------------------------------------------------------------
# state-side optimizer
# ---------------------------------------------------------------------------


def _fidelity_with_gradient(sqrt_rho: np.ndarray, sigma: np.ndarray) -> tuple[float, np.ndarray]:
    """F(rho, sigma) and the Hermitian gradient d F / d sigma.

    Uses F = (Tr sqrt(A))^2 with A = sqrt(rho) sigma sqrt(rho); the gradient
    is g * sqrt(rho) A^{-1/2} sqrt(rho) with the inverse root taken on the
    support of A.
    """
    a = sqrt_rho @ sigma @ sqrt_rho
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    w = np.clip(w, 0.0, None)
    g = float(np.sqrt(w).sum())
    cutoff = max(float(w.max()) if w.size else 0.0, 1e-30) * 1e-14
    inv_root = np.where(w > cutoff, 1.0 / np.sqrt(np.where(w > cutoff, w, 1.0)), 0.0)
    a_inv_half = (v * inv_root) @ dagger(v)
    grad = g * (sqrt_rho @ a_inv_half @ sqrt_rho)
    return g * g, (grad + dagger(grad)) / 2


class _CandidateSet:
    """Mode-dependent map from a free PSD parameter to a candidate state."""

    def __init__(self, rho: DensityMatrix, rep, mode: str):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.mode = mode
        self.rep = rep
        self.d_s = rho.dim
        if mode == "gsym":
            if rep.dim != rho.dim:
                raise DimensionError("gsym mode needs the rep on the state space")
            self.n = rho.dim
            self.d_r = 1
        else:
            self.d_r = _infer_ref_dim(rep, rho)
            self.n = rep.dim
            if mode == "bse":
                pi = group_projector(rep)
                self._pi = pi
                self._pi2 = dagger(pi) @ pi

    def warm_start(self, rho: DensityMatrix) -> np.ndarray:
        if self.mode == "gsym":
            return sqrtm_psd(rho.matrix)
        lifted = np.kron(np.eye(self.d_r, dtype=complex) / self.d_r, rho.matrix)
        return sqrtm_psd(lifted)

    def sigma(self, omega: np.ndarray) -> np.ndarray:
        if self.mode == "gsym":
            return twirl(self.rep, omega)
        if self.mode == "se":
            return partial_trace(twirl(self.rep, omega), (self.d_r, self.d_s), keep=[1])
        projected = self._pi @ omega @ dagger(self._pi)
        q = float(np.trace(projected).real)
        if q <= 1e-300:
            return None
        return partial_trace(projected, (self.d_r, self.d_s), keep=[1]) / q

    def pull_back(self, omega: np.ndarray, sigma: np.ndarray, gamma: np.ndarray) -> np.ndarray:
        if self.mode == "gsym":
            return twirl(self.rep, gamma)
        lifted = np.kron(np.eye(self.d_r, dtype=complex), gamma)
        if self.mode == "se":
            return twirl(self.rep, lifted)
        q = float(np.trace(self._pi @ omega @ dagger(self._pi)).real)
        overlap = float(np.trace(gamma @ sigma).real)
        grad = dagger(self._pi) @ lifted @ self._pi - overlap * self._pi2
        return (grad + dagger(grad)) / (2 * q)


def max_symmetric_fidelity(rho: DensityMatrix, rep, mode: str,
                           cfg: ProverConfig | None = None) -> OptimizationOutcome:
    """State-side optimum of F(rho, sigma) over the symmetric candidate set.

    ``gsym`` candidates are twirls (the fixed points of the group twirl);
    ``bse`` and ``se`` candidates are reductions of projected / invariant
    extensions on reference ⊗ system, with the reference dimension read off
    the representation (reference dimension 1 recovers the Bose-symmetric
    set).  Gradient ascent on a free square parameter M with omega = MM†/Tr,
    best value over restarts.
    """
    cfg = cfg or ProverConfig()
    cand = _CandidateSet(rho, rep, mode)
    sqrt_rho = sqrtm_psd(rho.matrix)
    n = cand.n

    def objective(m: np.ndarray):
        mm = m @ dagger(m)
        tr = float(np.trace(mm).real)
        omega = mm / tr
        sigma = cand.sigma(omega)
        if sigma is None:
            return 0.0, np.zeros_like(m)
        f, gamma = _fidelity_with_gradient(sqrt_rho, sigma)
        grad_omega = cand.pull_back(omega, sigma, gamma)
        delta = grad_omega - float(np.trace(grad_omega @ omega).real) * np.eye(n)
        return f, (delta @ m) / tr

    def run(start_index: int):
        if start_index == 0:
            m = cand.warm_start(rho)
        else:
            rng = np.random.default_rng(cfg.seed + start_index)
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = m / np.linalg.norm(m)
        f, g = objective(m)
        eta = cfg.step
        converged = False
        it = 0
        for it in range(1, cfg.max_iters + 1):
            moved = False
            while eta > 1e-14:
                m_new = m + eta * g
                f_new, g_new = objective(m_new)
                if f_new > f:
                    moved = True
                    break
                eta *= 0.5
            if not moved:
                converged = True
                break
            if f_new - f < cfg.tolerance:
                m, f, g = m_new, f_new, g_new
                converged = True
                break
            m, f, g = m_new, f_new, g_new
            eta = min(eta * 1.5, 1e3)
        return f, converged, it

    return _merge_outcomes(_run_restarts(run, list(range(cfg.restarts))))


# ---------------------------------------------------------------------------
# prover-side optimizer
# ---------------------------------------------------------------------------


def _skew_exp(omega: np.ndarray, eta: float) -> np.ndarray:
    # e^{eta omega} for anti-Hermitian omega, via the Hermitian matrix i*omega
    a = 1j * omega
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return (v * np.exp(-1j * w * eta)) @ dagger(v)


class _ProverProblem:
    """Projected-norm objective over the prover unitary for one mode."""

    def __init__(self, rho: DensityMatrix, rep, mode: str, ancilla_dim: int | None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.mode = mode
        self.d_s = rho.dim
        psi = purify(rho)
        d_purifier = psi.dim // rho.dim
        if mode == "gsym":
            if rep.dim != rho.dim:
                raise DimensionError("gsym mode needs the rep on the state space")
            self.d_r = 1
            default_anc = self.d_s
        else:
            self.d_r = _infer_ref_dim(rep, rho)
            default_anc = self.d_r if mode == "bse" else self.d_r * self.d_r
        d_e = ancilla_dim if ancilla_dim is not None else default_anc
        self.n_p = d_purifier * d_e
        # prover input (purifier ⊗ ancilla |0>) arranged with the system axis
        # first; prover column index is p' * d_e + e with e = 0 initially
        psi_mat = psi.vector.reshape(d_purifier, self.d_s).T
        phi0 = np.zeros((self.d_s, self.n_p), dtype=complex)
        phi0[:, 0::d_e] = psi_mat
        self.phi0 = phi0

        unitaries = rep.unitaries()
        g_count = len(unitaries)
        if mode == "gsym":
            # target factors (S, S-hat)
            self.out_dims = (self.d_s, self.n_p // self.d_s)
            if self.n_p % self.d_s != 0:
                raise DimensionError("ancilla dimension incompatible with the gsym output split")
            pi = sum(np.kron(u, u.conj()) for u in unitaries) / g_count
        elif mode == "bse":
            if self.n_p % self.d_r != 0:
                raise DimensionError("ancilla dimension incompatible with the bse output split")
            self.out_dims = (self.d_r, self.n_p // self.d_r)
            pi = group_projector(rep)  # on (R, S)
        else:
            block = self.d_r * self.d_r * self.d_s
            if self.n_p % block != 0:
                raise DimensionError("ancilla dimension incompatible with the se output split")
            self.out_dims = (self.d_r, self.d_r, self.d_s, self.n_p // block)
            pi = sum(np.kron(u, u.conj()) for u in unitaries) / g_count  # on (R,S,Rh,Sh)
        self._pi = pi
        self._pi_h = dagger(pi) @ pi

    def _project(self, chi: np.ndarray, op: np.ndarray) -> np.ndarray:
        d_s, n_p = self.d_s, self.n_p
        if self.mode == "gsym":
            d_e = self.out_dims[1]
            t = chi.reshape(d_s, d_s, d_e).reshape(d_s * d_s, d_e)
            t = op @ t
            return t.reshape(d_s, d_s, d_e).reshape(d_s, n_p)
        if self.mode == "bse":
            d_r, d_e = self.out_dims
            t = chi.reshape(d_s, d_r, d_e).transpose(1, 0, 2).reshape(d_r * d_s, d_e)
            t = op @ t
            return t.reshape(d_r, d_s, d_e).transpose(1, 0, 2).reshape(d_s, n_p)
        d_r, _, d_s2, d_e = self.out_dims
        t = chi.reshape(d_s, d_r, d_r, d_s2, d_e).transpose(1, 0, 2, 3, 4)
        t = t.reshape(d_r * d_s * d_r * d_s2, d_e)
        t = op @ t
        t = t.reshape(d_r, d_s, d_r, d_s2, d_e).transpose(1, 0, 2, 3, 4)
        return t.reshape(d_s, n_p)

    def value_and_grad(self, v: np.ndarray):
        chi = self.phi0 @ v.T
        projected = self._project(chi, self._pi)
        f = float(np.vdot(projected, projected).real)
        w = self._project(chi, self._pi_h)
        grad = np.einsum("sp,sq->pq", w, self.phi0.conj())
        return f, grad


def prover_acceptance(rho: DensityMatrix, rep, mode: str,
                      cfg: ProverConfig | None = None) -> OptimizationOutcome:
    """Circuit-side optimum: max over prover unitaries of the projected norm.

    The prover acts on purifier ⊗ ancilla with V = e^{iA} (the ascent walks
    the whole unitary manifold, so the parameterization is full); the
    verifier projects onto the mode's group projector.  Best over restarts,
    Riemannian gradient ascent with backtracking.
    """
    cfg = cfg or ProverConfig()
    problem = _ProverProblem(rho, rep, mode, cfg.ancilla_dim)
    n_p = problem.n_p

    def run(start_index: int):
        if start_index == 0:
            v = np.eye(n_p, dtype=complex)
        else:
            v = random_unitary(n_p, cfg.seed + start_index)
        f, g = problem.value_and_grad(v)
        eta = cfg.step
        converged = False
        it = 0
        for it in range(1, cfg.max_iters + 1):
            a = g @ dagger(v)
            omega = a - dagger(a)
            if np.linalg.norm(omega) < 1e-13:
                converged = True
                break
            moved = False
            while eta > 1e-14:
                v_new = _skew_exp(omega, eta) @ v
                f_new, g_new = problem.value_and_grad(v_new)
                if f_new > f:
                    moved = True
                    break
                eta *= 0.5
            if not moved:
                converged = True
                break
            if f_new - f < cfg.tolerance:
                v, f, g = v_new, f_new, g_new
                converged = True
                break
            v, f, g = v_new, f_new, g_new
            eta = min(eta * 1.5, 10.0)
        return min(f, 1.0 + 1e-12), converged, it

    return _merge_outcomes(_run_restarts(run, list(range(cfg.restarts))))


def incoherence_acceptance(rho: DensityMatrix, cfg: ProverConfig | None = None) -> OptimizationOutcome:
    """Maximum fidelity with an incoherent (diagonal) state: the phase-group case."""
    return max_symmetric_fidelity(rho, phase_rep(rho.dim), "gsym", cfg)


def symmetric_purification_check(omega: DensityMatrix, rep) -> tuple[bool, float]:
    """Build the spectral purification and test (U ⊗ conj(U)) invariance.

    Returns (invariant within 1e-8, max defect over group elements).  The
    purification is vec(sqrt(omega)), which is fixed by U ⊗ conj(U) exactly
    when omega is invariant under conjugation by U.
    """
    if rep.dim != omega.dim:
        raise DimensionError("rep dimension does not match the state")
    vec = sqrtm_psd(omega.matrix).reshape(-1)
    defect = 0.0
    for u in rep.unitaries():
        moved = np.kron(u, u.conj()) @ vec
        defect = max(defect, float(np.linalg.norm(vec - moved)))
    return defect <= 1e-8, defect


def multipartite_bose_acceptance(psi: PureState, parties, k: int) -> float:
    """Tr[(⊗_i Pi_sym over party i's copies) psi^{⊗k}] for a multipartite pure state.

    Evaluated by axis permutation over tuples of per-party permutations; no
    dense projector is materialized.
    """
    parties = tuple(int(d) for d in parties)
    if math.prod(parties) != psi.dim:
        raise DimensionError(f"party dims {parties} do not match state dim {psi.dim}")
    m = len(parties)
    if psi.dim**k > MAX_DIM:
        raise DimensionError(f"{k} copies exceed the dense cap {MAX_DIM}")
    if math.factorial(k) ** m > 100_000:
        raise DimensionError("permutation tuple count is beyond desk scale")
    big = psi.vector
    for _ in range(k - 1):
        big = np.kron(big, psi.vector)
    dims = list(parties) * k  # copy-major layout
    perms = list(symmetric_group(k))
    total = 0.0 + 0.0j
    for combo in itertools.product(perms, repeat=m):
        image = [0] * (k * m)
        for i, perm in enumerate(combo):
            for c in range(k):
                image[c * m + i] = perm(c) * m + i
        moved = permute_vector_factors(big, dims, Permutation(tuple(image)))
        total += np.vdot(big, moved)
    return float((total / math.factorial(k) ** m).real)


def k_extendible_rep(d_a: int, d_b: int, k: int) -> UnitaryRepTable:
    """Permutation rep of S_k on (R, S) = (B_2..B_k, A B_1) for extendibility tests.

    The letters are the k copies of the B system; A rides along untouched.
    Use with ``bse`` (Bose) or ``se`` modes of the optimizers.
    """
    if d_a * d_b**k > MAX_DIM:
        raise DimensionError("extension space exceeds the dense cap")
    dims = [d_b] * (k - 1) + [d_a, d_b]  # B_2..B_k, A, B_1
    pos = {1: k}
    for i in range(2, k + 1):
        pos[i] = i - 2
    mats = []
    total = d_a * d_b**k
    cols = np.arange(total)
    for perm in symmetric_group(k):
        image = list(range(k + 1))
        for copy in range(1, k + 1):
            image[pos[copy]] = pos[perm(copy - 1) + 1]
        idx = basis_index_map(Permutation(tuple(image)), dims)
        mat = np.zeros((total, total), dtype=complex)
        mat[idx, cols] = 1.0
        mats.append(mat)
    return UnitaryRepTable(tuple(mats), name=f"S{k}-ext(dA={d_a},dB={d_b})")


def channel_covariance_acceptance(channel_unitary: np.ndarray, in_rep, out_rep,
                                  d_env_in: int = 1, d_env_out: int | None = None,
                                  cfg: ProverConfig | None = None) -> OptimizationOutcome:
    """Covariance of a channel via its Choi state and the gsym machinery.

    The channel is given as a unitary dilation W: (A ⊗ E_in) -> (B ⊗ E_out)
    with the environments' dimensions declared.  Its Choi state is tested
    for invariance under conj(U_A(g)) ⊗ V_B(g).
    """
    w = np.asarray(channel_unitary, dtype=complex)
    d_a = in_rep.dim
    d_b = out_rep.dim
    total = w.shape[0]
    if d_env_out is None:
        if total % d_b != 0:
            raise DimensionError("dilation size incompatible with the output rep")
        d_env_out = total // d_b
    if total != d_a * d_env_in or total != d_b * d_env_out:
        raise DimensionError("dilation size must equal dA*dEin and dB*dEout")
    if np.max(np.abs(w @ dagger(w) - np.eye(total))) > 1e-10:
        raise ValueError("channel dilation is not unitary within 1e-10")
    if in_rep.size != out_rep.size:
        raise ValueError("input and output reps must enumerate the same group")

    phi = maximally_entangled(d_a).vector.reshape(d_a, d_a)
    inp = np.zeros((d_a, total), dtype=complex)
    for a in range(d_a):
        inp[:, a * d_env_in] = phi[:, a]
    out = inp @ w.T  # W on the (a, e_in) index
    dm = np.einsum("rp,sq->rpsq", out, out.conj()).reshape(d_a * total, d_a * total)
    choi = partial_trace(dm, (d_a, d_b, d_env_out), keep=[0, 1])
    choi = DensityMatrix((choi + dagger(choi)) / 2, (d_a, d_b))

    joint = UnitaryRepTable(
        tuple(np.kron(ua.conj(), ub) for ua, ub in zip(in_rep.unitaries(), out_rep.unitaries())),
        name="choi-covariance",
        phase_trivial=getattr(in_rep, "phase_trivial", True) and getattr(out_rep, "phase_trivial", True),
    )
    return max_symmetric_fidelity(choi, joint, "gsym", cfg)
