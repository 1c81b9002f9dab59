"""Hamiltonian covariance tests and their closed-form counterparts.

The central object is the acceptance probability of the covariance test for
an evolution e^{-iHt} under a unitary representation.  It is always computed
two independent ways: from the Choi-state projector and from the normalized
trace sum; the two must agree to 1e-10.  The exact commutator series, the
fixed-state and optimized variants, the one-clean-qubit reduction identity,
density-matrix-exponentiation and block-encoded variants, and the
group-averaged Fourier/OTOC measurement all live here, together with the
standard model Hamiltonians used as fixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import UnitaryRepTable, twirl
from .linalg import (
    DensityMatrix,
    DimensionError,
    PureState,
    dagger,
    expm_hermitian,
    hermitian_defect,
    maximally_entangled,
    schatten_norm,
    sqrtm_psd,
    tensor,
)
from .report import AcceptanceReport, SeriesReport

TERM_HERMITIAN_ATOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Hermitian operator given densely or as a sum of local terms.

    ``terms`` is a tuple of (matrix, support) pairs; each matrix acts on the
    factors listed in ``support`` (in that order) and is embedded with
    identities elsewhere.  Only the terms form can be Trotterized.
    """

    dims: tuple[int, ...]
    dense: np.ndarray | None = None
    terms: tuple[tuple[np.ndarray, tuple[int, ...]], ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        d = math.prod(dims)
        if self.dense is None and self.terms is None:
            raise ValueError("need a dense matrix or a term list")
        if self.dense is not None:
            m = np.asarray(self.dense, dtype=complex)
            if m.shape != (d, d):
                raise DimensionError(f"dense shape {m.shape} does not match dims {dims}")
            if hermitian_defect(m) > TERM_HERMITIAN_ATOL:
                raise ValueError("dense Hamiltonian is not Hermitian within 1e-10")
            m.setflags(write=False)
            object.__setattr__(self, "dense", m)
        if self.terms is not None:
            cooked = []
            for mat, support in self.terms:
                mat = np.asarray(mat, dtype=complex)
                support = tuple(int(i) for i in support)
                if len(set(support)) != len(support):
                    raise ValueError(f"support {support} repeats a factor")
                if any(i < 0 or i >= len(dims) for i in support):
                    raise DimensionError(f"support {support} out of range")
                dloc = math.prod(dims[i] for i in support)
                if mat.shape != (dloc, dloc):
                    raise DimensionError(f"term shape {mat.shape} does not match support {support}")
                if hermitian_defect(mat) > TERM_HERMITIAN_ATOL:
                    raise ValueError("local term is not Hermitian within 1e-10")
                mat.setflags(write=False)
                cooked.append((mat, support))
            object.__setattr__(self, "terms", tuple(cooked))

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @classmethod
    def from_dense(cls, matrix, dims=None) -> "HamiltonianSpec":
        matrix = np.asarray(matrix, dtype=complex)
        if dims is None:
            dims = (matrix.shape[0],)
        return cls(tuple(dims), dense=matrix)

    @classmethod
    def from_terms(cls, terms, dims) -> "HamiltonianSpec":
        return cls(tuple(dims), terms=tuple((m, tuple(s)) for m, s in terms))

    @classmethod
    def from_pauli(cls, expr: str, coefficients=None) -> "HamiltonianSpec":
        """Parse shorthand like "ZZ+XI+IX" with an optional coefficient list."""
        words = [w.strip() for w in expr.split("+") if w.strip()]
        if not words:
            raise ValueError("empty Pauli expression")
        n = len(words[0])
        if any(len(w) != n for w in words):
            raise ValueError("Pauli words must share one length")
        if coefficients is None:
            coefficients = [1.0] * len(words)
        if len(coefficients) != len(words):
            raise ValueError("coefficient count does not match term count")
        terms = []
        for word, c in zip(words, coefficients):
            support = tuple(i for i, ch in enumerate(word) if ch != "I")
            if not support:
                terms.append((float(c) * np.eye(2, dtype=complex), (0,)))
                continue
            mat = tensor(*(PAULI[word[i]] for i in support)) * float(c)
            terms.append((mat, support))
        return cls.from_terms(terms, (2,) * n)

    def embedded_terms(self) -> list[np.ndarray]:
        if self.terms is None:
            raise ValueError("Hamiltonian has no local-term decomposition")
        return [embed_operator(mat, support, self.dims) for mat, support in self.terms]

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return np.asarray(self.dense)
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for t in self.embedded_terms():
            acc += t
        return acc


def embed_operator(op: np.ndarray, support, dims) -> np.ndarray:
    """Embed an operator on the ``support`` factors into the full space."""
    dims = [int(d) for d in dims]
    support = list(support)
    rest = [i for i in range(len(dims)) if i not in support]
    order = support + rest  # current factor layout after the kron below
    big = np.kron(op, np.eye(math.prod(dims[i] for i in rest) if rest else 1, dtype=complex))
    cur_dims = [dims[i] for i in order]
    k = len(dims)
    t = big.reshape(cur_dims + cur_dims)
    # out axis j must come from the current position of factor j
    pos = [order.index(j) for j in range(k)]
    axes = pos + [k + p for p in pos]
    d = math.prod(dims)
    return np.ascontiguousarray(t.transpose(axes)).reshape(d, d)


def _as_dense(h) -> np.ndarray:
    if isinstance(h, HamiltonianSpec):
        return h.to_dense()
    return np.asarray(h, dtype=complex)


def covariance_values(evolution: np.ndarray, rep) -> tuple[float, float]:
    """Acceptance of the covariance circuit for a given unitary evolution.

    Returns (choi_form, trace_form): the Choi-state projector value and the
    normalized trace sum (1/(d|G|)) sum_g Tr[U†(g) W† U(g) W].
    """
    w = np.asarray(evolution, dtype=complex)
    d = w.shape[0]
    if rep.dim != d:
        raise DimensionError(f"rep dim {rep.dim} does not match evolution dim {d}")
    unitaries = rep.unitaries()
    n = len(unitaries)

    phi = maximally_entangled(d).vector
    evolved = np.kron(np.eye(d, dtype=complex), w) @ phi
    proj = np.zeros(d * d, dtype=complex)
    for u in unitaries:
        proj += np.kron(u.conj(), u) @ evolved
    proj /= n
    choi_form = float(np.vdot(proj, proj).real)

    acc = 0.0 + 0.0j
    wd = dagger(w)
    for u in unitaries:
        acc += np.trace(dagger(u) @ wd @ u @ w)
    trace_form = float((acc / (d * n)).real)
    return choi_form, trace_form


def covariance_acceptance(h, rep, t: float) -> AcceptanceReport:
    """Covariance test of e^{-iHt}; Choi and trace forms must agree to 1e-10."""
    hd = _as_dense(h)
    w = expm_hermitian(hd, t)
    choi_form, trace_form = covariance_values(w, rep)
    return AcceptanceReport(
        simulated=choi_form,
        closed_form=trace_form,
        method="choi-projector/trace-form",
        metadata={"t": float(t)},
    )


def trotter_evolution(h: HamiltonianSpec, t: float, r: int) -> np.ndarray:
    """First-order Trotter product (prod_j e^{-iH_j t/r})^r on the full space."""
    if r < 1:
        raise ValueError("repetition count r must be >= 1")
    if h.terms is None:
        raise ValueError("Trotterization requires a local-term decomposition")
    step = np.eye(h.dim, dtype=complex)
    for full in h.embedded_terms():
        step = expm_hermitian(full, t / r) @ step
    return np.linalg.matrix_power(step, r)


def commutator_norms(h, rep, orders: int) -> list[float]:
    """c_n = (1/(d|G|)) sum_g ||[(H)^n, U(g)]||_2^2 for n = 0..orders."""
    hd = _as_dense(h)
    d = hd.shape[0]
    out = []
    nested = [np.asarray(u, dtype=complex) for u in rep.unitaries()]
    for n in range(orders + 1):
        total = sum(np.linalg.norm(c) ** 2 for c in nested)
        out.append(float(total / (d * rep.size)))
        nested = [hd @ c - c @ hd for c in nested]
    return out


def commutator_series(h, rep, t: float, order: int) -> SeriesReport:
    """Partial sums of the exact even-power commutator expansion.

    s_N = sum_{n<=N} (-1)^n t^{2n}/(2n)! c_n with c_n the normalized nested
    commutator norms; s_0 = 1 and the series converges for every real t.
    """
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    c = commutator_norms(h, rep, order)
    sums = []
    acc = 0.0
    for n in range(order + 1):
        acc += (-1.0) ** n * t ** (2 * n) / math.factorial(2 * n) * c[n]
        sums.append(acc)
    hd = _as_dense(h)
    exact, _ = covariance_values(expm_hermitian(hd, t), rep)
    return SeriesReport(
        order=order,
        partial_sums=tuple(sums),
        coefficients=tuple(c),
        exact=exact,
        method="nested-commutator",
    )


def twirl_form_coefficient(h, rep, n: int) -> float:
    """Inner t^{2n} coefficient of the twirl-form expansion.

    (1/d) sum_{k=0}^{n} C(2n,k) (2 - delta_{k,n}) (-1)^k Tr[T_G(H^{2n-k}) H^k];
    equals c_n from ``commutator_norms`` term by term.
    """
    hd = _as_dense(h)
    d = hd.shape[0]
    powers = [np.eye(d, dtype=complex)]
    for _ in range(2 * n):
        powers.append(powers[-1] @ hd)
    acc = 0.0 + 0.0j
    for k in range(n + 1):
        weight = math.comb(2 * n, k) * (2 - (1 if k == n else 0)) * (-1) ** k
        acc += weight * np.trace(twirl(rep, powers[2 * n - k]) @ powers[k])
    return float(acc.real / d)


def fixed_state_acceptance(h, rep, t: float, psi: PureState) -> float:
    """||T_G(e^{-iHt}) |psi>||_2^2 for a fixed input state."""
    hd = _as_dense(h)
    if psi.dim != hd.shape[0]:
        raise DimensionError("state dimension does not match the Hamiltonian")
    tw = twirl(rep, expm_hermitian(hd, t))
    return float(np.linalg.norm(tw @ psi.vector) ** 2)


def kadison_schwarz_bracket(h, rep, psi: PureState) -> float:
    """<T_G(H^2) - T_G(H)^2>_psi; non-negative for every state."""
    hd = _as_dense(h)
    th = twirl(rep, hd)
    th2 = twirl(rep, hd @ hd)
    op = th2 - th @ th
    return float(np.vdot(psi.vector, op @ psi.vector).real)


@dataclass(frozen=True)
class OptimizedAcceptance:
    """Supremum over input states with the closed-form lower bounds."""

    value: float
    bound_commutator: float
    bound_small_t: float | None   # only valid when ||H||inf * t < 1
    bound_nested: float
    tau: float


def max_over_states_acceptance(h, rep, t: float, nested_orders: int = 60) -> OptimizedAcceptance:
    """||T_G(e^{-iHt})||_inf^2 with the three lower bounds reported alongside."""
    hd = _as_dense(h)
    w = expm_hermitian(hd, t)
    tw = twirl(rep, w)
    value = float(schatten_norm(tw, np.inf) ** 2)
    unitaries = rep.unitaries()
    n_g = rep.size

    s_exp = sum(schatten_norm(u @ w - w @ u, np.inf) for u in unitaries) / n_g
    bound_commutator = 1.0 - 2.0 * s_exp

    hnorm = schatten_norm(hd, np.inf)
    tau = hnorm * abs(t)
    bound_small_t: float | None = None
    if tau < 1.0:
        s_h = sum(schatten_norm(u @ hd - hd @ u, np.inf) for u in unitaries) / n_g
        bound_small_t = 1.0 - 2.0 * abs(t) * s_h - 4.0 * tau**2

    # nested-commutator series bound; terms are bounded by (2 tau)^n / n!
    x = 0.0
    nested = [np.asarray(u, dtype=complex) for u in unitaries]
    for n in range(1, nested_orders + 1):
        nested = [hd @ c - c @ hd for c in nested]
        term = abs(t) ** n / math.factorial(n) * sum(
            schatten_norm(c, np.inf) for c in nested
        ) / n_g
        x += term
        if term < 1e-16 and n > 2:
            break
    bound_nested = max(0.0, 1.0 - x) ** 2

    return OptimizedAcceptance(value, bound_commutator, bound_small_t, bound_nested, tau)


def dqc1_reduction_check(u: np.ndarray) -> tuple[float, float]:
    """One-clean-qubit reduction identity.

    lhs: covariance acceptance with the order-2 representation {I, V},
    V = |0><1| ⊗ u + |1><0| ⊗ u†, and evolution Hadamard ⊗ I.
    rhs: 1/4 + Re Tr[u^2] / (4d).
    """
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if np.max(np.abs(u @ dagger(u) - np.eye(d))) > 1e-10:
        raise ValueError("reduction check requires a unitary input")
    v = np.zeros((2 * d, 2 * d), dtype=complex)
    v[:d, d:] = u
    v[d:, :d] = dagger(u)
    rep = UnitaryRepTable((np.eye(2 * d, dtype=complex), v), name="Z2-reduction")
    w = np.kron(HADAMARD, np.eye(d, dtype=complex))
    choi_form, trace_form = covariance_values(w, rep)
    if abs(choi_form - trace_form) > 1e-10:
        raise ArithmeticError("circuit and trace forms disagree beyond 1e-10")
    rhs = 0.25 + np.trace(u @ u).real / (4 * d)
    return choi_form, float(rhs)


def dme_acceptance(target_rho: DensityMatrix, state_rho: DensityMatrix, rep, t: float) -> AcceptanceReport:
    """Symmetry test driven by exponentiating a state (ideal, zero error).

    The evolution is e^{-i rho t} with rho the exponentiation resource
    (``state_rho``); at the ideal operating point it equals the state under
    test (``target_rho``).  The second-order expansion
    1 - t^2/(2d|G|) sum_g ||[U(g), target]||_2^2 is recorded as the closed
    form when it lies in [0, 1] and in the metadata always.  The sample-based
    copy count for error t^4 is metadata only.
    """
    if state_rho.dim != rep.dim or target_rho.dim != rep.dim:
        raise DimensionError("state dimension does not match the representation")
    w = expm_hermitian(state_rho.matrix, t)
    choi_form, trace_form = covariance_values(w, rep)
    d = rep.dim
    comm = sum(
        np.linalg.norm(u @ target_rho.matrix - target_rho.matrix @ u) ** 2
        for u in rep.unitaries()
    )
    expansion = 1.0 - t**2 / (2 * d * rep.size) * float(comm)
    meta = {
        "t": float(t),
        "second_order_expansion": expansion,
        "trace_form": trace_form,
        "exponentiation_error": 0.0,
        "copies_for_t4_error": math.ceil(1.0 / t**2) if t != 0 else 0,
    }
    closed = expansion if -1e-9 <= expansion <= 1.0 + 1e-9 else None
    return AcceptanceReport(simulated=choi_form, closed_form=closed, method="dme", metadata=meta)


@dataclass(frozen=True)
class OtocReport:
    """Fourier-basis measurement distribution and the recovered correlators."""

    probabilities: tuple[float, ...]      # Pr[g~] by label
    otocs: tuple[complex, ...]            # (1/d) Tr[U†(h) e^{iHt} U(h) e^{-iHt}] by label
    roundtrip_error: float                # max |inverse-Fourier(Pr) - otoc|
    estimates: tuple[complex, ...] | None = None
    shots: int = 0
    seed: int = 0
    hoeffding_bound: int | None = None


def abelian_otoc(h, rep: UnitaryRepTable, t: float, shots: int = 0, seed: int = 0,
                 epsilon: float | None = None, delta: float | None = None) -> OtocReport:
    """Fourier measurement over an Abelian group: distribution and OTOCs.

    The representation must declare an explicit isomorphism to Z_|G| via its
    ``labels``; unlabeled or non-Abelian tables are rejected rather than
    guessed.  With shots > 0 (or a Hoeffding (epsilon, delta) pair) the
    distribution is sampled and unbiased correlator estimates are returned.
    """
    if rep.labels is None:
        raise ValueError("abelian_otoc needs a representation with Z_n labels")
    n = rep.size
    if sorted(rep.labels) != list(range(n)):
        raise ValueError(f"labels must be a relabeling of 0..{n - 1}")
    by_label = [None] * n
    for mat, lab in zip(rep.matrices, rep.labels):
        by_label[lab] = mat
    check = range(n) if n <= 16 else range(0, n, max(1, n // 16))
    for a in check:
        for b in check:
            prod = by_label[a] @ by_label[b]
            if np.max(np.abs(prod - by_label[(a + b) % n])) > 1e-8:
                raise ValueError("labels are not an isomorphism to Z_n (group must be Abelian)")

    hd = _as_dense(h)
    d = hd.shape[0]
    w = expm_hermitian(hd, t)
    wd = dagger(w)
    otocs = np.array(
        [np.trace(dagger(u) @ wd @ u @ w) / d for u in by_label], dtype=complex
    )
    g = np.arange(n)
    phases = np.exp(2j * np.pi * np.outer(g, g) / n)
    probs = (phases @ otocs).real / n
    recovered = (phases.conj() @ (probs.astype(complex)))
    roundtrip = float(np.max(np.abs(recovered - otocs)))

    estimates = None
    bound = None
    if epsilon is not None and delta is not None:
        bound = math.ceil(4.0 / epsilon**2 * math.log(4.0 / delta))
        if shots == 0:
            shots = bound
    if shots > 0:
        rng = np.random.default_rng(seed)
        p = np.clip(probs, 0.0, None)
        p /= p.sum()
        outcomes = rng.choice(n, size=shots, p=p)
        estimates = tuple(
            complex(np.mean(np.exp(-2j * np.pi * outcomes * hh / n))) for hh in range(n)
        )
    return OtocReport(
        probabilities=tuple(float(x) for x in probs),
        otocs=tuple(complex(x) for x in otocs),
        roundtrip_error=roundtrip,
        estimates=estimates,
        shots=int(shots),
        seed=int(seed),
        hoeffding_bound=bound,
    )


def block_encode(h: np.ndarray) -> np.ndarray:
    """Unitary [[h, s], [s, -h]] with s = sqrt(I - h^2), for Hermitian ||h|| <= 1."""
    h = np.asarray(h, dtype=complex)
    if hermitian_defect(h) > 1e-8:
        raise ValueError("block encoding here requires a Hermitian matrix")
    if schatten_norm(h, np.inf) > 1.0 + 1e-10:
        raise ValueError("block encoding requires spectral norm <= 1")
    d = h.shape[0]
    hs = (h + dagger(h)) / 2
    s = sqrtm_psd(np.eye(d) - hs @ hs)
    b = np.zeros((2 * d, 2 * d), dtype=complex)
    b[:d, :d] = hs
    b[:d, d:] = s
    b[d:, :d] = s
    b[d:, d:] = -hs
    return b


def block_encoding_acceptance(h, rep) -> AcceptanceReport:
    """Symmetry test on a block-encoded Hamiltonian.

    Simulated value: explicit circuit with a |G|-dimensional control, the
    encoding ancilla, and projection onto |+>_C |0>_A.  Closed form:
    (1/(d|G|)) sum_g Tr[U†(g) h U(g) h].  Agreement to 1e-10 expected.
    """
    hd = _as_dense(h)
    d = hd.shape[0]
    if rep.dim != d:
        raise DimensionError("rep dimension does not match the Hamiltonian")
    b = block_encode(hd)
    unitaries = rep.unitaries()
    n = len(unitaries)

    phi = maximally_entangled(d).vector.reshape(d, d)  # axes (s, r)
    # state tensor psi[c, a, s, r], a in {0, 1} blocks of the encoding
    psi = np.zeros((n, 2, d, d), dtype=complex)
    psi[:, 0, :, :] = phi / np.sqrt(n)
    # controlled block-diagonal U(g): acts on s when a = 0
    for c, u in enumerate(unitaries):
        psi[c, 0] = u @ psi[c, 0]
    # B on the (a, s) pair
    psi = np.einsum("pq,cqr->cpr", b, psi.reshape(n, 2 * d, d)).reshape(n, 2, d, d)
    for c, u in enumerate(unitaries):
        psi[c, 0] = dagger(u) @ psi[c, 0]
    # project control onto |+> and ancilla onto |0>
    amp = psi[:, 0, :, :].sum(axis=0) / np.sqrt(n)
    simulated = float(np.linalg.norm(amp) ** 2)

    acc = sum(np.trace(dagger(u) @ hd @ u @ hd) for u in unitaries)
    closed = float((acc / (d * n)).real)
    return AcceptanceReport(simulated=simulated, closed_form=closed, method="block-encoding")


def transverse_ising(n: int) -> HamiltonianSpec:
    """Transverse Ising model with the cyclic boundary term."""
    if n < 2:
        raise ValueError("transverse Ising model needs n >= 2 sites")
    zz = tensor(PAULI["Z"], PAULI["Z"])
    terms = [(zz, (n - 1, 0))]
    terms += [(zz, (i, i + 1)) for i in range(n - 1)]
    terms += [(PAULI["X"], (i,)) for i in range(n)]
    return HamiltonianSpec.from_terms(terms, (2,) * n)


def heisenberg_xy(n: int, j: float = 1.0) -> HamiltonianSpec:
    """Heisenberg XY chain: J sum_i (X_i X_{i+1} + Y_i Y_{i+1})."""
    if n < 2:
        raise ValueError("XY model needs n >= 2 sites")
    xx = tensor(PAULI["X"], PAULI["X"]) * float(j)
    yy = tensor(PAULI["Y"], PAULI["Y"]) * float(j)
    terms = []
    for i in range(n - 1):
        terms.append((xx, (i, i + 1)))
        terms.append((yy, (i, i + 1)))
    return HamiltonianSpec.from_terms(terms, (2, ) * n)


def nmr(omega1: float, omega2: float, j: float) -> HamiltonianSpec:
    """Weakly J-coupled two-spin NMR Hamiltonian (diagonal in the Z basis)."""
    w_avg = (omega1 + omega2) / 2.0
    d_w = omega2 - omega1
    pj = math.pi * j
    terms = [
        (-(omega1 / 2.0) * PAULI["Z"], (0,)),
        (-(omega2 / 2.0) * PAULI["Z"], (1,)),
        ((pj / 2.0) * tensor(PAULI["Z"], PAULI["Z"]), (0, 1)),
    ]
    spec = HamiltonianSpec.from_terms(terms, (2, 2))
    expected = np.diag(
        [-w_avg + pj / 2, (d_w - pj) / 2, -(d_w + pj) / 2, w_avg + pj / 2]
    ).astype(complex)
    assert np.allclose(spec.to_dense(), expected, atol=1e-12)
    return spec
