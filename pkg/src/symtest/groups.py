"""Finite groups as permutations, their tensor-factor representations,
projectors, twirls, and cycle index polynomials.

Conventions
-----------
A :class:`Permutation` stores one-line notation ``image`` with ``image[i]``
the destination of letter ``i`` (0-based).  Composition is function
composition: ``(g * h)(i) = g(h(i))``.

Acting on ``k`` tensor factors of local dimension ``d``, the unitary
``W(pi)`` moves the factor in slot ``i`` to slot ``pi(i)``, so on a product
basis ket the factor ending up in slot ``j`` is the one that started in slot
``pi^{-1}(j)``.  This makes ``W`` a homomorphism: ``W(g) W(h) = W(g*h)``.

Groups are stored as explicit closed element lists (capped at 10**6
elements), which keeps cycle index computation exact.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .linalg import MAX_DIM, DensityMatrix, DimensionError, PureState, dagger

MAX_GROUP_ORDER = 10**6


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..k-1} in one-line notation."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"{img} is not a permutation of 0..{len(img) - 1}")
        object.__setattr__(self, "image", img)

    @property
    def letters(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.letters != other.letters:
            raise ValueError("permutation size mismatch")
        return Permutation(tuple(self.image[other.image[i]] for i in range(self.letters)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.letters
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(self.image[i] == i for i in range(self.letters))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycle decomposition, fixed points included as 1-cycles."""
        seen = [False] * self.letters
        out = []
        for start in range(self.letters):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            out.append(tuple(cyc))
        return out


CycleType = tuple[int, ...]


def cycle_type(p: Permutation) -> CycleType:
    """(a_1, ..., a_k) with a_j the number of j-cycles; sum j*a_j = k."""
    counts = [0] * p.letters
    for cyc in p.cycles():
        counts[len(cyc) - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class FiniteGroup:
    """Closed set of permutations on a common letter count."""

    elements: tuple[Permutation, ...]
    identity_index: int
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def letters(self) -> int:
        return self.elements[0].letters

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def from_elements(cls, elements, name: str = "") -> "FiniteGroup":
        elems = tuple(elements)
        ident = [i for i, g in enumerate(elems) if g.is_identity()]
        if not ident:
            raise ValueError("element list has no identity")
        return cls(elems, ident[0], name)

    @classmethod
    def from_generators(cls, generators, name: str = "") -> "FiniteGroup":
        """Closure of the generating set under composition (BFS)."""
        k = generators[0].letters
        ident = Permutation(tuple(range(k)))
        seen = {ident.image: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for gen in generators:
                    h = gen * g
                    if h.image not in seen:
                        if len(seen) >= MAX_GROUP_ORDER:
                            raise ValueError(f"group order exceeds cap {MAX_GROUP_ORDER}")
                        seen[h.image] = h
                        nxt.append(h)
            frontier = nxt
        elems = sorted(seen.values(), key=lambda p: p.image)
        return cls.from_elements(elems, name)


def symmetric_group(k: int) -> FiniteGroup:
    if k < 1:
        raise ValueError("k must be >= 1")
    if math.factorial(k) > MAX_GROUP_ORDER:
        raise ValueError(f"|S_{k}| = {k}! exceeds cap {MAX_GROUP_ORDER}")
    elems = [Permutation(img) for img in itertools.permutations(range(k))]
    return FiniteGroup.from_elements(elems, f"S{k}")


def cyclic_group(k: int) -> FiniteGroup:
    if k < 1:
        raise ValueError("k must be >= 1")
    gen = Permutation(tuple((i + 1) % k for i in range(k)))
    return FiniteGroup.from_generators([gen], f"C{k}")


def dihedral_group(k: int) -> FiniteGroup:
    if k < 3:
        raise ValueError("dihedral group requires k >= 3")
    rot = Permutation(tuple((i + 1) % k for i in range(k)))
    flip = Permutation(tuple((k - i) % k for i in range(k)))
    return FiniteGroup.from_generators([rot, flip], f"D{k}")


def cyclic_power(m: int, n: int) -> FiniteGroup:
    """Z_m^n via its left-regular action on the m**n element labels (Cayley)."""
    if m < 2 or n < 1:
        raise ValueError("cyclic_power requires m >= 2 and n >= 1")
    size = m**n
    if size > MAX_GROUP_ORDER:
        raise ValueError(f"|Z_{m}^{n}| = {size} exceeds cap {MAX_GROUP_ORDER}")
    labels = list(itertools.product(range(m), repeat=n))
    index = {lab: i for i, lab in enumerate(labels)}
    elems = []
    for a in labels:
        img = tuple(index[tuple((a[j] + b[j]) % m for j in range(n))] for b in labels)
        elems.append(Permutation(img))
    return FiniteGroup.from_elements(elems, f"Z{m}^{n}")


@dataclass(frozen=True)
class CycleIndexPolynomial:
    """Map from cycle type to element count, divided by |G| on evaluation."""

    terms: dict[CycleType, int]
    order: int
    letters: int

    def __post_init__(self):
        total = sum(self.terms.values())
        if total != self.order:
            raise ValueError(f"cycle type counts sum to {total}, expected {self.order}")
        identity_type = (self.letters,) + (0,) * (self.letters - 1)
        if self.terms.get(identity_type, 0) < 1:
            raise ValueError("cycle index is missing the identity term")


def cycle_index(g: FiniteGroup) -> CycleIndexPolynomial:
    counts = Counter(cycle_type(p) for p in g.elements)
    return CycleIndexPolynomial(dict(counts), g.order, g.letters)


def eval_cycle_index(z: CycleIndexPolynomial, values) -> float:
    """(1/|G|) sum over terms of count * prod values[j-1]**a_j."""
    values = list(values)
    if len(values) < z.letters:
        raise ValueError(f"need {z.letters} values, got {len(values)}")
    acc = 0.0
    for ctype, count in sorted(z.terms.items()):
        term = 1.0
        for j, a in enumerate(ctype, start=1):
            if a:
                term *= values[j - 1] ** a
        acc += count * term
    return acc / z.order


def permute_vector_factors(vec: np.ndarray, dims, p: Permutation) -> np.ndarray:
    """Apply W(p) to a state vector by axis remapping (no dense matrix)."""
    dims = [int(d) for d in dims]
    t = vec.reshape(dims)
    # (W psi)[y] = psi[y_{p(0)}, ..., y_{p(k-1)}]; with numpy transpose
    # semantics that is axes = p^{-1}.
    axes = list(p.inverse().image)
    return np.ascontiguousarray(t.transpose(axes)).reshape(-1)


def permute_matrix_factors(m: np.ndarray, dims, p: Permutation) -> np.ndarray:
    """Conjugate a matrix by W(p): rows and columns remapped together."""
    dims = [int(d) for d in dims]
    k = len(dims)
    t = m.reshape(dims + dims)
    inv = list(p.inverse().image)
    axes = inv + [k + a for a in inv]
    d = math.prod(dims)
    return np.ascontiguousarray(t.transpose(axes)).reshape(d, d)


def basis_index_map(p: Permutation, dims) -> np.ndarray:
    """idx_map with W(p) e_x = e_{idx_map[x]} in mixed-radix basis order."""
    dims = [int(d) for d in dims]
    k = len(dims)
    total = math.prod(dims)
    digits = np.empty((k, total), dtype=np.int64)
    rem = np.arange(total)
    for i in reversed(range(k)):
        digits[i] = rem % dims[i]
        rem //= dims[i]
    # y_{p(i)} = x_i  =>  digit i of the source lands in slot p(i)
    out = np.zeros(total, dtype=np.int64)
    weights = np.empty(k, dtype=np.int64)
    w = 1
    for i in reversed(range(k)):
        weights[i] = w
        w *= dims[i]
    for i in range(k):
        out += digits[i] * weights[p.image[i]]
    return out


@dataclass(frozen=True)
class PermutationRep:
    """Standard representation of a permutation group on k tensor factors."""

    group: FiniteGroup
    local_dim: int

    def __post_init__(self):
        if self.local_dim < 1:
            raise ValueError("local dimension must be positive")

    @property
    def k(self) -> int:
        return self.group.letters

    @property
    def dim(self) -> int:
        return self.local_dim**self.k

    @property
    def size(self) -> int:
        return self.group.order

    @property
    def phase_trivial(self) -> bool:
        return True

    def matrix(self, g: Permutation) -> np.ndarray:
        if self.dim > MAX_DIM:
            raise DimensionError(f"dense rep dimension {self.dim} exceeds cap {MAX_DIM}")
        idx = basis_index_map(g, [self.local_dim] * self.k)
        m = np.zeros((self.dim, self.dim), dtype=complex)
        m[idx, np.arange(self.dim)] = 1.0
        return m

    def unitaries(self) -> list[np.ndarray]:
        return [self.matrix(g) for g in self.group]


@dataclass(frozen=True)
class UnitaryRepTable:
    """Explicit unitary per element, for non-permutation representations.

    ``phase_trivial`` records whether the table is a genuine homomorphism or
    only projective; the group projector is only a projector in the former
    case.
    """

    matrices: tuple[np.ndarray, ...]
    name: str = ""
    phase_trivial: bool = True
    labels: tuple[int, ...] | None = None  # optional isomorphism to Z_|G|

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise DimensionError("rep table matrices must share one square shape")
            if np.max(np.abs(m @ dagger(m) - np.eye(d))) > 1e-10:
                raise ValueError("rep table entry is not unitary within 1e-10")
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def size(self) -> int:
        return len(self.matrices)

    def unitaries(self) -> list[np.ndarray]:
        return list(self.matrices)

    @classmethod
    def from_generators(cls, generators, name: str = "", atol: float = 1e-9) -> "UnitaryRepTable":
        """Closure of a finite set of unitary generators (must be finite)."""
        d = np.asarray(generators[0]).shape[0]
        elems = [np.eye(d, dtype=complex)]

        def find(m):
            return any(np.max(np.abs(m - e)) < atol for e in elems)

        frontier = [elems[0]]
        while frontier:
            nxt = []
            for g in frontier:
                for gen in generators:
                    h = np.asarray(gen, dtype=complex) @ g
                    if not find(h):
                        if len(elems) >= 4096:
                            raise ValueError("unitary closure did not stay desk-scale")
                        elems.append(h)
                        nxt.append(h)
            frontier = nxt
        return cls(tuple(elems), name=name)


def conjugate_rep(rep) -> UnitaryRepTable:
    """Entrywise-conjugate representation (same homomorphism property)."""
    mats = tuple(u.conj() for u in rep.unitaries())
    phase = getattr(rep, "phase_trivial", True)
    return UnitaryRepTable(mats, name="conj", phase_trivial=phase)


def product_rep(rep_a, rep_b, name: str = "") -> UnitaryRepTable:
    """Elementwise tensor product of two tables over the same group order."""
    if rep_a.size != rep_b.size:
        raise ValueError("rep sizes differ")
    mats = tuple(np.kron(a, b) for a, b in zip(rep_a.unitaries(), rep_b.unitaries()))
    phase = getattr(rep_a, "phase_trivial", True) and getattr(rep_b, "phase_trivial", True)
    return UnitaryRepTable(mats, name=name, phase_trivial=phase)


def group_projector(rep) -> np.ndarray:
    """(1/|G|) sum of the representation unitaries."""
    if rep.dim > MAX_DIM:
        raise DimensionError(f"projector dimension {rep.dim} exceeds cap {MAX_DIM}")
    acc = np.zeros((rep.dim, rep.dim), dtype=complex)
    for u in rep.unitaries():
        acc += u
    return acc / rep.size


def twirl(rep, x: np.ndarray) -> np.ndarray:
    """(1/|G|) sum of U(g) x U(g)† over the representation."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (rep.dim, rep.dim):
        raise DimensionError(f"operand shape {x.shape} does not match rep dim {rep.dim}")
    acc = np.zeros_like(x)
    for u in rep.unitaries():
        acc += u @ x @ dagger(u)
    return acc / rep.size


def apply_perm_rep(rep: PermutationRep, g: Permutation, state):
    """Act with W(g) on a state by index remapping (never builds the matrix)."""
    dims = [rep.local_dim] * rep.k
    if isinstance(state, PureState):
        if state.dim != rep.dim:
            raise DimensionError(f"state dim {state.dim} does not match rep dim {rep.dim}")
        return PureState(permute_vector_factors(state.vector, dims, g), state.dims)
    if isinstance(state, DensityMatrix):
        if state.dim != rep.dim:
            raise DimensionError(f"state dim {state.dim} does not match rep dim {rep.dim}")
        return DensityMatrix(permute_matrix_factors(state.matrix, dims, g), state.dims)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse CLI group strings: sym:k, cyc:k, dih:k, zpow:m^n."""
    kind, _, arg = spec.partition(":")
    if kind == "sym":
        return symmetric_group(int(arg))
    if kind == "cyc":
        return cyclic_group(int(arg))
    if kind == "dih":
        return dihedral_group(int(arg))
    if kind == "zpow":
        m, _, n = arg.partition("^")
        return cyclic_power(int(m), int(n))
    raise ValueError(f"unknown group spec {spec!r}")
