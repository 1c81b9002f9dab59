"""Separability-test acceptance probabilities and circuit resource models.

Four interchangeable routes compute the acceptance probability of the
k-copy Bose symmetry test on a reduced state: the partition sum over cycle
types, the recurrence, the complete Bell polynomial, and a brute-force
contraction against the dense representation.  They must agree to 1e-10
wherever the dense route is feasible.

Coefficients are kept in exact integer arithmetic; floats enter only when a
term is evaluated at the trace values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import (
    FiniteGroup,
    basis_index_map,
    cycle_index,
    cyclic_group,
    dihedral_group,
    eval_cycle_index,
    symmetric_group,
)
from .linalg import MAX_DIM, DensityMatrix, DimensionError


class SeparableInputError(ValueError):
    """Resources-to-rejection is undefined at acceptance probability 1."""


@dataclass(frozen=True)
class SeparabilityResult:
    k: int
    group: str
    p: float
    method: str
    traces: tuple[float, ...]

    def __post_init__(self):
        if not -1e-9 <= self.p <= 1.0 + 1e-9:
            raise ValueError(f"acceptance probability {self.p} outside [0, 1]")


@dataclass(frozen=True)
class ResourceCount:
    """Gate-model numbers for one test construction (not compiled circuits).

    ``cswap_count`` is the exact controlled-SWAP count of the documented
    construction.  ``cswap_formula`` is the closed-form cost stated for the
    same construction, which differs from the exact count for cyclic tests
    at non-power-of-two k; both are reported.
    """

    kind: str
    k: int
    cswap_count: int
    controlled_blocks: int
    cswap_formula: float
    control_qubits: int
    depth_class: str


def partitions(k: int):
    """Cycle-type count vectors (a_1..a_k) with sum j*a_j = k, exact integers."""

    def rec(remaining: int, max_part: int, acc: list[int]):
        if remaining == 0:
            yield tuple(acc)
            return
        for part in range(min(max_part, remaining), 0, -1):
            acc[part - 1] += 1
            yield from rec(remaining - part, part, acc)
            acc[part - 1] -= 1

    yield from rec(k, k, [0] * k)


def cycle_type_count(k: int, ctype) -> int:
    """Number of S_k elements of the given cycle type: k! / prod j^a_j a_j!."""
    denom = 1
    for j, a in enumerate(ctype, start=1):
        denom *= j**a * math.factorial(a)
    count = Fraction(math.factorial(k), denom)
    assert count.denominator == 1
    return int(count)


def state_traces(rho_b: DensityMatrix, k: int) -> tuple[float, ...]:
    """(Tr[rho], Tr[rho^2], ..., Tr[rho^k]) from the eigenvalues, powered."""
    lam = rho_b.eigenvalues()
    return tuple(float(np.sum(lam**j)) for j in range(1, k + 1))


def acceptance_sym(rho_b: DensityMatrix, k: int) -> SeparabilityResult:
    """Partition sum: sum over cycle types of prod Tr[rho^j]^a_j / (j^a_j a_j!)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = state_traces(rho_b, k)
    acc = 0.0
    for ctype in partitions(k):
        denom = 1
        term = 1.0
        for j, a in enumerate(ctype, start=1):
            if a:
                denom *= j**a * math.factorial(a)
                term *= x[j - 1] ** a
        acc += term / denom
    return SeparabilityResult(k, f"S{k}", acc, "cycle-index", x)


def acceptance_recurrence(rho_b: DensityMatrix, k: int) -> SeparabilityResult:
    """p(k) = (1/k) sum_{j=1}^{k} Tr[rho^j] p(k-j), seeded with p(0) = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = state_traces(rho_b, k)
    p = [1.0]
    for n in range(1, k + 1):
        p.append(sum(x[j - 1] * p[n - j] for j in range(1, n + 1)) / n)
    return SeparabilityResult(k, f"S{k}", p[k], "recurrence", x)


def complete_bell(n: int, y) -> float:
    """Complete Bell polynomial B_n(y_1..y_n) by its standard recurrence."""
    y = list(y)
    b = [1.0]
    for m in range(n):
        b.append(sum(math.comb(m, i) * b[m - i] * y[i] for i in range(m + 1)))
    return b[n]


def acceptance_bell(rho_b: DensityMatrix, k: int) -> SeparabilityResult:
    """(1/k!) B_k(x_1, x_2, 2! x_3, ..., (k-1)! x_k) at x_j = Tr[rho^j]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = state_traces(rho_b, k)
    y = [math.factorial(j - 1) * x[j - 1] for j in range(1, k + 1)]
    p = complete_bell(k, y) / math.factorial(k)
    return SeparabilityResult(k, f"S{k}", p, "bell", x)


def acceptance_group(rho_b: DensityMatrix, g: FiniteGroup) -> SeparabilityResult:
    """Cycle index polynomial of g evaluated at the trace-power values."""
    k = g.letters
    x = state_traces(rho_b, k)
    p = eval_cycle_index(cycle_index(g), x)
    return SeparabilityResult(k, g.name or f"G{g.order}", p, "cycle-index", x)


def acceptance_direct(rho_b: DensityMatrix, g: FiniteGroup) -> SeparabilityResult:
    """Brute-force oracle: contract every dense W(pi) against rho^{⊗k}.

    Uses the full d^k-dimensional basis with no cycle-type shortcut, so it is
    independent of the closed-form routes.
    """
    k = g.letters
    d = rho_b.dim
    if d**k > MAX_DIM:
        raise DimensionError(f"direct oracle needs d^k = {d**k} <= {MAX_DIM}")
    big = rho_b.matrix
    for _ in range(k - 1):
        big = np.kron(big, rho_b.matrix)
    total = d**k
    cols = np.arange(total)
    acc = 0.0
    dims = [d] * k
    for perm in g:
        idx = basis_index_map(perm, dims)
        inv = np.empty_like(idx)
        inv[idx] = cols
        acc += big[inv, cols].sum().real
    p = acc / g.order
    x = state_traces(rho_b, k)
    return SeparabilityResult(k, g.name or f"G{g.order}", p, "direct", x)


def _swaps_for_cycle_power(k: int, power: int) -> int:
    # sigma^power on k letters decomposes into gcd(power, k) cycles; a
    # permutation moving m points in c cycles needs m - c transpositions.
    g = math.gcd(power, k)
    return 0 if g == k else k - g


def gate_count(kind: str, k: int) -> ResourceCount:
    """Controlled-SWAP model numbers for the cyclic/symmetric/dihedral tests."""
    if kind == "symmetric":
        if k < 2:
            raise ValueError("symmetric test requires k >= 2")
        cswaps = k * (k - 1) // 2
        return ResourceCount(
            kind=kind,
            k=k,
            cswap_count=cswaps,
            controlled_blocks=cswaps,
            cswap_formula=float(cswaps),
            control_qubits=k * (k - 1) // 2,
            depth_class="O(k log k)",
        )
    if kind == "cyclic":
        if k < 2:
            raise ValueError("cyclic test requires k >= 2")
        blocks = int(math.floor(math.log2(k - 1))) + 1 if k > 1 else 0
        exact = sum(_swaps_for_cycle_power(k, 2**j) for j in range(blocks))
        return ResourceCount(
            kind=kind,
            k=k,
            cswap_count=exact,
            controlled_blocks=blocks,
            cswap_formula=(k - 1) * math.log2(k),
            control_qubits=math.ceil(math.log2(k)),
            depth_class="O(log k)",
        )
    if kind == "dihedral":
        if k < 3:
            raise ValueError("dihedral test requires k >= 3")
        cyc = gate_count("cyclic", k)
        # flip element: reversal with floor(k/2) disjoint transpositions, then
        # one flipped copy of each cyclic power
        flip_swaps = k // 2
        return ResourceCount(
            kind=kind,
            k=k,
            cswap_count=2 * cyc.cswap_count + flip_swaps,
            controlled_blocks=2 * cyc.controlled_blocks + 1,
            cswap_formula=2 * k * math.log2(k),
            control_qubits=cyc.control_qubits + 1,
            depth_class="O(log k)",
        )
    raise ValueError(f"unknown test kind {kind!r}")


def group_for_kind(kind: str, k: int) -> FiniteGroup:
    if kind == "symmetric":
        return symmetric_group(k)
    if kind == "cyclic":
        return cyclic_group(k)
    if kind == "dihedral":
        return dihedral_group(k)
    raise ValueError(f"unknown test kind {kind!r}")


def acceptance_for_kind(rho_b: DensityMatrix, kind: str, k: int) -> float:
    """Acceptance probability for a named test kind at copy count k.

    The symmetric kind goes through the recurrence so large k never needs
    the k! element list; cyclic and dihedral groups stay small enough to
    enumerate.
    """
    if kind == "symmetric":
        return acceptance_recurrence(rho_b, k).p
    return acceptance_group(rho_b, group_for_kind(kind, k)).p


def resources_to_rejection(rho_b: DensityMatrix, kind: str, k: int) -> float:
    """Gate cost divided by rejection probability 1 - p.

    The numerator takes the cheaper of the construction's exact CSWAP count
    and its stated closed-form cost (they differ for cyclic tests at
    non-power-of-two k).  Raises on separable input, where the metric is
    undefined, instead of returning infinity.
    """
    p = acceptance_for_kind(rho_b, kind, k)
    if p >= 1.0 - 1e-12:
        raise SeparableInputError(
            f"acceptance probability is 1 for the {kind} test at k={k}; "
            "resources-to-rejection is undefined for separable input"
        )
    rc = gate_count(kind, k)
    cost = min(float(rc.cswap_count), rc.cswap_formula)
    return cost / (1.0 - p)
