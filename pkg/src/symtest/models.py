"""Canonical states, Hamiltonians, and example groups used across the tests.

Everything is constructed in code, never loaded from files, so fixtures are
bit-exact across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import UnitaryRepTable
from .hamiltonian import PAULI, heisenberg_xy, nmr, transverse_ising
from .linalg import DensityMatrix, PureState, maximally_mixed, partial_trace, tensor


@dataclass(frozen=True)
class NamedFixture:
    name: str
    obj: object
    note: str = ""


def bell_state() -> PureState:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return PureState(v, (2, 2))


def ghz_state(n: int) -> PureState:
    if n < 2:
        raise ValueError("GHZ needs n >= 2")
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return PureState(v, (2,) * n)


def w_state(n: int) -> PureState:
    if n < 2:
        raise ValueError("W state needs n >= 2")
    v = np.zeros(2**n, dtype=complex)
    for i in range(n):
        v[1 << i] = 1 / np.sqrt(n)
    return PureState(v, (2,) * n)


def w_reduced(n: int) -> DensityMatrix:
    """Single-party reduction of the n-qubit W state: diag((n-1)/n, 1/n)."""
    psi = w_state(n)
    red = partial_trace(psi.density().matrix, psi.dims, keep=[0])
    return DensityMatrix(red, (2,))


def plus_state() -> PureState:
    return PureState(np.array([1, 1], dtype=complex) / np.sqrt(2), (2,))


def product_state(*kets: str) -> PureState:
    """Tensor product of named single-qubit kets from {0, 1, +, -}."""
    table = {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
        "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
    }
    vec = np.array([1], dtype=complex)
    for ket in kets:
        vec = np.kron(vec, table[ket])
    return PureState(vec, (2,) * len(kets))


def singlet_state() -> PureState:
    v = np.zeros(4, dtype=complex)
    v[1] = 1 / np.sqrt(2)
    v[2] = -1 / np.sqrt(2)
    return PureState(v, (2, 2))


def pauli_z_pair_group() -> UnitaryRepTable:
    """Z2 x Z2 generated by Pauli-Z on either qubit: {II, ZI, IZ, ZZ}."""
    i2, z = PAULI["I"], PAULI["Z"]
    mats = (tensor(i2, i2), tensor(z, i2), tensor(i2, z), tensor(z, z))
    return UnitaryRepTable(mats, name="Z2xZ2-pauli")


def cnot_swap_group() -> UnitaryRepTable:
    """Order-6 group generated by CNOT and SWAP on two qubits (dihedral D3)."""
    cnot = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    swap = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )
    table = UnitaryRepTable.from_generators([cnot, swap], name="D3-cnot-swap")
    assert table.size == 6
    return table


def global_flip_group(n: int, pauli: str) -> UnitaryRepTable:
    """Order-2 group {I, P^{⊗n}} for a Pauli label P in {X, Y, Z}."""
    p = PAULI[pauli]
    flip = p
    for _ in range(n - 1):
        flip = np.kron(flip, p)
    return UnitaryRepTable((np.eye(2**n, dtype=complex), flip), name=f"{pauli}-flip-{n}")


def _mixed(args) -> DensityMatrix:
    d = int(args[0])
    k = int(args[1]) if len(args) > 1 else 1
    return maximally_mixed(d**k, dims=(d,) * k)


_STATE_BUILDERS = {
    "bell": lambda args: bell_state(),
    "singlet": lambda args: singlet_state(),
    "ghz": lambda args: ghz_state(int(args[0])),
    "w": lambda args: w_state(int(args[0])),
    "plus": lambda args: plus_state(),
    "product": lambda args: product_state(*args),
    "mixed": _mixed,
}

_HAM_BUILDERS = {
    "tim": lambda args: transverse_ising(int(args[0])),
    "xy": lambda args: heisenberg_xy(int(args[0]), float(args[1]) if len(args) > 1 else 1.0),
    "nmr": lambda args: nmr(float(args[0]), float(args[1]), float(args[2])),
}


def fixture(name: str) -> NamedFixture:
    """Build a named fixture from a spec string like ``w:3-reduced`` or ``tim:4``.

    States: bell, singlet, plus, ghz:n, w:n, w:n-reduced, product:0,+,...,
    mixed:d.  Hamiltonians: tim:N, xy:N[,J], nmr:w1,w2,J.
    """
    head, _, tail = name.partition(":")
    reduced = False
    if tail.endswith("-reduced"):
        reduced = True
        tail = tail[: -len("-reduced")]
    args = [a for a in tail.split(",") if a] if tail else []
    if head in _STATE_BUILDERS:
        obj = _STATE_BUILDERS[head](args)
        if reduced:
            if head != "w":
                raise ValueError(f"no reduced variant for fixture {head!r}")
            obj = w_reduced(int(args[0]))
        return NamedFixture(name, obj, "state fixture")
    if head in _HAM_BUILDERS:
        return NamedFixture(name, _HAM_BUILDERS[head](args), "hamiltonian fixture")
    raise ValueError(f"unknown fixture {name!r}")


_GROUP_TABLES = {
    "z2xz2-pauli": lambda args: pauli_z_pair_group(),
    "d3-cnotswap": lambda args: cnot_swap_group(),
    "xflip": lambda args: global_flip_group(int(args[0]), "X"),
    "yflip": lambda args: global_flip_group(int(args[0]), "Y"),
    "zflip": lambda args: global_flip_group(int(args[0]), "Z"),
}


def named_group_table(spec: str) -> UnitaryRepTable:
    """Example unitary-table groups addressable from the CLI."""
    head, _, tail = spec.partition(":")
    args = [a for a in tail.split(",") if a] if tail else []
    if head in _GROUP_TABLES:
        return _GROUP_TABLES[head](args)
    raise ValueError(f"unknown named group {spec!r}")
