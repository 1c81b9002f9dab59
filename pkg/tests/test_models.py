import numpy as np
import pytest

from symtest import groups as gr
from symtest import linalg as la
from symtest import models
from symtest.hamiltonian import HamiltonianSpec
from symtest.separability import acceptance_group


class TestStateFixtures:
    def test_w3_single_party_reduction(self):
        # tracing two parties out of (|001> + |010> + |100>)/sqrt(3)
        rho = models.w_reduced(3)
        assert np.allclose(rho.matrix, np.diag([2 / 3, 1 / 3]), atol=1e-14)

    def test_bell_reduction_is_mixed(self):
        bell = models.bell_state()
        red = la.partial_trace(bell.density().matrix, (2, 2), keep=[0])
        assert np.allclose(red, np.eye(2) / 2, atol=1e-14)

    def test_product_state_separable_for_every_group(self):
        prod = models.product_state("0", "+")
        rho_b = la.DensityMatrix(la.partial_trace(prod.density().matrix, (2, 2), [1]), (2,))
        for group in (gr.symmetric_group(3), gr.cyclic_group(4), gr.dihedral_group(3)):
            assert abs(acceptance_group(rho_b, group).p - 1) < 1e-12

    def test_ghz_and_w_norms(self):
        assert abs(np.linalg.norm(models.ghz_state(4).vector) - 1) < 1e-12
        assert abs(np.linalg.norm(models.w_state(4).vector) - 1) < 1e-12

    def test_fixture_strings(self):
        assert isinstance(models.fixture("bell").obj, la.PureState)
        assert isinstance(models.fixture("w:3-reduced").obj, la.DensityMatrix)
        assert isinstance(models.fixture("mixed:2,2").obj, la.DensityMatrix)
        assert models.fixture("mixed:2,2").obj.dims == (2, 2)
        assert isinstance(models.fixture("tim:3").obj, HamiltonianSpec)
        assert isinstance(models.fixture("nmr:1,2,0.5").obj, HamiltonianSpec)

    def test_unknown_fixture(self):
        with pytest.raises(ValueError):
            models.fixture("unobtainium:9")


class TestHamiltonianFixtureInvariants:
    def test_every_fixture_commutation_list(self):
        cases = [
            (models.fixture("tim:3").obj, gr.PermutationRep(gr.cyclic_group(3), 2).unitaries()),
            (models.fixture("tim:3").obj, [models.global_flip_group(3, "X").matrices[1]]),
            (models.fixture("xy:3").obj, [models.global_flip_group(3, p).matrices[1] for p in "XYZ"]),
            (models.fixture("nmr:1,2,0.5").obj, list(models.pauli_z_pair_group().matrices)),
        ]
        for spec, unitaries in cases:
            h = spec.to_dense()
            for u in unitaries:
                assert la.schatten_norm(h @ u - u @ h, 2) <= 1e-12


class TestGroupTables:
    def test_cnot_swap_group_is_s3_on_nonzero_basis(self):
        table = models.cnot_swap_group()
        assert table.size == 6
        # every element fixes |00> and permutes the other three basis kets
        e0 = np.zeros(4, dtype=complex)
        e0[0] = 1.0
        for u in table.matrices:
            assert np.allclose(u @ e0, e0, atol=1e-14)

    def test_pauli_z_pair_group_closure(self):
        table = models.pauli_z_pair_group()
        assert table.size == 4
        for a in table.matrices:
            for b in table.matrices:
                prod = a @ b
                assert any(np.allclose(prod, c, atol=1e-12) for c in table.matrices)

    def test_named_group_lookup(self):
        assert models.named_group_table("z2xz2-pauli").size == 4
        assert models.named_group_table("d3-cnotswap").size == 6
        assert models.named_group_table("xflip:3").dim == 8
        with pytest.raises(ValueError):
            models.named_group_table("mystery")
