import math

import numpy as np
import pytest

from symtest import groups as gr
from symtest import linalg as la


class TestConstructors:
    def test_cyclic_4_elements(self):
        # enumerate powers of the generator by hand
        g = gr.cyclic_group(4)
        images = sorted(p.image for p in g)
        assert images == sorted([
            (0, 1, 2, 3),      # e
            (1, 2, 3, 0),      # full cycle
            (2, 3, 0, 1),      # two 2-cycles
            (3, 0, 1, 2),      # inverse cycle
        ])

    def test_dihedral_3_is_symmetric_3(self):
        d3 = gr.dihedral_group(3)
        s3 = gr.symmetric_group(3)
        assert d3.order == 6
        assert sorted(p.image for p in d3) == sorted(p.image for p in s3)

    def test_symmetric_3_count(self):
        assert gr.symmetric_group(3).order == 6

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_symmetric_order_is_factorial(self, k):
        assert gr.symmetric_group(k).order == math.factorial(k)

    def test_cyclic_power_order(self):
        assert gr.cyclic_power(2, 3).order == 8
        assert gr.cyclic_power(3, 2).order == 9

    def test_group_axioms_on_samples(self):
        for g in (gr.cyclic_group(5), gr.dihedral_group(4), gr.cyclic_power(2, 2)):
            elems = {p.image for p in g}
            for a in g:
                assert a.inverse().image in elems
                for b in g:
                    assert (a * b).image in elems

    def test_oversize_rejected(self):
        with pytest.raises(ValueError):
            gr.symmetric_group(11)


class TestCycleType:
    def test_identity(self):
        assert gr.cycle_type(gr.Permutation((0, 1, 2, 3))) == (4, 0, 0, 0)

    def test_double_transposition(self):
        # (13)(24) in 1-based notation: 0<->2, 1<->3
        assert gr.cycle_type(gr.Permutation((2, 3, 0, 1))) == (0, 2, 0, 0)

    def test_three_cycle_in_s4(self):
        # (123): 0->1->2->0, 3 fixed
        assert gr.cycle_type(gr.Permutation((1, 2, 0, 3))) == (1, 0, 1, 0)


class TestCycleIndex:
    def test_s2(self):
        z = gr.cycle_index(gr.symmetric_group(2))
        assert z.terms == {(2, 0): 1, (0, 1): 1}

    def test_s3(self):
        z = gr.cycle_index(gr.symmetric_group(3))
        assert z.terms == {(3, 0, 0): 1, (1, 1, 0): 3, (0, 0, 1): 2}

    def test_c4(self):
        z = gr.cycle_index(gr.cyclic_group(4))
        assert z.terms == {(4, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 0, 1): 2}

    @pytest.mark.parametrize("k", range(2, 8))
    def test_symmetric_counts_closed_form(self, k):
        z = gr.cycle_index(gr.symmetric_group(k))
        for ctype, count in z.terms.items():
            denom = 1
            for j, a in enumerate(ctype, start=1):
                denom *= j**a * math.factorial(a)
            assert count == math.factorial(k) // denom

    def test_eval_at_ones_is_one(self):
        for g in (gr.symmetric_group(4), gr.cyclic_group(6), gr.dihedral_group(5),
                  gr.cyclic_power(2, 3)):
            z = gr.cycle_index(g)
            assert abs(gr.eval_cycle_index(z, [1.0] * g.letters) - 1) < 1e-14

    def test_eval_s2(self):
        z = gr.cycle_index(gr.symmetric_group(2))
        assert abs(gr.eval_cycle_index(z, [1, 0.5]) - 0.75) < 1e-14

    def test_eval_c3(self):
        z = gr.cycle_index(gr.cyclic_group(3))
        assert abs(gr.eval_cycle_index(z, [1, 0.25, 0.25]) - 0.5) < 1e-14

    def test_length_mismatch(self):
        z = gr.cycle_index(gr.symmetric_group(3))
        with pytest.raises(ValueError):
            gr.eval_cycle_index(z, [1.0])


class TestPermutationRep:
    def test_homomorphism_exact(self):
        rep = gr.PermutationRep(gr.dihedral_group(3), 2)
        for a in rep.group:
            for b in rep.group:
                assert np.array_equal(rep.matrix(a) @ rep.matrix(b), rep.matrix(a * b))

    def test_swap_on_01(self):
        rep = gr.PermutationRep(gr.symmetric_group(2), 2)
        swap = rep.matrix(gr.Permutation((1, 0)))
        v = np.zeros(4, dtype=complex)
        v[0b01] = 1.0
        assert np.argmax(np.abs(swap @ v)) == 0b10

    def test_full_cycle_on_basis_ket(self):
        rep = gr.PermutationRep(gr.cyclic_group(3), 3)
        cyc = gr.Permutation((1, 2, 0))  # slot i -> slot i+1
        v = np.zeros(27, dtype=complex)
        v[0 * 9 + 1 * 3 + 2] = 1.0  # |0,1,2>
        out = gr.apply_perm_rep(rep, cyc, la.PureState(v, (3, 3, 3)))
        # the factor values cycle forward a slot: |2,0,1>
        assert np.argmax(np.abs(out.vector)) == 2 * 9 + 0 * 3 + 1

    def test_product_state_invariance(self):
        rho = la.random_density(2, 2, seed=8)
        big = np.kron(np.kron(rho.matrix, rho.matrix), rho.matrix)
        state = la.DensityMatrix(big, (2, 2, 2))
        rep = gr.PermutationRep(gr.symmetric_group(3), 2)
        for g in rep.group:
            moved = gr.apply_perm_rep(rep, g, state)
            assert np.max(np.abs(moved.matrix - big)) < 1e-14

    def test_matrix_action_matches_index_action(self):
        rep = gr.PermutationRep(gr.symmetric_group(3), 2)
        vec = la.random_pure(8, 17, dims=(2, 2, 2))
        for g in rep.group:
            direct = rep.matrix(g) @ vec.vector
            mapped = gr.apply_perm_rep(rep, g, vec).vector
            assert np.max(np.abs(direct - mapped)) < 1e-14

    @pytest.mark.parametrize("d,k", [(2, 3), (3, 3), (4, 2), (2, 5)])
    def test_trace_identity(self, d, k):
        # Tr[W(pi) rho^{⊗k}] = prod_j Tr[rho^j]^{a_j}
        rho = la.random_density(d, d, seed=d * 10 + k)
        lam = rho.eigenvalues()
        big = rho.matrix
        for _ in range(k - 1):
            big = np.kron(big, rho.matrix)
        rep = gr.PermutationRep(gr.symmetric_group(min(k, 4)) if k <= 4 else gr.cyclic_group(k), d)
        for g in rep.group:
            expected = 1.0
            for j, a in enumerate(gr.cycle_type(g), start=1):
                expected *= float(np.sum(lam**j)) ** a
            got = np.trace(rep.matrix(g) @ big).real
            assert abs(got - expected) < 1e-10


class TestProjectorAndTwirl:
    def test_s2_two_qubits_symmetric_subspace(self):
        rep = gr.PermutationRep(gr.symmetric_group(2), 2)
        pi = gr.group_projector(rep)
        swap = rep.matrix(gr.Permutation((1, 0)))
        assert np.allclose(pi, (np.eye(4) + swap) / 2, atol=1e-14)
        assert abs(np.trace(pi).real - 3) < 1e-12  # rank d(d+1)/2 = 3

    def test_trivial_group(self):
        rep = gr.PermutationRep(gr.symmetric_group(1), 4)
        assert np.allclose(gr.group_projector(rep), np.eye(4), atol=1e-14)

    def test_s3_three_qubits_rank(self):
        rep = gr.PermutationRep(gr.symmetric_group(3), 2)
        pi = gr.group_projector(rep)
        # symmetric subspace of 3 qubits: C(d+k-1, k) = C(4,3) = 4
        assert abs(np.trace(pi).real - 4) < 1e-12

    @pytest.mark.parametrize("builder", [
        lambda: gr.PermutationRep(gr.symmetric_group(3), 2),
        lambda: gr.PermutationRep(gr.cyclic_group(4), 2),
        lambda: gr.PermutationRep(gr.dihedral_group(3), 2),
    ])
    def test_projector_idempotent_hermitian(self, builder):
        pi = gr.group_projector(builder())
        assert np.max(np.abs(pi @ pi - pi)) < 1e-12
        assert np.max(np.abs(pi - pi.conj().T)) < 1e-12

    def test_twirl_fixed_point(self):
        rep = gr.PermutationRep(gr.symmetric_group(2), 2)
        x = np.eye(4, dtype=complex) * 0.3
        assert np.allclose(gr.twirl(rep, x), x, atol=1e-14)

    def test_twirl_z_by_x_group(self):
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        rep = gr.UnitaryRepTable((np.eye(2, dtype=complex), x))
        assert np.max(np.abs(gr.twirl(rep, z))) < 1e-14

    @pytest.mark.parametrize("seed", range(3))
    def test_twirl_trace_preserved_and_idempotent(self, seed):
        rep = gr.PermutationRep(gr.cyclic_group(3), 2)
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        tw = gr.twirl(rep, x)
        assert abs(np.trace(tw) - np.trace(x)) < 1e-10
        assert np.max(np.abs(gr.twirl(rep, tw) - tw)) < 1e-10


class TestUnitaryRepTable:
    def test_closure_from_generators(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        table = gr.UnitaryRepTable.from_generators([x])
        assert table.size == 2

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            gr.UnitaryRepTable((np.array([[1, 1], [0, 1]], dtype=complex),))

    def test_conjugate_and_product(self):
        u = la.random_unitary(2, 3)
        table = gr.UnitaryRepTable((np.eye(2, dtype=complex), u), phase_trivial=False)
        conj = gr.conjugate_rep(table)
        assert np.allclose(conj.matrices[1], u.conj())
        prod = gr.product_rep(table, conj)
        assert prod.dim == 4 and prod.size == 2


class TestGroupSpecs:
    def test_parse_specs(self):
        assert gr.parse_group_spec("sym:3").order == 6
        assert gr.parse_group_spec("cyc:4").order == 4
        assert gr.parse_group_spec("dih:3").order == 6
        assert gr.parse_group_spec("zpow:2^3").order == 8

    def test_unknown_spec(self):
        with pytest.raises(ValueError):
            gr.parse_group_spec("frob:3")
