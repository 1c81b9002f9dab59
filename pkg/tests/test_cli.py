import csv
import json

import numpy as np

from symtest import cli, serialize
from symtest import linalg as la


def run(args):
    return cli.main(args)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestSepCommand:
    def test_w_reduced_monotone_csv(self, tmp_path):
        out = tmp_path / "sep.csv"
        code = run(["sep", "--state", "w:3-reduced", "--group", "sym",
                    "--k", "2..8", "--format", "csv", "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        ps = [float(r["p"]) for r in rows]
        assert ps == sorted(ps, reverse=True)
        assert all(float(r["max_difference"]) < 1e-10 for r in rows if r["max_difference"])

    def test_zpow_group_spec(self, tmp_path):
        out = tmp_path / "sep.json"
        code = run(["sep", "--state", "mixed:2", "--group", "zpow:2^2",
                    "--k", "4", "--out", str(out)])
        assert code == 0
        payload = read_json(out)
        assert payload["schema"] == 1
        assert payload["rows"][0]["p_direct"] is not None


class TestHamCommand:
    def test_nmr_symmetric_column(self, tmp_path):
        out = tmp_path / "ham.csv"
        code = run(["ham", "--ham", "nmr:1,2,0.5", "--group", "z2xz2-pauli",
                    "--t", "0..1:11", "--format", "csv", "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 11
        assert all(abs(float(r["p"]) - 1) < 1e-10 for r in rows)
        assert all(float(r["difference"]) < 1e-10 for r in rows)

    def test_nmr_asymmetric_below_one(self, tmp_path):
        out = tmp_path / "ham.csv"
        run(["ham", "--ham", "nmr:1,2,0.5", "--group", "d3-cnotswap",
             "--t", "0.5", "--format", "csv", "--out", str(out)])
        rows = read_csv(out)
        assert float(rows[0]["p"]) < 1 - 1e-6


class TestDqc1Command:
    def test_random_unitary_identity(self, tmp_path):
        out = tmp_path / "dqc1.json"
        code = run(["dqc1", "--unitary", "random:8", "--seed", "7", "--out", str(out)])
        assert code == 0
        rows = read_json(out)["rows"]
        assert rows[0]["difference"] < 1e-10

    def test_file_unitary(self, tmp_path):
        u = la.random_unitary(4, 3)
        path = tmp_path / "u.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"matrix": serialize.encode_matrix(u)}, fh)
        out = tmp_path / "dqc1.json"
        code = run(["dqc1", "--unitary", f"@{path}", "--out", str(out)])
        assert code == 0
        assert read_json(out)["rows"][0]["difference"] < 1e-10


class TestProverCommands:
    def test_gsym_agreement(self, tmp_path):
        out = tmp_path / "gsym.json"
        code = run(["gsym", "--state", "mixed:2", "--group", "phase:2",
                    "--restarts", "3", "--seed", "1", "--out", str(out)])
        assert code == 0
        row = read_json(out)["rows"][0]
        assert row["difference"] < 1e-3
        assert row["prover_converged"] and row["state_converged"]

    def test_gbse_with_reference(self, tmp_path):
        out = tmp_path / "gbse.json"
        code = run(["gbse", "--state", "mixed:2", "--group", "sym:2",
                    "--ref-dim", "2", "--restarts", "3", "--seed", "2", "--out", str(out)])
        assert code == 0
        row = read_json(out)["rows"][0]
        assert row["prover_value"] > 1 - 1e-4  # I/2 extends symmetrically

    def test_exhausted_iteration_budget_reports_nonconvergence(self, tmp_path):
        out = tmp_path / "gsym.json"
        code = run(["gsym", "--state", "product:0,+", "--group", "d3-cnotswap",
                    "--restarts", "2", "--iters", "1", "--seed", "4", "--out", str(out)])
        assert code == cli.EXIT_NO_CONVERGENCE
        row = read_json(out)["rows"][0]
        assert not (row["prover_converged"] and row["state_converged"])


class TestOtocCommand:
    def test_roundtrip_summary(self, tmp_path):
        out = tmp_path / "otoc.json"
        code = run(["otoc", "--ham", "pauli:ZZ+XI+IX", "--group", "phase:4",
                    "--t", "0.9", "--out", str(out)])
        assert code == 0
        payload = read_json(out)
        assert payload["summary"]["roundtrip_error"] < 1e-10
        assert abs(payload["summary"]["probability_sum"] - 1) < 1e-12

    def test_sampling_requires_seed(self):
        code = run(["otoc", "--ham", "pauli:ZZ", "--group", "phase:4",
                    "--t", "0.5", "--shots", "100"])
        assert code == cli.EXIT_VALIDATION


class TestBlockencCommand:
    def test_normalized_fixture(self, tmp_path):
        out = tmp_path / "be.json"
        code = run(["blockenc", "--ham", "pauli:ZZ+XI+IX", "--group", "zflip:2",
                    "--normalize", "--out", str(out)])
        assert code == 0
        assert read_json(out)["rows"][0]["difference"] < 1e-10


class TestDmeCommand:
    def test_grid(self, tmp_path):
        out = tmp_path / "dme.csv"
        code = run(["dme", "--state", "mixed:2,2", "--group", "xflip:2",
                    "--t", "0..0.1:3", "--format", "csv", "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        assert abs(float(rows[0]["p"]) - 1) < 1e-12


class TestResourcesCommand:
    def test_columns_and_ordering(self, tmp_path):
        out = tmp_path / "res.csv"
        code = run(["resources", "--state", "w:3-reduced", "--kind",
                    "cyclic,symmetric", "--k", "4..6", "--format", "csv", "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        assert list(rows[0].keys()) == ["k", "group", "p", "cswaps", "ratio"]
        by_kind = {}
        for r in rows:
            by_kind.setdefault(r["group"], {})[int(r["k"])] = float(r["ratio"])
        for k in (4, 5, 6):
            assert by_kind["cyclic"][k] < by_kind["symmetric"][k]

    def test_separable_input_is_validation_error(self):
        code = run(["resources", "--state", "product:0,+", "--kind", "symmetric", "--k", "2..3"])
        assert code == cli.EXIT_VALIDATION


class TestSweepCommand:
    def test_sep_sweep_with_plot(self, tmp_path):
        out = tmp_path / "sweep.csv"
        fig = tmp_path / "sweep.png"
        code = run(["sweep", "--kind", "sep", "--state", "w:3-reduced",
                    "--groups", "sym,cyc,dih", "--k", "2..6",
                    "--format", "csv", "--out", str(out), "--plot", str(fig)])
        assert code == 0
        assert fig.exists() and fig.stat().st_size > 0
        rows = read_csv(out)
        groups = {r["group"] for r in rows}
        assert {"S2", "C2", "D3"} <= groups

    def test_ham_sweep(self, tmp_path):
        out = tmp_path / "hsweep.json"
        code = run(["sweep", "--kind", "ham", "--ham", "nmr:1,2,0.5",
                    "--groups", "z2xz2-pauli,d3-cnotswap", "--t", "0..1:5",
                    "--out", str(out)])
        assert code == 0
        rows = read_json(out)["rows"]
        sym_rows = [r for r in rows if r["group"] == "z2xz2-pauli"]
        asym_rows = [r for r in rows if r["group"] == "d3-cnotswap"]
        assert all(abs(r["p"] - 1) < 1e-10 for r in sym_rows)
        assert any(r["p"] < 1 - 1e-6 for r in asym_rows)


class TestReproducibility:
    def test_identical_config_identical_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["otoc", "--ham", "pauli:ZZ+XI+IX", "--group", "phase:4",
                "--t", "0.9", "--epsilon", "0.2", "--delta", "0.1", "--seed", "3"]
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_csv_reproducible(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sep", "--state", "w:3-reduced", "--group", "cyc", "--k", "2..7",
                "--format", "csv"]
        run(args + ["--out", str(a)])
        run(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestTableGroups:
    def test_table_file_group(self, tmp_path):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        path = tmp_path / "group.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"matrices": [serialize.encode_matrix(np.eye(2)),
                                    serialize.encode_matrix(x)]}, fh)
        out = tmp_path / "bose.json"
        code = run(["bose", "--state", "plus", "--group", f"table:{path}",
                    "--out", str(out)])
        assert code == 0
        # |+> is fixed by {I, X}, so the test accepts with certainty
        assert abs(read_json(out)["rows"][0]["simulated"] - 1) < 1e-12


class TestValidation:
    def test_unknown_fixture(self):
        assert run(["bose", "--state", "nosuch", "--group", "sym:2"]) == cli.EXIT_VALIDATION

    def test_group_dimension_mismatch(self):
        assert run(["bose", "--state", "bell", "--group", "sym:3"]) == cli.EXIT_VALIDATION

    def test_non_hermitian_file_rejected(self, tmp_path):
        path = tmp_path / "h.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"dims": [2], "dense": serialize.encode_matrix(
                np.array([[0, 1], [0, 0]], dtype=complex))}, fh)
        code = run(["ham", "--ham", f"@{path}", "--group", "xflip:1", "--t", "0.5"])
        assert code == cli.EXIT_VALIDATION


class TestSerialization:
    def test_matrix_round_trip(self):
        m = la.random_unitary(3, 4)
        assert np.array_equal(serialize.decode_matrix(serialize.encode_matrix(m)), m)

    def test_hexfloat_lossless(self):
        m = la.random_unitary(3, 5) * (1 / 3)
        encoded = serialize.encode_matrix(m, hexfloat=True)
        assert isinstance(encoded[0][0][0], str)
        assert np.array_equal(serialize.decode_matrix(encoded), m)

    def test_state_file_round_trip(self, tmp_path):
        rho = la.random_density(4, 2, 6, dims=(2, 2))
        path = tmp_path / "state.json"
        serialize.save_state(str(path), rho, hexfloat=True)
        loaded = serialize.load_state(str(path))
        assert np.array_equal(loaded.matrix, rho.matrix)
        assert loaded.dims == rho.dims

    def test_hamiltonian_terms_file(self, tmp_path):
        from symtest.hamiltonian import PAULI
        path = tmp_path / "h.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({
                "dims": [2, 2],
                "terms": [{"matrix": serialize.encode_matrix(PAULI["Z"]), "support": [1]}],
            }, fh)
        spec = serialize.load_hamiltonian(str(path))
        assert np.allclose(spec.to_dense(), np.kron(np.eye(2), PAULI["Z"]), atol=1e-14)

    def test_grids(self):
        assert serialize.parse_t_grid("0..1:5") == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert serialize.parse_t_grid("0.7") == [0.7]
        assert serialize.parse_k_grid("2..5") == [2, 3, 4, 5]
        assert serialize.parse_k_grid("4") == [4]
