import csv
import json
import subprocess
import sys

import pytest

from netblotto.cli import main
from netblotto.model import load_spec


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def ring5_spec(tmp_path, capsys):
    path = tmp_path / "ring5.json"
    assert run(capsys, "make-spec", "--n", 5, "--k", 2, "--out", path)[0] == 0
    return path


class TestRingSolve:
    def test_equal_weights(self, capsys):
        code, out, _ = run(capsys, "ring-solve", "--n", 5, "--weights", "1,1,1,1,1")
        doc = json.loads(out)
        assert code == 0
        assert doc["p"] == pytest.approx([0.5] * 5, abs=1e-12)
        assert doc["payoffs"] == pytest.approx([0.75] * 5, abs=1e-12)
        assert doc["interior"] is True
        assert doc["survival_rate"] == pytest.approx(0.25, abs=1e-12)

    def test_singular(self, capsys):
        code, out, err = run(capsys, "ring-solve", "--n", 4, "--weights", "1,1,1,1")
        assert code == 2 and out == ""
        assert "4 | n" in err

    def test_arithmetic_interior(self, capsys):
        code, out, _ = run(capsys, "ring-solve", "--n", 11, "--epsilon", 0.02)
        doc = json.loads(out)
        assert code == 0 and doc["interior"] and doc["residual"] <= 1e-9
        assert len(doc["weights"]) == 11 and doc["weights"][5] == 1.0

    @pytest.mark.parametrize(
        "argv",
        [
            ["ring-solve", "--n", "5"],
            ["ring-solve", "--n", "5", "--weights", "1,1,1"],
            ["ring-solve", "--n", "5", "--weights", "1,x,1,1,1"],
            ["ring-solve", "--n", "five", "--epsilon", "0.01"],
            ["ring-solve", "--n", "5", "--weights", "1,1,1,1,1", "--epsilon", "0.01"],
            ["ring-solve", "--n", "11", "--epsilon", "0.5"],
            ["ring-solve", "--n", "5", "--weights", "1,1,1,1,1", "--r", "1.0"],
            ["no-such-command"],
            [],
        ],
    )
    def test_malformed(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            code = main(argv)
            raise SystemExit(code)
        assert info.value.code == 1


class TestSweep:
    def test_ring_rows(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert run(capsys, "sweep", "--n", 11, "--epsilon-max", 0.05, "--steps", 6, "--out", out)[0] == 0
        rows = read_csv(out)
        assert len(rows) == 6
        eps = [float(r["epsilon"]) for r in rows]
        assert eps == pytest.approx([0.0, 0.01, 0.02, 0.03, 0.04, 0.05])
        avg = [float(r["avg_payoff"]) for r in rows]
        assert all(b <= a for a, b in zip(avg, avg[1:]))
        assert list(rows[0])[:4] == ["epsilon", "avg_payoff", "survival_rate", "p_1"]

    def test_single_row(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert run(capsys, "sweep", "--n", 11, "--epsilon-max", 0, "--steps", 1, "--out", out)[0] == 0
        (row,) = read_csv(out)
        assert float(row["avg_payoff"]) == pytest.approx(0.75, abs=1e-12)
        assert [float(row[f"p_{i}"]) for i in range(1, 12)] == pytest.approx([0.5] * 11, abs=1e-12)

    def test_survival_curve(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        assert run(capsys, "sweep", "--mode", "survival-curve", "--v", 0.6, "--r", 0, "--x-max", 100, "--out", out)[0] == 0
        rows = read_csv(out)
        xs = [int(r["x"]) for r in rows]
        f = [float(r["f_x"]) for r in rows]
        assert xs == list(range(2, 101))
        assert all(b > a for a, b in zip(f, f[1:]))

    def test_compare(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        argv = ["sweep", "--mode", "compare", "--k", "2,3", "--n-list", "20,100", "--v-steps", 5, "--out", out]
        assert run(capsys, *argv)[0] == 0
        rows = read_csv(out)
        assert len(rows) == 2 * 2 * 5
        for row in rows:
            assert float(row["s_reg"]) <= float(row["s_rnd"]) + 1e-12
            assert float(row["w_reg"]) >= float(row["w_rnd"]) - 1e-12

    def test_idempotent(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        argv = ["sweep", "--n", 7, "--epsilon-max", 0.03, "--steps", 4, "--out", out]
        run(capsys, *argv)
        first = out.read_bytes()
        run(capsys, *argv)
        assert out.read_bytes() == first

    def test_unwritable(self, tmp_path, capsys):
        code, _, err = run(capsys, "sweep", "--n", 5, "--epsilon-max", 0.01, "--steps", 2, "--out", tmp_path / "no" / "d.csv")
        assert code == 1 and "cannot write" in err

    def test_missing_flags(self, tmp_path, capsys):
        code, _, err = run(capsys, "sweep", "--mode", "survival-curve", "--out", tmp_path / "f.csv")
        assert code == 1 and "--v" in err

    def test_singular_sweep(self, tmp_path, capsys):
        assert run(capsys, "sweep", "--n", 8, "--epsilon-max", 0.01, "--steps", 2, "--out", tmp_path / "d.csv")[0] == 2


class TestSymmetric:
    def test_regular(self, capsys):
        code, out, _ = run(capsys, "symmetric", "--topology", "regular", "--k", 2, "--v", 0.6, "--r", 0)
        doc = json.loads(out)
        assert code == 0
        assert doc["hunt_prob"] == pytest.approx(0.8, abs=1e-12)
        assert doc["survival"] == pytest.approx(0.36, abs=1e-12)

    def test_random_independent_of_k(self, capsys):
        base = ["symmetric", "--topology", "random", "--n", 100, "--m", 100, "--v", 0.6, "--r", 0]
        _, a, _ = run(capsys, *base, "--k", 5)
        _, b, _ = run(capsys, *base, "--k", 50)
        assert a == b
        doc = json.loads(a)
        assert 0 < doc["hunt_prob"] < 1 and "hunt_prob_limit" in doc

    def test_compare_case_one(self, capsys):
        code, out, _ = run(capsys, "symmetric", "--topology", "compare", "--k", 2, "--n", 100, "--v", 0.01, "--r", 0)
        doc = json.loads(out)
        assert code == 0
        assert doc["s_reg"] == pytest.approx(0.25, abs=1e-12)
        assert doc["s_rnd"] == pytest.approx(0.366, abs=1e-3)
        assert doc["case"] == "BothSaturated"

    @pytest.mark.parametrize(
        "argv",
        [
            ["--topology", "regular", "--k", "2", "--v", "-0.1"],
            ["--topology", "regular", "--k", "0", "--v", "0.5"],
            ["--topology", "random", "--k", "3", "--n", "10", "--m", "2", "--v", "0.5"],
            ["--topology", "compare", "--k", "2", "--n", "100", "--m", "50", "--v", "0.5"],
            ["--topology", "regular", "--k", "2", "--v", "0.5", "--r", "1"],
        ],
    )
    def test_invalid_ranges(self, capsys, argv):
        assert run(capsys, "symmetric", *argv)[0] == 1


class TestSimulateCertify:
    def test_certify_solved_ring(self, capsys, ring5_spec):
        code, out, _ = run(capsys, "certify", "--spec", ring5_spec, "--use-solved", "--tolerance", 1e-9)
        doc = json.loads(out)
        assert code == 0
        assert doc["max_gain"] <= 1e-9 and doc["improving"] == []

    def test_certify_pure_profile_is_equilibrium(self, capsys, ring5_spec, tmp_path):
        # every player on its own field already collects 1: nothing to improve
        prof = tmp_path / "p.json"
        prof.write_text(json.dumps({"p": [1, 1, 1, 1, 1]}))
        code, out, _ = run(capsys, "certify", "--spec", ring5_spec, "--profile", prof)
        assert code == 0
        assert json.loads(out)["gains"] == [0.0] * 5

    def test_certify_failure_lists_deviations(self, capsys, ring5_spec, tmp_path):
        prof = tmp_path / "p.json"
        prof.write_text(json.dumps({"p": [0.6, 0.5, 0.5, 0.5, 0.5]}))
        code, out, _ = run(capsys, "certify", "--spec", ring5_spec, "--profile", prof)
        doc = json.loads(out)
        assert code == 3
        assert doc["improving"][0]["player"] == 2
        assert doc["improving"][0]["action"] == "hunt:2"
        assert doc["improving"][0]["gain"] == pytest.approx(0.025, abs=1e-12)

    def test_full_profile_document(self, capsys, ring5_spec, tmp_path):
        prof = tmp_path / "p.json"
        hunt = [[1.0 if j == i else 0.0 for j in range(5)] for i in range(5)]
        hunt[0] = [0.0] * 5
        prof.write_text(json.dumps({"hunt": hunt, "abstain": [1, 0, 0, 0, 0]}))
        code, out, _ = run(capsys, "certify", "--spec", ring5_spec, "--profile", prof)
        doc = json.loads(out)
        assert code == 3
        assert doc["improving"][0] == {"player": 1, "gain": 1.0, "action": "hunt:1"}

    def test_simulate(self, capsys, ring5_spec):
        code, out, _ = run(capsys, "simulate", "--spec", ring5_spec, "--use-solved", "--reps", 50_000, "--seed", 3)
        doc = json.loads(out)
        assert code == 0
        assert doc["replications"] == 50_000 and doc["seed"] == 3
        for mean, se in zip(doc["mean_payoffs"], doc["payoff_stderr"]):
            assert abs(mean - 0.75) <= 3 * se

    def test_zero_reps(self, capsys, ring5_spec):
        assert run(capsys, "simulate", "--spec", ring5_spec, "--use-solved", "--reps", 0)[0] == 1

    def test_parse_errors(self, capsys, ring5_spec, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run(capsys, "simulate", "--spec", bad, "--use-solved", "--reps", 10)[0] == 1
        assert run(capsys, "simulate", "--spec", tmp_path / "missing.json", "--use-solved", "--reps", 10)[0] == 1
        assert run(capsys, "certify", "--spec", ring5_spec)[0] == 1
        assert run(capsys, "certify", "--spec", ring5_spec, "--profile", bad)[0] == 1

    def test_use_solved_needs_ring(self, capsys, tmp_path):
        spec = tmp_path / "s.json"
        run(capsys, "make-spec", "--n", 5, "--k", 3, "--out", spec)
        code, _, err = run(capsys, "certify", "--spec", spec, "--use-solved")
        assert code == 1 and "ring" in err

    def test_use_solved_singular(self, capsys, tmp_path):
        spec = tmp_path / "s.json"
        run(capsys, "make-spec", "--n", 8, "--k", 2, "--out", spec)
        assert run(capsys, "certify", "--spec", spec, "--use-solved")[0] == 2

    def test_workers_do_not_change_output(self, capsys, ring5_spec):
        base = ["simulate", "--spec", ring5_spec, "--use-solved", "--reps", 40_000, "--seed", 11]
        _, a, _ = run(capsys, *base)
        _, b, _ = run(capsys, *base, "--workers", 3)
        assert a == b


class TestMakeSpec:
    @pytest.mark.parametrize("topology", ["regular", "random"])
    def test_round_trip(self, capsys, tmp_path, topology):
        path = tmp_path / "s.json"
        argv = ["make-spec", "--topology", topology, "--n", 6, "--m", 7, "--k", 3, "--seed", 4,
                "--weights", "1,0.5,2,1.25,1,3,0.1", "--r", 0.3, "--v", 0.2]
        assert run(capsys, *argv, "--out", path)[0] == 0
        spec = load_spec(path)
        assert (spec.n, spec.m, spec.tie_factor, spec.hunting_cost) == (6, 7, 0.3, 0.2)
        assert spec.weights.tolist() == [1, 0.5, 2, 1.25, 1, 3, 0.1]
        assert (spec.network.adjacency.sum(axis=1) == 3).all()
        _, out, _ = run(capsys, *argv)
        assert out == path.read_text()

    def test_bad_weights(self, capsys):
        assert run(capsys, "make-spec", "--n", 3, "--k", 2, "--weights", "1,1")[0] == 1


def test_repeated_processes_are_byte_identical(ring5_spec):
    cmd = [sys.executable, "-m", "netblotto", "simulate", "--spec", str(ring5_spec), "--use-solved", "--reps", "20000", "--seed", "5"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd + ["--workers", "2"], capture_output=True, check=True).stdout
    assert first == second and first
