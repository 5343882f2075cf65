import json

import pytest

from groupoid_growth import cli

GOLDEN = '{"kind":"sturmian","cf":[1],"cf_periodic":true}'
TM = '{"kind":"substitution","rules":{"0":"01","1":"10"},"seed":"0"}'


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestComplexity:
    def test_csv_stdout(self, capsys):
        code, out, _ = run(capsys, ["complexity", "--source", GOLDEN, "--n-max", "5"])
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0].startswith("#config=") and len(lines[0]) == len("#config=") + 64
        assert lines[1] == "n,p_n"
        assert lines[2:] == ["1,2", "2,3", "3,4", "4,5", "5,6"]

    def test_csv_file_and_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run(
                capsys, ["complexity", "--source", GOLDEN, "--n-max", "8", "--csv", str(path)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_source_from_file(self, capsys, tmp_path):
        path = tmp_path / "src.json"
        path.write_text(GOLDEN)
        code, out, _ = run(capsys, ["complexity", "--source", str(path), "--n-max", "3"])
        assert code == 0 and "3,4" in out

    def test_usage_error_exit_2(self, capsys):
        code, _, err = run(capsys, ["complexity", "--source", GOLDEN, "--n-max", "0"])
        assert code == 2 and "usage error" in err

    def test_bad_json_exit_2(self, capsys):
        code, _, _ = run(capsys, ["complexity", "--source", '{"kind":"nope"}', "--n-max", "2"])
        assert code == 2


class TestDelta:
    def test_subshift_exact(self, capsys):
        model = json.dumps({"kind": "subshift", "source": json.loads(GOLDEN), "n_max": 10})
        code, out, _ = run(capsys, ["delta", "--model", model, "--r", "3"])
        assert code == 0
        assert out.strip().splitlines()[-1] == "3,7,exact"

    def test_germ_lower_bound(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "delta",
                "--model",
                "grigorchuk",
                "--r",
                "1",
                "--units-policy",
                "periodic:pre=1,period=1",
            ],
        )
        assert code == 0
        assert out.strip().splitlines()[-1].endswith(",lower_bound")

    def test_policy_mismatch(self, capsys):
        code, _, _ = run(
            capsys, ["delta", "--model", "grigorchuk", "--r", "1", "--units-policy", "windows"]
        )
        assert code == 2


class TestBall:
    def test_dot_output(self, capsys, tmp_path):
        model = json.dumps({"kind": "subshift", "source": json.loads(GOLDEN), "n_max": 10})
        path = tmp_path / "ball.dot"
        code, _, err = run(
            capsys, ["ball", "--model", model, "--unit", "0100:2", "--r", "2", "--dot", str(path)]
        )
        assert code == 0
        text = path.read_text()
        assert "doublecircle" in text and text.count("->") == 4
        assert "vertices=5" in err

    def test_germ_ball(self, capsys):
        code, out, _ = run(
            capsys, ["ball", "--model", "adding_machine", "--unit", "|0", "--r", "1"]
        )
        assert code == 0 and "digraph ball" in out


class TestAlgebraGrowth:
    def test_with_oracle(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "algebra-growth",
                "--source",
                GOLDEN,
                "--n-max",
                "4",
                "--field",
                "F2",
                "--oracle-upto",
                "3",
            ],
        )
        assert code == 0
        rows = [l.split(",") for l in out.strip().splitlines()[2:]]
        assert [r[1] for r in rows] == ["4", "10", "20", "34"]
        assert all(r[4] == "True" for r in rows)

    def test_semigroup(self, capsys):
        code, out, _ = run(capsys, ["semigroup-growth", "--source", GOLDEN, "--n-max", "3"])
        assert code == 0
        assert out.strip().splitlines()[2:] == ["0,1", "1,3", "2,6", "3,10"]

    def test_module(self, capsys):
        code, out, _ = run(capsys, ["module-growth", "--source", TM, "--n-max", "3"])
        assert code == 0
        assert out.strip().splitlines()[2:] == ["0,1,1", "1,3,3", "2,5,5", "3,7,7"]

    def test_expansive(self, capsys):
        code, out, _ = run(capsys, ["expansive", "--source", GOLDEN, "--n", "3"])
        assert code == 0
        rows = [l.split(",") for l in out.strip().splitlines()[2:]]
        assert all(r[1] == r[2] for r in rows)


class TestGroupCommands:
    def test_nucleus(self, capsys):
        code, out, _ = run(capsys, ["nucleus", "--group", "grigorchuk"])
        assert code == 0
        assert "nucleus size 5" in out
        assert "1 a b c d" in out

    def test_nucleus_cap_exit_3(self, capsys):
        code, _, err = run(capsys, ["nucleus", "--group", "grigorchuk", "--cap", "1"])
        assert code == 3 and "resource cap" in err

    def test_germ(self, capsys):
        code, out, _ = run(
            capsys, ["germ", "--group", "grigorchuk", "--element", "d", "--point", "|0"]
        )
        assert code == 0 and out.strip() == "unit"
        code, out, _ = run(
            capsys, ["germ", "--group", "grigorchuk", "--element", "b", "--point", "|1"]
        )
        assert code == 0 and out.strip() == "nontrivial"

    def test_matrix_recursion_print(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "matrix-recursion",
                "--group",
                "adding_machine",
                "--element",
                "a",
                "--levels",
                "1",
                "--print",
            ],
        )
        assert code == 0 and out.strip().splitlines() == ["[0  a]", "[1  0]"]

    def test_identity_violation_exit_4(self, capsys, monkeypatch):
        from groupoid_growth.matrix_recursion import IdentityError

        def boom(cap=10_000):
            raise IdentityError("forced")

        monkeypatch.setattr(
            "groupoid_growth.selfsimilar.SelfSimilarGroup.nucleus", lambda self, cap: boom()
        )
        code, _, err = run(capsys, ["nucleus", "--group", "grigorchuk"])
        assert code == 4 and "identity violated" in err

    def test_thinned_growth_csv(self, capsys):
        code, out, _ = run(
            capsys, ["thinned-growth", "--group", "grigorchuk", "--n-max", "3"]
        )
        assert code == 0
        rows = [l.split(",") for l in out.strip().splitlines()[2:]]
        assert [r[1] for r in rows] == ["5", "11", "19"]
        assert all(r[3] == "True" for r in rows)

    def test_custom_group_json(self, capsys):
        grp = json.dumps(
            {"alphabet": 2, "generators": {"a": {"perm": [1, 0], "rest": ["", "a"]}}}
        )
        code, out, _ = run(capsys, ["nucleus", "--group", grp])
        assert code == 0 and "nucleus size 3" in out


class TestEnvironment:
    def test_thread_cap_validation(self, capsys, monkeypatch):
        monkeypatch.setenv("GROUPOID_GROWTH_THREADS", "zero")
        code, _, err = run(capsys, ["nucleus", "--group", "grigorchuk"])
        assert code == 2 and "GROUPOID_GROWTH_THREADS" in err

    def test_thread_cap_positive(self, capsys, monkeypatch):
        monkeypatch.setenv("GROUPOID_GROWTH_THREADS", "0")
        code, _, _ = run(capsys, ["nucleus", "--group", "grigorchuk"])
        assert code == 2


class TestVerifyAll:
    def test_tiny_profile_rejected(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["verify-all", "--profile", "tiny"])
        capsys.readouterr()
