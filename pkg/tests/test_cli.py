import json

import pytest

from ggal import main
from groupoidal.constants import EXIT_CHECK_FAILED, EXIT_INVALID_INPUT, EXIT_OK
from groupoidal.formats.instance import fixture_path, load_expectation
from groupoidal.galois import CHECKS
from groupoidal.models import CheckResult, Status


@pytest.fixture
def run(tmp_path):
    config = str(tmp_path / "config.json")

    def _run(*argv: str) -> int:
        return main([*argv, "--config", config])

    return _run


def json_out(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "nongalois"])
def test_check_all_matches_expectation(run, capsys, name):
    assert run("check", "all", name, "--json", "-", "--no-timing") == EXIT_OK
    data = json_out(capsys)
    expected = load_expectation(name)
    statuses = {c["name"]: c["status"] for c in data["checks"]}
    assert statuses == expected["checks"]

    details = {c["name"]: c["details"] for c in data["checks"]}
    for check, pinned in expected["details"].items():
        for key, value in pinned.items():
            assert details[check][key] == value, (check, key)


@pytest.mark.parametrize("check", ["lemma-3-1", "phi", "sigma-gamma-bar", "equiv", "theta", "separability"])
def test_each_named_check_runs(run, capsys, check):
    assert run("check", check, "ex2", "--json", "-") == EXIT_OK
    [result] = json_out(capsys)["checks"]
    assert result["name"] == check
    assert result["status"] == "pass"


def test_single_check_json(run, capsys):
    assert run("check", "theta", "ex1", "--json", "-") == EXIT_OK
    [check] = json_out(capsys)["checks"]
    assert check["name"] == "theta"
    assert check["details"]["theta_injective"] is True
    for key in ("lem8_consistent", "teo3_applies", "teo4_applies", "cor1_applies"):
        assert check["details"][key] == "not-applicable"
    assert "elapsed_sec" in check


def test_instance_path_is_accepted(run, capsys):
    assert run("check", "cosets", str(fixture_path("ex2"))) == EXIT_OK
    assert "cosets" in capsys.readouterr().out


def test_report_file_is_deterministic(run, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run("check", "all", "ex2", "--json", str(first), "--no-timing") == EXIT_OK
    assert run("check", "all", "ex2", "--json", str(second), "--no-timing", "--workers", "1") == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_failing_check_exits_one(run, monkeypatch):
    monkeypatch.setitem(CHECKS, "theta", lambda inst: CheckResult("theta", Status.FAIL, "контрпример"))
    assert run("check", "theta", "ex1") == EXIT_CHECK_FAILED


class TestInvalidInput:
    def test_validate_reports_mutant(self, run, capsys):
        assert run("validate", "mut_inverse_law", "--json", "-") == EXIT_INVALID_INPUT
        data = json_out(capsys)
        assert data["valid"] is False
        [groupoid] = [rep for rep in data["reports"] if rep["subject"] == "groupoid"]
        assert "inverse-law" in {v["axiom"] for v in groupoid["violations"]}

    def test_check_on_mutant(self, run, capsys):
        assert run("check", "all", "mut_beta_composition") == EXIT_INVALID_INPUT
        assert "beta-composition" in capsys.readouterr().err

    def test_bad_modulus(self, run, capsys):
        assert run("invariants", "bad_modulus") == EXIT_INVALID_INPUT
        assert "modulus not prime" in capsys.readouterr().err

    def test_bad_prime_flag(self, run):
        assert run("validate", "ex1", "--p", "6") == EXIT_INVALID_INPUT

    def test_unknown_instance(self, run, capsys):
        assert run("check", "all", "no_such_instance") == EXIT_INVALID_INPUT
        assert "unknown fixture" in capsys.readouterr().err

    def test_cap_names_its_flag(self, run, capsys):
        assert run("check", "phi", "ex3", "--max-sg-subsets", "4") == EXIT_INVALID_INPUT
        assert "--max-sg-subsets" in capsys.readouterr().err

    def test_unknown_check_is_rejected_by_parser(self, run):
        with pytest.raises(SystemExit) as info:
            run("check", "bogus", "ex1")
        assert info.value.code == 2


class TestCommands:
    def test_validate_ok(self, run, capsys):
        assert run("validate", "ex3", "--json", "-") == EXIT_OK
        data = json_out(capsys)
        assert data == {
            "instance": "ex3.ggal",
            "prime": 5,
            "valid": True,
            "reports": [
                {"subject": s, "ok": True, "violations": []} for s in ("groupoid", "algebra", "action")
            ],
        }

    def test_prime_flag(self, run, capsys):
        assert run("validate", "ex1", "--p", "7", "--json", "-") == EXIT_OK
        assert json_out(capsys)["prime"] == 7

    def test_invariants(self, run, capsys):
        assert run("invariants", "ex2", "--json", "-") == EXIT_OK
        assert json_out(capsys)["s_g"] == ["e", "g"]

    def test_subgroupoids(self, run, capsys):
        assert run("subgroupoids", "ex3", "--json", "-") == EXIT_OK
        assert len(json_out(capsys)) == 4

    def test_coords_search(self, run, capsys):
        assert run("coords", "ex1", "--search", "--json", "-") == EXIT_OK
        data = json_out(capsys)
        assert data["found"] and data["verified"]
        assert data["source"] == "search"

    def test_coords_reports_wrong_file_system(self, run, tmp_path, capsys):
        text = fixture_path("ex2").read_text(encoding="utf-8")
        head = text[: text.index("[coordinates]")]
        instance = tmp_path / "wrong_coords.ggal"
        instance.write_text(head + "[coordinates]\npair 1 0 0 1 | 1 0 0 1\n", encoding="utf-8")

        assert run("coords", str(instance), "--json", "-") == EXIT_CHECK_FAILED
        data = json_out(capsys)
        assert data["found"] is True
        assert data["source"] == "file"
        assert data["verified"] is False
        assert data["nonzero_residuals"] == ["g"]

    def test_coords_search_ignores_wrong_file_system(self, run, tmp_path, capsys):
        text = fixture_path("ex2").read_text(encoding="utf-8")
        head = text[: text.index("[coordinates]")]
        instance = tmp_path / "wrong_coords.ggal"
        instance.write_text(head + "[coordinates]\npair 1 0 0 1 | 1 0 0 1\n", encoding="utf-8")

        assert run("coords", str(instance), "--search", "--json", "-") == EXIT_OK
        data = json_out(capsys)
        assert data["source"] == "search"
        assert data["verified"] is True

    def test_coords_missing(self, run, capsys):
        assert run("coords", "nongalois", "--json", "-") == EXIT_OK
        assert json_out(capsys)["found"] is False

    def test_skew(self, run, capsys):
        assert run("skew", "ex3", "--json", "-") == EXIT_OK
        assert json_out(capsys)["dim"] == 12

    def test_fixture_out(self, run, tmp_path):
        target = tmp_path / "copy.ggal"
        assert run("fixture", "ex1", "--out", str(target)) == EXIT_OK
        assert target.read_text(encoding="utf-8") == fixture_path("ex1").read_text(encoding="utf-8")

    def test_fixture_list(self, run, capsys):
        assert run("fixture") == EXIT_OK
        assert "nongalois" in capsys.readouterr().out

    def test_config_save(self, tmp_path):
        path = tmp_path / "cfg" / "config.json"
        assert main(["config", "--save", "--p", "7", "--workers", "2", "--config", str(path)]) == EXIT_OK
        saved = json.loads(path.read_text())
        assert saved["prime"] == 7
        assert saved["workers"] == 2

    def test_saved_prime_is_the_default(self, tmp_path, capsys):
        path = tmp_path / "config.json"
        assert main(["config", "--save", "--p", "7", "--config", str(path)]) == EXIT_OK
        capsys.readouterr()

        text = fixture_path("ex1").read_text(encoding="utf-8").replace("prime 5\n", "")
        instance = tmp_path / "noprime.ggal"
        instance.write_text(text, encoding="utf-8")
        assert main(["validate", str(instance), "--json", "-", "--config", str(path)]) == EXIT_OK
        assert json_out(capsys)["prime"] == 7
