import json

import pytest

import triform_cli
from engine_config import SCAN_CONFIG


@pytest.fixture(autouse=True)
def log_to_tmp(tmp_path, monkeypatch):
    monkeypatch.setitem(SCAN_CONFIG, "log_dir", str(tmp_path / "logs"))


def test_check_reports_counterexample(capsys):
    assert triform_cli.main(["check", "1", "1", "81", "--limit", "100"]) == triform_cli.EXIT_COUNTEREXAMPLE
    assert "19" in capsys.readouterr().out


def test_check_clean_form():
    assert triform_cli.main(["check", "1", "2", "3", "--limit", "2000", "--jobs", "1"]) == triform_cli.EXIT_OK


def test_check_json_output(capsys):
    triform_cli.main(["check", "1", "1", "25", "--limit", "100", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "counterexample"
    assert payload["counterexample_n"] == 5


def test_check_csv_output(capsys):
    triform_cli.main(["check", "1", "1", "25", "--limit", "100", "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(triform_cli.CSV_COLUMNS)
    assert lines[1] == "1,1,25,counterexample,5,100"


def test_non_primitive_form_is_a_usage_error():
    assert triform_cli.main(["check", "2", "4", "6"]) == triform_cli.EXIT_USAGE


def test_check_uses_cache(tmp_path):
    cache = str(tmp_path / "results.jsonl")
    args = ["check", "1", "1", "81", "--limit", "100", "--cache", cache]
    assert triform_cli.main(args) == triform_cli.EXIT_COUNTEREXAMPLE
    assert triform_cli.main(args) == triform_cli.EXIT_COUNTEREXAMPLE
    with open(cache) as handle:
        assert len(handle.read().splitlines()) == 1


def test_local_reports_excluded_class(capsys):
    assert triform_cli.main(["local", "1", "1", "3", "6", "3", "--oracle"]) == triform_cli.EXIT_OK
    assert "not represented" in capsys.readouterr().out


def test_lambda_stabilizes(capsys):
    assert triform_cli.main(["lambda", "1", "1", "81", "--format", "json"]) == triform_cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["result"] == [1, 1, 1]
    assert len(payload["steps"]) == 2


@pytest.mark.parametrize("argv,result", [
    (["1", "1", "25", "5"], [1, 1, 1]),
    (["1", "1", "3", "3"], [1, 3, 3]),
])
def test_lambda_at_a_prime_where_the_form_is_stable(capsys, argv, result):
    assert triform_cli.main(["lambda", *argv, "--format", "json"]) == triform_cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["result"] == result
    assert [step["rule"] for step in payload["steps"]] == ["p_stable"]


def test_tree_fails_when_the_fragment_differs(capsys, monkeypatch):
    monkeypatch.setattr(triform_cli, "STABLE_FORMS", ((1, 1, 1),))
    monkeypatch.setattr(triform_cli, "TREE_PRIMES", (3,))
    monkeypatch.setattr(triform_cli, "REGULAR_FORMS", ((1, 1, 1), (1, 1, 9), (1, 9, 9)))
    argv = ["tree", "--limit", "100", "--max-depth", "2", "--jobs", "1", "--escalate-limit", "1000",
            "--format", "json"]
    assert triform_cli.main(argv) == triform_cli.EXIT_MISMATCH
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["fragment_mismatches"]) == 4
    assert "Delta(1,1,25) missing, expected counterexample n=5" in payload["fragment_mismatches"]


def test_table1_matches(capsys):
    assert triform_cli.main(["table1", "--format", "json"]) == triform_cli.EXIT_OK
    json.loads(capsys.readouterr().out)


def test_preimages_json(capsys):
    assert triform_cli.main(["preimages", "1", "1", "1", "3", "--format", "json"]) == triform_cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["preimages"] == [[1, 1, 9], [1, 9, 9]]


def test_identities_with_small_bounds():
    argv = ["identities", "--n-max", "40", "--m-max", "200", "--jones-max", "50", "--jobs", "1"]
    assert triform_cli.main(argv) == triform_cli.EXIT_OK


def test_bad_arguments_exit_with_usage():
    with pytest.raises(SystemExit) as excinfo:
        triform_cli.main(["check", "1", "x", "3"])
    assert excinfo.value.code == 2
