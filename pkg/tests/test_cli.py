"""Command-line entry points, their JSON output and exit codes."""

import json

import pytest

from nicepairs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pair_info_json(capsys):
    code, out, _ = run(capsys, "pair-info")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "pair-info"
    assert doc["result"]["dim_q"] == 8 and doc["result"]["rank"] == 2


def test_jordan_prints_fractions_as_strings(capsys):
    code, out, _ = run(capsys, "jordan", "--matrix", "[[2,1],[0,2]]")
    assert code == 0
    text = json.dumps(json.loads(out)["result"])
    assert '"2"' in text and '"1"' in text


def test_table_format(capsys):
    code, out, _ = run(capsys, "gl4-invariants", "--cartan", "++:1,2", "--format", "table")
    assert code == 0
    assert "result.S0" in out and "9" in out


def test_seed_is_recorded(capsys):
    _, out, _ = run(capsys, "pair-info", "--seed", "7")
    assert json.loads(out)["config"]["seed"] == 7


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "jordan", "--matrix", "garbage")
    assert code == 2 and err


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "gl4-orbital", "--u", "1,1")
    assert code == 3 and "regular" in err


def test_unknown_option_is_argparse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pair-info", "--bogus"])
    assert exc.value.code == 2


def test_verify_all_subset(capsys):
    code, out, _ = run(capsys, "verify-all", "--criteria", "2,3")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["all_passed"] is True
    assert {"criterion_02", "criterion_03"} <= set(result)
