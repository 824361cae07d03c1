# tests/test_cli.py
import io
import json

import pytest

from src.cli import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE, run_command
from src.core.errors import ConfigurationError
from src.services.commands import lines_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_lines_both_methods_json():
    code, out, _ = run("lines", "--n", "4", "--d", "5", "--method", "both", "--format", "json")
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["command"] == "lines"
    assert document["result"] == {"direct": 2875, "residual": 2875}
    assert [s["subtotal"] for s in document["breakdown"]["residual"]] == [6375, -4400, 900]
    assert list(document) == sorted(document)


def test_lines_text_matches_json():
    code, text, _ = run("lines", "--n", "3", "--d", "3", "--method", "both")
    assert code == EXIT_OK
    _, document, _ = run("lines", "--n", "3", "--d", "3", "--method", "both", "--format", "json")
    document = json.loads(document)
    totals = {
        line.split(": ")[0]: int(line.split(": ")[1])
        for line in text.splitlines()
        if not line.startswith(" ")
    }
    assert totals == document["result"] == {"direct": 27, "residual": 27}
    steps = [line.split()[:3] for line in text.splitlines() if line.startswith(" ")]
    expected = [
        [f"{s['sign'] * s['multiplicity']:+d}", "x", str(s["integral"])]
        for method in ("direct", "residual")
        for s in document["breakdown"][method]
    ]
    assert steps == expected == [["+1", "x", "27"], ["+3", "x", "15"], ["-3", "x", "6"]]


def test_complete_intersection():
    code, out, _ = run("lines", "--n", "4", "--ci", "2,2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["result"] == {"direct": 16}


def test_euler():
    assert run("euler", "--grass", "5,2") == (EXIT_OK, "10\n", "")
    assert run("euler", "--projective", "3")[1] == "4\n"


def test_euler_from_tangent_section():
    code, out, _ = run("euler", "--grass", "5,2", "--method", "both")
    assert code == EXIT_OK
    first, inside, onto = out.splitlines()
    assert first == "10"
    assert inside.split()[:3] == ["+1", "x", "6"]
    assert onto.split()[:3] == ["+1", "x", "4"]
    code, out, _ = run("euler", "--projective", "3", "--method", "residual", "--format", "json")
    document = json.loads(out)
    assert document["result"] == 4
    assert [s["integral"] for s in document["breakdown"]] == [3, 1]
    assert run("euler", "--grass", "4,0", "--method", "residual")[0] == EXIT_DOMAIN_ERROR


def test_table():
    code, out, _ = run("table", "--codim", "2", "--components", "3", "--max-degree", "1")
    assert code == EXIT_OK
    assert out.strip() == "90 + 630*s1"
    code, out, _ = run("table", "--codim", "3", "--components", "2", "--max-degree", "3", "--format", "json")
    rows = json.loads(out)["result"]
    assert {"monomial": "s1*s2", "degree": 3, "coefficient": 252} in rows


def test_eval_and_integrate():
    assert run("integrate", "--ring", "G(4,2)", "chern(sym(5,Q)) * invert(chern(Q))")[1] == "1275\n"
    assert run("eval", "--ring", "P2", "(1+h+h^2)*(1-h)")[1] == "1\n"
    assert run("eval", "--ring", "P2", "invert(1+h)")[1] == "1 - h + h^2\n"
    code, out, _ = run("eval", "--ring", "G(4,2)", "--format", "json", "integrate(s1^4)")
    assert json.loads(out) == {
        "command": "eval",
        "inputs": {"expression": "integrate(s1^4)", "ring": "G(4,2)"},
        "result": "2",
    }


def test_eval_with_bundle_file(tmp_path):
    path = tmp_path / "bundles.json"
    path.write_text(json.dumps({"bundles": [{"name": "N", "rank": 2, "chern": "1+h+h^2"}]}), encoding="utf-8")
    code, out, _ = run("eval", "--ring", "P2", "--bundles", str(path), "chern(sym(5, N))")
    assert code == EXIT_OK
    assert out == "1 + 15*h + 120*h^2\n"


def test_residual_command(tmp_path):
    path = tmp_path / "cubic.json"
    path.write_text(
        json.dumps(
            {
                "ambient_dimension": 4,
                "strata": [
                    {"ring": "G(3,2)", "labels": [1], "multiplicity": 3,
                     "restricted_bundle": "sym(3, Q)", "normals": [{"bundle": "Q", "codim": 2}]},
                    {"ring": "G(2,2)", "labels": [1, 2], "multiplicity": 3,
                     "restricted_bundle": "sym(3, Q)", "normals": [{"bundle": "Q", "codim": 2}] * 2},
                ],
            }
        ),
        encoding="utf-8",
    )
    code, out, _ = run("residual", "--config", str(path))
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "total: 27"


def test_export():
    code, out, _ = run("export", "--ring", "G(4,2)")
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["dimension"] == 4
    assert document["integration"] == [{"monomial": "s2^2", "value": "1"}]


def test_domain_errors_exit_one():
    code, _, err = run("lines", "--n", "3", "--d", "5")
    assert code == EXIT_DOMAIN_ERROR
    assert "error:" in err
    assert run("eval", "--ring", "Q7", "1")[0] == EXIT_DOMAIN_ERROR


@pytest.mark.parametrize(
    "argv",
    [
        ["lines", "--n", "4"],
        ["lines", "--n", "0", "--d", "1"],
        ["lines", "--n", "4", "--ci", "2,2", "--method", "both"],
        ["lines", "--n", "4", "--d", "5", "--ci", "2,2"],
        ["euler"],
        ["euler", "--grass", "5"],
        ["frobnicate"],
        [],
        ["eval", "--ring", "P2", "h + k"],
        ["eval", "--ring", "P2", "sym(2, h)"],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_parse_error_shows_caret():
    code, _, err = run("eval", "--ring", "P2", "1+")
    assert code == EXIT_USAGE
    assert "offset 2" in err
    assert err.splitlines()[-1] == "    ^"


def test_help_exits_cleanly(capsys):
    assert run("--help")[0] == EXIT_OK


def test_lines_command_rejects_degree_and_list_together():
    with pytest.raises(ConfigurationError):
        lines_command(4, d=5, ci=[2, 2])
