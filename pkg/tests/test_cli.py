"""Tests for the command-line front end: schemas, dispatch, exit codes.

Numeric values asserted here (Betti tables, residual counts, torsion
entries) are regression pins produced by the library modules, which have
their own independent oracles in the sibling test files.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from njkit.cli import (
    InputError,
    RunConfig,
    config_from_args,
    main,
    parse_algebroid_file,
    parse_forms_file,
    parse_lie_file,
    serialize_algebroid,
    serialize_forms,
    serialize_lie,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _fix(name: str) -> str:
    return str(FIXTURES / name)


def _run(capsys, *argv) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check_lie_and_exit_codes(capsys):
    code, report = _run(capsys, "check", "lie", _fix("sl2.json"))
    assert code == 0
    assert report["command"] == "check lie"
    assert report["ok"] is True
    assert report["verdict"] == "valid"
    assert report["reports"][0]["description"] == "jacobi"

    code, report = _run(capsys, "check", "lie", _fix("bad-jacobi.json"))
    assert code == 2
    assert report["verdict"] == "invalid"


def test_check_nijenhuis_and_rep(capsys):
    code, report = _run(capsys, "check", "nijenhuis", _fix("sl2-diag.json"))
    assert code == 0
    assert [r["description"] for r in report["reports"]] == [
        "jacobi",
        "nijenhuis-torsion",
    ]

    code, report = _run(capsys, "check", "rep", _fix("dim2-rep.json"))
    assert code == 0
    assert [r["description"] for r in report["reports"]] == [
        "jacobi",
        "representation",
        "nijenhuis-torsion",
        "nijenhuis-representation",
    ]


def test_check_algebroid(capsys):
    code, report = _run(capsys, "check", "algebroid", _fix("tangent2.json"))
    assert code == 0
    assert report["reports"][0]["checked"] == 15

    code, report = _run(capsys, "check", "algebroid", _fix("sl2-point.json"))
    assert code == 0
    assert report["reports"][0]["checked"] == 10

    code, report = _run(capsys, "check", "algebroid", _fix("bad-anchor.json"))
    assert code == 2
    assert report["reports"][0]["ok"] is False


def test_cohomology_tables(capsys):
    code, report = _run(
        capsys,
        "cohomology", "--complex", "njl", "--max-degree", "2",
        _fix("dim2-diag.json"),
    )
    assert code == 0
    table = report["betti"]
    assert table["complex"] == "njl"
    assert table["dims"] == [2, 6, 6]
    assert table["ranks"] == [2, 3, 0]
    assert table["betti"] == [0, 1, 3]

    # Whitehead: the adjoint cohomology of sl2 vanishes in low degrees.
    # The plain complex needs no operator; a zero one is filled in.
    code, report = _run(
        capsys, "cohomology", "--complex", "ce", "--max-degree", "2", _fix("sl2.json")
    )
    assert code == 0
    assert report["betti"]["betti"] == [0, 0, 0]


def test_cohomology_requires_operator_for_twisted_complexes(capsys):
    code = main(["cohomology", "--complex", "njo", _fix("sl2.json")])
    err = capsys.readouterr().err
    assert code == 3
    assert "nijenhuis" in err


def test_mc_residual_exit_codes(capsys):
    code, report = _run(capsys, "mc", "--n-max", "2", _fix("sl2-diag.json"))
    assert code == 0
    assert report["mc"]["bracket_residuals"] == {"3": 0}
    assert report["mc"]["operator_residuals"] == {"2": 0}

    code, report = _run(capsys, "mc", _fix("bad-jacobi.json"))
    assert code == 2
    assert report["mc"]["bracket_residuals"]["3"] == 1
    assert report["mc"]["operator_residuals"]["2"] == 0


def test_fn_bracket_result(capsys):
    code, report = _run(capsys, "fn-bracket", _fix("forms-pair.json"))
    assert code == 0
    assert report["result"] == {"degree": 2, "entries": {"1,2|2": "x1^2"}}


def test_torsion_lie_route(capsys, monkeypatch):
    code, report = _run(capsys, "torsion", _fix("sl2-diag.json"))
    assert code == 0
    assert report["kind"] == "lie"
    assert report["is_zero"] is True
    assert report["torsion"] == {}

    # diag(1, 2, 3) on sl2 has torsion (p2-p1)(p3-p1) h on the (e, f) slot.
    doc = {
        "dim": 3,
        "brackets": {"0,1": {"1": "2"}, "0,2": {"2": "-2"}, "1,2": {"0": "1"}},
        "nijenhuis": [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "3"]],
    }
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, report = _run(capsys, "torsion", "-")
    assert code == 0
    assert report["is_zero"] is False
    assert report["torsion"] == {"1,2": ["2", "0", "0"]}


def test_torsion_forms_and_algebroid_routes(capsys):
    code, report = _run(capsys, "torsion", _fix("operator-form.json"))
    assert code == 0
    assert report["kind"] == "forms"
    assert report["is_zero"] is True

    code, report = _run(capsys, "torsion", _fix("tangent2.json"))
    assert code == 0
    assert report["kind"] == "algebroid"
    assert report["routes_agree"] is True
    assert report["is_zero"] is True


def _perturbed_tangent() -> dict:
    return {
        "base_dim": 2,
        "rank": 2,
        "anchor": [["1", "0"], ["0", "1"]],
        "structure": {},
        "nijenhuis": [["x1", "0"], ["x1^2", "x2"]],
    }


def test_torsion_algebroid_nonzero_pin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(_perturbed_tangent())))
    code, report = _run(capsys, "torsion", "-")
    assert code == 0
    assert report["is_zero"] is False
    assert report["routes_agree"] is True
    assert report["torsion"]["entries"] == {"1,2|2": "x1^2"}


def test_poincare_verifies_the_contractible_complex(capsys):
    code, report = _run(capsys, "poincare", "--n", "2", "--max-poly-deg", "2")
    assert code == 0
    assert report["all_zero"] is True
    assert report["homotopy"]["ok"] is True
    assert report["homotopy"]["checked"] == 48
    assert set(report["betti"]) == {"0", "1", "2"}


def test_algebroid_phi_and_njld(capsys):
    code, report = _run(capsys, "algebroid", "phi", _fix("tangent2.json"))
    assert code == 0
    assert report["command"] == "algebroid phi"
    assert report["reports"][1]["checked"] == 45

    code, report = _run(capsys, "algebroid", "njld", _fix("tangent2.json"))
    assert code == 0
    assert report["squares_checked"] == 6
    assert report["failures"] == 0


def test_algebroid_mc_detects_torsion(capsys, monkeypatch):
    code, report = _run(capsys, "algebroid", "mc", _fix("tangent2.json"))
    assert code == 0
    assert report["mc"]["ok"] is True

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(_perturbed_tangent())))
    code, report = _run(capsys, "algebroid", "mc", "-")
    assert code == 2
    assert report["mc"]["torsion_residual_entries"] == 1
    assert report["mc"]["lie_residual_entries"] == 0


def test_algebroid_phi_rejects_invalid_structures(capsys, monkeypatch):
    doc = {
        "base_dim": 2,
        "rank": 2,
        "anchor": [["1", "0"], ["0", "1"]],
        "structure": {"1,2": ["1", "0"]},
        "nijenhuis": [["1", "0"], ["0", "1"]],
    }
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, report = _run(capsys, "algebroid", "phi", "-")
    assert code == 2
    assert report["verdict"] == "invalid"

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(_perturbed_tangent())))
    code, report = _run(capsys, "algebroid", "njld", "-")
    assert code == 2
    assert report["verdict"] == "torsion nonzero"
    assert report["torsion"]["entries"] == {"1,2|2": "x1^2"}


def test_les_exactness(capsys):
    code, report = _run(capsys, "les", "--max-degree", "3", _fix("dim2-diag.json"))
    assert code == 0
    assert report["les"]["ok"] is True
    assert len(report["les"]["nodes"]) == 12

    code, report = _run(capsys, "les", "--max-degree", "2", _fix("sl2-diag.json"))
    assert code == 0
    assert len(report["les"]["nodes"]) == 9


def test_parse_errors_exit_3(capsys, monkeypatch):
    assert main(["check", "lie", "/nonexistent.json"]) == 3
    assert "not found" in capsys.readouterr().err

    monkeypatch.setattr("sys.stdin", io.StringIO("not json"))
    assert main(["check", "lie", "-"]) == 3
    assert "line 1" in capsys.readouterr().err

    monkeypatch.setattr("sys.stdin", io.StringIO('{"dim": 2, "bogus": 1}'))
    assert main(["check", "lie", "-"]) == 3
    assert "bogus" in capsys.readouterr().err

    monkeypatch.setattr(
        "sys.stdin", io.StringIO('{"dim": 2, "brackets": {"1,0": {}}}')
    )
    assert main(["check", "lie", "-"]) == 3
    assert "brackets" in capsys.readouterr().err

    monkeypatch.setattr(
        "sys.stdin", io.StringIO('{"dim": 2, "brackets": {"0,1": {"5": "1"}}}')
    )
    assert main(["check", "lie", "-"]) == 3
    assert "out of range" in capsys.readouterr().err

    assert main(["bogus"]) == 3
    assert main(["check", "lie", _fix("sl2.json"), "--max-degree"] ) == 3
    capsys.readouterr()


def test_missing_required_fields_exit_3(capsys):
    assert main(["check", "nijenhuis", _fix("sl2.json")]) == 3
    assert "nijenhuis" in capsys.readouterr().err

    assert main(["check", "rep", _fix("sl2.json")]) == 3
    assert "representation" in capsys.readouterr().err

    assert main(["fn-bracket", _fix("operator-form.json")]) == 3
    assert "left" in capsys.readouterr().err


def test_bounds_must_be_positive():
    with pytest.raises(InputError):
        RunConfig(command="poincare", n=0)
    with pytest.raises(InputError):
        RunConfig(command="bogus")
    with pytest.raises(InputError):
        config_from_args(["mc", "--n-max", "0", "x.json"])


def test_seed_resolution(capsys, monkeypatch):
    monkeypatch.setenv("NJK_SEED", "7")
    code, report = _run(capsys, "check", "lie", _fix("sl2.json"))
    assert report["seed"] == 7

    code, report = _run(capsys, "check", "lie", _fix("sl2.json"), "--seed", "9")
    assert report["seed"] == 9

    monkeypatch.setenv("NJK_SEED", "pi")
    assert main(["check", "lie", _fix("sl2.json")]) == 3
    capsys.readouterr()


def test_quiet_and_text_formats(capsys):
    code = main(["check", "lie", _fix("sl2.json"), "--quiet"])
    assert code == 0
    assert capsys.readouterr().out == ""

    code = main(["check", "lie", _fix("sl2.json"), "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "ok: yes" in out
    assert "verdict: valid" in out


def test_output_bytes_deterministic(capsys):
    main(["cohomology", "--complex", "njl", _fix("dim2-diag.json")])
    first = capsys.readouterr().out
    main(["cohomology", "--complex", "njl", _fix("dim2-diag.json")])
    second = capsys.readouterr().out
    assert first == second


def test_round_trip_of_all_shipped_fixtures():
    for path in sorted(FIXTURES.glob("*.json")):
        data = json.loads(path.read_text())
        if "dim" in data:
            parse, serialize = parse_lie_file, serialize_lie
        elif "base_dim" in data:
            parse, serialize = parse_algebroid_file, serialize_algebroid
        else:
            parse, serialize = parse_forms_file, serialize_forms
        canonical = serialize(parse(data))
        again = serialize(parse(canonical))
        assert canonical == again, path.name
        json.dumps(canonical)


def test_lie_serialization_is_canonical():
    data = {
        "dim": 2,
        "brackets": {"0,1": {"1": "2/4", "0": "0"}},
        "nijenhuis": [["1", "0"], ["0", "-2/2"]],
    }
    out = serialize_lie(parse_lie_file(data))
    assert out == {
        "dim": 2,
        "brackets": {"0,1": {"1": "1/2"}},
        "nijenhuis": [["1", "0"], ["0", "-1"]],
    }
