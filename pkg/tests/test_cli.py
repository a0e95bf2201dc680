import json

import pytest

from rankinlab.cli import canonical_json, main


@pytest.fixture()
def model_doc(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({
        "xi_residue": "1", "xi_regular": ["0"] * 10, "xi_at_2": "1",
        "xi_at_2_regular": [str((-1) ** (k + 1)) for k in range(10)],
        "lambda_pi0_residue": "1", "lambda_pi0_regular": ["0"] * 10,
        "adjoint_L_value": "1", "norm_different": 1,
    }))
    return str(path)


def test_psi_match(capsys):
    code = main(["psi", "--kind", "i", "--p", "2", "--r", "1", "--pi0", "1,1",
                 "--at", "0,0"])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert report["kind_i"]["verdict"] == "MATCH"
    assert report["kind_i"]["closed_at"] == "12"
    assert report["seed"] == 20260809


def test_psi_expand(capsys):
    code = main(["psi", "--kind", "iv", "--p", "3", "--r", "2", "--expand"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["correction_expansion"]["leading_matches"] is True
    assert report["correction_expansion"]["vanishing_order"] == 3


def test_psi_invalid_kind_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["psi", "--kind", "v", "--p", "2", "--r", "1"])
    assert err.value.code == 2


def test_psi_bad_satake_is_usage_error():
    assert main(["psi", "--kind", "i", "--p", "2", "--r", "1", "--pi0", "2,3"]) == 2


def test_json_reports_round_trip(capsys):
    main(["psi", "--kind", "ii", "--p", "2", "--r", "1"])
    raw = capsys.readouterr().out
    assert canonical_json(json.loads(raw)) == raw


def test_reports_deterministic(capsys):
    main(["verify", "--suite", "specweight"])
    first = capsys.readouterr().out
    main(["verify", "--suite", "specweight"])
    second = capsys.readouterr().out
    assert first == second


def test_degenerate_command(capsys, model_doc):
    code = main(["degenerate", "--q", "2^1*3^1", "--data", model_doc])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert float(report["c3_residual"]) <= 1e-10
    assert report["q"] == "2^1*3^1"


def test_degenerate_q_independence(capsys, model_doc):
    values = []
    for q in ("2^1", "5^2"):
        main(["degenerate", "--q", q, "--data", model_doc])
        report = json.loads(capsys.readouterr().out)
        values.append(report["c3"])
    assert values[0] == values[1]


def test_degenerate_missing_data_is_usage_error(capsys):
    assert main(["degenerate", "--q", "2^1", "--data", "/nonexistent.json"]) == 2


def test_degenerate_malformed_document(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"xi_residue": "1"}')
    assert main(["degenerate", "--q", "2^1", "--data", str(bad)]) == 2
    assert "missing keys" in capsys.readouterr().err


def test_verify_single_suite(capsys):
    code = main(["verify", "--suite", "specweight"])
    captured = capsys.readouterr()
    assert code == 0
    report = json.loads(captured.out)
    assert report["suites"]["specweight"]["passed"] is True
    assert "[PASS] spectral-weight" in captured.err


def test_verify_lemma44_fuzz_and_break(capsys):
    assert main(["verify", "--suite", "lemma44", "--fuzz", "30"]) == 0
    capsys.readouterr()
    assert main(["verify", "--suite", "lemma44", "--fuzz", "12", "--break-symmetry"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["all_detected"] is True
    assert report["breaks_injected"] == 12


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "nope"])
    assert err.value.code == 2


def test_csv_format(capsys):
    import csv as csv_mod
    import io
    code = main(["psi", "--kind", "i", "--p", "2", "--r", "1", "--format", "csv"])
    assert code == 0
    rows = list(csv_mod.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    header, values = rows
    assert values[header.index("kind_i.verdict")] == "MATCH"


def test_complex_satake_input(capsys):
    code = main(["psi", "--kind", "i", "--p", "2", "--r", "1",
                 "--pi0", "0.6+0.8j,0.6-0.8j", "--at", "0,0"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["kind_i"]["verdict"] == "MATCH"
