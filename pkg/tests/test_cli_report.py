"""Command line interface: validation, report schema, determinism, exit codes."""

import json

import pytest

from websterp.cli_report import CHECK_NAMES, SCHEMA_VERSION, main, run_report


@pytest.mark.parametrize("argv", [
    ["--p", "4"],
    ["--p", "9"],
    ["--n", "1"],
    ["--D", "3"],
    ["--check", "relations,nosuchsuite"],
])
def test_invalid_arguments_rejected(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_check_names_complete():
    assert set(CHECK_NAMES) == {
        "relations", "differential", "basis", "rep-oracle", "bimodules",
        "homs", "ses", "bb", "braid", "p-extend"}


def test_report_schema_and_exit_code(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(["--n", "2", "--p", "3", "--D", "4", "--seed", "7",
               "--check", "relations,rep-oracle", "--json", str(out),
               "--corpus-size", "50"])
    assert rc == 0
    printed = capsys.readouterr().out
    report = json.loads(out.read_text())
    assert json.loads(printed) == report
    assert report["schema_version"] == SCHEMA_VERSION
    assert report["ok"] is True
    assert report["config"] == {
        "n": 2, "p": 3, "D": 4, "seed": 7, "corpus_size": 50,
        "checks": ["relations", "rep-oracle"]}
    assert set(report["checks"]) == {"relations", "rep-oracle"}
    assert set(report["timings"]) == {"relations", "rep-oracle"}
    for res in report["checks"].values():
        assert res["ok"] is True


def test_report_deterministic_excluding_timings():
    kwargs = dict(n=2, p=3, D=4, seed=11,
                  checks=["relations", "differential"], corpus=60)
    r1 = run_report(**kwargs)
    r2 = run_report(**kwargs)
    r1.pop("timings")
    r2.pop("timings")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_failure_exit_code(monkeypatch, capsys):
    import websterp.cli_report as cr

    def broken(alg, D, seed, corpus):
        return {"ok": False, "detail": "forced"}

    monkeypatch.setitem(cr._SUITES, "relations", broken)
    rc = main(["--n", "2", "--p", "3", "--D", "4", "--check", "relations"])
    capsys.readouterr()
    assert rc == 1


def test_report_is_json_serializable_with_numpy_payload():
    report = run_report(2, 3, 4, 3, ["rep-oracle"], 20)
    json.dumps(report)
