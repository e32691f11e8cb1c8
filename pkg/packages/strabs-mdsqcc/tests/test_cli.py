import json

import pytest

from strabs.mdsqcc.cli import program


def run(*args: str) -> None:
    program.run(["mdsqcc", *args])


def exit_code(*args: str) -> int:
    with pytest.raises(SystemExit) as excinfo:
        run(*args)
    return excinfo.value.code


def test_cosets_json(capsys):
    run("cosets", "--family", "I", "--q", "5")
    data = json.loads(capsys.readouterr().out)
    assert (data["n"], data["modulus"], data["s"]) == (26, 156, 13)
    assert len(data["singletons"]) == 2 and len(data["pairs"]) == 12


def test_cosets_text(capsys):
    run("cosets", "--family", "II", "--q", "23", "--format", "text")
    out = capsys.readouterr().out
    assert "n=53" in out and "singleton" in out


def test_construct_writes_a_valid_certificate(capsys):
    run("construct", "--family", "I", "--q", "5", "--i", "2")
    data = json.loads(capsys.readouterr().out)
    assert data["valid"] is True
    assert data["params"]["d_f"] == 6
    assert data["checks"]["sandwich_pin"]["status"] == "PASS"


def test_construct_csv(capsys):
    run("construct", "--q", "7", "--i", "3", "--level", "0", "--format", "csv")
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "q,i,n,k,mu,gamma,d_f,singleton,mds,valid,note"
    assert lines[1] == "7,3,50,40,1,2,8,8,true,true,"


def test_construct_to_file(tmp_path, capsys):
    out = tmp_path / "cert.json"
    run("construct", "--q", "5", "--i", "2", "--out", str(out), "--timings")
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["timings_ms"]


def test_hypothesis_violations_exit_2(capsys):
    assert exit_code("construct", "--q", "5", "--i", "3") == 2
    assert "(q-1)/2" in capsys.readouterr().err
    assert exit_code("construct", "--family", "II", "--q", "13", "--i", "2") == 2
    assert "m >= 2" in capsys.readouterr().err
    assert exit_code("construct", "--q", "5") == 2
    assert exit_code("cosets", "--q", "12") == 2
    assert exit_code("construct", "--q", "5", "--i", "2", "--level", "7") == 2


def test_budget_exhaustion_exits_3(capsys):
    assert exit_code("construct", "--q", "5", "--i", "2", "--level", "2", "--budget-ranks", "10") == 3
    assert "budget" in capsys.readouterr().err


def test_table_csv(capsys):
    run("table", "--family", "I", "--q-list", "3,5,7", "--level", "0", "--workers", "1", "--no-progress")
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert lines[1].startswith("3,,")
    assert [line.split(",")[:2] for line in lines[2:]] == [["5", "2"], ["7", "2"], ["7", "3"]]


def test_table_i_range(capsys):
    run("table", "--q-list", "11", "--i-range", "4..5", "--level", "0", "--workers", "1", "--format", "json")
    rows = json.loads(capsys.readouterr().out)
    assert [(r["q"], r["i"], r["d_f"]) for r in rows] == [(11, 4, 10), (11, 5, 12)]


def test_verify_closed_form(capsys):
    run("verify", "--level", "0", "--q", "23", "--workers", "1", "--no-progress")
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True
    assert report["counts"] == {"PASS": 2, "FAIL": 0, "SKIP": 0}
    assert [c["name"] for c in report["checks"]] == ["family I, q=23", "family II, q=23"]


def test_long_and_short_spellings_of_q_and_i(capsys):
    run("construct", "--family", "I", "--q=5", "--i=2", "--level", "0", "--format", "csv")
    long_form = capsys.readouterr().out
    run("construct", "--family", "I", "-q", "5", "-i", "2", "--level", "0", "--format", "csv")
    assert capsys.readouterr().out == long_form
    assert long_form.splitlines()[1].startswith("5,2,26,")


def test_table_i_range_is_not_taken_for_i(capsys):
    run("table", "--q-list", "11", "--i-range", "5..5", "--level", "0", "--workers", "1", "--format", "json")
    assert [r["i"] for r in json.loads(capsys.readouterr().out)] == [5]


def test_construct_family_one_over_a_prime_power(capsys):
    run("construct", "--family", "I", "--q", "9", "--i", "2")
    data = json.loads(capsys.readouterr().out)
    assert data["valid"] is True
    assert (data["params"]["n"], data["params"]["k"]) == (82, 76)


def test_table_fail_fast_stops_on_the_first_failed_job(capsys):
    args = ("table", "--q-list", "5", "--level", "2", "--budget-ranks", "10", "--workers", "1", "--no-progress")
    assert exit_code(*args, "--fail-fast") == 3
    assert "Job 'i=2' failed" in capsys.readouterr().err
    assert exit_code(*args) == 3
    assert "budget" in capsys.readouterr().err
