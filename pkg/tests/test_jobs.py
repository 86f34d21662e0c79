import json
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reesalg import cli, jobs
from reesalg.calibration import CalibrationCheck, CalibrationRecord
from reesalg.cli import main, shipped_job
from reesalg.corpus import corpus_run
from reesalg.jobs import (
    JobParseError,
    JobSpec,
    RingBlock,
    TaskSpec,
    parse_job,
    run_job,
    serialize_job,
)

SMALL = """\
ring
  characteristic 32003
  variables x y
end
ideal
  x
  y
end
tasks
  d    max_gen_degree
  a1   a_star n=1
  reg  regularity n=2
  eps  epsilon
end
"""


def test_shipped_job_has_nine_tasks():
    spec = parse_job(shipped_job("example_2_8.job"))
    assert len(spec.tasks) == 9
    assert spec.ring.variables == ("x0", "x1", "x2")
    assert parse_job(serialize_job(spec)) == spec


@pytest.mark.parametrize("name", cli.SUITE_FILES)
def test_shipped_jobs_round_trip(name):
    spec = parse_job(shipped_job(name))
    assert parse_job(serialize_job(spec)) == spec


def test_unknown_operation_is_named():
    text = SMALL.replace("eps  epsilon", "f    frobnicate")
    with pytest.raises(JobParseError) as info:
        parse_job(text)
    assert "frobnicate" in str(info.value)
    assert info.value.line == 13 and info.value.column == 8


def test_undeclared_variable_cites_token():
    text = SMALL.replace("  y\nend\ntasks", "  y + w^2\nend\ntasks")
    with pytest.raises(JobParseError) as info:
        parse_job(text)
    assert "'w'" in str(info.value)
    assert info.value.line == 7 and info.value.column == 7


@pytest.mark.parametrize("bad,line", [
    (SMALL.replace("variables x y", "variables x y\n  colour red"), 4),
    (SMALL.replace("d    max_gen_degree", "d    max_gen_degree q=1"), 10),
    (SMALL.replace("tasks\n", "limits\n  speed 3\nend\ntasks\n"), 10),
    (SMALL + "banana\n", 15),
    # an unterminated ring block swallows the next header
    (SMALL.replace("end\nideal", "ideal", 1), 4),
])
def test_malformed_input_is_rejected(bad, line):
    with pytest.raises(JobParseError) as info:
        parse_job(bad)
    assert info.value.line == line


def test_malformed_polynomial():
    with pytest.raises(JobParseError):
        parse_job(SMALL.replace("  x\n  y\n", "  x +* y\n"))


params = st.dictionaries(st.sampled_from(["n", "ideal"]), st.just(1), max_size=1).map(
    lambda d: {k: ("I" if k == "ideal" else v) for k, v in d.items()})


@given(st.lists(st.sampled_from(["a_star", "betti", "regularity"]), max_size=4), params,
       st.integers(2, 6), st.sampled_from(["degrevlex", "lex"]))
def test_round_trip_property(ops, prm, n_max, order):
    tasks = tuple(TaskSpec(f"t{i}", op, tuple(sorted(prm.items()))) for i, op in enumerate(ops))
    spec = JobSpec(RingBlock(32003, ("a", "b", "c"), order, ("a*b - c^2",)),
                   (("I", ("a", "b^2 + c^2")),), tasks, (("n_max", n_max),))
    assert parse_job(serialize_job(spec)) == spec


def test_run_small_job_is_deterministic():
    spec = parse_job(SMALL)
    r1, r2 = run_job(spec), run_job(spec)
    assert r1.to_json() == r2.to_json()
    doc = json.loads(r1.to_json())
    assert doc["schema_version"] == jobs.SCHEMA_VERSION
    assert "characteristic_note" in doc and doc["calibration"]["passed"]
    assert [t["id"] for t in doc["results"]] == ["d", "a1", "reg", "eps"]
    res = {t["id"]: t["result"] for t in doc["results"]}
    assert res["d"] == {"d": 1}
    assert res["a1"] == {"a_star": 0}
    assert res["reg"] == {"via_a_invariants": 2, "via_betti": 2}
    assert r1.exit_code == 0


def test_empty_task_list():
    spec = parse_job(SMALL.split("tasks")[0])
    report = run_job(spec)
    doc = report.as_dict()
    assert doc["results"] == [] and doc["calibration"]["passed"]
    assert report.exit_code == 0


def test_failing_task_is_isolated():
    good = run_job(parse_job(SMALL)).as_dict()["results"]
    text = SMALL.replace("eps  epsilon", "bad  truncation e=0 c=1\n  eps  epsilon")
    report = run_job(parse_job(text))
    results = {t["id"]: t for t in report.as_dict()["results"]}
    assert results["bad"]["status"] == "error"
    for t in good:
        assert results[t["id"]] == t
    assert report.exit_code == 1


def test_time_budget_exhaustion_is_a_result_state():
    text = shipped_job("example_2_8.job").replace("window 3", "window 3\n  time_budget 1")
    spec = parse_job(text)
    spec = jobs.JobSpec(spec.ring, spec.ideals,
                        tuple(t for t in spec.tasks if t.id in ("d", "t5")), spec.limits)
    start = time.perf_counter()
    report = run_job(spec)
    assert time.perf_counter() - start < 8
    status = {t.id: t.status for t in report.tasks}
    assert status == {"d": "ok", "t5": "timeout"}
    assert report.exit_code == 1


def test_calibration_failure_aborts(monkeypatch):
    bad = CalibrationRecord(32003, (CalibrationCheck("anchor", -1, 0),))
    monkeypatch.setattr(jobs, "calibrate", lambda p: bad)
    report = run_job(parse_job(SMALL))
    assert report.tasks == [] and report.exit_code == 2


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.job"
    good.write_text(SMALL)
    assert main(["run", str(good), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["results"]) == 4
    bad = tmp_path / "bad.job"
    bad.write_text(SMALL.replace("eps  epsilon", "f frobnicate"))
    assert main(["run", str(bad)]) == 3
    assert "frobnicate" in capsys.readouterr().err
    assert main(["calibrate"]) == 0


def test_cli_overrides(tmp_path, capsys):
    job = tmp_path / "j.job"
    job.write_text(SMALL)
    assert main(["run", str(job), "--json", "--char", "101", "--n-max", "3", "--window", "2",
                 "--order", "lex"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["characteristic"] == 101 and doc["calibration"]["characteristic"] == 101
    assert doc["job"]["limits"]["n_max"] == 3 and doc["job"]["ring"]["order"] == "lex"
    eps = [t for t in doc["results"] if t["id"] == "eps"][0]["result"]
    assert len(eps["window"]) == 3


def test_corpus_empty_and_deterministic():
    assert corpus_run(count=0).rows == []
    assert corpus_run(count=0).aggregates()["rows"] == 0
    a = corpus_run(3, 3, 4, seed=7).to_json()
    b = corpus_run(3, 3, 4, seed=7).to_json()
    assert a == b


def test_cli_corpus(capsys):
    assert main(["corpus", "--count", "3", "--seed", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["rows"]) == 3 and doc["aggregates"]["soundness_violations"] == 0
