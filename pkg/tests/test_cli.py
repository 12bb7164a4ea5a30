import json
import socket

import pytest

from conftest import (
    ARDUINO,
    BINDINGS,
    CLOUD_DOMAIN,
    CLOUD_TASK,
    CLOUD_WSDL,
    IOT_DOMAIN,
    IOT_TASK,
    LITTLEBITS,
    LITTLEBITS_AS_PRINTED,
    REFERENCE_PROBLEM,
    THRESHOLD,
)
from iotcompose.cli import main
from iotcompose.shop_syntax import parse_problem, tokens_of

THINGS = [str(ARDUINO), str(LITTLEBITS)]

LOOP_DOMAIN = """(defdomain iot (
  (:method (composeIoTServices ?s ?a)
    ()
    ((composeIoTServices ?s ?a)))))
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _dead_url():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return f"http://127.0.0.1:{s.getsockname()[1]}"


# ---------------------------------------------------------------------------
# validate


def test_validate_fixtures_ok(capsys):
    code, _, err = run(capsys, "validate", *THINGS, LITTLEBITS_AS_PRINTED, CLOUD_WSDL)
    assert code == 0 and err == ""


def test_validate_unknown_type(tmp_path, capsys):
    bad = tmp_path / "bad.jsonld"
    bad.write_text(ARDUINO.read_text("utf-8").replace('"myont.PhysicalObject"', '"myont.Gizmo"'), "utf-8")
    code, _, err = run(capsys, "validate", bad)
    assert code == 1
    assert len(err.strip().splitlines()) == 1 and "bad.jsonld" in err


def test_validate_missing_path(tmp_path, capsys):
    code, _, err = run(capsys, "validate", tmp_path / "none.jsonld")
    assert code == 1 and "I/O error" in err


def test_validate_aggregates_failures(tmp_path, capsys):
    broken = tmp_path / "broken.jsonld"
    broken.write_text("{", "utf-8")
    code, _, err = run(capsys, "validate", ARDUINO, broken, tmp_path / "gone.wsdl")
    assert code == 1
    assert len(err.strip().splitlines()) == 2


def test_validate_dump(capsys):
    code, out, _ = run(capsys, "validate", "--dump", LITTLEBITS)
    assert code == 0
    dumped = json.loads(out)
    assert dumped["thing_id"] == "1234"
    assert len(dumped["security_problems"]) == 2


# ---------------------------------------------------------------------------
# atomize


def test_atomize_paper_compat_matches_problem_file(capsys):
    code, out, _ = run(capsys, "atomize", *THINGS, "--mode", "paper-compat", "--task", IOT_TASK)
    assert code == 0
    assert tokens_of(out) == tokens_of(REFERENCE_PROBLEM.read_text("utf-8"))


def test_atomize_to_file_with_cloud(tmp_path, capsys):
    target = tmp_path / "p.shop"
    code, out, _ = run(capsys, "atomize", *THINGS, CLOUD_WSDL, "--task", CLOUD_TASK, "-o", target)
    assert code == 0 and out == ""
    problem = parse_problem(target.read_text("utf-8"))
    assert any(a.head == "CloudService" for a in problem.initial_state)


@pytest.mark.parametrize("task", ["(composeIoTServices ?s long_LED)", "composeIoTServices", "(a) (b)"])
def test_atomize_bad_task(capsys, task):
    code, _, err = run(capsys, "atomize", *THINGS, "--task", task)
    assert code == 1 and err.startswith("error [task")


# ---------------------------------------------------------------------------
# plan


def test_plan_json(capsys):
    code, out, _ = run(capsys, "plan", "--domain", IOT_DOMAIN, "--problem", REFERENCE_PROBLEM, "--json")
    assert code == 0
    assert json.loads(out) == [{"steps": [["!checkSensorActuator", "DS18B20", "long_LED"]], "cost": 1.0}]


def test_plan_text_and_rank(capsys):
    code, out, _ = run(capsys, "plan", "--domain", IOT_DOMAIN, "--problem", REFERENCE_PROBLEM)
    assert code == 0 and out.startswith("; cost 1\n")
    code, out, _ = run(capsys, "plan", "--domain", IOT_DOMAIN, "--problem", REFERENCE_PROBLEM, "--rank")
    assert out.splitlines()[0] == "plan 1: cost 1 score 4.0 (security 4, protocol 0)"


def test_plan_no_plan(tmp_path, capsys):
    problem = tmp_path / "p.shop"
    problem.write_text(REFERENCE_PROBLEM.read_text("utf-8").replace("(composeIoTServices DS18B20 long_LED)",
                                                                "(composeIoTServices BMP180 long_LED)"), "utf-8")
    code, _, err = run(capsys, "plan", "--domain", IOT_DOMAIN, "--problem", problem)
    assert code == 2 and "no plan" in err


def test_plan_truncated(tmp_path, capsys):
    domain = tmp_path / "loop.shop"
    domain.write_text(LOOP_DOMAIN, "utf-8")
    code, _, err = run(capsys, "plan", "--domain", domain, "--problem", REFERENCE_PROBLEM, "--max-depth", "5")
    assert code == 3 and "truncated" in err


def test_plan_syntax_error_names_stage_and_line(tmp_path, capsys):
    domain = tmp_path / "bad.shop"
    domain.write_text(IOT_DOMAIN.read_text("utf-8") + ")\n", "utf-8")
    code, _, err = run(capsys, "plan", "--domain", domain, "--problem", REFERENCE_PROBLEM)
    assert code == 1 and err.startswith("error [domain") and "line" in err


def test_plan_bad_limits(capsys):
    code, _, err = run(capsys, "plan", "--domain", IOT_DOMAIN, "--problem", REFERENCE_PROBLEM, "--max-plans", "0")
    assert code == 1 and "plan" in err


# ---------------------------------------------------------------------------
# compose


def test_compose_dry_run_is_deterministic(capsys, mock):
    argv = ["compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK, "--dry-run"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert first.splitlines() == [
        "plan 1: cost 1 score 4.0 (security 4, protocol 0)",
        "  (!checkSensorActuator DS18B20 long_LED)",
    ]
    for _ in range(3):
        assert run(capsys, *argv)[1] == first
    assert mock.request_count == 0


def test_compose_dry_run_json(capsys):
    code, out, _ = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK,
                       "--dry-run", "--format", "json")
    assert code == 0
    (ranked,) = json.loads(out)
    assert ranked["score"] == 4.0 and ranked["score_breakdown"] == {"security": 4.0, "protocol": 0.0}


@pytest.mark.parametrize("reading,percent", [(5.0, 100.0), (21.0, 0.0)])
def test_compose_executes(capsys, mock, reading, percent):
    mock.seed("DS18B20", reading)
    code, out, _ = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK,
                       "--bindings", BINDINGS, "--threshold", THRESHOLD, "--base-url", mock.url)
    assert code == 0
    assert out.splitlines()[-1] == "status: Completed"
    assert mock.actuator_value("long_LED") == percent


def test_compose_default_threshold_json(capsys, mock):
    mock.seed("DS18B20", 30.0)
    code, out, _ = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK,
                       "--bindings", BINDINGS, "--base-url", mock.url, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "Completed" and len(report["records"]) == 3
    assert mock.actuator_value("long_LED") == 100.0


def test_compose_cloud(capsys, mock):
    mock.seed("DS18B20", 19.5)
    code, out, _ = run(capsys, "compose", *THINGS, CLOUD_WSDL, "--domain", CLOUD_DOMAIN, "--task", CLOUD_TASK,
                       "--bindings", BINDINGS, "--base-url", mock.url)
    assert code == 0
    assert out.splitlines()[0] == "plan: (!readSensor DS18B20) (!storeReading DS18B20 putObject)"
    assert len(mock.state.storage) == 1


def test_compose_unknown_sensor_no_plan(capsys):
    code, _, err = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN,
                       "--task", "(composeIoTServices NoSuchSensor long_LED)", "--dry-run")
    assert code == 2 and "no plan" in err


def test_compose_truncated(tmp_path, capsys):
    domain = tmp_path / "loop.shop"
    domain.write_text(LOOP_DOMAIN, "utf-8")
    code, _, _ = run(capsys, "compose", *THINGS, "--domain", domain, "--task", IOT_TASK,
                     "--dry-run", "--max-depth", "3")
    assert code == 3


def test_compose_unreachable_endpoint(capsys):
    code, out, _ = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK,
                       "--bindings", BINDINGS, "--base-url", _dead_url())
    assert code == 4
    assert out.splitlines()[-1] == "status: FailedAtStep(0)"


def test_compose_sensor_missing_on_server(capsys, mock):
    code, _, _ = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, "--task", IOT_TASK,
                     "--bindings", BINDINGS, "--base-url", mock.url)
    assert code == 4
    assert mock.actuator_value("long_LED") is None


@pytest.mark.parametrize("extra,stage", [
    ([], "task"),
    (["--task", IOT_TASK], "execute"),
    (["--task", IOT_TASK, "--bindings", "/nonexistent/bindings.json"], "execute"),
])
def test_compose_config_errors(capsys, extra, stage):
    code, _, err = run(capsys, "compose", *THINGS, "--domain", IOT_DOMAIN, *extra)
    assert code == 1 and err.startswith(f"error [{stage}")


def test_compose_invalid_thing(tmp_path, capsys):
    bad = tmp_path / "bad.jsonld"
    bad.write_text(ARDUINO.read_text("utf-8").replace('"myont.PhysicalObject"', '"myont.Gizmo"'), "utf-8")
    code, _, err = run(capsys, "compose", bad, "--domain", IOT_DOMAIN, "--task", IOT_TASK, "--dry-run")
    assert code == 1 and "error [" in err


def test_mock_serve_bad_seed(capsys):
    code, _, err = run(capsys, "mock-serve", "--seed", "DS18B20=warm")
    assert code == 1 and "mock-serve" in err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip()
