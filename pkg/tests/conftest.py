from __future__ import annotations

from pathlib import Path

import pytest

import iotcompose
from iotcompose.services import MockServer
from iotcompose.shop_syntax import parse_domain, parse_problem
from iotcompose.thing_model import expand_thing, parse_json_preserving, parse_sawsdl
from iotcompose.vocab import bundled_vocabulary

DATA = Path(iotcompose.__file__).parent / "data"
FIXTURES = Path(__file__).parent / "fixtures"

ARDUINO = DATA / "arduino_yun.jsonld"
LITTLEBITS = DATA / "littlebits_cloudbit.jsonld"
LITTLEBITS_AS_PRINTED = FIXTURES / "littlebits_as_printed.jsonld"
CLOUD_WSDL = DATA / "cloud_storage.wsdl"
IOT_DOMAIN = DATA / "iot_domain.shop"
CLOUD_DOMAIN = DATA / "cloud_domain.shop"
REFERENCE_PROBLEM = FIXTURES / "reference_problem.shop"
BINDINGS = DATA / "bindings.json"
THRESHOLD = DATA / "threshold.json"

IOT_TASK = "(composeIoTServices DS18B20 long_LED)"
CLOUD_TASK = "(composeSensorToCloud DS18B20 putObject)"


@pytest.fixture(scope="session")
def vocab():
    return bundled_vocabulary()


@pytest.fixture(scope="session")
def arduino(vocab):
    return expand_thing(parse_json_preserving(ARDUINO.read_text("utf-8")), vocab)


@pytest.fixture(scope="session")
def littlebits(vocab):
    return expand_thing(parse_json_preserving(LITTLEBITS.read_text("utf-8")), vocab)


@pytest.fixture(scope="session")
def cloud():
    return parse_sawsdl(CLOUD_WSDL.read_text("utf-8"))


@pytest.fixture(scope="session")
def iot_domain():
    return parse_domain(IOT_DOMAIN.read_text("utf-8"))


@pytest.fixture(scope="session")
def cloud_domain():
    return parse_domain(CLOUD_DOMAIN.read_text("utf-8"))


@pytest.fixture(scope="session")
def reference_problem():
    return parse_problem(REFERENCE_PROBLEM.read_text("utf-8"))


@pytest.fixture
def mock():
    with MockServer() as server:
        yield server


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per `criterion`-marked test

_criteria: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        _criteria[number] = (title, verdict, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict, duration = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {verdict} ({duration:.2f}s) {title}")
