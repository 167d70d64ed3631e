import numpy as np
import pytest

from chshprob.pauli import Axis
from chshprob.quantum import AxisQuadruple

# independent reference matrices (numpy, not the package's Operator2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def np_sigma(v):
    return v[0] * SX + v[1] * SY + v[2] * SZ


def np_projector(v, s):
    return 0.5 * (I2 + s * np_sigma(v))


def as_np(op):
    return np.array(op.rows(), dtype=complex)


def random_axis(g: np.random.Generator) -> Axis:
    v = g.normal(size=3)
    return Axis(*(v / np.linalg.norm(v)))


def random_quadruple(g: np.random.Generator) -> AxisQuadruple:
    return AxisQuadruple(*(random_axis(g) for _ in range(4)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# --------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion


_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call" or report.outcome != "passed":
        entry["seen"] = True
        entry["ok"] = entry["ok"] and report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        verdict = "PASS" if entry["ok"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {entry['title']}")
