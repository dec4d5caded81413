import numpy as np
import pytest
from hypothesis import strategies as st

from relfuzz.failure import FailureModel, StressFactors, ThermalElectricalParams
from relfuzz.fuzzy import TFN


@st.composite
def tfns(draw, lo=0.0, hi=100.0, min_width=0.0, unit=""):
    """Valid TFNs with vertices in [lo, hi]."""
    v = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False, allow_infinity=False),
                             min_size=3, max_size=3)))
    if v[2] - v[0] < min_width:
        v[2] = v[0] + min_width
    return TFN(v[0], v[1], v[2], unit)


def random_tfns(rng, n, lo=0.0, hi=100.0):
    v = np.sort(rng.uniform(lo, hi, size=(n, 3)), axis=1)
    return [TFN(*row) for row in v]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def thermal():
    return ThermalElectricalParams(v_in=100.0, v_out=200.0, r_ds_on=0.1, r_th_ja=1.0)


@pytest.fixture(scope="session")
def model(thermal):
    return FailureModel(TFN(0.012, 0.020, 0.034, "1/1e6h"), StressFactors(), thermal)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_report = rep


@pytest.fixture
def criterion(request):
    """Prints one PASS/FAIL line for an acceptance criterion after the test body runs."""
    info = {"label": request.node.name, "detail": ""}
    yield info
    rep = getattr(request.node, "call_report", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    line = f"[{status}] {info['label']}" + (f" | {info['detail']}" if info["detail"] else "")
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line(line)
    else:
        print(line)
