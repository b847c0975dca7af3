import numpy as np
import pytest

from permcap.channel import JOINT_OMEGA_5X5, KroneckerSpec, kronecker_coupling

# (criterion, passed, detail) rows printed after the run
_ACCEPTANCE = {}


@pytest.fixture
def record(request):
    """Store the verdict of one acceptance criterion for the final summary."""

    def _record(passed, detail):
        _ACCEPTANCE[request.node.name] = (bool(passed), detail)
        return passed

    return _record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and rep.when == "call":
        if rep.failed and item.name not in _ACCEPTANCE:
            msg = str(call.excinfo.value).splitlines()[0] if call.excinfo else "error"
            _ACCEPTANCE[item.name] = (False, f"raised: {msg}")
        elif rep.failed:
            _ACCEPTANCE[item.name] = (False, _ACCEPTANCE[item.name][1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[1][1:])):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def joint_omega():
    return JOINT_OMEGA_5X5


@pytest.fixture(scope="session")
def kron_spec():
    return KroneckerSpec.constant_correlation(5, 5, alpha_r=0.6, alpha_t=0.4)


@pytest.fixture(scope="session")
def kron_omega(kron_spec):
    return kronecker_coupling(kron_spec).omega


def random_coupling(rng, nr, nt, sparsity=0.0):
    om = rng.uniform(0.0, 1.0, (nr, nt))
    om[rng.uniform(size=om.shape) < sparsity] = 0.0
    if om.sum() == 0:
        om[0, 0] = 1.0
    return om * (om.size / om.sum())


def random_simplex(rng, nt):
    return rng.dirichlet(np.ones(nt)) * nt
