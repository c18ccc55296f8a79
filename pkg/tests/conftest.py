import pytest
from hypothesis import HealthCheck, settings

from sftgroup.adic_tables import validate_table
from sftgroup.matrices import all_builtins, builtin
from sftgroup.perron_field import compute_perron

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")

MATRIX_NAMES = ["full2", "full3", "fibonacci", "cubic", "golden_edge"]
ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fib():
    return builtin("fibonacci")


@pytest.fixture(scope="session")
def full2():
    return builtin("full2")


@pytest.fixture(scope="session")
def P_fib(fib):
    return compute_perron(fib)


@pytest.fixture(scope="session")
def P_full2(full2):
    return compute_perron(full2)


@pytest.fixture(scope="session")
def perrons():
    return {name: compute_perron(A) for name, A in all_builtins().items()}


@pytest.fixture(scope="session")
def swap(fib):
    return validate_table(fib, [((1,), (2, 1)), ((2, 1), (1,))])


@pytest.fixture(scope="session")
def x0(full2):
    return validate_table(full2, [((1, 1), (1,)), ((1, 2), (2, 1)), ((2,), (2, 2))])
