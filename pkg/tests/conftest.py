import pytest

from limcm import GradedModule, GradedRing

SEMIGROUP_RELATIONS = ["b*c-a*d", "b^3-a^2*c", "c^3-b*d^2", "a*c^2-b^2*d"]
SEMIGROUP_GRADING = [[4, 3, 1, 0], [0, 1, 3, 4]]


def semigroup_ring(p=2):
    # k[s^4, s^3t, st^3, t^4]
    return GradedRing(p, ["a", "b", "c", "d"], relations=SEMIGROUP_RELATIONS,
                      multigrading=SEMIGROUP_GRADING, domain=True)


def nonequi_ring(p=2):
    return GradedRing(p, ["x", "y", "z"], [1, 2, 1], ["x*y", "x*z"])


def fermat_ring(p):
    return GradedRing(p, ["x", "y", "z"], relations=["x^3+y^3+z^3"], domain=True)


def cone_ring(p=3):
    return GradedRing(p, ["x", "y", "z"], relations=["z^2-x*y"], domain=True)


def node_ring(p):
    return GradedRing(p, ["x", "y"], relations=["x*y"])


def poly_ring(p, names="xy", weights=None):
    return GradedRing(p, list(names), weights)


def ring_module(R):
    return GradedModule.cyclic(R, [])


@pytest.fixture
def kxy2():
    return poly_ring(2)


@pytest.fixture
def kxy3():
    return poly_ring(3)


@pytest.fixture(scope="session")
def semigroup():
    return semigroup_ring(2)


@pytest.fixture(scope="session")
def nonequi():
    return nonequi_ring(2)


# acceptance gate bookkeeping: one line per criterion in the terminal summary
GATE: dict = {}


def record_gate(number, ok, detail):
    GATE[number] = (bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not GATE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(GATE):
        ok, detail = GATE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
