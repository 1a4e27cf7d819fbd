import pytest

from kg2d.model import PhysicalParams, SolverMode


@pytest.fixture(scope="session")
def paper_params() -> PhysicalParams:
    # reference parameter set used throughout: m0=120, Z0=30, r0=1, B0=200
    return PhysicalParams(m0=120.0, z0=30.0, r0=1.0, b0=200.0)


@pytest.fixture(scope="session")
def derived() -> SolverMode:
    return SolverMode.DERIVED
