import numpy as np
import pytest

from kg2d.model import (
    BoundState,
    CoefficientSet,
    PhysicalParams,
    QuantumNumbers,
    SampledFunction,
    SolverMode,
    StateSource,
    validate_params,
)


def test_paper_params_validate_ok(paper_params, derived):
    report = validate_params(paper_params, derived)
    assert report.ok
    assert report.issues == ()


def test_zero_field_is_weak_field_violation(derived):
    p = PhysicalParams(m0=120.0, z0=30.0, r0=1.0, b0=0.0)
    report = validate_params(p, derived)
    assert not report.ok
    assert "weak-field" in report.codes()


def test_out_of_range_strength_warns_only(derived):
    p = PhysicalParams(m0=120.0, z0=60.0, r0=1.0, b0=200.0)
    report = validate_params(p, derived)
    assert report.ok  # warning, not error: the math stays well defined
    assert "approx-range" in report.codes()
    assert report.warnings and not report.errors


@pytest.mark.parametrize(
    "kwargs, code",
    [
        (dict(m0=-1.0, z0=30.0, r0=1.0, b0=200.0), "nonpositive-m0"),
        (dict(m0=120.0, z0=0.0, r0=1.0, b0=200.0), "nonpositive-z0"),
        (dict(m0=120.0, z0=30.0, r0=-2.0, b0=200.0), "nonpositive-r0"),
        (dict(m0=120.0, z0=30.0, r0=1.0, b0=-5.0), "nonpositive-b0"),
        (dict(m0=float("nan"), z0=30.0, r0=1.0, b0=200.0), "nonfinite-m0"),
    ],
)
def test_field_violations(kwargs, code, derived):
    report = validate_params(PhysicalParams(**kwargs), derived)
    assert not report.ok
    assert code in report.codes()


def test_validation_is_deterministic(derived):
    p = PhysicalParams(m0=120.0, z0=60.0, r0=1.0, b0=0.0)
    assert validate_params(p, derived) == validate_params(p, derived)


def test_weak_field_same_condition_in_both_modes():
    p = PhysicalParams(m0=120.0, z0=30.0, r0=0.3, b0=200.0)  # b0*r0^2 = 18 < 30
    for mode in SolverMode:
        assert "weak-field" in validate_params(p, mode).codes()


def test_solver_mode_parsing():
    assert SolverMode.from_string("derived") is SolverMode.DERIVED
    assert SolverMode.from_string("paper") is SolverMode.PAPER
    assert SolverMode.from_string("paper-literal") is SolverMode.PAPER
    with pytest.raises(ValueError):
        SolverMode.from_string("exact")


def test_quantum_number_invariants():
    qn = QuantumNumbers(2, -3)
    assert (qn.n, qn.m) == (2, -3)
    with pytest.raises(ValueError):
        QuantumNumbers(-1, 0)
    with pytest.raises(TypeError):
        QuantumNumbers(1.0, 0)  # type: ignore[arg-type]
    with pytest.raises(TypeError):
        QuantumNumbers(True, 0)  # type: ignore[arg-type]


def test_coefficient_set_requires_positive_roots():
    with pytest.raises(ValueError):
        CoefficientSet(1.0, 0.0, 2.0, SolverMode.DERIVED)
    with pytest.raises(ValueError):
        CoefficientSet(1.0, 2.0, -1.0, SolverMode.DERIVED)
    c = CoefficientSet(-5.0, 2.0, 3.0, SolverMode.PAPER)
    assert c.beta1_sq == -5.0  # beta1_sq may take either sign


def test_bound_state_particle_branch(paper_params):
    coeffs = CoefficientSet(1.0, 2.0, 3.0, SolverMode.DERIVED)
    with pytest.raises(ValueError):
        BoundState(QuantumNumbers(0, 0), 10.0, coeffs, 0.0, StateSource.ANALYTIC, paper_params)
    with pytest.raises(ValueError):
        # analytic states must carry coefficients
        BoundState(QuantumNumbers(0, 0), -10.0, None, 0.0, StateSource.ANALYTIC, paper_params)
    s = BoundState(QuantumNumbers(0, 0), -10.0, None, 1e-10, StateSource.ORACLE_EXACT, paper_params)
    assert s.coeffs is None


def test_sampled_function_invariants():
    sf = SampledFunction(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0, 3.0]))
    assert len(sf) == 3
    assert not sf.values.flags.writeable  # frozen payload
    with pytest.raises(ValueError):
        SampledFunction(np.array([0.0, 0.0, 1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        SampledFunction(np.array([0.0, 1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        SampledFunction(np.array([0.0, 1.0]), np.array([1.0, float("inf")]))
