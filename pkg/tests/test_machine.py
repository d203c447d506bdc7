import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcloning import machine as mach
from qcloning.errors import DomainError, InfeasibleError, InvariantError
from qcloning.states import ThreeQubitState, TwoModeState

from conftest import feasible_points

# 40-digit reference coefficients (A, B, C, D)
FROZEN_PARAMS = [
    ((0.1, 0.9, 0.5, "1+"), (0.9546060565661952, 0.1, -0.045393943433804797, 0.2581988897471611)),
    ((-0.2, 0.8, 0.3, "1-"), (0.13520290149601918, -0.2, -0.86479709850398082, 0.39223227027636802)),
    ((0.05, 0.7, 0.8, "2+"), (-0.90517485937144059, 0.05, 0.094825140628559413, 0.40824829046386304)),
    ((0.15, 0.95, 0.2, "2-"), (-0.045393943433804822, 0.15, 0.95460605656619518, 0.2041241452319316)),
]


@pytest.mark.parametrize("args, expected", FROZEN_PARAMS)
def test_solve_machine_frozen(args, expected):
    got = mach.solve_machine(*args).as_tuple()
    assert got == pytest.approx(expected, abs=1e-14)


def test_perfect_cloner_of_orthogonal_inputs():
    p = mach.solve_machine(0.0, 1.0, 0.0, "1+")
    assert p.as_tuple() == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-15)


def test_overlap_round_trip():
    assert mach.overlap_from_theta(math.pi / 4) == pytest.approx(1.0)
    assert mach.theta_from_overlap(0.5) == pytest.approx(math.pi / 12)
    assert mach.InputPair.from_overlap(0.5).s == pytest.approx(0.5)


def test_inputs_are_swapped_amplitudes():
    pair = mach.InputPair(0.3)
    np.testing.assert_allclose(pair.state(2), pair.state(1)[::-1])
    with pytest.raises(DomainError):
        pair.state(3)


@pytest.mark.parametrize("theta", [-0.01, math.pi / 4 + 1e-9])
def test_theta_domain(theta):
    with pytest.raises(DomainError):
        mach.InputPair(theta)


def test_infeasible_message_names_constraint():
    with pytest.raises(InfeasibleError, match=r"gamma < \(1-s\)/2"):
        mach.feasible_b_range(0.2, 0.5)


def test_degenerate_range_at_boundary():
    r = mach.feasible_b_range(0.25, 0.5)
    assert r.b_min == 0.0 and r.b_max == 0.0
    p = mach.solve_machine(0.0, 0.25, 0.5, "1+")
    assert p.a == pytest.approx(0.5) and p.c == pytest.approx(-0.5)


def test_b_outside_range_rejected():
    with pytest.raises(DomainError, match="outside the feasible interval"):
        mach.solve_machine(0.6, 1.0, 0.5, "1+")


@pytest.mark.parametrize("bad", [(1.0, 0.1, 0.0, 0.0), (0.5, 0.5, 0.5, 0.0)])
def test_machine_params_validation(bad):
    with pytest.raises(InvariantError):
        mach.MachineParams(*bad)


def test_branch_tags():
    assert [b.value for b in mach.BRANCHES] == ["1+", "1-", "2+", "2-"]
    assert mach.as_branch("2-") is mach.Branch.M2
    with pytest.raises(DomainError):
        mach.as_branch("3+")


def test_apply_machine_layout():
    p = mach.solve_machine(0.1, 0.9, 0.5, "1+")
    st_ = mach.apply_machine(p, mach.theta_from_overlap(0.5))
    a, b, c, d = mach.output_coefficients(p, mach.theta_from_overlap(0.5))
    t = st_.tensor
    assert (t[0, 0, 0], t[0, 1, 0], t[1, 0, 0], t[1, 1, 0], t[0, 0, 1]) == pytest.approx((a, b, b, c, d))


def test_output_density_rejects_foreign_state():
    amps = np.zeros(8)
    amps[0b011] = 1.0
    with pytest.raises(InvariantError):
        mach.output_density(ThreeQubitState(amps))


def test_states_validate():
    with pytest.raises(InvariantError):
        ThreeQubitState(np.ones(8))
    with pytest.raises(InvariantError):
        TwoModeState(np.eye(4))


def test_swapped_marginals():
    rho = TwoModeState.from_pure(np.kron([1.0, 0.0], [0.6, 0.8]))
    np.testing.assert_allclose(rho.swapped().marginal(0), rho.marginal(1))


@given(feasible_points())
def test_orthonormality_property(pt):
    p = mach.solve_machine(*pt)
    assert p.normalization_residual < 1e-10
    assert p.orthogonality_residual < 1e-10


@given(feasible_points(), st.sampled_from([1, 2]))
def test_success_probability_round_trip(pt, which):
    b, gamma, s, branch = pt
    p = mach.solve_machine(*pt)
    state = mach.apply_machine(p, mach.theta_from_overlap(s), which)
    assert mach.success_probability(state) == pytest.approx(gamma, abs=1e-10)


@given(feasible_points())
def test_b_bound_characterizations_agree(pt):
    _, gamma, s, _ = pt
    d = mach.failure_amplitude(gamma, s)
    # squared bounds: the square root is ill-conditioned at the boundary
    assert 4 * mach.feasible_b_range(gamma, s).b_max ** 2 == pytest.approx(max(1 - 2 * d * d, 0.0), abs=1e-12)


@given(feasible_points())
def test_output_density_is_partial_trace(pt):
    p = mach.solve_machine(*pt)
    state = mach.apply_machine(p, mach.theta_from_overlap(pt[2]))
    w = state.modes_by_probe
    np.testing.assert_allclose(mach.output_density(state).matrix, w @ w.T, atol=1e-12)
