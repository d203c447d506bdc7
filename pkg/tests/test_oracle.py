import math

import numpy as np
import pytest
from hypothesis import given

from qcloning import machine as mach
from qcloning import oracle
from qcloning.errors import UndefinedFidelityError

from conftest import feasible_points


def test_isometry_of_valid_machine():
    iso = oracle.build_isometry(mach.solve_machine(0.1, 0.9, 0.5, "1+"))
    assert iso.is_isometry


def test_invalid_coefficients_are_not_isometric():
    iso = oracle.build_isometry((0.5, 0.5, 0.5, 0.0))
    assert not iso.is_isometry
    assert iso.orthonormality_error > 0.1


@given(feasible_points())
def test_isometry_tracks_constraints(pt):
    p = mach.solve_machine(*pt)
    err = oracle.build_isometry(p).orthonormality_error
    viol = max(p.normalization_residual, p.orthogonality_residual)
    assert err < 1e-10 and viol < 1e-10
    assert err <= 10 * max(viol, 1e-16) or err < 1e-15


def test_bell_point():
    out = oracle.oracle_clone(mach.MachineParams(1.0, 0.0, 0.0, 0.0), math.pi / 4)
    assert out.gamma == pytest.approx(1.0)
    assert out.fidelity == pytest.approx(0.5)
    assert out.concurrence == pytest.approx(1.0, abs=1e-12)
    assert out.discord == pytest.approx(1.0, abs=1e-6)
    assert out.tangle == pytest.approx(0.0, abs=1e-15)


def test_nocorr_point():
    from qcloning.nocorr import nocorr_params

    out = oracle.oracle_clone(nocorr_params(1 / 3).params, math.asin(1 / 3) / 2)
    assert out.fidelity == pytest.approx(0.9811, abs=1e-3)
    assert out.concurrence < 1e-10 and out.discord < 1e-8 and out.tangle < 1e-12


def test_failed_projection():
    # gamma = 0 at the boundary with s = 1: no successful clone
    p = mach.solve_machine(0.0, 0.0, 1.0, "1+")
    with pytest.raises(UndefinedFidelityError):
        oracle.oracle_clone(p, math.pi / 4)


@given(feasible_points())
def test_probe_bookkeeping_symmetric(pt):
    p = mach.solve_machine(*pt)
    theta = mach.theta_from_overlap(pt[2])
    o1 = oracle.oracle_clone(p, theta, 1, with_discord=False)
    o2 = oracle.oracle_clone(p, theta, 2, with_discord=False)
    assert o1.gamma == pytest.approx(o2.gamma, abs=1e-12)
    assert o1.fidelity == pytest.approx(o1.fidelity_mode2, abs=1e-12)


@given(feasible_points())
def test_cross_check_passes(pt):
    p = mach.solve_machine(*pt)
    rep = oracle.cross_check(p, mach.theta_from_overlap(pt[2]), gamma=pt[1])
    assert rep.passed, rep.entries
    assert rep.max_difference < 1e-9
    assert rep.branch is not None


@given(feasible_points(gamma_one=True))
def test_cross_check_tangle_zero_at_unit_gamma(pt):
    p = mach.solve_machine(*pt)
    rep = oracle.cross_check(p, mach.theta_from_overlap(pt[2]))
    assert rep["tangle_closed"].difference < 1e-12


def test_cross_check_boundary():
    b_max = mach.feasible_b_range(0.9, 0.4).b_max
    p = mach.solve_machine(b_max, 0.9, 0.4, "2-")
    rep = oracle.cross_check(p, mach.theta_from_overlap(0.4), gamma=0.9)
    assert rep["branch_fidelity"].analytic == pytest.approx(0.5, abs=1e-7)
    assert rep.passed


def test_cross_check_recovers_gamma_off_boundary():
    p = mach.solve_machine(0.1, 0.9, 0.5, "2-")
    rep = oracle.cross_check(p, mach.theta_from_overlap(0.5))
    assert rep.passed and rep.branch is mach.Branch.M2


def test_identify_branch():
    for br in mach.BRANCHES:
        p = mach.solve_machine(0.12, 0.85, 0.45, br)
        assert oracle.identify_branch(p) is br


def test_cross_check_reports_failures_as_data():
    p = mach.solve_machine(0.12, 0.85, 0.45, "1+")
    rep = oracle.cross_check(p, mach.theta_from_overlap(0.45), tolerances={"fidelity_general": -1.0})
    assert not rep.passed
    assert not rep["fidelity_general"].passed
    with pytest.raises(KeyError):
        rep["nope"]


def test_oracle_does_not_use_closed_forms():
    import inspect

    src = inspect.getsource(oracle.oracle_clone)
    for name in ("fidelity_general", "branch_fidelities", "concurrence_closed", "tangle_closed"):
        assert name not in src
