import math

import pytest

from qcloning import fidelity as fid
from qcloning import verify
from qcloning.machine import success_probability, apply_machine


def test_small_run_passes():
    rep = verify.run_verification(seed=7, trials=10)
    assert rep.passed and rep.exit_status == 0
    assert all(c.samples > 0 for c in rep.checks)
    assert "status: PASS" in rep.text()


def test_deterministic():
    a = verify.run_verification(seed=3, trials=5).text()
    b = verify.run_verification(seed=3, trials=5).text()
    assert a == b


def test_vacuous_run():
    rep = verify.run_verification(seed=42, trials=0)
    assert rep.exit_status == 0
    assert "vacuous" in rep.text()


def _mutant_fidelity(params, theta):
    """General fidelity with the sign of the 2AB term flipped."""
    gamma = success_probability(apply_machine(params, theta, 1))
    A, B, C, _ = params.as_tuple()
    total = (
        (A - 2 * B - C) * (A + C) * math.cos(4 * theta)
        + 2 * B * C
        + C * C
        + 3 * A * A
        + 4 * (A + B) * (B + C) * math.sin(2 * theta)
        - 2 * A * B
        + 4 * B * B
    )
    return total / (4.0 * gamma)


def test_mutation_is_caught(monkeypatch):
    monkeypatch.setattr(fid, "fidelity_general", _mutant_fidelity)
    rep = verify.run_verification(seed=42, trials=20)
    assert rep.exit_status != 0
    assert any("fidelity_general" in name for name in rep.failed)
    assert "fidelity_general" in rep.text().split("status:")[-1]


def test_crash_is_reported_not_raised(monkeypatch):
    def boom(*_):
        raise RuntimeError("broken")

    monkeypatch.setattr(fid, "optimal_fidelity", boom)
    rep = verify.run_verification(seed=1, trials=3)
    assert not rep.passed
    bad = [c for c in rep.checks if not c.passed]
    assert all("RuntimeError" in c.detail for c in bad)
