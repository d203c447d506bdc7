"""Seeded invariant suite run by ``qcloning verify``.

Every check reports its tolerance and the largest deviation seen. Modules are
called through their attributes (``fid.fidelity_general``...) so a patched or
broken formula is picked up here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import correlations as corr
from . import fidelity as fid
from . import machine as mach
from . import nocorr
from . import oracle
from .states import TwoModeState


@dataclass(frozen=True)
class FeasiblePoint:
    b: float
    gamma: float
    s: float
    branch: mach.Branch

    @property
    def theta(self) -> float:
        return mach.theta_from_overlap(self.s)


def random_feasible_points(rng: np.random.Generator, n: int) -> list[FeasiblePoint]:
    """s ~ U[0,1], gamma ~ U[(1-s)/2, 1], B ~ U over the feasible interval; branches cycle."""
    pts = []
    for i in range(n):
        s = float(rng.uniform(0.0, 1.0))
        gamma = float(rng.uniform((1.0 - s) / 2.0, 1.0))
        b_max = mach.feasible_b_range(gamma, s).b_max
        b = float(rng.uniform(-b_max, b_max))
        pts.append(FeasiblePoint(b, gamma, s, mach.BRANCHES[i % 4]))
    return pts


@dataclass
class CheckOutcome:
    name: str
    tolerance: float
    max_deviation: float
    samples: int
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.name}: max deviation {self.max_deviation:.3e} "
                f"(tol {self.tolerance:.1e}, n={self.samples}){' - ' + self.detail if self.detail else ''}")


@dataclass
class VerificationReport:
    seed: int
    trials: int
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 2

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def text(self) -> str:
        head = f"verification seed={self.seed} trials={self.trials}"
        if self.trials == 0:
            head += " (vacuous: no random trials; fixed-point checks only)"
        lines = [head, *(c.line() for c in self.checks)]
        lines.append("status: " + ("PASS" if self.passed else "FAIL: " + ", ".join(self.failed)))
        return "\n".join(lines)


def _run(name: str, tol: float, deviations: Callable[[], Iterator[float]]) -> CheckOutcome:
    worst, n = 0.0, 0
    try:
        for dev in deviations():
            n += 1
            if not math.isfinite(dev):
                worst = math.inf
            else:
                worst = max(worst, dev)
    except Exception as exc:  # a crash is a failed check, not a crashed run
        return CheckOutcome(name, tol, math.inf, n, False, f"raised {type(exc).__name__}: {exc}")
    return CheckOutcome(name, tol, worst, n, worst <= tol, "vacuous" if n == 0 else "")


def run_verification(seed: int = 42, trials: int = 200) -> VerificationReport:
    rng = np.random.default_rng(seed)
    pts = random_feasible_points(rng, trials)
    report = VerificationReport(seed, trials)
    add = report.checks.append

    def solved():
        for p in pts:
            yield p, mach.solve_machine(p.b, p.gamma, p.s, p.branch)

    def orthonormality():
        for _, m in solved():
            yield max(m.normalization_residual, m.orthogonality_residual)

    def round_trip():
        for p, m in solved():
            for which in (1, 2):
                yield abs(mach.success_probability(mach.apply_machine(m, p.theta, which)) - p.gamma)

    def b_range_forms():
        for p in pts:
            r = mach.feasible_b_range(p.gamma, p.s)
            d = mach.failure_amplitude(p.gamma, p.s)
            yield abs(4.0 * r.b_max**2 - max(1.0 - 2.0 * d * d, 0.0))

    def density_vs_partial_trace():
        for p, m in solved():
            st = mach.apply_machine(m, p.theta)
            w = st.modes_by_probe
            yield float(np.max(np.abs(mach.output_density(st).matrix - w @ w.T)))

    def fidelity_vs_oracle():
        for p, m in solved():
            yield abs(fid.fidelity_general(m, p.theta) - oracle.oracle_clone(m, p.theta, with_discord=False).fidelity)

    def input_symmetry():
        for p, m in solved():
            o1 = oracle.oracle_clone(m, p.theta, 1, with_discord=False)
            o2 = oracle.oracle_clone(m, p.theta, 2, with_discord=False)
            yield max(abs(o1.fidelity - o2.fidelity), abs(o1.gamma - o2.gamma), abs(o1.fidelity - o1.fidelity_mode2))

    def branch_vs_general():
        for p, m in solved():
            yield abs(fid.branch_fidelities(p.b, p.gamma, p.s)[p.branch] - fid.fidelity_general(m, p.theta))

    def optimum_vs_grid():
        for p in pts:
            s = max(p.s, 0.05)
            f_grid, _ = fid.grid_max_fidelity(p.gamma, s, 10_000)
            yield abs(fid.optimal_fidelity(p.gamma, s) - f_grid)

    def optimum_dominates():
        for p in pts:
            if p.s == 0.0:
                continue
            yield max(0.0, fid.partially_optimal_fidelity(p.b, p.gamma, p.s)[0] - fid.optimal_fidelity(p.gamma, p.s))

    def optimum_identical_states():
        yield abs(fid.optimal_fidelity(1.0, 1.0) - 1.0)

    def concurrence_forms():
        for p, m in solved():
            rho = mach.output_density(mach.apply_machine(m, p.theta))
            yield abs(corr.concurrence_closed(rho.abcd) - corr.concurrence_eigen(rho))

    def concurrence_bell():
        bell = TwoModeState.from_pure(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0))
        yield abs(corr.concurrence_eigen(bell) - 1.0)
        yield abs(corr.concurrence_closed((1 / math.sqrt(2), 0.0, 1 / math.sqrt(2), 0.0)) - 1.0)

    def tangle_forms():
        for p, m in solved():
            st = mach.apply_machine(m, p.theta)
            yield abs(corr.tangle_closed(p.gamma, p.b, p.theta, p.branch) - corr.tangle_from_state(st))

    def tangle_sdc():
        for p in pts:
            b_max = mach.feasible_b_range(1.0, p.s).b_max
            b = max(-b_max, min(b_max, p.b))
            m = mach.solve_machine(b, 1.0, p.s, p.branch)
            yield abs(corr.tangle_from_state(mach.apply_machine(m, p.theta)))
            yield abs(corr.tangle_closed(1.0, b, p.theta, p.branch))

    def discord_fixed_points():
        bell = TwoModeState.from_pure(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0))
        prod = TwoModeState.from_pure(np.array([1.0, 0.0, 0.0, 0.0]))
        yield abs(corr.quantum_discord(bell) - 1.0)
        yield abs(corr.quantum_discord(prod))

    def nocorr_consistency():
        for s in np.linspace(0.0, 1.0, 21):
            for branch in (1, 2):
                sol = nocorr.nocorr_params(float(s), branch)
                yield abs(nocorr.nocorr_fidelity(float(s)) - fid.fidelity_general(sol.params, mach.theta_from_overlap(float(s))))

    def nocorr_minimum():
        s_min, f_min = nocorr.nocorr_minimum(10_001)
        yield abs(s_min - 1.0 / 3.0)
        yield abs(f_min - 0.9811)

    def cross_checks():
        for p, m in solved():
            yield oracle.cross_check(m, p.theta, gamma=p.gamma).max_difference

    add(_run("solve_machine orthonormality", 1e-10, orthonormality))
    add(_run("success_probability round trip", 1e-10, round_trip))
    add(_run("feasible_b_range characterizations", 1e-12, b_range_forms))
    add(_run("output_density vs partial trace", 1e-12, density_vs_partial_trace))
    add(_run("fidelity_general vs oracle", 1e-9, fidelity_vs_oracle))
    add(_run("input symmetry (which=1 vs 2)", 1e-10, input_symmetry))
    add(_run("branch_fidelities vs fidelity_general", 1e-9, branch_vs_general))
    add(_run("optimal_fidelity vs 10^4-point grid max", 1e-5, optimum_vs_grid))
    add(_run("optimal_fidelity dominates partially_optimal_fidelity", 1e-9, optimum_dominates))
    add(_run("optimal_fidelity(1, 1) = 1", 1e-10, optimum_identical_states))
    add(_run("concurrence_closed vs concurrence_eigen", 1e-10, concurrence_forms))
    add(_run("concurrence of Bell state", 1e-10, concurrence_bell))
    add(_run("tangle_closed vs tangle_from_state", 1e-9, tangle_forms))
    add(_run("tangle vanishes at gamma = 1", 1e-12, tangle_sdc))
    add(_run("quantum_discord fixed points", 1e-6, discord_fixed_points))
    add(_run("nocorr_fidelity vs fidelity_general", 1e-10, nocorr_consistency))
    add(_run("nocorr minimum location/value", 5e-4, nocorr_minimum))
    add(_run("oracle cross_check", 1e-9, cross_checks))
    return report
