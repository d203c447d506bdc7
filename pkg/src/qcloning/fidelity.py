"""Clone fidelities: general, per-branch, partially optimal and fully optimal."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numeric import GAMMA_FLOOR, clamped_sqrt
from .errors import DomainError, SingularInputError, UndefinedFidelityError
from .machine import (
    BRANCHES,
    Branch,
    MachineParams,
    apply_machine,
    branch_root,
    feasible_b_range,
    success_probability,
)

TIE_TOL = 1e-12


@dataclass(frozen=True)
class FidelityBranches:
    f1_plus: float
    f1_minus: float
    f2_plus: float
    f2_minus: float
    f_p: float
    argmax_branch: Branch

    def __getitem__(self, branch: Branch | str) -> float:
        return self.as_dict()[Branch(branch)]

    def as_dict(self) -> dict[Branch, float]:
        return {
            Branch.P1: self.f1_plus,
            Branch.M1: self.f1_minus,
            Branch.P2: self.f2_plus,
            Branch.M2: self.f2_minus,
        }


@dataclass(frozen=True)
class OptimalSolution:
    b_opt: float
    f_opt: float
    m: float

    @property
    def b_pair(self) -> tuple[float, float]:
        return (self.b_opt, -self.b_opt)


def fidelity_general(params: MachineParams, theta: float) -> float:
    """Single-copy fidelity of the post-selected clone.

    Same for either input of the pair; gamma is read off the machine output.
    """
    gamma = success_probability(apply_machine(params, theta, 1))
    if gamma < GAMMA_FLOOR:
        raise UndefinedFidelityError(f"success probability {gamma:.3e} is zero; fidelity undefined")
    A, B, C, _ = params.as_tuple()
    total = (
        (A - 2 * B - C) * (A + C) * math.cos(4 * theta)
        + 2 * B * C
        + C * C
        + 3 * A * A
        + 4 * (A + B) * (B + C) * math.sin(2 * theta)
        + 2 * A * B
        + 4 * B * B
    )
    return total / (4.0 * gamma)


def _branch_values(b: float, gamma: float, s: float) -> dict[Branch, float]:
    # same rounding as solve_machine, which matters where the root is ~0
    root = branch_root(b, gamma, s)
    if gamma <= 0.0:
        raise UndefinedFidelityError("gamma = 0; fidelity undefined")
    k1 = (1.0 + s) * (1.0 + (2.0 * b - 1.0) * s) / (2.0 * gamma) * root
    k2 = (1.0 + s) * (-1.0 + (2.0 * b + 1.0) * s) / (2.0 * gamma) * root
    return {
        Branch.P1: 0.5 + k1,
        Branch.M1: 0.5 - k1,
        Branch.P2: 0.5 - k2,
        Branch.M2: 0.5 + k2,
    }


def _argmax(values: dict[Branch, float]) -> Branch:
    best = BRANCHES[0]
    for br in BRANCHES[1:]:
        if values[br] > values[best] + TIE_TOL:
            best = br
    return best


def branch_fidelities(b: float, gamma: float, s: float) -> FidelityBranches:
    values = _branch_values(b, gamma, s)
    best = _argmax(values)
    return FidelityBranches(
        values[Branch.P1],
        values[Branch.M1],
        values[Branch.P2],
        values[Branch.M2],
        values[best],
        best,
    )


def partially_optimal_fidelity(b: float, gamma: float, s: float) -> tuple[float, Branch]:
    """Largest branch fidelity at fixed (B, gamma, s) and the branch attaining it."""
    fb = branch_fidelities(b, gamma, s)
    return fb.f_p, fb.argmax_branch


def _m_value(gamma: float, s: float) -> float:
    return clamped_sqrt(1.0 + s * s * (9.0 * s * s + 16.0 * (1.0 + s) * gamma - 10.0), "M radicand")


def _check_optimal_domain(gamma: float, s: float) -> None:
    feasible_b_range(gamma, s)
    if s == 0.0:
        raise SingularInputError(
            "optimal B is singular at s = 0; for orthogonal inputs use B = 0 "
            "(f_opt = 1 at gamma = 1) via orthogonal_optimum()"
        )
    if gamma <= 0.0:
        raise UndefinedFidelityError("gamma = 0; fidelity undefined")


def optimal_b(gamma: float, s: float) -> tuple[float, float]:
    """Stationary points (B1, B2 = -B1) of the partially optimal fidelity."""
    _check_optimal_domain(gamma, s)
    m = _m_value(gamma, s)
    b1 = (s * s - 1.0 + m) / (8.0 * (s + s * s))
    return b1, -b1


def optimal_fidelity(gamma: float, s: float) -> float:
    _check_optimal_domain(gamma, s)
    m = _m_value(gamma, s)
    radicand = (2.0 * (s - 1.0) * (1.0 - m + 3.0 * s * s) + 16.0 * s * s * gamma) / (s * s * (1.0 + s))
    return 0.5 + (3.0 + m - 3.0 * s * s) / (32.0 * gamma) * clamped_sqrt(radicand, "f_opt radicand")


def optimal_solution(gamma: float, s: float) -> OptimalSolution:
    b1, _ = optimal_b(gamma, s)
    return OptimalSolution(b1, optimal_fidelity(gamma, s), _m_value(gamma, s))


def orthogonal_optimum(gamma: float) -> OptimalSolution:
    """Special case s = 0, where the closed-form optimum is singular.

    For orthogonal inputs every branch fidelity is ``1/2 +- sqrt(2 gamma - 1 - 4B^2)/(2 gamma)``,
    which is maximal at B = 0.
    """
    if not (0.5 <= gamma <= 1.0):
        raise DomainError(f"orthogonal inputs need gamma in [1/2, 1], got {gamma!r}")
    return OptimalSolution(0.0, branch_fidelities(0.0, gamma, 0.0).f_p, 1.0)


def b_opt_in_range(gamma: float, s: float, tol: float = 1e-9) -> bool:
    """Whether the stationary B lies inside the feasible interval (checked, not assumed)."""
    b1, _ = optimal_b(gamma, s)
    return feasible_b_range(gamma, s).contains(b1, tol)


def branch_fidelity_grid(bs: np.ndarray, gamma: float, s: float) -> np.ndarray:
    """Branch fidelities for an array of B values; rows follow BRANCHES order."""
    rng = feasible_b_range(gamma, s)
    bs = np.asarray(bs, dtype=float)
    if not np.all([rng.contains(b) for b in (bs.min(), bs.max())]):
        raise DomainError("B grid leaves the feasible interval")
    if gamma <= 0.0:
        raise UndefinedFidelityError("gamma = 0; fidelity undefined")
    root = np.sqrt(np.clip((s + 2.0 * gamma - 1.0) / (1.0 + s) - 4.0 * bs * bs, 0.0, None))
    k1 = (1.0 + s) * (1.0 + (2.0 * bs - 1.0) * s) / (2.0 * gamma) * root
    k2 = (1.0 + s) * (-1.0 + (2.0 * bs + 1.0) * s) / (2.0 * gamma) * root
    return np.array([0.5 + k1, 0.5 - k1, 0.5 - k2, 0.5 + k2])


def grid_max_fidelity(gamma: float, s: float, points: int = 10_000) -> tuple[float, float]:
    """Brute-force max of the partially optimal fidelity over an evenly spaced B grid.

    Returns (f_max, B at the max).
    """
    bs = feasible_b_range(gamma, s).grid(points)
    fp = branch_fidelity_grid(bs, gamma, s).max(axis=0)
    k = int(np.argmax(fp))
    return float(fp[k]), float(bs[k])
