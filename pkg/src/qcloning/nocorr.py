"""The correlation-free cloner: gamma = 1 and b^2 = ac, so the two clones form a product state."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correlations import DiscordOptions, concurrence_closed, concurrence_eigen, quantum_discord
from .errors import DomainError
from .machine import (
    MachineParams,
    apply_machine,
    output_coefficients,
    output_density,
    success_probability,
    theta_from_overlap,
)

PRODUCT_TOL = 1e-10
DISCORD_TOL = 1e-8


@dataclass(frozen=True)
class NocorrSolution:
    params: MachineParams
    branch: int
    s: float
    f_no: float


@dataclass(frozen=True)
class Check:
    passed: bool
    value: float
    tolerance: float


@dataclass(frozen=True)
class ProductOutputReport:
    s: float
    branch: int
    checks: dict[str, Check]
    clone_state: tuple[float, float]
    relative_sign: str
    overall_sign: int = field(default=1)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]


def _check_s(s: float) -> None:
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"s = {s!r} outside [0, 1]")


def _check_branch(branch: int) -> int:
    if branch not in (1, 2):
        raise DomainError(f"correlation-free branch must be 1 or 2, got {branch!r}")
    return branch


def nocorr_fidelity(s: float) -> float:
    _check_s(s)
    return 0.5 * (1.0 + s**1.5 + (1.0 - s) * math.sqrt(1.0 + s))


def nocorr_params(s: float, branch: int = 1) -> NocorrSolution:
    _check_s(s)
    sign = 1.0 if _check_branch(branch) == 1 else -1.0
    r = math.sqrt(1.0 + s)
    a = sign * (1.0 + s + r) / (2.0 + 2.0 * s)
    b = sign * math.sqrt(s) / (2.0 * r)
    c = sign * (r - (1.0 + s)) / (2.0 + 2.0 * s)
    params = MachineParams(a, b, c, 0.0)

    theta = theta_from_overlap(s)
    ca, cb, cc, _ = output_coefficients(params, theta)
    if abs(cb * cb - ca * cc) > 1e-12:
        raise AssertionError(f"b^2 = ac violated by {cb * cb - ca * cc:.3e} at s = {s}")
    return NocorrSolution(params, branch, s, nocorr_fidelity(s))


def nocorr_minimum(points: int = 10_001) -> tuple[float, float]:
    """Dense scan of f_no over s in [0, 1]; returns (s_min, f_min)."""
    s = np.linspace(0.0, 1.0, points)
    f = 0.5 * (1.0 + s**1.5 + (1.0 - s) * np.sqrt(1.0 + s))
    k = int(np.argmin(f))
    return float(s[k]), float(f[k])


def _signed_factor(a: float, b: float, c: float) -> tuple[int, float, float]:
    """Write (a, b, b, c) = sign * (u0, u1) (x) (u0, u1), i.e. u = sqrt|a| |0> +- sqrt|c| |1>.

    b^2 = ac makes a and c share a sign; the relative sign of u is that of sign*b.
    """
    sign = 1 if (a if abs(a) >= abs(c) else c) >= 0 else -1
    u0 = math.sqrt(max(sign * a, 0.0))
    u1 = math.copysign(math.sqrt(max(sign * c, 0.0)), sign * b)
    return sign, u0, u1


def verify_product_output(
    s: float, branch: int = 1, discord_options: DiscordOptions | None = None
) -> ProductOutputReport:
    """Check that the correlation-free machine leaves the two clones in a product state.

    Failures are reported per check; nothing is raised for a failed check.
    """
    sol = nocorr_params(s, branch)
    theta = theta_from_overlap(s)
    state = apply_machine(sol.params, theta)
    rho = output_density(state)
    m = rho.matrix
    a, b, c, d = rho.abcd
    checks: dict[str, Check] = {}

    def record(name: str, value: float, tol: float) -> None:
        checks[name] = Check(bool(value < tol), float(value), tol)

    record("success probability = 1", abs(success_probability(state) - 1.0), PRODUCT_TOL)
    record("b^2 = ac", abs(b * b - a * c), 1e-12)
    eig = np.linalg.eigvalsh(m)
    record("rank 1", float(np.max(np.abs(eig[:-1]))), PRODUCT_TOL)
    record("equal marginals", float(np.max(np.abs(rho.marginal(0) - rho.marginal(1)))), PRODUCT_TOL)
    record("concurrence (closed form) = 0", concurrence_closed(rho.abcd), PRODUCT_TOL)
    record("concurrence (eigenvalues) = 0", concurrence_eigen(rho), PRODUCT_TOL)
    record("discord = 0", abs(quantum_discord(rho, discord_options)), DISCORD_TOL)

    sign, u0, u1 = _signed_factor(a, b, c)
    u = np.array([u0, u1])
    single = np.outer(u, u)
    record("product form", float(np.max(np.abs(m - np.kron(single, single)))), PRODUCT_TOL)
    rel = "+" if u1 >= 0 else "-"
    return ProductOutputReport(s, branch, checks, (u0, u1), rel, sign)
