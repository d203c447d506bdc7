"""Cloning machines: parameter solving, application to inputs, post-selection.

The machine maps (ancilla and probe starting in |0>)::

    |0>|0>|0>_p -> [A|00> + B(|01> + |10>) + C|11>]|0>_p + D|00>|1>_p
    |1>|0>|0>_p -> [A|11> + B(|01> + |10>) + C|00>]|0>_p + D|00>|1>_p

with real A, B, C, D. The two inputs are ``cos t|0> + sin t|1>`` and
``sin t|0> + cos t|1>`` for ``t`` in [0, pi/4], with overlap ``s = sin 2t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._numeric import ROUNDOFF, clamped_sqrt
from .errors import DomainError, InfeasibleError, InvariantError
from .states import ThreeQubitState, TwoModeState

PARAM_TOL = 1e-10
THETA_MAX = math.pi / 4


class Branch(str, Enum):
    """One of the four real (A, C) solutions at fixed (B, gamma, s).

    Family 1 has ``A = (+-r + 1)/2, C = (+-r - 1)/2``; family 2 is its
    negative, ``A = (-+r - 1)/2, C = (-+r + 1)/2``.
    """

    P1 = "1+"
    M1 = "1-"
    P2 = "2+"
    M2 = "2-"

    @property
    def family(self) -> int:
        return 1 if self in (Branch.P1, Branch.M1) else 2

    @property
    def sign(self) -> int:
        return 1 if self in (Branch.P1, Branch.P2) else -1

    def __str__(self) -> str:
        return self.value


# Canonical order; also the tie-break order for maxima over branches.
BRANCHES: tuple[Branch, ...] = (Branch.P1, Branch.M1, Branch.P2, Branch.M2)


def as_branch(branch: Branch | str) -> Branch:
    try:
        return Branch(branch)
    except ValueError:
        raise DomainError(f"unknown branch {branch!r}; expected one of 1+, 1-, 2+, 2-") from None


@dataclass(frozen=True)
class InputPair:
    """The pair of nonorthogonal inputs, parameterized by the angle theta."""

    theta: float

    def __post_init__(self) -> None:
        _check_theta(self.theta)

    @classmethod
    def from_overlap(cls, s: float) -> "InputPair":
        return cls(theta_from_overlap(s))

    @property
    def s(self) -> float:
        return math.sin(2.0 * self.theta)

    def state(self, which: int) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        if which == 1:
            return np.array([c, s])
        if which == 2:
            return np.array([s, c])
        raise DomainError(f"input index must be 1 or 2, got {which!r}")


@dataclass(frozen=True)
class MachineParams:
    """Real coefficients (A, B, C, D) of the cloning transformation.

    Construction validates normalization ``A^2 + 2B^2 + C^2 + D^2 = 1`` and
    orthogonality ``2AC + 2B^2 + D^2 = 0`` to ``PARAM_TOL``.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for name in "abcd":
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvariantError(f"coefficient {name.upper()} is not finite")
            object.__setattr__(self, name, value)
        if self.normalization_residual > PARAM_TOL:
            raise InvariantError(
                f"A^2 + 2B^2 + C^2 + D^2 = 1 violated by {self.normalization_residual:.3e}"
            )
        if self.orthogonality_residual > PARAM_TOL:
            raise InvariantError(
                f"2AC + 2B^2 + D^2 = 0 violated by {self.orthogonality_residual:.3e}"
            )

    @property
    def normalization_residual(self) -> float:
        return normalization_residual(self.a, self.b, self.c, self.d)

    @property
    def orthogonality_residual(self) -> float:
        return orthogonality_residual(self.a, self.b, self.c, self.d)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


def normalization_residual(a: float, b: float, c: float, d: float) -> float:
    return abs(a * a + 2 * b * b + c * c + d * d - 1.0)


def orthogonality_residual(a: float, b: float, c: float, d: float) -> float:
    return abs(2 * a * c + 2 * b * b + d * d)


@dataclass(frozen=True)
class BRange:
    """Symmetric interval of admissible B at fixed (gamma, s)."""

    b_min: float
    b_max: float
    gamma: float
    s: float

    def contains(self, b: float, tol: float = 1e-12) -> bool:
        return self.b_min - tol <= b <= self.b_max + tol

    def grid(self, n: int) -> np.ndarray:
        if n < 2:
            raise DomainError("a B grid needs at least 2 points")
        return np.linspace(self.b_min, self.b_max, n)


def _check_theta(theta: float) -> None:
    if not (0.0 <= theta <= THETA_MAX + 1e-15):
        raise DomainError(f"theta = {theta!r} outside [0, pi/4]")


def _check_unit(value: float, name: str) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} = {value!r} outside [0, 1]")


def overlap_from_theta(theta: float) -> float:
    _check_theta(theta)
    return math.sin(2.0 * theta)


def theta_from_overlap(s: float) -> float:
    _check_unit(s, "s")
    return 0.5 * math.asin(s)


def failure_amplitude(gamma: float, s: float) -> float:
    """D = sqrt((1 - gamma)/(1 + s))."""
    return math.sqrt((1.0 - gamma) / (1.0 + s))


def feasible_b_range(gamma: float, s: float) -> BRange:
    _check_unit(gamma, "gamma")
    _check_unit(s, "s")
    radicand = (s + 2.0 * gamma - 1.0) / (1.0 + s)
    if radicand < -ROUNDOFF:
        raise InfeasibleError(
            f"gamma < (1-s)/2: gamma = {gamma:.12g} but (1-s)/2 = {(1.0 - s) / 2:.12g}"
        )
    # Same bound written through D: |B| <= sqrt(1 - 2 D^2)/2. Compared before
    # the square root, which would amplify roundoff near the boundary.
    d = failure_amplitude(gamma, s)
    if abs(radicand - (1.0 - 2.0 * d * d)) > 1e-12:
        raise AssertionError(f"B-bound characterizations disagree: {radicand!r} vs {1.0 - 2.0 * d * d!r}")
    b_max = 0.5 * clamped_sqrt(radicand)
    return BRange(-b_max, b_max, gamma, s)


def branch_root(b: float, gamma: float, s: float) -> float:
    """r = sqrt((s + 2 gamma - 1)/(1 + s) - 4 B^2), shared by all four branches."""
    feasible_b_range(gamma, s)
    radicand = (s + 2.0 * gamma - 1.0) / (1.0 + s) - 4.0 * b * b
    if radicand < -ROUNDOFF:
        raise DomainError(
            f"B = {b:.12g} outside the feasible interval for gamma = {gamma:.12g}, s = {s:.12g}"
        )
    return clamped_sqrt(radicand)


def solve_machine(b: float, gamma: float, s: float, branch: Branch | str) -> MachineParams:
    br = as_branch(branch)
    r = br.sign * branch_root(b, gamma, s)
    if br.family == 1:
        a, c = 0.5 * (r + 1.0), 0.5 * (r - 1.0)
    else:
        a, c = 0.5 * (-r - 1.0), 0.5 * (-r + 1.0)
    return MachineParams(a, b, c, failure_amplitude(gamma, s))


def output_coefficients(params: MachineParams, theta: float, which: int = 1) -> tuple[float, float, float, float]:
    """Amplitudes (a, b, c, d) of |00>|0>, |01>|0> (= |10>|0>), |11>|0>, |00>|1> in the output."""
    _check_theta(theta)
    ct, st = math.cos(theta), math.sin(theta)
    if which == 2:
        ct, st = st, ct
    elif which != 1:
        raise DomainError(f"input index must be 1 or 2, got {which!r}")
    A, B, C, D = params.as_tuple()
    return (A * ct + C * st, B * (ct + st), C * ct + A * st, D * (ct + st))


def apply_machine(params: MachineParams, theta: float, which: int = 1) -> ThreeQubitState:
    if not isinstance(params, MachineParams):
        raise InvariantError("apply_machine needs validated MachineParams")
    a, b, c, d = output_coefficients(params, theta, which)
    amps = np.zeros(8)
    amps[0b000] = a
    amps[0b010] = b
    amps[0b100] = b
    amps[0b110] = c
    amps[0b001] = d
    # Params valid to PARAM_TOL leave a norm defect of the same order; remove it.
    return ThreeQubitState(amps / np.linalg.norm(amps))


def success_probability(state: ThreeQubitState) -> float:
    """Probability of finding the probe in |0>."""
    return float(np.sum(np.abs(state.probe_projection(0)) ** 2))


def _cloner_coefficients(state: ThreeQubitState) -> tuple[float, float, float, float]:
    t = state.tensor
    if np.iscomplexobj(t) and np.any(t.imag != 0):
        raise InvariantError("cloner outputs are real")
    t = t.real
    if abs(t[0, 1, 0] - t[1, 0, 0]) > 1e-12:
        raise InvariantError("|01> and |10> amplitudes differ; not a cloner output")
    stray = (t[0, 1, 1], t[1, 0, 1], t[1, 1, 1])
    if max(abs(x) for x in stray) > 1e-12:
        raise InvariantError("probe-|1> sector is not proportional to |00>")
    return (float(t[0, 0, 0]), float(t[0, 1, 0]), float(t[1, 1, 0]), float(t[0, 0, 1]))


def output_density(state: ThreeQubitState) -> TwoModeState:
    """Two-mode state left after discarding the probe, built from (a, b, c, d)."""
    return TwoModeState.from_abcd(*_cloner_coefficients(state))
