"""Brute-force reference: the cloner as an explicit 8x2 linear map.

Nothing here evaluates a closed-form fidelity or correlation formula. The
oracle evolves the input vector, projects the probe, takes partial traces and
hands the resulting matrices to the state-based measures (spin-flip singular
values, grid discord, tangle from the pure state).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import correlations as corr
from . import fidelity as fid
from ._numeric import GAMMA_FLOOR
from .errors import UndefinedFidelityError
from .machine import (
    Branch,
    InputPair,
    MachineParams,
    apply_machine,
    output_density,
)
from .states import ThreeQubitState, TwoModeState

ISOMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CloningIsometry:
    matrix: np.ndarray

    @property
    def orthonormality_error(self) -> float:
        v = self.matrix
        return float(np.max(np.abs(v.T @ v - np.eye(2))))

    @property
    def is_isometry(self) -> bool:
        return self.orthonormality_error <= ISOMETRY_TOL


def build_isometry(params: MachineParams | Sequence[float]) -> CloningIsometry:
    """Columns are the images of |0>|0>|0>_p and |1>|0>|0>_p (index 4*m1 + 2*m2 + p).

    Accepts raw coefficients so that invalid machines can be inspected.
    """
    A, B, C, D = params.as_tuple() if isinstance(params, MachineParams) else map(float, params)
    v = np.zeros((8, 2))
    # |0> -> A|00> + B(|01> + |10>) + C|11>, probe 0; D|00>, probe 1
    v[0b000, 0], v[0b010, 0], v[0b100, 0], v[0b110, 0], v[0b001, 0] = A, B, B, C, D
    # |1> -> A|11> + B(|01> + |10>) + C|00>, probe 0; D|00>, probe 1
    v[0b110, 1], v[0b010, 1], v[0b100, 1], v[0b000, 1], v[0b001, 1] = A, B, B, C, D
    return CloningIsometry(v)


@dataclass(frozen=True, eq=False)
class OracleOutcome:
    gamma: float
    fidelity: float
    fidelity_mode2: float
    output: ThreeQubitState
    clone_pair: np.ndarray
    rho: TwoModeState
    concurrence: float
    discord: float | None
    tangle: float


def oracle_clone(
    params: MachineParams,
    theta: float,
    which: int = 1,
    *,
    with_discord: bool = True,
    discord_options: corr.DiscordOptions | None = None,
) -> OracleOutcome:
    chi = InputPair(theta).state(which)
    iso = build_isometry(params)
    psi = iso.matrix @ chi
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"machine is not an isometry: output norm {norm!r}")
    psi = psi / norm

    w = psi.reshape(4, 2)
    gamma = float(w[:, 0] @ w[:, 0])
    if gamma < GAMMA_FLOOR:
        raise UndefinedFidelityError(f"probe projection failed: gamma = {gamma:.3e}")
    x = (w[:, 0] / math.sqrt(gamma)).reshape(2, 2)

    rho1 = x @ x.T  # trace over mode 2
    rho2 = x.T @ x  # trace over mode 1
    f1 = float(chi @ rho1 @ chi)
    f2 = float(chi @ rho2 @ chi)

    state = ThreeQubitState(psi)
    rho = TwoModeState(w @ w.T)
    discord = corr.quantum_discord(rho, discord_options) if with_discord else None
    return OracleOutcome(
        gamma,
        f1,
        f2,
        state,
        x,
        rho,
        corr.concurrence_eigen(rho),
        discord,
        corr.tangle_from_state(state),
    )


@dataclass(frozen=True)
class Discrepancy:
    name: str
    analytic: float
    oracle: float
    difference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.difference <= self.tolerance)


@dataclass(frozen=True)
class CrossCheckReport:
    theta: float
    which: int
    branch: Branch | None
    entries: tuple[Discrepancy, ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_difference(self) -> float:
        return max((e.difference for e in self.entries), default=0.0)

    def __getitem__(self, name: str) -> Discrepancy:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


DEFAULT_TOLERANCES = {
    "gamma": 1e-10,
    "fidelity_general": 1e-9,
    "branch_fidelity": 1e-9,
    "output_density": 1e-12,
    "concurrence_closed": 1e-9,
    "tangle_closed": 1e-9,
}


def identify_branch(params: MachineParams, tol: float = 1e-9) -> Branch | None:
    """Which (A, C) solution family ``params`` belongs to, if any.

    Family 1 has A - C = 1 and root r = A + C, family 2 has C - A = 1 and
    r = -(A + C); the sign of r picks +/-. Read off directly rather than by
    re-solving, which is ill-conditioned where r ~ 0. The sign test is exact:
    A + C reproduces r to rounding, and a tolerance there would mislabel
    small-gamma machines whose fidelities differ by r/gamma.
    """
    a, c = params.a, params.c
    if abs(a - c - 1.0) <= tol:
        family, r = 1, a + c
    elif abs(c - a - 1.0) <= tol:
        family, r = 2, -(a + c)
    else:
        return None
    plus = r >= 0.0
    return {(1, True): Branch.P1, (1, False): Branch.M1, (2, True): Branch.P2, (2, False): Branch.M2}[family, plus]


def cross_check(
    params: MachineParams,
    theta: float,
    tolerances: dict[str, float] | None = None,
    which: int = 1,
    gamma: float | None = None,
) -> CrossCheckReport:
    """Compare every closed-form quantity at (params, theta) against the oracle.

    ``gamma`` is the success probability the machine was solved for. Without
    it, gamma is recovered from D, which is exact to rounding but can shift
    the branch closed forms by O(sqrt(eps)) at B = b_max, where their root
    vanishes.
    """
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    pair = InputPair(theta)
    s = pair.s
    out = oracle_clone(params, theta, which, with_discord=False)
    entries: list[Discrepancy] = []
    notes: list[str] = []

    def add(name: str, analytic: float, reference: float) -> None:
        entries.append(Discrepancy(name, float(analytic), float(reference), abs(analytic - reference), tol[name]))

    # success probability from the failure amplitude D(cos t + sin t)
    gamma_d = 1.0 - params.d**2 * (1.0 + s)
    add("gamma", gamma_d, out.gamma)
    add("fidelity_general", fid.fidelity_general(params, theta), out.fidelity)

    branch = identify_branch(params)
    if branch is None:
        notes.append("params match no (A, C) branch; branch fidelity and tangle skipped")
    else:
        g = min(max(gamma_d if gamma is None else gamma, 0.0), 1.0)
        add("branch_fidelity", fid.branch_fidelities(params.b, g, s)[branch], out.fidelity)
        add("tangle_closed", corr.tangle_closed(g, params.b, theta, branch), out.tangle)

    rho = output_density(apply_machine(params, theta, which))
    entries.append(
        Discrepancy(
            "output_density",
            0.0,
            0.0,
            float(np.max(np.abs(rho.matrix - out.rho.matrix))),
            tol["output_density"],
        )
    )
    add("concurrence_closed", corr.concurrence_closed(rho.abcd), out.concurrence)
    return CrossCheckReport(theta, which, branch, tuple(entries), tuple(notes))
