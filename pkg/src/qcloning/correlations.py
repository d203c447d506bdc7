"""Bipartite and tripartite correlations of cloner outputs.

Entropies are in bits. The discord is the one-way (measure one mode)
projective-measurement discord, minimized by a coarse grid over the Bloch
sphere followed by Nelder-Mead refinement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import minimize

from ._numeric import ROUNDOFF
from .errors import InvariantError
from .machine import Branch, as_branch, branch_root, overlap_from_theta
from .states import ThreeQubitState, TwoModeState

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# sigma_y (x) sigma_y is real.
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y).real

# Branches with q_j below this carry no weight in the conditional entropy.
Q_FLOOR = 1e-14
EPS = float(np.finfo(float).eps)
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective qubit measurement along cos(t/2)|0> + e^{i phi} sin(t/2)|1>."""

    polar: float
    azimuth: float

    @property
    def bloch_vector(self) -> np.ndarray:
        t, p = self.polar, self.azimuth
        return np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        v = np.array([math.cos(self.polar / 2), np.exp(1j * self.azimuth) * math.sin(self.polar / 2)])
        w = np.array([-np.conj(v[1]), np.conj(v[0])])
        return np.outer(v, v.conj()), np.outer(w, w.conj())


@dataclass(frozen=True)
class DiscordOptions:
    grid: int = 32
    refine: bool = True
    tol: float = 1e-9
    measured: str = "B"

    def __post_init__(self) -> None:
        if self.grid < 2:
            raise ValueError("discord grid needs at least 2 points per axis")
        if self.measured not in ("A", "B"):
            raise ValueError("measured subsystem must be 'A' or 'B'")


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    conditional_entropy: float
    basis: MeasurementBasis
    entropy_b: float
    entropy_ab: float
    options: DiscordOptions


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    discord: float
    tangle: float
    method: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # A state without discord is classical-quantum, hence separable.
        if self.discord <= 1e-10 and self.concurrence > 1e-6:
            raise InvariantError(
                f"zero discord with concurrence {self.concurrence:.3e} is impossible"
            )


def _as_rho(rho: TwoModeState | np.ndarray) -> TwoModeState:
    return rho if isinstance(rho, TwoModeState) else TwoModeState(np.asarray(rho))


def spin_flip(rho: TwoModeState | np.ndarray) -> np.ndarray:
    m = _as_rho(rho).matrix
    return SIGMA_YY @ m.conj() @ SIGMA_YY


def spin_flip_eigenvalues(rho: TwoModeState | np.ndarray) -> np.ndarray:
    """Eigenvalues of rho * (sigma_y sigma_y) rho^* (sigma_y sigma_y), decreasing.

    General (non-hermitian) eigensolver; small negative round-off is clamped.
    The square roots of these lose accuracy near zero, which is why
    ``concurrence_eigen`` works with singular values instead.
    """
    m = _as_rho(rho).matrix
    ev = np.linalg.eigvals(m @ spin_flip(m))
    if np.max(np.abs(ev.imag)) > IMAG_TOL:
        raise InvariantError(f"spin-flip product has complex eigenvalues {ev}")
    ev = np.sort(ev.real)[::-1]
    if ev[-1] < -ROUNDOFF:
        raise InvariantError(f"spin-flip product has negative eigenvalue {ev[-1]:.3e}")
    return np.clip(ev, 0.0, None)


def _spin_flip_singular_values(w: np.ndarray) -> np.ndarray:
    """sqrt of the spin-flip eigenvalues for rho = W W^dagger, decreasing."""
    tau = w.T @ SIGMA_YY @ w
    return np.linalg.svd(tau, compute_uv=False)


def concurrence_eigen(rho: TwoModeState | np.ndarray) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i (square roots of the spin-flip eigenvalues) are obtained as the
    singular values of W^T (sigma_y sigma_y) W with rho = W W^dagger; this is
    the same spectrum without taking square roots of near-zero eigenvalues.
    """
    m = _as_rho(rho).matrix
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    lam = _spin_flip_singular_values(v * np.sqrt(w))
    return max(0.0, float(lam[0] - lam[1:].sum()))


def concurrence_closed(abcd: tuple[float, float, float, float]) -> float:
    """Concurrence of the reduced cloner output from its coefficients (a, b, c, d).

    Only two spin-flip eigenvalues are nonzero, alpha +- beta. Since
    alpha^2 - beta^2 = (c d)^4, the smaller one is evaluated as (c d)^4/(alpha + beta)
    to avoid cancellation.
    """
    a, b, c, d = (float(x) for x in abcd)
    x = b * b - a * c
    # b^2 - ac below the rounding error of amplitudes of size |(a, b, c)| is a
    # product output: x = 0 exactly
    if abs(x) <= 16.0 * EPS * (a * a + b * b + c * c):
        x = 0.0
    y = (c * d) ** 2
    alpha = 2.0 * x * x + y
    beta = 2.0 * abs(x) * math.sqrt(x * x + y)
    lam3 = alpha + beta
    if lam3 == 0.0:
        return 0.0
    # sqrt(lam3) - sqrt(lam4) with lam4 = y^2/lam3.
    return max(abs(lam3 - y) / math.sqrt(lam3), 0.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho))
    if w[0] < -ROUNDOFF:
        raise InvariantError(f"negative eigenvalue {w[0]:.3e} in entropy")
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def _hermitian_parts(m: np.ndarray) -> np.ndarray:
    return np.array([m[0, 0].real, m[1, 1].real, m[0, 1].real, m[0, 1].imag])


def _measurement_terms(rho: np.ndarray) -> np.ndarray:
    """Rows: rho_A, Tr_B[(1 x sx) rho], Tr_B[(1 x sy) rho], Tr_B[(1 x sz) rho].

    Each row holds (m00, m11, Re m01, Im m01) of a hermitian 2x2 matrix, so the
    unnormalized conditional state for outcome +-n is (row0 +- n . rows1:)/2.
    """
    r = rho.reshape(2, 2, 2, 2)
    mats = [np.einsum("ijkj->ik", r)]
    for sig in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        mats.append(np.einsum("ijkl,lj->ik", r, sig))
    return np.array([_hermitian_parts(m) for m in mats])


def _xlog2x_sum(mu: np.ndarray) -> np.ndarray:
    safe = np.where(mu > 0.0, mu, 1.0)
    return np.where(mu > 0.0, mu * np.log2(safe), 0.0)


def _conditional_entropy_grid(terms: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Measurement-conditioned entropy for every Bloch direction in n (shape (N, 3))."""
    total = np.zeros(len(n))
    proj = n @ terms[1:]
    for sgn in (1.0, -1.0):
        m = 0.5 * (terms[0] + sgn * proj)
        q = m[:, 0] + m[:, 1]
        disc = np.sqrt((m[:, 0] - m[:, 1]) ** 2 + 4.0 * (m[:, 2] ** 2 + m[:, 3] ** 2))
        mu_hi = np.clip(0.5 * (q + disc), 0.0, None)
        mu_lo = np.clip(0.5 * (q - disc), 0.0, None)
        contrib = -_xlog2x_sum(mu_hi) - _xlog2x_sum(mu_lo) + _xlog2x_sum(q)
        total += np.where(q > Q_FLOOR, contrib, 0.0)
    return total


_LN2 = math.log(2.0)


def _conditional_entropy(terms: tuple[tuple[float, ...], ...], t: float, p: float) -> float:
    """Scalar version of _conditional_entropy_grid, used inside the simplex search."""
    st = math.sin(t)
    nx, ny, nz = st * math.cos(p), st * math.sin(p), math.cos(t)
    (a0, a1, a2, a3), (x0, x1, x2, x3), (y0, y1, y2, y3), (z0, z1, z2, z3) = terms
    p0 = nx * x0 + ny * y0 + nz * z0
    p1 = nx * x1 + ny * y1 + nz * z1
    p2 = nx * x2 + ny * y2 + nz * z2
    p3 = nx * x3 + ny * y3 + nz * z3
    total = 0.0
    for m0, m1, m2, m3 in (
        (a0 + p0, a1 + p1, a2 + p2, a3 + p3),
        (a0 - p0, a1 - p1, a2 - p2, a3 - p3),
    ):
        q = 0.5 * (m0 + m1)
        if q <= Q_FLOOR:
            continue
        disc = 0.5 * math.sqrt((m0 - m1) ** 2 + 4.0 * (m2 * m2 + m3 * m3))
        hi = 0.5 * q + 0.5 * disc
        lo = 0.5 * q - 0.5 * disc
        acc = q * math.log(q)
        if hi > 0.0:
            acc -= hi * math.log(hi)
        if lo > 0.0:
            acc -= lo * math.log(lo)
        total += acc
    return total / _LN2


def discord_details(rho: TwoModeState | np.ndarray, options: DiscordOptions | None = None) -> DiscordResult:
    opts = options or DiscordOptions()
    state = _as_rho(rho)
    if opts.measured == "A":
        state = state.swapped()
    m = state.matrix
    terms = _measurement_terms(m)

    ts = np.linspace(0.0, math.pi, opts.grid)
    ps = np.linspace(0.0, 2.0 * math.pi, opts.grid, endpoint=False)
    tt, pp = np.meshgrid(ts, ps, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    n = np.stack([np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=1)
    grid_vals = _conditional_entropy_grid(terms, n)
    k = int(np.argmin(grid_vals))
    best_t, best_p, best = float(tt[k]), float(pp[k]), float(grid_vals[k])

    if opts.refine:
        tterms = tuple(tuple(float(x) for x in row) for row in terms)
        h = 0.5 * math.pi / opts.grid
        x0 = np.array([best_t, best_p])
        res = minimize(
            lambda x: _conditional_entropy(tterms, x[0], x[1]),
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-5,
                "fatol": opts.tol,
                "initial_simplex": np.array([x0, x0 + [h, 0.0], x0 + [0.0, h]]),
                "maxiter": 2000,
            },
        )
        if res.fun < best:
            best_t, best_p, best = float(res.x[0]), float(res.x[1]), float(res.fun)

    s_b = von_neumann_entropy(state.marginal(1))
    s_ab = von_neumann_entropy(m)
    value = best + s_b - s_ab
    if -ROUNDOFF <= value < 0.0:
        value = 0.0
    return DiscordResult(value, best, MeasurementBasis(best_t % (2 * math.pi), best_p % (2 * math.pi)), s_b, s_ab, opts)


def quantum_discord(rho: TwoModeState | np.ndarray, options: DiscordOptions | None = None) -> float:
    """Discord with the measurement on the second mode (or the first, via options)."""
    return discord_details(rho, options).discord


def tangle_radicand(rho: TwoModeState | np.ndarray) -> float:
    """[Tr rho rho~]^2 - Tr[(rho rho~)^2] by direct matrix arithmetic."""
    m = _as_rho(rho).matrix
    r = m @ spin_flip(m)
    tr = np.trace(r)
    return float((tr * tr - np.trace(r @ r)).real)


def tangle_from_state(state: ThreeQubitState) -> float:
    """sqrt([Tr rho rho~]^2 - Tr[(rho rho~)^2]) for rho the two-mode reduction.

    With rho = W W^dagger (W the 4x2 mode-by-probe amplitude matrix) the
    radicand equals 2 |det(W^T (sigma_y sigma_y) W)|^2 exactly; that form has
    no cancellation, so tiny tangles keep full absolute accuracy.
    """
    if not isinstance(state, ThreeQubitState):
        raise InvariantError("tangle_from_state needs a normalized pure three-qubit state")
    w = state.modes_by_probe
    tau = w.T @ SIGMA_YY @ w
    det = tau[0, 0] * tau[1, 1] - tau[0, 1] * tau[1, 0]
    return math.sqrt(2.0) * float(abs(det))


def tangle_closed(gamma: float, b: float, theta: float, branch: Branch | str = Branch.P1) -> float:
    """Closed-form tangle of the cloner output.

    The printed expression (minus sign on the cos 2theta root term) holds for
    the upper-sign solutions 1+ and 2+; for 1- and 2- the root term enters
    with a plus sign.
    """
    s = overlap_from_theta(theta)
    root = branch_root(b, gamma, s)
    sign = as_branch(branch).sign
    bracket = gamma - 2.0 * b * b * (1.0 + s) - sign * math.cos(2.0 * theta) * root
    return (1.0 - gamma) / math.sqrt(2.0) * bracket


def measure_correlations(state: ThreeQubitState, options: DiscordOptions | None = None) -> CorrelationReport:
    """Concurrence, discord and tangle from the state alone (no closed forms)."""
    opts = options or DiscordOptions()
    w = state.modes_by_probe
    rho = TwoModeState(w @ w.conj().T)
    return CorrelationReport(
        concurrence_eigen(rho),
        quantum_discord(rho, opts),
        tangle_from_state(state),
        {
            "concurrence": "spin-flip singular values",
            "discord": f"grid {opts.grid}x{opts.grid} + Nelder-Mead (fatol {opts.tol:g}), measure {opts.measured}",
            "tangle": "two-mode spin-flip traces",
        },
    )

