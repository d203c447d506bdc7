"""Fidelity-versus-correlation datasets for the six published figures.

Figures 1, 3 and 5 sweep B across the feasible interval at fixed (theta, gamma)
and pair the partially optimal fidelity with the concurrence, discord or tangle
of the two clones, the state being built from whichever branch attains the
fidelity. Figures 2, 4 and 6 sweep the overlap s at fixed gamma with B at its
optimum and pair the optimal fidelity with the same three measures.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Iterable

import numpy as np

from . import correlations as corr
from . import fidelity as fid
from .errors import DomainError, InfeasibleError
from .machine import (
    Branch,
    apply_machine,
    feasible_b_range,
    output_density,
    solve_machine,
    theta_from_overlap,
)

log = logging.getLogger(__name__)

MEASURES = ("concurrence", "discord", "tangle")
FIGURES: dict[str, tuple[str, str]] = {
    "fig1": ("partial", "concurrence"),
    "fig2": ("optimal", "concurrence"),
    "fig3": ("partial", "discord"),
    "fig4": ("optimal", "discord"),
    "fig5": ("partial", "tangle"),
    "fig6": ("optimal", "tangle"),
}
PARTIAL_THETAS = (0.0, math.pi / 20, math.pi / 10, math.pi / 4)
PARTIAL_GAMMAS = (1.0, 0.9, 0.8)
OPTIMAL_GAMMAS = (0.7, 0.8, 0.9, 1.0)


@dataclass(frozen=True)
class SweepSpec:
    figure: str = "custom"
    mode: str = "partial"
    measure: str = "concurrence"
    thetas: tuple[float, ...] = PARTIAL_THETAS
    gammas: tuple[float, ...] = PARTIAL_GAMMAS
    b_points: int = 2001
    s_points: int = 501
    discord_grid: int = 32
    discord_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.mode not in ("partial", "optimal"):
            raise DomainError(f"mode must be 'partial' or 'optimal', got {self.mode!r}")
        if self.measure not in MEASURES:
            raise DomainError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        if self.b_points < 2 or self.s_points < 2 or self.discord_grid < 2:
            raise DomainError("grid densities must be at least 2")
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        for t in self.thetas:
            if not 0.0 <= t <= math.pi / 4 + 1e-15:
                raise DomainError(f"theta = {t!r} outside [0, pi/4]")
        for g in self.gammas:
            if not 0.0 < g <= 1.0:
                raise DomainError(f"gamma = {g!r} outside (0, 1]")

    @classmethod
    def for_figure(cls, figure: str, **overrides: Any) -> "SweepSpec":
        if figure not in FIGURES:
            raise DomainError(f"unknown figure {figure!r}; expected one of {sorted(FIGURES)}")
        mode, measure = FIGURES[figure]
        gammas = PARTIAL_GAMMAS if mode == "partial" else OPTIMAL_GAMMAS
        spec = cls(figure=figure, mode=mode, measure=measure, gammas=gammas)
        return replace(spec, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def discord_options(self) -> corr.DiscordOptions:
        return corr.DiscordOptions(grid=self.discord_grid, tol=self.discord_tol)

    def overlap_grid(self) -> np.ndarray:
        """s_points values evenly spaced over (0, 1]."""
        return np.linspace(0.0, 1.0, self.s_points + 1)[1:]


@dataclass(frozen=True, order=True)
class SweepRecord:
    figure: str
    branch: str
    theta: float
    gamma: float
    s: float
    b: float
    correlation: float
    fidelity: float

    def sort_key(self, mode: str) -> tuple:
        return (self.theta, self.gamma, self.branch, self.b if mode == "partial" else self.s)


COLUMNS = tuple(f.name for f in fields(SweepRecord))


def correlation_of(measure: str, b: float, gamma: float, theta: float, branch: Branch,
                   discord_options: corr.DiscordOptions | None = None) -> float:
    """Correlation of the two clones produced by the given branch machine."""
    params = solve_machine(b, gamma, math.sin(2 * theta), branch)
    if measure == "tangle":
        return corr.tangle_closed(gamma, b, theta, branch)
    rho = output_density(apply_machine(params, theta))
    if measure == "concurrence":
        return corr.concurrence_closed(rho.abcd)
    return corr.quantum_discord(rho, discord_options)


def _partial_cell(spec: SweepSpec, theta: float, gamma: float) -> list[SweepRecord]:
    s = math.sin(2 * theta)
    try:
        rng = feasible_b_range(gamma, s)
    except InfeasibleError as exc:
        log.info("skipping theta=%.6g gamma=%.6g: %s", theta, gamma, exc)
        return []
    # Scaling a symmetric unit grid keeps B = 0 exact for odd point counts.
    bs = rng.b_max * np.linspace(-1.0, 1.0, spec.b_points)
    opts = spec.discord_options
    out = []
    for b in bs:
        b = float(b)
        f_p, branch = fid.partially_optimal_fidelity(b, gamma, s)
        c = correlation_of(spec.measure, b, gamma, theta, branch, opts)
        out.append(SweepRecord(spec.figure, branch.value, theta, gamma, s, b, c, f_p))
    return out


def _optimal_cell(spec: SweepSpec, gamma: float) -> list[SweepRecord]:
    opts = spec.discord_options
    out = []
    for s in spec.overlap_grid():
        s = float(s)
        try:
            b1, _ = fid.optimal_b(gamma, s)
            f_opt = fid.optimal_fidelity(gamma, s)
        except InfeasibleError as exc:
            log.info("skipping gamma=%.6g s=%.6g: %s", gamma, s, exc)
            continue
        if not feasible_b_range(gamma, s).contains(b1, 1e-9):
            log.warning("optimal B=%.6g outside feasible range at gamma=%.6g s=%.6g; skipped", b1, gamma, s)
            continue
        theta = theta_from_overlap(s)
        _, branch = fid.partially_optimal_fidelity(b1, gamma, s)
        c = correlation_of(spec.measure, b1, gamma, theta, branch, opts)
        out.append(SweepRecord(spec.figure, branch.value, theta, gamma, s, b1, c, f_opt))
    return out


def figure_sweep(spec: SweepSpec) -> list[SweepRecord]:
    """All records of the sweep in canonical (theta, gamma, branch, B or s) order."""
    records: list[SweepRecord] = []
    if spec.mode == "partial":
        for theta in spec.thetas:
            for gamma in spec.gammas:
                records.extend(_partial_cell(spec, theta, gamma))
    else:
        for gamma in spec.gammas:
            records.extend(_optimal_cell(spec, gamma))
    records.sort(key=lambda r: r.sort_key(spec.mode))
    return records


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def write_csv(records: Iterable[SweepRecord], fh: io.TextIOBase) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow([_fmt(getattr(r, c)) for c in COLUMNS])


def to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def to_json(records: Iterable[SweepRecord], spec: SweepSpec | None = None) -> str:
    rows = [{c: (float(_fmt(v)) if isinstance(v, float) else v) for c, v in asdict(r).items()} for r in records]
    doc: dict[str, Any] = {"columns": list(COLUMNS), "records": rows}
    if spec is not None:
        doc["spec"] = asdict(spec)
    return json.dumps(doc, indent=1, sort_keys=True)


def cell(records: Iterable[SweepRecord], theta: float, gamma: float) -> list[SweepRecord]:
    """Records of one (theta, gamma) curve, ordered by B."""
    picked = [r for r in records if math.isclose(r.theta, theta, abs_tol=1e-12)
              and math.isclose(r.gamma, gamma, abs_tol=1e-12)]
    return sorted(picked, key=lambda r: r.b)


@dataclass
class CurvePieces:
    """The B >= 0 half of a fig 1/3/5 curve split at its least-correlated point.

    Each piece is a list of (correlation, fidelity) pairs starting at that point.
    When the minimum sits at an end of the half-curve there is only one piece
    and the fidelity is a single-valued function of the correlation.
    """

    turning_b: float
    pieces: list[list[tuple[float, float]]] = field(default_factory=list)

    @property
    def single_valued(self) -> bool:
        return len(self.pieces) == 1


def split_at_turning_point(curve: list[SweepRecord]) -> CurvePieces:
    half = [r for r in sorted(curve, key=lambda r: r.b) if r.b >= 0.0]
    if len(half) < 2:
        raise DomainError("need at least two B >= 0 records to split a curve")
    corrs = np.array([r.correlation for r in half])
    k = int(np.argmin(corrs))
    pts = [(r.correlation, r.fidelity) for r in half]
    pieces = [p for p in (pts[: k + 1][::-1], pts[k:]) if len(p) > 1]
    return CurvePieces(half[k].b, pieces)
