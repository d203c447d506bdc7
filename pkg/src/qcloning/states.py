"""Containers for the three-qubit cloner output and the two-mode reduced state.

Basis ordering is fixed as ``|m1 m2 p>`` with the probe ``p`` least significant,
i.e. amplitude index ``4*m1 + 2*m2 + p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import ROUNDOFF
from .errors import InvariantError

NORM_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ThreeQubitState:
    """Normalized pure state of (mode 1, mode 2, probe)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes)
        if amps.shape != (8,):
            raise InvariantError(f"expected 8 amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise InvariantError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantError(f"state is not normalized (|psi| = {norm:.15g})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes as a (2, 2, 2) array indexed [m1, m2, p]."""
        return self.amplitudes.reshape(2, 2, 2)

    @property
    def modes_by_probe(self) -> np.ndarray:
        """(4, 2) matrix W with rows |m1 m2> and columns the probe value.

        The two-mode reduced state is ``W @ W.conj().T``.
        """
        return self.amplitudes.reshape(4, 2)

    def probe_projection(self, outcome: int = 0) -> np.ndarray:
        """Unnormalized two-mode vector <outcome_p|psi>."""
        return self.modes_by_probe[:, outcome].copy()


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Density matrix of the two output modes.

    ``abcd`` is kept when the matrix was assembled from the four cloner
    output coefficients, so the closed-form concurrence can be evaluated.
    """

    matrix: np.ndarray
    abcd: tuple[float, float, float, float] | None = field(default=None)

    def __post_init__(self) -> None:
        rho = np.asarray(self.matrix)
        if rho.shape != (4, 4):
            raise InvariantError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise InvariantError("density matrix must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > NORM_TOL:
            raise InvariantError("density matrix is not hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > NORM_TOL:
            raise InvariantError(f"density matrix has trace {tr.real:.15g}")
        lowest = float(np.linalg.eigvalsh(rho)[0])
        if lowest < -ROUNDOFF:
            raise InvariantError(f"density matrix has eigenvalue {lowest:.3e} < 0")
        if self.abcd is not None:
            object.__setattr__(self, "abcd", tuple(float(x) for x in self.abcd))
        object.__setattr__(self, "matrix", _frozen(rho))

    @classmethod
    def from_abcd(cls, a: float, b: float, c: float, d: float) -> "TwoModeState":
        """Assemble the reduced state of a*|00> + b(|01>+|10>) + c|11> (+) d|00>|1_p>."""
        rho = np.array(
            [
                [a * a + d * d, a * b, a * b, a * c],
                [a * b, b * b, b * b, b * c],
                [a * b, b * b, b * b, b * c],
                [a * c, b * c, b * c, c * c],
            ]
        )
        return cls(rho, (a, b, c, d))

    @classmethod
    def from_pure(cls, psi) -> "TwoModeState":
        psi = np.asarray(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix) or bool(np.all(self.matrix.imag == 0))

    def marginal(self, keep: int) -> np.ndarray:
        """Reduced state of mode ``keep`` (0 for the first mode, 1 for the second)."""
        r = self.matrix.reshape(2, 2, 2, 2)
        if keep == 0:
            return np.einsum("ijkj->ik", r)
        if keep == 1:
            return np.einsum("ijil->jl", r)
        raise ValueError("keep must be 0 or 1")

    def swapped(self) -> "TwoModeState":
        """Same state with the two modes exchanged."""
        r = self.matrix.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        abcd = self.abcd
        return TwoModeState(r, abcd)
