"""Density matrices: validation, Bloch parameterizations and random sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .linalg import HERMITIAN_TOL

BLOCH_NORM_SLACK = 1e-12

_SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


class StateError(ValueError):
    """Base class for invalid density matrices.

    ``measured`` holds the offending quantity; ``violations`` lists every
    invariant that failed, in check order (this error first).
    """

    invariant = "state"

    def __init__(self, measured: float, message: str | None = None):
        self.measured = measured
        self.violations: list[StateError] = [self]
        super().__init__(message or f"{self.invariant} violated (measured {measured:.6g})")


class HermiticityViolation(StateError):
    invariant = "hermiticity"


class TraceViolation(StateError):
    invariant = "unit trace"


class PositivityViolation(StateError):
    invariant = "positive semidefinite"


@dataclass(frozen=True)
class DensityMatrix:
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return linalg.hermitian_eigenvalues(self.mat)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))


def _trusted(mat: np.ndarray) -> DensityMatrix:
    mat = np.array(mat, dtype=np.complex128)
    mat.setflags(write=False)
    return DensityMatrix(mat)


def diagnose(m, tol: float = HERMITIAN_TOL) -> list[StateError]:
    """Every failed density-matrix invariant of ``m``; empty if valid.

    Positivity is only examined when ``m`` is Hermitian, since the
    eigensolver requires it.
    """
    m = linalg.as_matrix(m)
    found: list[StateError] = []
    asym = linalg.max_asymmetry(m)
    if asym > tol:
        found.append(
            HermiticityViolation(asym, f"not Hermitian: max |m - m^H| = {asym:.3e}")
        )
    tr = linalg.trace(m)
    if abs(tr - 1.0) > tol:
        found.append(TraceViolation(tr.real, f"trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1"))
    if asym <= tol:
        lo = float(linalg.hermitian_eigenvalues(m, tol)[0])
        if lo < -tol:
            found.append(PositivityViolation(lo, f"minimum eigenvalue {lo:.6g} < 0"))
    return found


def from_matrix(m, tol: float = HERMITIAN_TOL) -> DensityMatrix:
    """Validate ``m`` as a density matrix.

    Raises the first failed invariant as a :class:`StateError` subclass;
    its ``violations`` attribute carries all of them.
    """
    found = diagnose(m, tol)
    if found:
        err = found[0]
        err.violations = found
        raise err
    return _trusted(linalg.as_matrix(m))


def pauli_matrices() -> np.ndarray:
    return _SIGMA.copy()


def bloch_norm(r: Sequence[float]) -> float:
    return float(np.linalg.norm(np.asarray(r, dtype=float)))


def qubit_from_bloch(r: Sequence[float]) -> DensityMatrix:
    """rho = (I + r . sigma) / 2 for a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"qubit Bloch vector needs 3 components, got {r.shape}")
    norm = bloch_norm(r)
    if norm > 1.0 + BLOCH_NORM_SLACK:
        raise PositivityViolation(norm, f"Bloch vector norm {norm:.12g} exceeds 1")
    return _trusted(0.5 * (np.eye(2) + np.einsum("i,ijk->jk", r, _SIGMA)))


def bloch_of_qubit(rho: DensityMatrix) -> np.ndarray:
    if rho.dim != 2:
        raise linalg.DimensionError(f"Bloch vector of a qubit needs dim 2, got {rho.dim}")
    r = np.einsum("ijk,kj->i", _SIGMA, rho.mat)
    if np.max(np.abs(r.imag)) > BLOCH_NORM_SLACK:
        raise ValueError(f"complex Bloch component, residue {np.max(np.abs(r.imag)):.3e}")
    return r.real.copy()


def qutrit_matrix(r: Sequence[float]) -> np.ndarray:
    """(I + sqrt(3) r . lambda) / 3, without any validation."""
    from .observables import gellmann_matrices

    r = np.asarray(r, dtype=float)
    if r.shape != (8,):
        raise ValueError(f"qutrit Bloch vector needs 8 components, got {r.shape}")
    return (np.eye(3) + np.sqrt(3.0) * np.einsum("i,ijk->jk", r, gellmann_matrices())) / 3.0


def qutrit_from_bloch(r: Sequence[float], tol: float = HERMITIAN_TOL) -> DensityMatrix:
    """Qutrit state from an 8-component Bloch vector.

    |r| <= 1 is necessary but not sufficient here, so validity is decided by
    the eigenvalue check alone.
    """
    return from_matrix(qutrit_matrix(r), tol)


def qutrit_param_bloch(a: float, alpha: float, beta: float) -> np.ndarray:
    """The three-parameter family r1 = a cos(alpha), r4 = a sin(alpha) cos(beta),
    r6 = a sin(alpha) sin(beta), all other components zero."""
    r = np.zeros(8)
    r[0] = a * np.cos(alpha)
    r[3] = a * np.sin(alpha) * np.cos(beta)
    r[5] = a * np.sin(alpha) * np.sin(beta)
    return r


def qutrit_from_params(a: float, alpha: float, beta: float) -> DensityMatrix:
    return qutrit_from_bloch(qutrit_param_bloch(a, alpha, beta))


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` of a run seeded with ``seed``."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. standard complex Gaussians, E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_pure(dim: int, seed) -> DensityMatrix:
    if dim < 2:
        raise ValueError("dim must be at least 2")
    psi = complex_gaussian(make_rng(seed), dim)
    psi /= np.linalg.norm(psi)
    return _trusted(np.outer(psi, psi.conj()))


def random_mixed(dim: int, rank: int, seed) -> DensityMatrix:
    """Ginibre-induced mixed state rho = G G^H / tr(G G^H), G of shape (dim, rank)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    g = complex_gaussian(make_rng(seed), (dim, rank))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return _trusted(w / np.trace(w).real)
