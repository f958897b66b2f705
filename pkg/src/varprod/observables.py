"""Hermitian observables, the Pauli and Gell-Mann sets, and moment tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

import numpy as np

from . import linalg
from .linalg import HERMITIAN_TOL
from .states import DensityMatrix, pauli_matrices

IMAG_TOL = 1e-10
VARIANCE_FLOOR = 1e-12

# Independent nonzero structure constants of su(3), [l_m, l_n] = 2i f_mns l_s.
GELLMANN_F = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (1, 6, 5): 0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (3, 7, 6): 0.5,
    (4, 5, 8): np.sqrt(3.0) / 2,
    (6, 7, 8): np.sqrt(3.0) / 2,
}


@dataclass(frozen=True)
class Observable:
    mat: np.ndarray
    label: str = ""

    @classmethod
    def from_matrix(cls, m, label: str = "", tol: float = HERMITIAN_TOL) -> "Observable":
        m = np.array(linalg.as_matrix(m))
        asym = linalg.max_asymmetry(m)
        if asym > tol:
            raise linalg.HermiticityError(asym, tol)
        m.setflags(write=False)
        return cls(m, label)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def gellmann_matrices() -> np.ndarray:
    """The eight standard Gell-Mann matrices, shape (8, 3, 3)."""
    lam = np.zeros((8, 3, 3), dtype=np.complex128)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3.0)
    return lam


def structure_constants() -> np.ndarray:
    """Fully antisymmetric f[m, n, s] with zero-based indices."""
    f = np.zeros((8, 8, 8))
    for idx, val in GELLMANN_F.items():
        for perm in permutations(range(3)):
            sign = np.linalg.det(np.eye(3)[list(perm)])
            f[tuple(idx[p] - 1 for p in perm)] = sign * val
    return f


def pauli_set() -> list[Observable]:
    return [Observable.from_matrix(m, lab) for m, lab in zip(pauli_matrices(), ("sx", "sy", "sz"))]


def gellmann_set() -> list[Observable]:
    return [Observable.from_matrix(m, f"l{i + 1}") for i, m in enumerate(gellmann_matrices())]


def random_observables(dim: int, n: int, rng: np.random.Generator) -> list[Observable]:
    """``n`` matrices (G + G^H) / 2, G with i.i.d. standard complex Gaussian
    real and imaginary parts. Hermitian by construction, so not re-checked."""
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    h = 0.5 * (g + g.conj().transpose(0, 2, 1))
    h.setflags(write=False)
    return [Observable(h[i], f"A{i + 1}") for i in range(n)]


def random_observable(dim: int, rng: np.random.Generator, label: str = "") -> Observable:
    obs = random_observables(dim, 1, rng)[0]
    return Observable(obs.mat, label)


def _check_dims(rho: DensityMatrix, *obs: Observable) -> None:
    for a in obs:
        if a.dim != rho.dim:
            raise linalg.DimensionError(
                f"observable {a.label or '?'} has dim {a.dim}, state has dim {rho.dim}"
            )


def _mean(rho: DensityMatrix, op: np.ndarray) -> complex:
    return complex(np.einsum("ab,ba->", op, rho.mat))


def _real(z: complex, what: str, tol: float = IMAG_TOL) -> float:
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        raise ValueError(f"{what} has imaginary residue {z.imag:.3e}")
    return z.real


def expectation(rho: DensityMatrix, a: Observable) -> float:
    _check_dims(rho, a)
    return _real(_mean(rho, a.mat), f"<{a.label}>")


def variance(rho: DensityMatrix, a: Observable) -> float:
    _check_dims(rho, a)
    second = _real(_mean(rho, a.mat @ a.mat), f"<{a.label}^2>")
    v = second - expectation(rho, a) ** 2
    if v < -VARIANCE_FLOOR * max(1.0, second):
        raise ValueError(f"negative variance {v:.3e} for {a.label}")
    return max(v, 0.0)


def commutator_mean(rho: DensityMatrix, a: Observable, b: Observable) -> complex:
    """<[a, b]>, purely imaginary for Hermitian a, b."""
    _check_dims(rho, a, b)
    if a is b:
        return 0j
    z = _mean(rho, a.mat @ b.mat - b.mat @ a.mat)
    if abs(z.real) > IMAG_TOL * max(1.0, abs(z)):
        raise ValueError(f"commutator mean has real residue {z.real:.3e}")
    return complex(0.0, z.imag)


def anticommutator_mean(rho: DensityMatrix, a: Observable, b: Observable) -> complex:
    """<{a, b}>, real for Hermitian a, b."""
    _check_dims(rho, a, b)
    z = _mean(rho, a.mat @ b.mat + b.mat @ a.mat)
    return complex(_real(z, "anticommutator mean"), 0.0)


@dataclass(frozen=True)
class MomentTable:
    """First and second moments of a list of observables in one state.

    ``centered[j, k] = <A_j A_k> - <A_j><A_k>``; ``gram`` is its transpose,
    i.e. ``gram[j, k] = <A_k A_j> - <A_k><A_j>``, the Gram matrix of the
    variance operators A_j - <A_j>.
    """

    means: np.ndarray
    second_moments: np.ndarray
    centered: np.ndarray
    variances: np.ndarray
    gram: np.ndarray
    labels: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.means)

    @property
    def product(self) -> float:
        return float(np.prod(self.variances))

    def commutator(self, j: int, k: int) -> complex:
        """<[A_j, A_k]> reconstructed from the second moments."""
        return self.second_moments[j, k] - self.second_moments[k, j]

    def anticommutator(self, j: int, k: int) -> complex:
        return self.second_moments[j, k] + self.second_moments[k, j]


def moment_table(rho: DensityMatrix, obs: Sequence[Observable]) -> MomentTable:
    if not obs:
        raise ValueError("need at least one observable")
    _check_dims(rho, *obs)
    stack = np.stack([a.mat for a in obs])
    means_c = np.einsum("iab,ba->i", stack, rho.mat)
    bad = np.max(np.abs(means_c.imag))
    if bad > IMAG_TOL * max(1.0, float(np.max(np.abs(means_c.real)))):
        raise ValueError(f"observable mean has imaginary residue {bad:.3e}")
    means = means_c.real
    # second[j, k] = tr(A_j A_k rho)
    second = np.einsum("jab,kbc,ca->jk", stack, stack, rho.mat)
    centered = second - np.outer(means, means)
    raw_var = centered.diagonal().real
    floor = -VARIANCE_FLOOR * np.maximum(1.0, second.diagonal().real)
    if np.any(raw_var < floor):
        i = int(np.argmin(raw_var - floor))
        raise ValueError(f"negative variance {raw_var[i]:.3e} for observable {i}")
    variances = np.maximum(raw_var, 0.0)
    arrays = [means, second, centered, variances, centered.T.copy()]
    for arr in arrays:
        arr.setflags(write=False)
    return MomentTable(*arrays, labels=tuple(a.label for a in obs))
