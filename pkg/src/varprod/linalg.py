"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex128 arrays of shape ``(d, d)``. Only the
handful of primitives needed by the bounds live here: products, adjoints,
traces, an LU determinant and a cyclic Jacobi eigensolver for Hermitian
matrices. Everything is sized for ``d <= 16``.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-10
JACOBI_RTOL = 1e-13
_MAX_SWEEPS = 60


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class HermiticityError(ValueError):
    """Matrix is not Hermitian within tolerance."""

    def __init__(self, asymmetry: float, tol: float):
        self.asymmetry = asymmetry
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: max |a - a^H| = {asymmetry:.3e} exceeds {tol:.1e}"
        )


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square, finite complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def max_asymmetry(a) -> float:
    """Largest entrywise deviation of ``a`` from its adjoint."""
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return max_asymmetry(a) <= tol


def _det_cofactor(m: np.ndarray) -> complex:
    d = m.shape[0]
    if d == 1:
        return complex(m[0, 0])
    if d == 2:
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if d == 3:
        return complex(
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
    raise DimensionError("cofactor determinant only implemented for d <= 3")


def det_lu(a) -> complex:
    """Determinant by Gaussian elimination with partial pivoting."""
    u = as_matrix(a).copy()
    d = u.shape[0]
    det = 1.0 + 0.0j
    for k in range(d):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if u[p, k] == 0:
            return 0j
        if p != k:
            u[[k, p]] = u[[p, k]]
            det = -det
        det *= u[k, k]
        if k + 1 < d:
            factors = u[k + 1 :, k] / u[k, k]
            u[k + 1 :, k:] -= np.outer(factors, u[k, k:])
    return complex(det)


def determinant(a) -> complex:
    """Determinant; direct cofactor expansion for d <= 3, LU otherwise."""
    m = as_matrix(a)
    if m.shape[0] <= 3:
        return _det_cofactor(m)
    return det_lu(m)


def _rotate(w: list[list[complex]], p: int, q: int) -> None:
    """Annihilate ``w[p][q]`` in place with a unitary plane rotation.

    The rotation is J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p, q)
    plane, where phi is the phase of ``w[p][q]``; ``w`` becomes J^H w J.
    """
    d = len(w)
    apq = w[p][q]
    mag = abs(apq)
    ph = apq / mag
    phc = ph.conjugate()
    theta = (w[q][q].real - w[p][p].real) / (2.0 * mag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    for k in range(d):
        row = w[k]
        ap, aq = row[p], row[q]
        row[p] = c * ap - s * phc * aq
        row[q] = s * ap + c * phc * aq
    rp, rq = w[p], w[q]
    for k in range(d):
        ap, aq = rp[k], rq[k]
        rp[k] = c * ap - s * ph * aq
        rq[k] = s * ap + c * ph * aq
    rp[q] = rq[p] = 0j
    rp[p] = complex(rp[p].real)
    rq[q] = complex(rq[q].real)


def hermitian_eigenvalues(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order.

    Cyclic Jacobi sweeps run until the off-diagonal Frobenius norm drops below
    ``1e-13 * (1 + ||a||_F)``. Plain Python scalars are used on purpose: for
    the matrix sizes in play they beat per-rotation numpy calls several times.
    """
    m = as_matrix(a)
    asym = max_asymmetry(m)
    if asym > tol:
        raise HermiticityError(asym, tol)
    h = 0.5 * (m + m.conj().T)
    d = h.shape[0]
    w = h.tolist()
    for i in range(d):
        w[i][i] = complex(w[i][i].real)
    if d == 1:
        return np.array([w[0][0].real])
    threshold = JACOBI_RTOL * (1.0 + float(np.linalg.norm(h)))
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]
    for _ in range(_MAX_SWEEPS):
        off = 2.0 * sum(abs(w[p][q]) ** 2 for p, q in pairs)
        if math.sqrt(off) <= threshold:
            break
        for p, q in pairs:
            if abs(w[p][q]) > 1e-300:
                _rotate(w, p, q)
    return np.sort(np.array([w[i][i].real for i in range(d)]))
