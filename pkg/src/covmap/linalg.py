"""Dense complex linear algebra kernel shared by every module.

Conventions fixed once for the whole package:

* Tensor products index the first factor slowest: the basis vector
  ``e_i (x) e_j`` of C^a (x) C^b sits at flat index ``i*b + j``, which is
  exactly what ``np.kron`` produces.
* Matrices are vectorised by column stacking, so
  ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
* Eigenvalues of Hermitian matrices are returned in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "DimensionError",
    "NotHermitianError",
    "as_matrix",
    "dagger",
    "kron",
    "partial_trace",
    "hermitian_eigenvalues",
    "operator_norm",
    "frobenius_norm",
    "hs_inner",
    "is_psd",
    "vec",
    "unvec",
    "map_to_superoperator",
]


class DimensionError(ValueError):
    """Shapes or dimensions do not match the declared contract."""


class NotHermitianError(ValueError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by every numerical predicate.

    The effective threshold for a quantity living at magnitude ``scale``
    is ``abs + rel * scale``.
    """

    abs: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be nonnegative")

    def bound(self, scale: float = 1.0) -> float:
        return self.abs + self.rel * float(scale)


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting anything else."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"empty matrix of shape {m.shape}")
    return m


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a, b) -> np.ndarray:
    """Tensor product with the first factor indexed slowest."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(t, d1: int, d2: int, side: str = "first") -> np.ndarray:
    """Trace out one tensor factor of an operator on C^d1 (x) C^d2.

    ``side="first"`` returns the d2 x d2 reduction, ``side="second"`` the
    d1 x d1 one.
    """
    t = as_matrix(t)
    if d1 < 1 or d2 < 1:
        raise DimensionError("factor dimensions must be positive")
    if t.shape != (d1 * d2, d1 * d2):
        raise DimensionError(
            f"operator shape {t.shape} does not match factors ({d1}, {d2})"
        )
    r = t.reshape(d1, d2, d1, d2)
    if side == "first":
        return np.trace(r, axis1=0, axis2=2)
    if side == "second":
        return np.trace(r, axis1=1, axis2=3)
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def operator_norm(a) -> float:
    """Largest singular value. Works for rectangular input."""
    a = as_matrix(a)
    return float(np.linalg.norm(a, 2))


def frobenius_norm(a) -> float:
    a = as_matrix(a)
    return float(np.linalg.norm(a))


def hermitian_eigenvalues(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    Raises NotHermitianError when ``a`` deviates from its adjoint by more
    than the tolerance (relative to the norm of ``a``).
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix of shape {a.shape} is not square")
    dev = operator_norm(a - a.conj().T)
    if dev > tol.bound(operator_norm(a)):
        raise NotHermitianError(f"deviation from adjoint {dev:.3e} exceeds tolerance")
    return np.linalg.eigvalsh(a)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b), conjugate-linear in ``a``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def is_psd(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``a`` is Hermitian and has spectrum >= -threshold.

    Non-Hermitian input (beyond tolerance) is simply not PSD: returns False.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix of shape {a.shape} is not square")
    scale = operator_norm(a)
    if operator_norm(a - a.conj().T) > tol.bound(scale):
        return False
    evals = np.linalg.eigvalsh((a + a.conj().T) / 2)
    return bool(evals[0] >= -tol.bound(scale))


def vec(x) -> np.ndarray:
    """Column-stacking vectorisation."""
    return as_matrix(x).T.reshape(-1)


def unvec(v, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for a rows x cols matrix."""
    if cols is None:
        cols = rows
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size != rows * cols:
        raise DimensionError(f"vector of size {v.size} is not {rows}x{cols}")
    return v.reshape(cols, rows).T


def map_to_superoperator(f, d: int, d_out: int | None = None) -> np.ndarray:
    """Matrix of a linear map on d x d input, acting on column-stacked vecs.

    ``f`` takes a d x d array to a d_out x d_out array; the result M
    satisfies ``M @ vec(X) == vec(f(X))``.
    """
    if d < 1:
        raise DimensionError("input dimension must be positive")
    probe = f(np.zeros((d, d), dtype=np.complex128))
    probe = as_matrix(probe)
    if d_out is None:
        d_out = probe.shape[0]
    m = np.zeros((d_out * d_out, d * d), dtype=np.complex128)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=np.complex128)
        e[k] = 1.0
        m[:, k] = vec(f(unvec(e, d)))
    return m
