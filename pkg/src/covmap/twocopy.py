"""Canonical calculus for maps from d x d matrices to operators on two copies.

Every map commuting with simultaneous unitary conjugation (conjugate the
input by U, the output by U (x) U) is a combination of six generators:

    X  ->  I (x) X,   X (x) I,   S (I (x) X),   S (X (x) I),
           tr(X) I (x) I,   tr(X) S,

with S the factor swap.  ``CovariantCoefficients`` stores the six weights
in that order.  For d >= 3 the weights are unique.  For d = 2 the
generators satisfy one linear relation,

    I(x)X + X(x)I - tr(X) I(x)I + tr(X) S  ==  S(X(x)I) + S(I(x)X),

so coefficient vectors are determined only up to multiples of the
direction g = (1, 1, -1, -1, -1, 1); ``gauge_reduce`` removes the
ambiguity by projecting onto the orthogonal complement of g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    Tolerance,
    as_matrix,
    operator_norm,
    unvec,
    vec,
)
from .operators import matrix_unit, swap_operator

__all__ = [
    "GAUGE_DIRECTION",
    "GaugeAmbiguousError",
    "CovariantCoefficients",
    "virtual_broadcast_coefficients",
    "apply_map",
    "realize_superoperator",
    "basis_superoperators",
    "choi_matrix",
    "extract",
    "fit_coefficients",
    "gauge_reduce",
    "maps_equal",
]

GAUGE_DIRECTION = np.array([1, 1, -1, -1, -1, 1], dtype=np.complex128)


class GaugeAmbiguousError(ValueError):
    """Entrywise extraction refused at d = 2 where weights are not unique."""


@dataclass(frozen=True)
class CovariantCoefficients:
    """Weights (c1..c6) on the six generators, bound to a dimension d."""

    d: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if self.d < 2:
            raise DimensionError(f"need d >= 2, got {self.d}")
        cs = tuple(complex(z) for z in self.coeffs)
        if len(cs) != 6:
            raise ValueError(f"expected 6 coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.complex128)

    def __getitem__(self, k: int) -> complex:
        return self.coeffs[k]

    def max_magnitude(self) -> float:
        return float(np.abs(self.as_array()).max())


def virtual_broadcast_coefficients(d: int) -> CovariantCoefficients:
    """The symmetrized broadcaster (0, 0, 1/2, 1/2, 0, 0)."""
    return CovariantCoefficients(d, (0, 0, 0.5, 0.5, 0, 0))


def apply_map(c: CovariantCoefficients, x) -> np.ndarray:
    """Image of the d x d matrix ``x``, a d^2 x d^2 matrix."""
    x = as_matrix(x)
    d = c.d
    if x.shape != (d, d):
        raise DimensionError(f"input shape {x.shape} does not match d={d}")
    eye = np.eye(d, dtype=np.complex128)
    s = swap_operator(d)
    ix = np.kron(eye, x)
    xi = np.kron(x, eye)
    t = np.trace(x)
    c1, c2, c3, c4, c5, c6 = c.coeffs
    out = c1 * ix + c2 * xi + c3 * (s @ ix) + c4 * (s @ xi)
    out += (c5 * t) * np.eye(d * d, dtype=np.complex128) + (c6 * t) * s
    return out


def realize_superoperator(c: CovariantCoefficients) -> np.ndarray:
    """d^4 x d^2 matrix M with M @ vec(X) == vec(apply_map(c, X))."""
    d = c.d
    m = np.zeros((d**4, d**2), dtype=np.complex128)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=np.complex128)
        e[k] = 1.0
        m[:, k] = vec(apply_map(c, unvec(e, d)))
    return m


def basis_superoperators(d: int) -> list[np.ndarray]:
    """Superoperators of the six generators, in coefficient order."""
    out = []
    for k in range(6):
        unit = [0] * 6
        unit[k] = 1
        out.append(realize_superoperator(CovariantCoefficients(d, tuple(unit))))
    return out


def choi_matrix(c: CovariantCoefficients) -> np.ndarray:
    """Block matrix sum_ij E_ij (x) apply_map(c, E_ij), of size d^3 x d^3."""
    d = c.d
    blocks = np.zeros((d**3, d**3), dtype=np.complex128)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            blocks += np.kron(matrix_unit(i, j, d), apply_map(c, matrix_unit(i, j, d)))
    return blocks


def _image_of(superop: np.ndarray, x: np.ndarray, d: int) -> np.ndarray:
    return unvec(superop @ vec(x), d * d)


def extract(superop, d: int, tol: Tolerance = DEFAULT_TOL) -> tuple[CovariantCoefficients, float]:
    """Read the six weights off single matrix elements of two probe images.

    Probes are the images of e1 e2* and e1 e1*; each weight appears alone
    as one entry because the basis vectors involved are distinct, which
    needs d >= 3.  At d = 2 raises GaugeAmbiguousError (use
    :func:`fit_coefficients` there).  Returns (coefficients, residual)
    where the residual is the operator-norm distance between ``superop``
    and the realized coefficients, so non-covariant input is detected
    rather than silently projected.
    """
    superop = as_matrix(superop)
    if d < 2:
        raise DimensionError(f"need d >= 2, got {d}")
    if d == 2:
        raise GaugeAmbiguousError("weights are not unique at d = 2")
    if superop.shape != (d**4, d**2):
        raise DimensionError(f"superoperator shape {superop.shape} does not match d={d}")
    y = _image_of(superop, matrix_unit(1, 2, d), d)
    z = _image_of(superop, matrix_unit(1, 1, d), d)
    # Image of e1e2* on e3(x)e2 has weight c1 on e3(x)e1 and c3 on e1(x)e3;
    # on e2(x)e3 it has c2 on e1(x)e3 and c4 on e3(x)e1.  Trace weights sit
    # in the image of e1e1* on e2(x)e3.
    c1 = y[2 * d + 0, 2 * d + 1]
    c3 = y[0 * d + 2, 2 * d + 1]
    c2 = y[0 * d + 2, 1 * d + 2]
    c4 = y[2 * d + 0, 1 * d + 2]
    c5 = z[1 * d + 2, 1 * d + 2]
    c6 = z[2 * d + 1, 1 * d + 2]
    c = CovariantCoefficients(d, (c1, c2, c3, c4, c5, c6))
    residual = operator_norm(superop - realize_superoperator(c))
    return c, residual


def fit_coefficients(superop, d: int) -> tuple[CovariantCoefficients, float]:
    """Least-squares projection onto the six generators.

    Works at every d >= 2.  At d = 2 the minimum-norm solution is
    automatically orthogonal to the gauge direction; gauge_reduce is still
    applied to scrub floating-point dust.  Returns (coefficients,
    operator-norm residual).
    """
    superop = as_matrix(superop)
    if d < 2:
        raise DimensionError(f"need d >= 2, got {d}")
    if superop.shape != (d**4, d**2):
        raise DimensionError(f"superoperator shape {superop.shape} does not match d={d}")
    basis = np.stack([vec(b) for b in basis_superoperators(d)], axis=1)
    sol, *_ = np.linalg.lstsq(basis, vec(superop), rcond=None)
    c = gauge_reduce(CovariantCoefficients(d, tuple(sol)))
    residual = operator_norm(superop - realize_superoperator(c))
    return c, residual


def gauge_reduce(c: CovariantCoefficients) -> CovariantCoefficients:
    """Canonical representative: unchanged for d >= 3, min-norm at d = 2."""
    if c.d >= 3:
        return c
    arr = c.as_array()
    overlap = np.vdot(GAUGE_DIRECTION, arr)
    arr = arr - (overlap / 6.0) * GAUGE_DIRECTION
    return CovariantCoefficients(c.d, tuple(arr))


def maps_equal(
    a: CovariantCoefficients, b: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Whether two coefficient vectors realize the same map."""
    if a.d != b.d:
        raise DimensionError(f"dimension mismatch {a.d} vs {b.d}")
    da = gauge_reduce(a).as_array()
    db = gauge_reduce(b).as_array()
    scale = max(np.abs(da).max(), np.abs(db).max())
    return bool(np.abs(da - db).max() <= tol.bound(scale))
