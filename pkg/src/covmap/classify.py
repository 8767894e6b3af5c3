"""Structural verdicts for two-copy covariant maps.

Every predicate takes the coefficient vector, not a realized matrix, so
checks are closed-form where a closed form exists.  The complete-positivity
check falls back to a numerical test on the block matrix of matrix-unit
images when trace terms are present; the verdict is then tagged
``numerical-only`` because no closed criterion is implemented for that
family.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    Tolerance,
    as_matrix,
    frobenius_norm,
    is_psd,
    operator_norm,
)
from .operators import matrix_unit, swap_operator
from .twocopy import (
    CovariantCoefficients,
    apply_map,
    choi_matrix,
    gauge_reduce,
    maps_equal,
    virtual_broadcast_coefficients,
)

__all__ = [
    "CpResult",
    "ClassificationReport",
    "is_self_adjoint",
    "is_positive",
    "is_cp",
    "satisfies_broadcast",
    "is_permutation_invariant",
    "is_classically_consistent",
    "is_virtual_broadcaster",
    "commutant_fit",
    "classical_broadcast",
    "diagonal_pinch",
    "classify",
]


def _hermitian_basis(d: int) -> list[np.ndarray]:
    """Spanning set of Hermitian matrices: diagonal units plus X/Y pairs."""
    out = [matrix_unit(i, i, d) for i in range(1, d + 1)]
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            out.append(matrix_unit(i, j, d) + matrix_unit(j, i, d))
            out.append(1j * (matrix_unit(i, j, d) - matrix_unit(j, i, d)))
    return out


def _self_adjoint_violation(c: CovariantCoefficients) -> float:
    c1, c2, c3, c4, c5, c6 = c.coeffs
    return max(
        abs(c1.imag),
        abs(c2.imag),
        abs(c5.imag),
        abs(c6.imag),
        abs(c4 - np.conj(c3)),
    )


def is_self_adjoint(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the realized map sends Hermitian matrices to Hermitian ones.

    For d >= 3 this is exactly: c1, c2, c5, c6 real and c4 = conj(c3).
    For d = 2 the test runs on the gauge-reduced representative, and any
    vector whose realized map is Hermitian-preserving on a spanning set is
    accepted as well.
    """
    thr = tol.bound(max(1.0, c.max_magnitude()))
    if _self_adjoint_violation(gauge_reduce(c)) <= thr:
        return True
    if c.d == 2:
        dev = max(
            operator_norm(apply_map(c, x) - apply_map(c, x).conj().T)
            for x in _hermitian_basis(2)
        )
        return dev <= thr
    return False


def _real_normal_form(c: CovariantCoefficients):
    """Real weights (m1, m2, m5, m6) and complex m3 of a self-adjoint vector."""
    g = gauge_reduce(c)
    c1, c2, c3, c4, c5, c6 = g.coeffs
    m3 = (c3 + np.conj(c4)) / 2
    return c1.real, c2.real, complex(m3), c5.real, c6.real


def positivity_margin(c: CovariantCoefficients) -> float:
    """Smallest slack among the positivity conditions; >= 0 means positive.

    The conditions are exactly the eigenvalue families of the image of
    e1 e1*: the total weight, the 2 x 2 mixing block, and the trace-sector
    weights (m5 +- m6 for d >= 3, m5 + m6 for d = 2).
    """
    m1, m2, m3, m5, m6 = _real_normal_form(c)
    total = m1 + m2 + 2 * m3.real + m5 + m6
    block = np.array(
        [[m1 + m5, np.conj(m3) + m6], [m3 + m6, m2 + m5]], dtype=np.complex128
    )
    block_min = float(np.linalg.eigvalsh(block)[0])
    if c.d >= 3:
        tail = m5 - abs(m6)
    else:
        tail = m5 + m6
    return float(min(total, block_min, tail))


def is_positive(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the map sends PSD matrices to PSD matrices.

    Non-self-adjoint input is not positive.  For self-adjoint input the
    verdict is the closed criterion, equivalent to PSD-ness of the image
    of a rank-one projector.
    """
    if not is_self_adjoint(c, tol):
        return False
    thr = tol.bound(max(1.0, c.max_magnitude()))
    return positivity_margin(c) >= -thr


@dataclass(frozen=True)
class CpResult:
    """Complete-positivity verdict.

    status is "yes"/"no" when the closed trace-free criterion applies and
    "numerical-only" otherwise; is_cp always carries the boolean outcome,
    witness the binding slack (criterion margin or smallest block-matrix
    eigenvalue).
    """

    status: str
    is_cp: bool
    witness: float


def is_cp(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> CpResult:
    """Complete positivity: closed criterion when trace terms vanish.

    Trace-free family: c1 >= 0, c2 >= 0, c4 = conj(c3) and
    c1 * c2 >= |c3|^2.  With trace terms present the verdict comes from a
    PSD test on the block matrix of matrix-unit images and is tagged
    numerical-only.
    """
    c1, c2, c3, c4, c5, c6 = c.coeffs
    scale = max(1.0, c.max_magnitude())
    thr = tol.bound(scale)
    if max(abs(c5), abs(c6)) <= thr:
        margins = [
            -abs(c1.imag),
            -abs(c2.imag),
            c1.real,
            c2.real,
            -abs(c4 - np.conj(c3)),
        ]
        linear = min(margins)
        det = c1.real * c2.real - abs(c3) ** 2
        ok = linear >= -thr and det >= -tol.bound(scale**2)
        return CpResult("yes" if ok else "no", ok, float(min(linear, det)))
    choi = choi_matrix(c)
    herm = (choi + choi.conj().T) / 2
    witness = float(np.linalg.eigvalsh(herm)[0])
    return CpResult("numerical-only", is_psd(choi, tol), witness)


def broadcast_residual(c: CovariantCoefficients) -> float:
    """Largest violation of the linear broadcast constraints."""
    c1, c2, c3, c4, c5, c6 = c.coeffs
    d = c.d
    return float(
        max(abs(c1 - c2), abs(d * c1 + c3 + c4 - 1), abs(d * c5 + c2 + c6))
    )


def satisfies_broadcast(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether both partial traces of every image reproduce the input."""
    thr = tol.bound(max(1.0, c.max_magnitude()))
    return broadcast_residual(c) <= thr


def is_permutation_invariant(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether swapping the two output factors leaves every image fixed.

    Holds exactly when c1 = c2 and c3 = c4; both differences are gauge
    invariant, so the d = 2 reduction is only for canonical form.
    """
    g = gauge_reduce(c)
    c1, c2, c3, c4, _, _ = g.coeffs
    thr = tol.bound(max(1.0, c.max_magnitude()))
    return bool(max(abs(c1 - c2), abs(c3 - c4)) <= thr)


def _check_basis(basis, d: int, tol: Tolerance) -> np.ndarray:
    if basis is None:
        return np.eye(d, dtype=np.complex128)
    b = as_matrix(basis)
    if b.shape != (d, d):
        raise DimensionError(f"basis shape {b.shape} does not match d={d}")
    if operator_norm(b.conj().T @ b - np.eye(d)) > tol.bound(1.0):
        raise ValueError("basis columns are not orthonormal")
    return b


def diagonal_pinch(x, basis=None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Keep the diagonal of ``x`` in the given orthonormal basis."""
    x = as_matrix(x)
    d = x.shape[0]
    if x.shape != (d, d):
        raise DimensionError("pinch needs a square matrix")
    b = _check_basis(basis, d, tol)
    y = b.conj().T @ x @ b
    return b @ np.diag(np.diag(y)) @ b.conj().T


def classical_broadcast(x, basis=None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Diagonal-copy map: each basis weight goes to the doubled projector."""
    x = as_matrix(x)
    d = x.shape[0]
    b = _check_basis(basis, d, tol)
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        p = np.outer(b[:, i], b[:, i].conj())
        out += (b[:, i].conj() @ x @ b[:, i]) * np.kron(p, p)
    return out


def is_classically_consistent(
    c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL, basis=None
) -> bool:
    """Whether pinch -> map -> doubled pinch equals the diagonal-copy map.

    The pinch runs in the supplied orthonormal basis (standard basis by
    default).  Checked on the diagonal projectors of that basis, which
    span everything the first pinch lets through.
    """
    d = c.d
    b = _check_basis(basis, d, tol)
    bb = np.kron(b, b)
    thr = tol.bound(max(1.0, c.max_magnitude()))
    dev = 0.0
    for i in range(d):
        p = np.outer(b[:, i], b[:, i].conj())
        y = bb.conj().T @ apply_map(c, p) @ bb
        lhs = bb @ np.diag(np.diag(y)) @ bb.conj().T
        rhs = np.kron(p, p)
        dev = max(dev, float(np.abs(lhs - rhs).max()))
    return dev <= thr


def is_virtual_broadcaster(c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the map is the symmetrized broadcaster, up to gauge."""
    return maps_equal(c, virtual_broadcast_coefficients(c.d), tol)


def commutant_fit(t, d: int) -> tuple[complex, complex, float]:
    """Best approximation of a two-copy operator by alpha*I + beta*S.

    Exact normal-equation solve in the span of the identity and the swap;
    returns (alpha, beta, Frobenius residual).  Residual 0 certifies
    membership in the commutant of all U (x) U.
    """
    t = as_matrix(t)
    if d < 2:
        raise DimensionError(f"need d >= 2, got {d}")
    if t.shape != (d * d, d * d):
        raise DimensionError(f"operator shape {t.shape} does not match d={d}")
    s = swap_operator(d)
    tr_t = complex(np.trace(t))
    tr_st = complex(np.trace(s @ t))
    det = d**4 - d**2
    alpha = (d * d * tr_t - d * tr_st) / det
    beta = (d * d * tr_st - d * tr_t) / det
    residual = frobenius_norm(t - alpha * np.eye(d * d) - beta * s)
    return alpha, beta, residual


@dataclass(frozen=True)
class ClassificationReport:
    """All verdicts for one coefficient vector, with numeric evidence.

    Evidence keys mirror the predicates: violations are maxima that must
    stay below tolerance, margins are minima that must stay above its
    negative.
    """

    d: int
    coefficients: CovariantCoefficients
    self_adjoint: bool
    positive: bool
    completely_positive: str
    broadcasting: bool
    permutation_invariant: bool
    classically_consistent: bool
    virtual_broadcaster: bool
    evidence: dict = field(default_factory=dict)


def classify(
    c: CovariantCoefficients, tol: Tolerance = DEFAULT_TOL, basis=None
) -> ClassificationReport:
    """Run every verdict once and bundle the results."""
    sa = is_self_adjoint(c, tol)
    cp = is_cp(c, tol)
    evidence = {
        "self_adjoint_violation": float(_self_adjoint_violation(gauge_reduce(c))),
        "positivity_margin": positivity_margin(c) if sa else None,
        "cp_witness": cp.witness,
        "cp_holds": cp.is_cp,
        "broadcast_residual": broadcast_residual(c),
        "virtual_broadcaster_distance": float(
            np.abs(
                gauge_reduce(c).as_array()
                - gauge_reduce(virtual_broadcast_coefficients(c.d)).as_array()
            ).max()
        ),
    }
    return ClassificationReport(
        d=c.d,
        coefficients=c,
        self_adjoint=sa,
        positive=is_positive(c, tol),
        completely_positive=cp.status,
        broadcasting=satisfies_broadcast(c, tol),
        permutation_invariant=is_permutation_invariant(c, tol),
        classically_consistent=is_classically_consistent(c, tol, basis),
        virtual_broadcaster=is_virtual_broadcaster(c, tol),
        evidence=evidence,
    )
