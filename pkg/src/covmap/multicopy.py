"""Canonical calculus for maps into m output copies.

A map commuting with U-conjugation in and U^(x m)-conjugation out is a
combination of the m! * (m+1) generators

    X  ->  P(s) @ F_j(X),    s a permutation of the m slots,

where F_1(X) = tr(X) I^(x m) and F_j(X) for j = 2..m+1 places X in slot
j-1 with identities elsewhere.  ``MultiCopyCoefficients.lam[i, j]`` is the
weight of (permutation i in lexicographic one-line order, generator j+1),
so column 0 always holds the trace weights.  The weights are unique when
d >= m + 1, which is what entrywise extraction requires.

Desk-scale guard: 2 <= m <= 4 and d**m <= 256.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    Tolerance,
    as_matrix,
    frobenius_norm,
    operator_norm,
    unvec,
    vec,
)
from .operators import Permutation, haar_unitary, matrix_unit, permutation_operator
from .twocopy import CovariantCoefficients

__all__ = [
    "UniquenessUnavailableError",
    "MultiCopyCoefficients",
    "SchurWeylFit",
    "enumerate_permutations",
    "slot_embedding",
    "apply_multi",
    "realize_multi_superoperator",
    "extract_multi",
    "covariance_residual_multi",
    "schur_weyl_fit",
    "from_two_copy",
    "to_two_copy",
]


class UniquenessUnavailableError(ValueError):
    """Weights are not unique below d = m + 1; extraction refuses."""


def _check_desk(m: int, d: int) -> None:
    if not 2 <= m <= 4:
        raise ValueError(f"copy count m={m} outside supported range 2..4")
    if d < 2:
        raise DimensionError(f"need d >= 2, got {d}")
    if d**m > 256:
        raise ValueError(f"d**m = {d**m} exceeds the desk-scale cap 256")


def enumerate_permutations(m: int) -> list[Permutation]:
    """All permutations of {1..m}, lexicographic in one-line notation."""
    return [Permutation(img) for img in itertools.permutations(range(1, m + 1))]


@dataclass(frozen=True)
class MultiCopyCoefficients:
    """Weight table lam of shape (m!, m+1); column 0 is the trace column."""

    m: int
    d: int
    lam: np.ndarray

    def __post_init__(self):
        _check_desk(self.m, self.d)
        lam = np.array(self.lam, dtype=np.complex128)
        if lam.shape != (math.factorial(self.m), self.m + 1):
            raise ValueError(
                f"lam shape {lam.shape} does not match (m!, m+1) for m={self.m}"
            )
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    def max_magnitude(self) -> float:
        return float(np.abs(self.lam).max())


def slot_embedding(j: int, x, m: int, d: int) -> np.ndarray:
    """Generator j applied to x: trace term for j = 1, slot j-1 for j >= 2."""
    _check_desk(m, d)
    x = as_matrix(x)
    if x.shape != (d, d):
        raise DimensionError(f"input shape {x.shape} does not match d={d}")
    if j == 1:
        return np.trace(x) * np.eye(d**m, dtype=np.complex128)
    if not 2 <= j <= m + 1:
        raise ValueError(f"generator index {j} outside 1..{m + 1}")
    factors = [np.eye(d, dtype=np.complex128)] * m
    factors[j - 2] = x
    return reduce(np.kron, factors)


def _flat_perm(p: Permutation, d: int) -> np.ndarray:
    """forward[i] = flat index of the permuted basis tensor e_i."""
    m = p.m
    inv = p.inverse().image
    dim = d**m
    forward = np.empty(dim, dtype=np.intp)
    for flat in range(dim):
        digits = []
        rest = flat
        for _ in range(m):
            digits.append(rest % d)
            rest //= d
        digits.reverse()
        out = 0
        for t in range(m):
            out = out * d + digits[inv[t] - 1]
        forward[flat] = out
    return forward


def _row_perm(forward: np.ndarray) -> np.ndarray:
    """Index array r with (P @ A) == A[r] for the operator behind forward."""
    r = np.empty_like(forward)
    r[forward] = np.arange(forward.size)
    return r


def apply_multi(mc: MultiCopyCoefficients, x) -> np.ndarray:
    """Image of the d x d matrix x, of size d^m x d^m."""
    m, d = mc.m, mc.d
    perms = enumerate_permutations(m)
    embeddings = [slot_embedding(j, x, m, d) for j in range(1, m + 2)]
    out = np.zeros((d**m, d**m), dtype=np.complex128)
    for i, p in enumerate(perms):
        inner = np.zeros_like(out)
        for j in range(m + 1):
            coeff = mc.lam[i, j]
            if coeff != 0:
                inner += coeff * embeddings[j]
        out += inner[_row_perm(_flat_perm(p, d))]
    return out


def realize_multi_superoperator(mc: MultiCopyCoefficients) -> np.ndarray:
    """d^(2m) x d^2 matrix M with M @ vec(X) == vec(apply_multi(mc, X))."""
    m, d = mc.m, mc.d
    perms = enumerate_permutations(m)
    rows = [_row_perm(_flat_perm(p, d)) for p in perms]
    out = np.zeros((d ** (2 * m), d * d), dtype=np.complex128)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=np.complex128)
        e[k] = 1.0
        x = unvec(e, d)
        embeddings = [slot_embedding(j, x, m, d) for j in range(1, m + 2)]
        img = np.zeros((d**m, d**m), dtype=np.complex128)
        for i in range(len(perms)):
            inner = np.zeros_like(img)
            for j in range(m + 1):
                coeff = mc.lam[i, j]
                if coeff != 0:
                    inner += coeff * embeddings[j]
            img += inner[rows[i]]
        out[:, k] = vec(img)
    return out


def _basis_index(digits_1based, d: int) -> int:
    flat = 0
    for b in digits_1based:
        flat = flat * d + (b - 1)
    return flat


def extract_multi(
    superop, m: int, d: int, tol: Tolerance = DEFAULT_TOL
) -> tuple[MultiCopyCoefficients, float]:
    """Read all weights off probe images, then report the realization gap.

    For generator j >= 2 the probe input is e1 e2* applied to a basis
    tensor carrying e2 in slot j-1 and pairwise-distinct higher basis
    vectors elsewhere; each permutation weight then sits alone as one
    amplitude.  Trace weights come from the image of e1 e1* after the
    recovered slot terms are subtracted.  Needs d >= m + 1; otherwise the
    weights are not unique and UniquenessUnavailableError is raised.
    Returns (coefficients, operator-norm residual against the input).
    """
    _check_desk(m, d)
    if d < m + 1:
        raise UniquenessUnavailableError(
            f"weights are not unique for d={d} < m+1={m + 1}"
        )
    superop = as_matrix(superop)
    if superop.shape != (d ** (2 * m), d * d):
        raise DimensionError(
            f"superoperator shape {superop.shape} does not match m={m}, d={d}"
        )
    perms = enumerate_permutations(m)
    forwards = [_flat_perm(p, d) for p in perms]
    y = unvec(superop @ vec(matrix_unit(1, 2, d)), d**m)
    z = unvec(superop @ vec(matrix_unit(1, 1, d)), d**m)
    lam = np.zeros((math.factorial(m), m + 1), dtype=np.complex128)
    for j in range(2, m + 2):
        slot = j - 1
        fillers = iter(range(3, m + 2))
        v_digits = [0] * m
        w_digits = [0] * m
        for t in range(1, m + 1):
            if t == slot:
                v_digits[t - 1] = 2
                w_digits[t - 1] = 1
            else:
                b = next(fillers)
                v_digits[t - 1] = b
                w_digits[t - 1] = b
        col = y[:, _basis_index(v_digits, d)]
        w_flat = _basis_index(w_digits, d)
        for i in range(len(perms)):
            lam[i, j - 1] = col[forwards[i][w_flat]]
    # Remaining part of the e1 e1* image is the pure trace combination.
    rest = z.copy()
    e11 = matrix_unit(1, 1, d)
    for j in range(2, m + 2):
        emb = slot_embedding(j, e11, m, d)
        for i in range(len(perms)):
            if lam[i, j - 1] != 0:
                rest -= lam[i, j - 1] * emb[_row_perm(forwards[i])]
    u_digits = list(range(1, m + 1))
    u_flat = _basis_index(u_digits, d)
    col = rest[:, u_flat]
    for i in range(len(perms)):
        lam[i, 0] = col[forwards[i][u_flat]]
    mc = MultiCopyCoefficients(m, d, lam)
    residual = operator_norm(superop - realize_multi_superoperator(mc))
    return mc, residual


def covariance_residual_multi(
    superop, m: int, d: int, samples: int = 20, seed: int = 0
) -> float:
    """Largest covariance defect over sampled unitaries and matrix units."""
    _check_desk(m, d)
    superop = as_matrix(superop)
    if superop.shape != (d ** (2 * m), d * d):
        raise DimensionError(
            f"superoperator shape {superop.shape} does not match m={m}, d={d}"
        )
    if samples < 1:
        raise ValueError("need at least one sample")
    worst = 0.0
    for k in range(samples):
        u = haar_unitary(d, seed, k)
        um = reduce(np.kron, [u] * m)
        for a in range(1, d + 1):
            for b in range(1, d + 1):
                x = matrix_unit(a, b, d)
                lhs = unvec(superop @ vec(u @ x @ u.conj().T), d**m)
                rhs = um @ unvec(superop @ vec(x), d**m) @ um.conj().T
                worst = max(worst, operator_norm(lhs - rhs))
    return worst


@dataclass(frozen=True)
class SchurWeylFit:
    """Least-squares expansion of an operator over the slot permutations.

    degenerate marks a singular Gram matrix (d < m), where only the
    least-norm coefficient vector is reported.
    """

    coefficients: np.ndarray
    residual: float
    degenerate: bool


def schur_weyl_fit(t, m: int, d: int) -> SchurWeylFit:
    """Project an operator on (C^d)^(x m) onto the permutation span.

    Normal-equation solve with the exact Gram matrix; the residual is the
    Frobenius distance to the span, which is zero precisely for operators
    commuting with every U^(x m).
    """
    _check_desk(m, d)
    t = as_matrix(t)
    if t.shape != (d**m, d**m):
        raise DimensionError(f"operator shape {t.shape} does not match m={m}, d={d}")
    perms = enumerate_permutations(m)
    gammas = [permutation_operator(p, d) for p in perms]
    n = len(gammas)
    gram = np.empty((n, n), dtype=np.complex128)
    rhs = np.empty(n, dtype=np.complex128)
    for i in range(n):
        rhs[i] = np.vdot(gammas[i], t)
        for k in range(n):
            gram[i, k] = np.vdot(gammas[i], gammas[k])
    rank = np.linalg.matrix_rank(gram, hermitian=True)
    if rank < n:
        coeffs = np.linalg.pinv(gram, hermitian=True) @ rhs
        degenerate = True
    else:
        coeffs = np.linalg.solve(gram, rhs)
        degenerate = False
    approx = sum(coeffs[i] * gammas[i] for i in range(n))
    return SchurWeylFit(coeffs, frobenius_norm(t - approx), degenerate)


def from_two_copy(c: CovariantCoefficients) -> MultiCopyCoefficients:
    """Two-copy weights in table form: identity row then swap row."""
    c1, c2, c3, c4, c5, c6 = c.coeffs
    lam = np.array([[c5, c2, c1], [c6, c4, c3]], dtype=np.complex128)
    return MultiCopyCoefficients(2, c.d, lam)


def to_two_copy(mc: MultiCopyCoefficients) -> CovariantCoefficients:
    """Inverse of :func:`from_two_copy`; only defined for m = 2."""
    if mc.m != 2:
        raise ValueError(f"two-copy view needs m = 2, got m={mc.m}")
    lam = mc.lam
    return CovariantCoefficients(
        mc.d, (lam[0, 2], lam[0, 1], lam[1, 2], lam[1, 1], lam[0, 0], lam[1, 0])
    )
