import numpy as np
import pytest

from covmap.linalg import Tolerance, operator_norm
from covmap.norms import (
    CbNormResult,
    TraceTermsError,
    cb_norm,
    corner_coefficients,
    corner_norm_bound_check,
    monte_carlo_norm,
    psi_identity_norm,
)
from covmap.operators import haar_unitary, swap_operator
from covmap.twocopy import CovariantCoefficients, apply_map, virtual_broadcast_coefficients


def test_psi_identity_norm_examples():
    assert psi_identity_norm(CovariantCoefficients(3, (1, 1, 1, 1, 0, 0))) == pytest.approx(4.0)
    # identity image cancels entirely here even though the map is nonzero
    assert psi_identity_norm(CovariantCoefficients(3, (1, -1, 1, -1, 0, 0))) == 0.0
    assert psi_identity_norm(CovariantCoefficients(2, (1, 1, -1, -1, 0, 0))) == pytest.approx(4.0)
    # swap-symmetric: c1=c2, c3=c4 gives |c1+c2+c3+c4| or |c3+c4-c1-c2| extremes
    assert psi_identity_norm(CovariantCoefficients(3, (1, 1, -3, -3, 0, 0))) == pytest.approx(8.0)


def test_psi_identity_norm_matches_direct_operator_norm():
    rng = np.random.default_rng(20)
    for _ in range(40):
        d = int(rng.choice([2, 3, 4]))
        vals = rng.uniform(-2, 2, 8)
        c = CovariantCoefficients(
            d,
            (
                complex(vals[0], vals[1]),
                complex(vals[2], vals[3]),
                complex(vals[4], vals[5]),
                complex(vals[6], vals[7]),
                0,
                0,
            ),
        )
        direct = operator_norm(apply_map(c, np.eye(d)))
        assert psi_identity_norm(c) == pytest.approx(direct, abs=1e-10)


def test_trace_terms_rejected():
    with pytest.raises(TraceTermsError):
        psi_identity_norm(CovariantCoefficients(3, (1, 1, 0, 0, 0.1, 0)))
    with pytest.raises(TraceTermsError):
        cb_norm(CovariantCoefficients(3, (1, 1, 0, 0, 0, 1e-6)))


def test_corner_coefficients_direct_substitution():
    c = CovariantCoefficients(3, (0.2, -0.7, 1.5 + 1j, 0.4 - 2j, 0, 0))
    l1, l2, l3, l4 = c.as_array()[:4]
    m1, m2, m3, m4 = corner_coefficients(c)
    assert m1 == pytest.approx(l1 + l2 + l3 + l4)
    assert m2 == pytest.approx(l1 - l2 + l3 - l4)
    assert m3 == pytest.approx(l1 - l2 - l3 + l4)
    assert m4 == pytest.approx(l1 + l2 - l3 - l4)
    # inverting: corner values at the four sign patterns recover the map on I
    assert m1 + m4 == pytest.approx(2 * (l1 + l2))


def test_cb_norm_swap_symmetric_exact():
    res = cb_norm(virtual_broadcast_coefficients(3))
    assert isinstance(res, CbNormResult)
    assert res.value_kind == "exact"
    assert res.method == "swap-symmetric"
    assert res.value == pytest.approx(1.0)

    res = cb_norm(CovariantCoefficients(3, (1, 1, 1, 1, 0, 0)))
    assert res.value_kind == "exact"
    assert res.value == pytest.approx(4.0)

    res = cb_norm(CovariantCoefficients(2, (0.5, 0.5, -2, -2, 0, 0)))
    assert res.value_kind == "exact"
    # m1 = c1+c2+c3+c4 = -3, m4 = c1+c2-c3-c4 = 5
    assert res.value == pytest.approx(5.0)


def test_cb_norm_variety_bracket():
    # c1 c2 = c3 c4 but the middle corners dominate
    c = CovariantCoefficients(3, (1, -1, 1, -1, 0, 0))
    res = cb_norm(c, samples=200, seed=5)
    assert res.value_kind == "bracket"
    assert res.method == "corner-compression"
    lo, hi = res.value
    assert hi == pytest.approx(4.0)
    assert 2.0 <= lo <= hi + 1e-9


def test_cb_norm_variety_exact_when_outer_corners_dominate():
    # c = (2, 1, 2, 1): c1 c2 = 2 = c3 c4, corners (6, 2, 0, 0)
    c = CovariantCoefficients(3, (2, 1, 2, 1, 0, 0))
    res = cb_norm(c)
    assert res.value_kind == "exact"
    assert res.method == "corner-compression"
    assert res.value == pytest.approx(6.0)


def test_cb_norm_generic_lower_bound():
    c = CovariantCoefficients(3, (1, 0.3, 0.7, -0.2, 0, 0))
    res = cb_norm(c, samples=150, seed=7)
    assert res.value_kind == "lower_bound"
    assert res.method == "monte-carlo"
    assert res.value >= psi_identity_norm(c) - 1e-9
    assert res.detail["samples"] == 150


def test_monte_carlo_norm_dominates_identity_value():
    rng = np.random.default_rng(22)
    for _ in range(10):
        vals = rng.uniform(-1, 1, 4)
        c = CovariantCoefficients(3, (*vals, 0, 0))
        mc = monte_carlo_norm(c, samples=60, seed=3)
        assert mc >= psi_identity_norm(c) - 1e-9


def test_monte_carlo_norm_respects_variety_upper_bound():
    rng = np.random.default_rng(23)
    for _ in range(10):
        l1, l2 = rng.uniform(-1.5, 1.5, 2)
        l3 = rng.uniform(-1.5, 1.5)
        if abs(l3) < 1e-3:
            l3 = 0.5
        l4 = l1 * l2 / l3
        c = CovariantCoefficients(3, (l1, l2, l3, l4, 0, 0))
        bound = max(abs(m) for m in corner_coefficients(c))
        mc = monte_carlo_norm(c, samples=80, seed=4)
        assert mc <= bound + 1e-9


def test_monte_carlo_norm_known_values():
    # symmetrized doubling has map norm exactly 1; sampling cannot exceed it
    val = monte_carlo_norm(virtual_broadcast_coefficients(3), samples=200, seed=1)
    assert 1.0 <= val <= 1.0 + 1e-9
    assert monte_carlo_norm(CovariantCoefficients(3, (0, 0, 0, 0, 0, 0)), samples=20, seed=0) == 0.0


def test_monte_carlo_norm_deterministic():
    c = CovariantCoefficients(3, (1, 0.3, 0.7, -0.2, 0, 0))
    a = monte_carlo_norm(c, samples=50, seed=9)
    b = monte_carlo_norm(c, samples=50, seed=9)
    assert a == b
    assert monte_carlo_norm(c, samples=50, seed=10) != a


def test_corner_norm_bound_check_random_trials():
    rng = np.random.default_rng(24)
    for n, k in ((4, 2), (6, 3)):
        u = haar_unitary(n, seed=int(rng.integers(1000)))
        p = u[:, :k] @ u[:, :k].conj().T
        for _ in range(20):
            m1, m2 = rng.uniform(-2, 2, 2)
            m3 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(m1) < 1e-3:
                m1 = 1.0
            m4 = m2 * m3 / m1  # m1 m4 = m2 m3
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            assert corner_norm_bound_check(p, a, (m1, m2, m3, m4))


def test_corner_norm_bound_check_validation():
    p = np.eye(4)[:, :2] @ np.eye(4)[:2, :]
    a = np.eye(4, dtype=complex)
    with pytest.raises(ValueError):
        corner_norm_bound_check(np.ones((4, 4)), a, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        # 1*1 != 2*3 violates the compression constraint
        corner_norm_bound_check(p, a, (1, 2, 3, 1))


def test_corner_decomposition_reassembles_operator():
    # the four compressions of any operator add back up to it
    rng = np.random.default_rng(25)
    n = 5
    u = haar_unitary(n, seed=77)
    p = u[:, :2] @ u[:, :2].conj().T
    q = np.eye(n) - p
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    total = p @ a @ p + p @ a @ q + q @ a @ p + q @ a @ q
    assert np.abs(total - a).max() < 1e-12


def test_swap_moves_between_corner_families():
    # S times the swapped pair gives the plain pair, since S squares to I
    s = swap_operator(3)
    rng = np.random.default_rng(26)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    y = apply_map(CovariantCoefficients(3, (0, 0, 0.5, 0.5, 0, 0)), x)
    z = apply_map(CovariantCoefficients(3, (0.5, 0.5, 0, 0, 0, 0)), x)
    assert np.abs(s @ y - z).max() < 1e-12


def test_virtual_broadcaster_cb_norm_is_one():
    for d in (2, 3, 4):
        res = cb_norm(virtual_broadcast_coefficients(d))
        assert res.value_kind == "exact"
        assert res.value == pytest.approx(1.0)
