"""Special-function layer: branch placement, scaled products, time symbol."""

import mpmath
import numpy as np
import pytest

from wavebem.specfun import (
    CutDomainError,
    HJKind,
    SpecfunError,
    bessel_j,
    hankel1_cut,
    hankel1_cut_deriv,
    hj_product,
    hj_table,
    phi_hat,
)

# ---------------------------------------------------------------------------
# Independent oracles (kept free of the module under test)
# ---------------------------------------------------------------------------


def j0_power_series(x: float, terms: int = 60) -> float:
    """J_0 by its power series; adequate for |x| <= 6."""
    total, term = 1.0, 1.0
    for k in range(1, terms):
        term *= -(x * x / 4.0) / (k * k)
        total += term
    return total


def bisect_j0_root(a: float, b: float, tol: float = 1e-14) -> float:
    fa = j0_power_series(a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if j0_power_series(mid) * fa > 0:
            a = mid
            fa = j0_power_series(a)
        else:
            b = mid
    return 0.5 * (a + b)


def mp_jv(n, z):
    return complex(mpmath.besselj(n, mpmath.mpc(z.real, z.imag)))


def mp_h1(n, z):
    return complex(mpmath.hankel1(n, mpmath.mpc(z.real, z.imag)))


# ---------------------------------------------------------------------------
# bessel_j
# ---------------------------------------------------------------------------


def test_j_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(7, 0.0) == 0.0


def test_j0_first_root_matches_series_oracle():
    root = bisect_j0_root(2.0, 3.0)
    assert abs(root - 2.404825557695773) < 1e-12  # oracle agrees with itself
    assert abs(bessel_j(0, root)) < 1e-10


@pytest.mark.parametrize("n", [0, 1, 5, 23])
def test_j_matches_series_small_argument(n):
    rng = np.random.default_rng(7)
    for _ in range(5):
        z = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
        if z == 0:
            continue
        ref = mp_jv(n, z)
        assert abs(bessel_j(n, z) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize(
    "n,z",
    [
        (150, 80.0 + 1.5j),
        (600, 550.0 - 2.0j),
        (40, 0.5 + 0.2j),
        (2000, 1900.0 + 0.5j),
    ],
)
def test_j_extreme_orders_vs_mpmath(n, z):
    mpmath.mp.dps = 40
    ref = mp_jv(n, complex(z))
    got = bessel_j(n, z)
    if ref == 0 or abs(ref) < 1e-300:
        assert abs(got) < 1e-300
    else:
        assert abs(got - ref) <= 1e-11 * abs(ref)


# ---------------------------------------------------------------------------
# hankel1_cut
# ---------------------------------------------------------------------------


def test_principal_in_right_half_plane():
    mpmath.mp.dps = 30
    for z in [1j, 2.0 + 0.0j, 3.0 - 1.0j, 0.3 + 2.0j]:
        for n in range(4):
            ref = mp_h1(n, z)
            assert abs(hankel1_cut(n, z) - ref) <= 1e-10 * abs(ref)


def test_continuous_across_negative_real_axis():
    eps = 1e-8
    for n in range(6):
        for x in (-3.0, -5.0, -7.0):
            above = hankel1_cut(n, x + 1j * eps)
            below = hankel1_cut(n, x - 1j * eps)
            assert abs(above - below) <= 1e-6
            # each principal-branch side deviates by 2 J_n from the cut-free
            # value, so continued-vs-principal differs by 4 J_n below the axis
            jump = abs(complex(mp_h1(n, x - 1j * eps)) - below)
            target = abs(4 * bessel_j(n, -x))
            assert abs(jump - target) < 0.05 * target


def test_derivative_continuous_across_negative_real_axis():
    h = 1e-5
    for n in range(6):
        for x in (-3.0, -7.0):
            up = (hankel1_cut(n, x + h + 1e-7j) - hankel1_cut(n, x - h + 1e-7j)) / (2 * h)
            dn = (hankel1_cut(n, x + h - 1e-7j) - hankel1_cut(n, x - h - 1e-7j)) / (2 * h)
            assert abs(up - dn) <= 1e-5 * max(1.0, abs(up))


@pytest.mark.parametrize("n", [0, 1, 5])
def test_wronskian_identity_any_sheet(n):
    for z in (3.0 + 0.5j, -4.0 - 0.5j, -2.5 + 1.0j):
        z = complex(z)
        lhs = hankel1_cut(n, z) * (
            (bessel_j(n - 1, z) if n > 0 else -bessel_j(1, z)) - n / z * bessel_j(n, z)
        ) - hankel1_cut_deriv(n, z) * bessel_j(n, z)
        assert abs(lhs - (-2j / (np.pi * z))) < 1e-10


def test_cut_rejected():
    with pytest.raises(CutDomainError):
        hankel1_cut(0, -1j)
    with pytest.raises(CutDomainError):
        hankel1_cut(2, 0.0)


def test_overflow_is_loud():
    with pytest.raises(SpecfunError):
        hankel1_cut(60, 1e-6 + 0j)


# ---------------------------------------------------------------------------
# hj_product
# ---------------------------------------------------------------------------


def test_s_product_vanishes_at_j0_root():
    root = bisect_j0_root(2.0, 3.0)
    assert abs(hj_product(HJKind.S, 0, root, 1.0)) < 1e-9


def test_sdot_is_defined_from_s():
    rng = np.random.default_rng(3)
    for _ in range(8):
        omega = complex(rng.uniform(0.5, 40), rng.uniform(-1.5, 1.5))
        n = int(rng.integers(0, 12))
        lhs = hj_product(HJKind.SDOT, n, omega, 1.0)
        rhs = -1j * omega * hj_product(HJKind.S, n, omega, 1.0)
        assert abs(lhs - rhs) <= 1e-14 * abs(rhs)


def test_m_product_small_order_matches_direct():
    omega = 0.3 + 0.1j
    k = omega / 1.0
    h1p = hankel1_cut_deriv(1, k)
    j1p = bessel_j(0, k) - (1 / k) * bessel_j(1, k)
    direct = -(k**2) * h1p * j1p / (1j * omega)
    got = hj_product(HJKind.M_OP, 1, omega, 1.0)
    assert np.isfinite(got)
    assert abs(got - direct) <= 1e-12 * abs(direct)


def test_m_product_rejects_zero_frequency():
    with pytest.raises(ValueError):
        hj_product(HJKind.M_OP, 1, 0.0, 1.0)


@pytest.mark.parametrize("kind", list(HJKind))
def test_even_order_symmetry(kind):
    omega = 5.0 - 0.4j
    for n in (1, 4, 9):
        assert hj_product(kind, -n, omega, 1.3) == hj_product(kind, n, omega, 1.3)


@pytest.mark.parametrize(
    "n,omega",
    [(60, 1e-8 + 1e-8j), (60, 0.3 - 0.2j), (200, 2.0 + 1.0j), (45, 30.0 - 1.0j)],
)
def test_products_survive_extreme_scales(n, omega):
    mpmath.mp.dps = 60
    z = mpmath.mpc(omega.real, omega.imag)
    ref = complex(mpmath.hankel1(n, z) * mpmath.besselj(n, z))
    got = hj_product(HJKind.S, n, omega, 1.0)
    assert np.isfinite(got)
    assert abs(got - ref) <= 1e-10 * abs(ref)


def test_product_array_path_matches_scalar():
    omegas = np.array([0.5 + 0.1j, 3.0 - 1.0j, 80.0 + 0.5j])
    arr = hj_product(HJKind.D_PLUS_DT_MINUS, 3, omegas, 0.9)
    for w, a in zip(omegas, arr):
        assert abs(a - hj_product(HJKind.D_PLUS_DT_MINUS, 3, complex(w), 0.9)) < 1e-13 * abs(a)


def test_hj_table_consistent_with_products():
    omega = 4.0 - 0.3j
    table = hj_table(30, omega, 1.1)
    for kind in HJKind:
        for n in (0, 1, 7, 30):
            want = hj_product(kind, n, omega, 1.1)
            assert abs(table[kind][n] - want) <= 1e-10 * max(abs(want), 1e-30)


def test_hj_table_extreme_orders_finite():
    table = hj_table(2100, 0.7 - 0.2j, 0.7352)
    for kind in HJKind:
        assert np.all(np.isfinite(table[kind]))
    # H_n J_n ~ -i / (pi n) for n >> |z|
    approx = -1j / (np.pi * 2100)
    assert abs(table[HJKind.S][2100] - approx) < 0.05 * abs(approx)


# ---------------------------------------------------------------------------
# phi_hat
# ---------------------------------------------------------------------------


def test_phi_hat_pinned_values():
    dt = 2 * np.pi / 100
    assert abs(phi_hat(0.0, dt) - dt) < 1e-16
    assert abs(phi_hat(2 * np.pi / dt, dt)) < 1e-12
    assert abs(phi_hat(np.pi / dt, dt) - 4 * dt / np.pi**2) < 1e-14


def test_phi_hat_series_joins_direct_branch():
    dt = 0.1
    for mag in (0.49, 0.51):  # straddle the branch switch in x = omega dt
        omega = mag / dt
        direct = 2 * (1 - np.cos(omega * dt)) / (omega**2 * dt)
        assert abs(phi_hat(omega, dt) - direct) < 1e-14


def test_phi_hat_tends_to_dt_quadratically():
    omega = 3.7 + 0.2j
    errs = []
    for dt in (1e-2, 1e-4, 1e-6):
        errs.append(abs(phi_hat(omega, dt) / dt - 1.0))
    assert errs[0] > errs[1] > errs[2]
    # O(dt^2): each 100x smaller dt shrinks the defect by ~1e4
    assert errs[1] < 1e-3 * errs[0]
    assert errs[2] < 1e-3 * errs[1]
