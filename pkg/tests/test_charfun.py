"""Characteristic lattice series, transmission matrices, discrete operator."""

import numpy as np
import pytest

from wavebem.charfun import (
    CutProximityError,
    SeriesControl,
    bm_series,
    dirichlet_series,
    discrete_mode_matrix,
    discrete_operator,
    formulation_zero_root,
    mode_series,
    transmission_matrix,
    transmission_matrix_pv,
    zero_limit,
    _window_matrices,
)
from wavebem.formulations import Formulation, MaterialPair, MaterialParams
from wavebem.specfun import HJKind

DT = 2 * np.pi / 100
PROBE = 1e-8 * (1 + 1j) / np.sqrt(2)  # just off the branch point at 0


# ---------------------------------------------------------------------------
# omega -> 0 behaviour (the zero-root ledger)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [0, 5, 20, 60])
def test_time_derivative_series_vanishes_at_zero(n):
    assert zero_limit(HJKind.SDOT, n, DT) == 0
    assert abs(mode_series(HJKind.SDOT, n, PROBE, 1.0, DT)) < 1e-8


def test_dt_minus_series_vanishes_at_zero_only_for_n0():
    assert abs(mode_series(HJKind.D_PLUS_DT_MINUS, 0, PROBE, 1.0, DT)) < 1e-8
    for n in (1, 2, 3):
        val = mode_series(HJKind.D_PLUS_DT_MINUS, n, PROBE, 1.0, DT)
        assert abs(val) > 1e-4
        assert abs(val - zero_limit(HJKind.D_PLUS_DT_MINUS, n, DT)) < 1e-6


def test_bm_series_vanishes_at_zero_only_for_n0():
    assert abs(bm_series(0, PROBE, 1.0, DT)) < 1e-8
    for n in (1, 2, 3):
        assert abs(bm_series(n, PROBE, 1.0, DT)) > 1e-4


def test_augmented_bm_has_no_zero_root():
    for n in (0, 1):
        assert abs(bm_series(n, PROBE, 1.0, DT, alpha=1.0)) > 1e-4
        assert not formulation_zero_root(Formulation.OUT4, n, DT)


def test_zero_limits_match_small_argument_forms():
    # H_n J_n -> -i/(pi n): S limit
    for n in (1, 4, 9):
        assert zero_limit(HJKind.S, n, DT) == pytest.approx(-1j * DT / (np.pi * n))
    assert zero_limit(HJKind.S, 0, DT) is None  # log-divergent
    assert zero_limit(HJKind.M_OP, 5, DT) is None  # 1/omega-divergent
    assert zero_limit(HJKind.M_OP, 0, DT) == 0


def test_zero_root_table():
    assert all(formulation_zero_root(Formulation.OUT2, n, DT) for n in range(61))
    assert formulation_zero_root(Formulation.OUT2_5, 0, DT)
    assert not formulation_zero_root(Formulation.OUT2_5, 1, DT)
    assert formulation_zero_root(Formulation.OUT3, 0, DT)
    assert not formulation_zero_root(Formulation.OUT1, 0, DT)
    assert all(formulation_zero_root(Formulation.STANDARD_MOD, n, DT) for n in range(5))
    assert formulation_zero_root(Formulation.BM_MOD, 0, DT)
    assert not formulation_zero_root(Formulation.BM_MOD, 1, DT)
    assert not formulation_zero_root(Formulation.PMCHWT_MOD, 2, DT)
    assert not formulation_zero_root(Formulation.MUELLER_MOD, 2, DT)


# ---------------------------------------------------------------------------
# series mechanics
# ---------------------------------------------------------------------------


def test_truncation_insensitive():
    v100 = mode_series(HJKind.S, 5, 10 - 0.5j, 1.0, DT, SeriesControl.fixed_terms(100))
    v1000 = mode_series(HJKind.S, 5, 10 - 0.5j, 1.0, DT, SeriesControl.fixed_terms(1000))
    assert abs(v100 - v1000) < 1e-6 * abs(v1000)


def test_tail_mode_agrees_with_fixed():
    # terms decay like 1/m^2, so the tail tolerance sets the truncation level
    fixed = mode_series(HJKind.SDOT, 3, 22.0 - 0.7j, 1.0, DT, SeriesControl.fixed_terms(2000))
    tail = mode_series(HJKind.SDOT, 3, 22.0 - 0.7j, 1.0, DT, SeriesControl.tail(1e-6))
    assert abs(fixed - tail) < 1e-3 * abs(fixed)


def test_bm_series_is_linear_combination():
    omega = 7.0 - 0.3j
    f2 = mode_series(HJKind.D_PLUS_DT_MINUS, 4, omega, 1.0, DT)
    f1 = mode_series(HJKind.SDOT, 4, omega, 1.0, DT)
    assert bm_series(4, omega, 1.0, DT) == pytest.approx(f2 + f1 / 1.0, rel=1e-13)


def test_series_control_validation():
    with pytest.raises(ValueError):
        SeriesControl.fixed_terms(4)
    with pytest.raises(ValueError):
        SeriesControl(mode="bogus")


def test_cut_proximity_rejected():
    with pytest.raises(CutProximityError):
        # Re(omega) = 0 exactly, below the axis: on the shifted-cut line
        mode_series(HJKind.S, 2, -0.5j + 1e-12, 1.0, DT)


def test_absolute_convergence_tail_shrinks():
    omega = 9.0 - 0.4j
    sizes = []
    for half in (20, 40, 80):
        om = omega - 2 * np.pi * np.array([half, half + 1, half + 2]) / DT
        from wavebem.specfun import hj_bundle, phi_hat

        vals = hj_bundle(5, om, 1.0)[HJKind.SDOT] * phi_hat(om, DT)
        sizes.append(np.abs(vals).max())
    assert sizes[0] > sizes[1] > sizes[2]


# ---------------------------------------------------------------------------
# transmission matrices
# ---------------------------------------------------------------------------

PARAMS = MaterialPair()


def test_pmchwt_entry_scaling_near_zero():
    # [o(w), O(w); O(1/w), o(w)]: the |entry(w)/entry(2w)| ratios
    for n in (1, 2, 3):
        k1 = np.abs(transmission_matrix(Formulation.PMCHWT_MOD, n, 0.01 - 0.001j, PARAMS, DT))
        k2 = np.abs(transmission_matrix(Formulation.PMCHWT_MOD, n, 0.02 - 0.002j, PARAMS, DT))
        ratio = k1 / k2
        assert ratio[0, 1] == pytest.approx(0.5, rel=0.2)
        assert ratio[1, 0] == pytest.approx(2.0, rel=0.2)
        assert ratio[0, 0] < 0.4  # strictly faster than O(omega)
        assert ratio[1, 1] < 0.4


def test_mueller_entries_near_zero():
    k = np.abs(transmission_matrix(Formulation.MUELLER_MOD, 2, 0.01 - 0.001j, PARAMS, DT))
    assert k[0, 0] > 1e-3 and k[1, 1] > 1e-3  # O(1) diagonal
    assert k[0, 1] < 1e-2 * k[0, 0]
    assert k[1, 0] < 1e-2 * k[1, 1]


@pytest.mark.parametrize(
    "formulation",
    [
        Formulation.PMCHWT_MOD,
        Formulation.MUELLER_MOD,
        Formulation.BM_MOD,
        Formulation.STANDARD_MOD,
    ],
)
def test_pv_constants_equal_absorbed_traces(formulation):
    a = transmission_matrix(formulation, 3, 5.0 - 0.5j, PARAMS, DT)
    b = transmission_matrix_pv(formulation, 3, 5.0 - 0.5j, PARAMS, DT)
    assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(a))


def test_ordinary_formulations_have_no_matrix():
    with pytest.raises(ValueError):
        transmission_matrix(Formulation.PMCHWT, 1, 1.0 - 0.1j, PARAMS, DT)


def test_no_contrast_means_no_roots():
    # identical media: the scatterer disappears; a scan over a few boxes
    # finds no certified roots
    from wavebem.charfun import transmission_problems
    from wavebem.ssm import scan_strip

    same = MaterialPair(MaterialParams(1.0, 1.0), MaterialParams(1.0, 1.0))
    probs = transmission_problems(Formulation.MUELLER_MOD, 4, same, DT)
    rs = scan_strip(probs, (0.5, 20.0, -1.5, 1.5), grid=(4, 2))
    assert len(rs.roots) == 0


# ---------------------------------------------------------------------------
# space-discretised operator
# ---------------------------------------------------------------------------


def test_window_matrix_trivia():
    U, V = _window_matrices(100, 30)
    assert np.allclose(V[30], 1.0 / 100)  # l = 0 row
    assert np.allclose(U[:, 30], 1.0)  # l = 0 column


def test_discrete_operator_is_circulant_and_matches_mode_symbol():
    omega = 11.0 - 0.4j
    N, M = 40, 40 * 10 + 20
    A = discrete_operator(HJKind.SDOT, omega, N, DT, c=1.0, m_trunc=M)
    # circulant: commutes with the cyclic shift
    P = np.roll(np.eye(N), 1, axis=1)
    assert np.max(np.abs(P @ A - A @ P)) < 1e-10 * np.max(np.abs(A))
    # eigenvector e^{i n theta_mid}: eigenvalue equals the aliased symbol
    theta_mid = 2 * np.pi * (np.arange(1, N + 1) + 0.5) / N
    for n in (0, 3, 11):
        v = np.exp(1j * n * theta_mid)
        lam = discrete_mode_matrix(HJKind.SDOT, n, omega, N, DT, c=1.0, m_trunc=M)[0, 0]
        assert np.max(np.abs(A @ v - lam * v)) < 1e-8 * max(abs(lam), 1e-12) * np.linalg.norm(v)


def test_discrete_mode_matrix_tends_to_continuum():
    omega = 6.0 - 0.3j
    cont = mode_series(HJKind.SDOT, 4, omega, 1.0, DT)
    vals = []
    for N in (50, 100, 200):
        lam = discrete_mode_matrix(HJKind.SDOT, 4, omega, N, DT, c=1.0)[0, 0]
        vals.append(abs(lam - cont))
    assert vals[0] > vals[1] > vals[2]


def test_discrete_transmission_block_shape():
    A = discrete_operator(
        Formulation.MUELLER_MOD, 3.0 - 0.2j, 24, DT, params=PARAMS, m_trunc=120
    )
    assert A.shape == (48, 48)
    K = discrete_mode_matrix(
        Formulation.MUELLER_MOD, 2, 3.0 - 0.2j, 24, DT, params=PARAMS, m_trunc=120
    )
    assert K.shape == (2, 2)


# ---------------------------------------------------------------------------
# symmetry of the root set
# ---------------------------------------------------------------------------


def test_roots_mirror_about_half_period():
    """omega -> -conj(omega) + 2 pi/dt maps roots to roots."""
    from wavebem.charfun import dirichlet_problems
    from wavebem.ssm import ContourBox, ssm_solve

    probs = dirichlet_problems(Formulation.OUT2, 5, 1.0, DT)
    prob = probs[3]
    period = 2 * np.pi / DT
    left = ssm_solve(prob, ContourBox(12.0 - 0.5j, (3.0, 1.2)))
    right = ssm_solve(prob, ContourBox(period - 12.0 - 0.5j, (3.0, 1.2)))
    got = sorted((period - r.omega.conjugate() for r in right), key=lambda z: z.real)
    want = sorted((r.omega for r in left), key=lambda z: z.real)
    assert len(got) == len(want) > 0
    for a, b in zip(got, want):
        # exact for the infinite series; the 100-term truncation maps the
        # index set m -> 1 - m, leaving a boundary-term defect ~1e-6
        assert abs(a - b) < 2e-5
