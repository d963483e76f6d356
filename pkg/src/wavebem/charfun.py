"""Characteristic functions whose zeros are the marching-scheme roots.

The time-discretised scheme on the unit circle decouples into Fourier
modes.  For mode n the symbol of each time-discretised boundary operator
is a lattice series

    sum_m  {HJ-product}(omega_m) * phi_hat(omega_m),   omega_m = omega - 2 pi m / dt,

absolutely convergent for the five product kinds exposed here (the
hypersingular and time-differentiated double-layer series are not
absolutely convergent with a piecewise-linear time basis and are
deliberately not provided).  Constant prefactors common to all terms are
dropped throughout: zeros are unaffected, raw magnitudes across kinds are
not comparable.

Trace bookkeeping for the 2x2 transmission systems absorbs the +-1/2 jump
constants into the choice of trace per entry (for example
-(D1_pv + D2_pv) = -(D1^- + D2^+)), which reproduces the constant-free
displayed characteristic matrices; ``transmission_matrix_pv`` keeps the
explicit-constant form for cross-checking, with the identity represented
in dropped-prefactor units by (f2 - f3) = -2 i dt / pi.

The space-discretised variant replaces the single mode-n product by the
windowed operator U diag(D_l) V of piecewise-constant elements; on the
uniform mesh it is circulant and ``discrete_mode_matrix`` evaluates its
symbol as the aliased window sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .formulations import Formulation, MaterialPair
from .specfun import HJKind, hj_bundle, hj_bundle_grid, hj_table, phi_hat

__all__ = [
    "SeriesControl",
    "CharProblem",
    "CutProximityError",
    "mode_series",
    "bm_series",
    "dirichlet_series",
    "transmission_matrix",
    "transmission_matrix_pv",
    "zero_limit",
    "formulation_zero_root",
    "discrete_operator",
    "discrete_mode_matrix",
    "dirichlet_problems",
    "transmission_problems",
    "discrete_problems",
]

_CUT_MARGIN = 1e-9


class CutProximityError(ValueError):
    """Evaluation point within the safety margin of a lattice-shifted cut."""


@dataclass(frozen=True)
class SeriesControl:
    """Lattice truncation: fixed symmetric term count or tail tolerance.

    ``fixed_terms(c)`` sums the shifts |m| <= c // 2.  In tail mode the sum
    is grown pairwise outward until three consecutive increments fall below
    tail_tol times the running magnitude.
    """

    mode: str = "fixed"  # "fixed" | "tail"
    terms: int = 100
    tail_tol: float = 1e-10
    max_terms: int = 2000

    def __post_init__(self):
        if self.mode not in ("fixed", "tail"):
            raise ValueError("mode must be 'fixed' or 'tail'")
        if self.mode == "fixed" and self.terms < 10:
            raise ValueError("fixed mode needs at least 10 terms")

    @staticmethod
    def fixed_terms(count: int) -> "SeriesControl":
        return SeriesControl(mode="fixed", terms=count)

    @staticmethod
    def tail(tol: float) -> "SeriesControl":
        return SeriesControl(mode="tail", tail_tol=tol)


DEFAULT_CTRL = SeriesControl()


def _lattice_shifts(omega: complex, dt: float, half: int) -> np.ndarray:
    m = np.arange(-half, half + 1)
    return omega - 2.0 * np.pi * m / dt


def _check_cut_margin(omega_m: np.ndarray, c: float) -> None:
    z = omega_m / c
    dist = np.where(z.imag < 0, np.abs(z.real), np.abs(z))
    if np.any(dist < _CUT_MARGIN):
        raise CutProximityError(
            "evaluation within 1e-9 of a lattice-shifted branch cut"
        )


def _pairwise_sum(vals: np.ndarray) -> complex:
    """Sum a symmetric lattice array: pairs (m, -m) first, outermost first."""
    half = (len(vals) - 1) // 2
    total = 0.0 + 0.0j
    for p in range(half, 0, -1):
        total += vals[half + p] + vals[half - p]
    return total + vals[half]


# One bundle evaluation per (omega, c, dt, half, n) is shared by the four
# f's of a transmission entry and by repeated calls at the same node.
_BUNDLE_CACHE: dict = {}
_BUNDLE_CACHE_CAP = 256


def _mode_terms(kind: HJKind, n: int, omega: complex, c: float, dt: float, half: int) -> np.ndarray:
    key = (round(omega.real, 14), round(omega.imag, 14), c, dt, half, n)
    hit = _BUNDLE_CACHE.get(key)
    if hit is None:
        om = _lattice_shifts(omega, dt, half)
        _check_cut_margin(om, c)
        hit = hj_bundle(n, om, c)
        if len(_BUNDLE_CACHE) >= _BUNDLE_CACHE_CAP:
            _BUNDLE_CACHE.clear()
        _BUNDLE_CACHE[key] = hit
    return hit[kind]


def mode_series(
    kind: HJKind,
    n: int,
    omega: complex,
    c: float,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> complex:
    """Lattice series of one product kind at mode n.

    The shifts omega_m are always recomputed exactly from (omega, m, dt).
    """
    omega = complex(omega)
    if ctrl.mode == "fixed":
        half = ctrl.terms // 2
        om = _lattice_shifts(omega, dt, half)
        _check_cut_margin(om, c)
        vals = _mode_terms(kind, n, omega, c, dt, half) * phi_hat(om, dt)
        return _pairwise_sum(vals)
    # tail mode
    partial = 0.0 + 0.0j
    streak = 0
    for p in range(0, ctrl.max_terms // 2 + 1):
        if p == 0:
            om = np.asarray([omega])
        else:
            om = np.asarray(
                [omega - 2 * np.pi * p / dt, omega + 2 * np.pi * p / dt]
            )
        _check_cut_margin(om, c)
        inc = complex(np.sum(hj_bundle(n, om, c)[kind] * phi_hat(om, dt)))
        partial += inc
        if p >= 1:
            if abs(inc) < ctrl.tail_tol * max(abs(partial), 1e-300):
                streak += 1
                if streak >= 3:
                    return partial
            else:
                streak = 0
    raise RuntimeError("tail-controlled series did not settle")


def _f(idx: int, n: int, omega: complex, c: float, dt: float, ctrl: SeriesControl) -> complex:
    kind = {
        1: HJKind.SDOT,
        2: HJKind.D_PLUS_DT_MINUS,
        3: HJKind.D_MINUS_DT_PLUS,
        4: HJKind.M_OP,
    }[idx]
    return mode_series(kind, n, omega, c, dt, ctrl)


def bm_series(
    n: int,
    omega: complex,
    c: float,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
    alpha: float = 0.0,
) -> complex:
    """Combined-trace series H (omega_m/c)(J' - i J) phi_hat, optionally
    augmented by alpha times the plain single-layer series."""
    val = _f(2, n, omega, c, dt, ctrl) + _f(1, n, omega, c, dt, ctrl) / c
    if alpha:
        val += alpha * mode_series(HJKind.S, n, omega, c, dt, ctrl)
    return val


def dirichlet_series(
    formulation: Formulation,
    n: int,
    omega: complex,
    c: float,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
    alpha: float = 1.0,
) -> complex:
    """Characteristic function of a Dirichlet formulation at mode n."""
    if formulation is Formulation.OUT1:
        return mode_series(HJKind.S, n, omega, c, dt, ctrl)
    if formulation is Formulation.OUT2:
        return _f(1, n, omega, c, dt, ctrl)
    if formulation is Formulation.OUT2_5:
        return _f(2, n, omega, c, dt, ctrl)
    if formulation is Formulation.OUT3:
        return bm_series(n, omega, c, dt, ctrl)
    if formulation is Formulation.OUT4:
        return bm_series(n, omega, c, dt, ctrl, alpha=alpha)
    raise ValueError(f"{formulation} is not a Dirichlet formulation")


def _matrix_from_f(formulation: Formulation, f, s1, s2, c1, c2) -> np.ndarray:
    """Assemble a modified-formulation 2x2 matrix from an f(i, c) provider."""
    if formulation is Formulation.PMCHWT_MOD:
        return np.array(
            [
                [-(f(3, c1) + f(2, c2)), f(1, c1) / s1 + f(1, c2) / s2],
                [-(s1 * f(4, c1) + s2 * f(4, c2)), f(2, c1) + f(3, c2)],
            ]
        )
    if formulation is Formulation.MUELLER_MOD:
        return np.array(
            [
                [-(s1 * f(3, c1) - s2 * f(2, c2)), f(1, c1) - f(1, c2)],
                [-(f(4, c1) - f(4, c2)), f(2, c1) / s1 - f(3, c2) / s2],
            ]
        )
    if formulation is Formulation.BM_MOD:
        return np.array(
            [
                [-(f(4, c1) + f(3, c1) / c1), f(2, c1) / s1 + f(1, c1) / (c1 * s1)],
                [-f(2, c2), f(1, c2) / s2],
            ]
        )
    if formulation is Formulation.STANDARD_MOD:
        return np.array(
            [
                [-f(3, c1), f(1, c1) / s1],
                [f(2, c2), -f(1, c2) / s2],
            ]
        )
    raise AssertionError(formulation)


def transmission_matrix(
    formulation: Formulation,
    n: int,
    omega: complex,
    params: MaterialPair,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> np.ndarray:
    """2x2 characteristic matrix of a modified transmission formulation.

    Entries combine f1..f4 at the two wave speeds with the jump constants
    absorbed into the trace choice (constant-free form).
    """
    if not (formulation.is_transmission and formulation.is_modified):
        raise ValueError(f"{formulation} has no absolutely convergent matrix")

    def f(i, c):
        return _f(i, n, omega, c, dt, ctrl)

    return _matrix_from_f(formulation, f, params.s1, params.s2, params.c1, params.c2)


def transmission_matrix_pv(
    formulation: Formulation,
    n: int,
    omega: complex,
    params: MaterialPair,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> np.ndarray:
    """Same matrices in principal-value + explicit-constant form.

    The identity operator, in the units where all common prefactors are
    dropped, is (f2 - f3) = -2 i dt / pi; the principal value of a D-type
    trace is the average (f2 + f3) / 2.  Used as a cross-check of the
    constant-absorption convention.
    """
    if not (formulation.is_transmission and formulation.is_modified):
        raise ValueError(f"{formulation} has no absolutely convergent matrix")
    s1, s2 = params.s1, params.s2
    c1, c2 = params.c1, params.c2

    def f(i, c):
        return _f(i, n, omega, c, dt, ctrl)

    def dpv(c):  # principal value of D / D^T-type entries
        return 0.5 * (f(2, c) + f(3, c))

    one = (f(2, c1) - f(3, c1))  # identity in dropped-prefactor units
    # (f2 - f3) is c-independent: equals -2 i dt / pi exactly in the limit.
    if formulation is Formulation.PMCHWT_MOD:
        return np.array(
            [
                [-(dpv(c1) + dpv(c2)), f(1, c1) / s1 + f(1, c2) / s2],
                [-(s1 * f(4, c1) + s2 * f(4, c2)), dpv(c1) + dpv(c2)],
            ]
        )
    if formulation is Formulation.MUELLER_MOD:
        return np.array(
            [
                [
                    0.5 * (s1 + s2) * one - (s1 * dpv(c1) - s2 * dpv(c2)),
                    f(1, c1) - f(1, c2),
                ],
                [
                    -(f(4, c1) - f(4, c2)),
                    0.5 * (s1 + s2) / (s1 * s2) * one + dpv(c1) / s1 - dpv(c2) / s2,
                ],
            ]
        )
    if formulation is Formulation.BM_MOD:
        return np.array(
            [
                [
                    0.5 / c1 * one - (f(4, c1) + dpv(c1) / c1),
                    0.5 / s1 * one + dpv(c1) / s1 + f(1, c1) / (c1 * s1),
                ],
                [-0.5 * one - dpv(c2), f(1, c2) / s2],
            ]
        )
    if formulation is Formulation.STANDARD_MOD:
        return np.array(
            [
                [0.5 * one - dpv(c1), f(1, c1) / s1],
                [0.5 * one + dpv(c2), -f(1, c2) / s2],
            ]
        )
    raise AssertionError(formulation)


# ---------------------------------------------------------------------------
# omega -> 0 limits
# ---------------------------------------------------------------------------


def zero_limit(kind: HJKind, n: int, dt: float):
    """Analytic limit of the mode series at omega -> 0, or None if divergent.

    Only the m = 0 term survives (phi_hat vanishes at nonzero lattice
    points); the limits follow from the small-argument forms
    H_n J_n -> -i/(pi n), z H_n J_n' -> -i/pi, z H_n' J_n -> i/pi and are
    independent of the wave speed.
    """
    n = abs(n)
    if kind is HJKind.S:
        return None if n == 0 else -1j * dt / (np.pi * n)
    if kind is HJKind.SDOT:
        return 0.0 + 0.0j
    if kind is HJKind.D_PLUS_DT_MINUS:
        return 0.0 + 0.0j if n == 0 else -1j * dt / np.pi
    if kind is HJKind.D_MINUS_DT_PLUS:
        return 2j * dt / np.pi if n == 0 else 1j * dt / np.pi
    if kind is HJKind.M_OP:
        return 0.0 + 0.0j if n == 0 else None
    raise ValueError(kind)


def formulation_zero_root(
    formulation: Formulation, n: int, dt: float, alpha: float = 1.0
) -> bool:
    """Whether omega = 0 is a characteristic root of the formulation at mode n.

    Decided from the analytic limits: the time-derivative series vanishes at
    0 for every mode; the D^T- trace and combined-trace series only for
    n = 0; the S-augmented combination never.  For the 2x2 systems the
    determinant limit decides (the modified standard system degenerates at
    every mode, the modified BM one at n = 0 only).
    """
    n = abs(n)
    if formulation is Formulation.OUT1 or formulation is Formulation.OUT4:
        return False
    if formulation is Formulation.OUT2:
        return True
    if formulation in (Formulation.OUT2_5, Formulation.OUT3):
        return n == 0
    if formulation is Formulation.STANDARD_MOD:
        return True
    if formulation is Formulation.BM_MOD:
        return n == 0
    if formulation in (Formulation.PMCHWT_MOD, Formulation.MUELLER_MOD):
        return False
    raise ValueError(f"no zero-root rule for {formulation}")


# ---------------------------------------------------------------------------
# space-discretised operator
# ---------------------------------------------------------------------------


def default_m_trunc(n_elems: int) -> int:
    return 10 * n_elems + n_elems // 2


@lru_cache(maxsize=128)
def _lattice_tables(
    omega: complex, c: float, dt: float, m_trunc: int, terms: int
) -> dict:
    """kind -> D_l array for l = 0..m_trunc: the lattice sum of hj products."""
    om = _lattice_shifts(omega, dt, terms // 2)
    _check_cut_margin(om, c)
    tables = hj_table(m_trunc, om, c)
    weights = phi_hat(om, dt)
    half = terms // 2
    order = [half + p for p in range(half, 0, -1)]
    order += [half - p for p in range(half, 0, -1)]
    order += [half]
    out = {}
    for kind, tab in tables.items():
        vals = tab * weights[None, :]
        acc = np.zeros(tab.shape[0], dtype=complex)
        for idx in order:
            acc += vals[:, idx]
        out[kind] = acc
    return out


_ENTRY_TABLE = {
    # (row, col) -> list of (f-index, domain, coefficient-fn(s1, s2, c1, c2))
    Formulation.PMCHWT_MOD: [
        [
            [(3, 1, lambda s1, s2, c1, c2: -1.0), (2, 2, lambda s1, s2, c1, c2: -1.0)],
            [(1, 1, lambda s1, s2, c1, c2: 1 / s1), (1, 2, lambda s1, s2, c1, c2: 1 / s2)],
        ],
        [
            [(4, 1, lambda s1, s2, c1, c2: -s1), (4, 2, lambda s1, s2, c1, c2: -s2)],
            [(2, 1, lambda s1, s2, c1, c2: 1.0), (3, 2, lambda s1, s2, c1, c2: 1.0)],
        ],
    ],
    Formulation.MUELLER_MOD: [
        [
            [(3, 1, lambda s1, s2, c1, c2: -s1), (2, 2, lambda s1, s2, c1, c2: s2)],
            [(1, 1, lambda s1, s2, c1, c2: 1.0), (1, 2, lambda s1, s2, c1, c2: -1.0)],
        ],
        [
            [(4, 1, lambda s1, s2, c1, c2: -1.0), (4, 2, lambda s1, s2, c1, c2: 1.0)],
            [(2, 1, lambda s1, s2, c1, c2: 1 / s1), (3, 2, lambda s1, s2, c1, c2: -1 / s2)],
        ],
    ],
    Formulation.BM_MOD: [
        [
            [(4, 1, lambda s1, s2, c1, c2: -1.0), (3, 1, lambda s1, s2, c1, c2: -1 / c1)],
            [(2, 1, lambda s1, s2, c1, c2: 1 / s1), (1, 1, lambda s1, s2, c1, c2: 1 / (c1 * s1))],
        ],
        [
            [(2, 2, lambda s1, s2, c1, c2: -1.0)],
            [(1, 2, lambda s1, s2, c1, c2: 1 / s2)],
        ],
    ],
    Formulation.STANDARD_MOD: [
        [
            [(3, 1, lambda s1, s2, c1, c2: -1.0)],
            [(1, 1, lambda s1, s2, c1, c2: 1 / s1)],
        ],
        [
            [(2, 2, lambda s1, s2, c1, c2: 1.0)],
            [(1, 2, lambda s1, s2, c1, c2: -1 / s2)],
        ],
    ],
}

_F_KIND = {
    1: HJKind.SDOT,
    2: HJKind.D_PLUS_DT_MINUS,
    3: HJKind.D_MINUS_DT_PLUS,
    4: HJKind.M_OP,
}


def _entry_d_arrays(
    formulation: Formulation,
    omega: complex,
    params: MaterialPair,
    dt: float,
    m_trunc: int,
    terms: int,
) -> list[list[np.ndarray]]:
    """Per-entry D_l arrays (l = 0..m_trunc) of a 2x2 modified formulation."""
    cs = {1: params.c1, 2: params.c2}
    args = (params.s1, params.s2, params.c1, params.c2)
    tabs = {nu: _lattice_tables(omega, cs[nu], dt, m_trunc, terms) for nu in (1, 2)}
    out = []
    for row in _ENTRY_TABLE[formulation]:
        out_row = []
        for entry in row:
            acc = np.zeros(m_trunc + 1, dtype=complex)
            for fidx, nu, coef in entry:
                acc += coef(*args) * tabs[nu][_F_KIND[fidx]]
            out_row.append(acc)
        out.append(out_row)
    return out


def _window_matrices(n_elems: int, m_trunc: int) -> tuple[np.ndarray, np.ndarray]:
    """U (N x 2M+1) and V (2M+1 x N) of the Fourier-window model."""
    N, M = n_elems, m_trunc
    theta_p = 2 * np.pi * np.arange(1, N + 1) / N
    theta_mid = theta_p + np.pi / N
    ls = np.arange(-M, M + 1)
    U = np.exp(1j * np.outer(theta_mid, ls))
    with np.errstate(invalid="ignore", divide="ignore"):
        win = np.where(ls == 0, 1.0 / N, np.sin(ls * np.pi / N) / (np.pi * ls))
    V = np.exp(-1j * np.outer(ls, theta_mid)) * win[:, None]
    return U, V


def discrete_operator(
    target,
    omega: complex,
    n_elems: int,
    dt: float,
    *,
    c: float | None = None,
    params: MaterialPair | None = None,
    m_trunc: int | None = None,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> np.ndarray:
    """Dense space-discretised operator U diag(D_l) V at one frequency.

    ``target`` is an HJKind (with wave speed c) for a single operator, or a
    modified transmission Formulation (with params) for the 2N x 2N system.
    """
    if ctrl.mode != "fixed":
        raise ValueError("discrete operator requires a fixed-term control")
    M = default_m_trunc(n_elems) if m_trunc is None else m_trunc
    U, V = _window_matrices(n_elems, M)
    labs = np.abs(np.arange(-M, M + 1))
    if isinstance(target, HJKind):
        if c is None:
            raise ValueError("single-operator target needs wave speed c")
        d = _lattice_tables(complex(omega), c, dt, M, ctrl.terms)[target]
        return (U * d[labs][None, :]) @ V
    if isinstance(target, Formulation):
        if params is None:
            raise ValueError("formulation target needs material params")
        entries = _entry_d_arrays(target, complex(omega), params, dt, M, ctrl.terms)
        N = n_elems
        out = np.empty((2 * N, 2 * N), dtype=complex)
        for i in range(2):
            for j in range(2):
                d = entries[i][j]
                out[i * N : (i + 1) * N, j * N : (j + 1) * N] = (
                    U * d[labs][None, :]
                ) @ V
        return out
    raise TypeError(f"target must be HJKind or Formulation, got {target!r}")


def _alias_weights(mode_n: int, n_elems: int, m_trunc: int) -> tuple[np.ndarray, np.ndarray]:
    """Aliased orders l = n + j N with |l| <= M and their window weights.

    The circulant symbol of U diag(D_l) V on the grid mode e^{i n theta} is
    sum_l w_l D_|l| with w_l = N sin(pi l / N) / (pi l) (w_0 = 1).
    """
    N, M = n_elems, m_trunc
    j = np.arange(-(M + abs(mode_n)) // N - 1, (M + abs(mode_n)) // N + 2)
    ls = mode_n + j * N
    ls = ls[np.abs(ls) <= M]
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(ls == 0, 1.0, N * np.sin(np.pi * ls / N) / (np.pi * ls))
    return ls, w


def discrete_mode_matrix(
    target,
    mode_n: int,
    omega: complex,
    n_elems: int,
    dt: float,
    *,
    c: float | None = None,
    params: MaterialPair | None = None,
    m_trunc: int | None = None,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> np.ndarray:
    """Circulant symbol of the space-discretised operator at one grid mode.

    Returns a (1,1) or (2,2) array whose zeros (over omega) are the
    eigenvalue branches of ``discrete_operator`` for the mode-n eigenvector.
    """
    if ctrl.mode != "fixed":
        raise ValueError("discrete operator requires a fixed-term control")
    M = default_m_trunc(n_elems) if m_trunc is None else m_trunc
    ls, w = _alias_weights(mode_n, n_elems, M)
    labs = np.abs(ls)
    if isinstance(target, HJKind):
        if c is None:
            raise ValueError("single-operator target needs wave speed c")
        d = _lattice_tables(complex(omega), c, dt, M, ctrl.terms)[target]
        return np.array([[np.sum(w * d[labs])]])
    if isinstance(target, Formulation):
        if params is None:
            raise ValueError("formulation target needs material params")
        entries = _entry_d_arrays(target, complex(omega), params, dt, M, ctrl.terms)
        return np.array(
            [[np.sum(w * entries[i][j][labs]) for j in range(2)] for i in range(2)]
        )
    raise TypeError(f"target must be HJKind or Formulation, got {target!r}")


# ---------------------------------------------------------------------------
# problem families for the eigensolver
# ---------------------------------------------------------------------------


class _SeriesFamily:
    """Shared series evaluations for a whole family of mode problems.

    A strip scan evaluates every mode at the same contour nodes; once a
    frequency is touched by a second distinct mode, all modes' series get
    computed there in one vectorised grid pass and cached (a few kB per
    node).  One-off frequencies (Newton polish steps, residual checks) stay
    on the cheap single-mode path.
    """

    def __init__(self, n_max: int, cs: tuple[float, ...], dt: float, ctrl: SeriesControl):
        if ctrl.mode != "fixed":
            raise ValueError("series families need a fixed-term control")
        self.n_max = n_max
        self.cs = cs
        self.dt = dt
        self.ctrl = ctrl
        self._grid: dict = {}
        self._touch: dict = {}

    @staticmethod
    def _key(omega: complex) -> tuple:
        return (round(omega.real, 14), round(omega.imag, 14))

    def series(self, kind: HJKind, n: int, omega: complex, c: float) -> complex:
        omega = complex(omega)
        key = (self._key(omega), c)
        hit = self._grid.get(key)
        if hit is not None:
            return hit[kind][n]
        seen = self._touch.get(key)
        if seen is None or seen == n:
            self._touch[key] = n
            return mode_series(kind, n, omega, c, self.dt, self.ctrl)
        # second distinct mode at this frequency: vectorise across all modes
        half = self.ctrl.terms // 2
        om = _lattice_shifts(omega, self.dt, half)
        _check_cut_margin(om, c)
        grids = hj_bundle_grid(self.n_max, om, c)
        weights = phi_hat(om, self.dt)
        summed = {}
        for kind_i, grid in grids.items():
            vals = grid * weights[None, :]
            acc = vals[:, -1] * 0.0
            for p in range(half, 0, -1):
                acc = acc + (vals[:, half + p] + vals[:, half - p])
            summed[kind_i] = acc + vals[:, half]
        self._grid[key] = summed
        return summed[kind][n]

    def f(self, idx: int, n: int, omega: complex, c: float) -> complex:
        return self.series(_F_KIND[idx], n, omega, c)


@dataclass
class CharProblem:
    """Matrix-valued analytic function of omega for one mode and formulation."""

    evaluator: Callable[[complex], np.ndarray]
    size: int
    mode: int
    label: str
    has_zero_root: bool = False
    meta: dict = field(default_factory=dict)

    def __call__(self, omega: complex) -> np.ndarray:
        return self.evaluator(omega)


def dirichlet_problems(
    formulation: Formulation,
    n_max: int,
    c: float,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
    alpha: float = 1.0,
) -> list[CharProblem]:
    family = _SeriesFamily(n_max, (c,), dt, ctrl)

    def combine(n: int, omega: complex) -> complex:
        if formulation is Formulation.OUT1:
            return family.series(HJKind.S, n, omega, c)
        if formulation is Formulation.OUT2:
            return family.f(1, n, omega, c)
        if formulation is Formulation.OUT2_5:
            return family.f(2, n, omega, c)
        val = family.f(2, n, omega, c) + family.f(1, n, omega, c) / c
        if formulation is Formulation.OUT4:
            val += alpha * family.series(HJKind.S, n, omega, c)
        elif formulation is not Formulation.OUT3:
            raise ValueError(f"{formulation} is not a Dirichlet formulation")
        return val

    out = []
    for n in range(n_max + 1):
        def ev(omega, _n=n):
            return np.array([[combine(_n, complex(omega))]])

        out.append(
            CharProblem(
                evaluator=ev,
                size=1,
                mode=n,
                label=formulation.value,
                has_zero_root=formulation_zero_root(formulation, n, dt, alpha),
            )
        )
    return out


def transmission_problems(
    formulation: Formulation,
    n_max: int,
    params: MaterialPair,
    dt: float,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> list[CharProblem]:
    if not (formulation.is_transmission and formulation.is_modified):
        raise ValueError(f"{formulation} has no absolutely convergent matrix")
    family = _SeriesFamily(n_max, (params.c1, params.c2), dt, ctrl)
    out = []
    for n in range(n_max + 1):
        def ev(omega, _n=n):
            def f(i, c):
                return family.f(i, _n, complex(omega), c)

            return _matrix_from_f(
                formulation, f, params.s1, params.s2, params.c1, params.c2
            )

        out.append(
            CharProblem(
                evaluator=ev,
                size=2,
                mode=n,
                label=formulation.value,
                has_zero_root=formulation_zero_root(formulation, n, dt),
            )
        )
    return out


def discrete_problems(
    target,
    n_max: int,
    n_elems: int,
    dt: float,
    *,
    c: float | None = None,
    params: MaterialPair | None = None,
    m_trunc: int | None = None,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> list[CharProblem]:
    """Mode problems of the space-discretised operator.

    Grid modes alias in pairs (n ~ N - n), so distinct classes stop at
    min(n_max, N // 2).
    """
    out = []
    size = 2 if isinstance(target, Formulation) else 1
    label = target.value if isinstance(target, Formulation) else f"op_{target.value}"
    for n in range(min(n_max, n_elems // 2) + 1):
        def ev(omega, _n=n):
            return discrete_mode_matrix(
                target, _n, omega, n_elems, dt, c=c, params=params,
                m_trunc=m_trunc, ctrl=ctrl,
            )

        out.append(
            CharProblem(
                evaluator=ev,
                size=size,
                mode=n,
                label=f"{label}_N{n_elems}",
                meta={"n_elems": n_elems},
            )
        )
    return out
