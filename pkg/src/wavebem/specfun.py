"""Complex-argument Bessel/Hankel machinery for the lattice-series layer.

Three things distinguish this module from a plain scipy.special wrapper:

* ``hankel1_cut`` evaluates a Hankel function whose branch cut lies on the
  negative *imaginary* axis instead of the negative real axis, so that
  lattice-shifted frequencies with small imaginary parts of either sign are
  handled by one function analytic across the negative real axis.
* ``hj_product`` forms the five Hankel x Bessel product kinds used by the
  boundary-operator symbols through a scaled magnitude-exponent path, so
  that order >> |argument| never produces 0 * inf = NaN.
* ``phi_hat`` is the Fourier symbol of the piecewise-linear time hat.

All functions are pure; the frequency argument may be a scalar or an array.
"""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import special as _sp

__all__ = [
    "HJKind",
    "SpecfunError",
    "CutDomainError",
    "bessel_j",
    "hankel1_cut",
    "hankel1_cut_deriv",
    "hj_product",
    "hj_table",
    "hj_bundle",
    "hj_bundle_grid",
    "phi_hat",
]


class SpecfunError(ArithmeticError):
    """Scaled evaluation could not produce a certified double result."""


class CutDomainError(ValueError):
    """Argument on the relocated branch cut (negative imaginary axis) or 0."""


class HJKind(Enum):
    """Product kinds appearing in the boundary-operator symbols.

    With k = omega/c the products are
        S                -> H_n(k) J_n(k)
        SDOT             -> -i omega H_n(k) J_n(k)
        D_MINUS_DT_PLUS  -> k H_n'(k) J_n(k)
        D_PLUS_DT_MINUS  -> k H_n(k) J_n'(k)
        M_OP             -> -k^2 H_n'(k) J_n'(k) / (i omega)
    """

    S = "s"
    SDOT = "sdot"
    D_MINUS_DT_PLUS = "d_minus_dt_plus"
    D_PLUS_DT_MINUS = "d_plus_dt_minus"
    M_OP = "m_op"


# Mantissas are renormalised once they exceed 2**_RESCALE in magnitude.
_RESCALE = 512
_BIG = float(2.0**_RESCALE)
_INV_BIG = float(2.0**-_RESCALE)


class ScaledSeq(NamedTuple):
    """Orders x batch table of complex values in mantissa * 2**expo form."""

    mant: np.ndarray
    expo: np.ndarray


def _ldexp_c(mant: np.ndarray, expo: np.ndarray) -> np.ndarray:
    """mant * 2**expo elementwise; exponents clipped (doubles die by ~1075)."""
    e = np.clip(expo, -2400, 2400).astype(np.int32)
    with np.errstate(over="ignore", under="ignore"):
        return np.ldexp(mant.real, e) + 1j * np.ldexp(mant.imag, e)


def _on_cut(z: np.ndarray) -> np.ndarray:
    return (z == 0) | ((z.real == 0) & (z.imag < 0))


def _check_off_cut(z: np.ndarray) -> None:
    if np.any(_on_cut(z)):
        raise CutDomainError("argument on the negative imaginary axis or zero")


def _hankel1_cut_raw(n: int, z: np.ndarray) -> np.ndarray:
    """Branch-corrected Hankel of order n via scipy (no overflow protection)."""
    z = np.asarray(z, dtype=np.complex128)
    third = (z.real < 0) & (z.imag < 0)
    sign = -1.0 if (n % 2) else 1.0  # -e^{-i n pi} = -(-1)^n
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        principal = _sp.hankel1(n, np.where(third, 1.0 + 0.0j, z))
        continued = -sign * _sp.hankel2(n, np.where(third, -z, 1.0 + 0.0j))
    return np.where(third, continued, principal)


def _hankel1_cut_deriv_raw(n: int, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    third = (z.real < 0) & (z.imag < 0)
    sign = -1.0 if (n % 2) else 1.0
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        principal = _sp.h1vp(n, np.where(third, 1.0 + 0.0j, z))
        # d/dz [ -(-1)^n H2_n(-z) ] = (-1)^n H2_n'(-z)
        continued = sign * _sp.h2vp(n, np.where(third, -z, 1.0 + 0.0j))
    return np.where(third, continued, principal)


def hankel1_cut(n: int, z):
    """Hankel function of the first kind with the cut on Re z = 0, Im z < 0.

    Equals the principal H^(1)_n for Re z >= 0 and in the second quadrant;
    in the third quadrant it is the analytic continuation across the
    negative real axis, -(-1)^n H^(2)_n(-z).
    """
    z = np.asarray(z, dtype=np.complex128)
    _check_off_cut(z)
    out = _hankel1_cut_raw(n, z)
    if not np.all(np.isfinite(out)):
        raise SpecfunError(
            f"H_{n} overflows double precision (order >> |z|); "
            "use hj_product for scaled products"
        )
    return out if out.ndim else complex(out)


def hankel1_cut_deriv(n: int, z):
    """Derivative of hankel1_cut with respect to z (same branch)."""
    z = np.asarray(z, dtype=np.complex128)
    _check_off_cut(z)
    out = _hankel1_cut_deriv_raw(n, z)
    if not np.all(np.isfinite(out)):
        raise SpecfunError(f"H_{n}' overflows double precision")
    return out if out.ndim else complex(out)


def _miller_start(n_max: int, zabs: float) -> int:
    """Backward-recurrence start order: above the turning point with decay
    headroom for ~1e-15 relative seed contamination."""
    base = max(n_max, int(np.ceil(zabs)))
    return base + int(15.0 * zabs ** (1.0 / 3.0)) + 40


def _scaled_sweep(n_max: int, z: np.ndarray) -> tuple[ScaledSeq, ScaledSeq]:
    """Scaled J and branch-corrected H for orders 0..n_max, batched over z.

    H uses the (stable, growing) forward recurrence; J uses a backward
    Miller recurrence normalised through the Wronskian
    J_1 H_0 - J_0 H_1 = 2i/(pi z).
    Each stored row carries its own power-of-two exponent.
    """
    n_max = max(n_max, 1)
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    _check_off_cut(z)
    batch = z.shape[0]
    n_rows = n_max + 1
    two_over_z = 2.0 / z

    # --- Hankel, forward ---
    hm = np.empty((n_rows, batch), dtype=np.complex128)
    he = np.zeros((n_rows, batch), dtype=np.int64)
    h_prev = _hankel1_cut_raw(0, z)
    h_cur = _hankel1_cut_raw(1, z)
    if not (np.all(np.isfinite(h_prev)) and np.all(np.isfinite(h_cur))):
        raise SpecfunError("Hankel seed values overflow (|z| too small)")
    hm[0], hm[1] = h_prev, h_cur
    e_run = np.zeros(batch, dtype=np.int64)
    for k in range(1, n_max):
        h_next = k * two_over_z * h_cur - h_prev
        big = np.abs(h_next) > _BIG
        if big.any():
            h_next = np.where(big, h_next * _INV_BIG, h_next)
            h_cur = np.where(big, h_cur * _INV_BIG, h_cur)
            e_run = e_run + big * _RESCALE
        h_prev, h_cur = h_cur, h_next
        hm[k + 1] = h_cur
        he[k + 1] = e_run

    # --- Bessel, backward Miller (unnormalised) ---
    n_start = _miller_start(n_max, float(np.max(np.abs(z))))
    jm = np.empty((n_rows, batch), dtype=np.complex128)
    je = np.zeros((n_rows, batch), dtype=np.int64)
    j_hi = np.zeros(batch, dtype=np.complex128)
    j_lo = np.ones(batch, dtype=np.complex128)
    e_run = np.zeros(batch, dtype=np.int64)
    for k in range(n_start, 0, -1):
        j_next = k * two_over_z * j_lo - j_hi
        big = np.abs(j_next) > _BIG
        if big.any():
            j_next = np.where(big, j_next * _INV_BIG, j_next)
            j_lo = np.where(big, j_lo * _INV_BIG, j_lo)
            e_run = e_run + big * _RESCALE
        j_hi, j_lo = j_lo, j_next
        if k - 1 <= n_max:
            jm[k - 1], je[k - 1] = j_lo, e_run

    # Normalisation constant C with J = jhat / C, from the order-0 Wronskian.
    e_align = np.maximum(je[0], je[1])
    j0a = jm[0] * np.exp2((je[0] - e_align).astype(np.float64))
    j1a = jm[1] * np.exp2((je[1] - e_align).astype(np.float64))
    wron = j1a * hm[0] - j0a * hm[1]
    cm = (np.pi * z / 2j) * wron
    if np.any(cm == 0) or not np.all(np.isfinite(cm)):
        raise SpecfunError("Miller normalisation failed (degenerate Wronskian)")
    jm = jm / cm
    je = je - e_align

    jm, je = _renorm(jm, je)
    hm, he = _renorm(hm, he)
    return ScaledSeq(jm, je), ScaledSeq(hm, he)


def _renorm(mant: np.ndarray, expo: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rescale mantissas into [0.5, 1) so products can never overflow."""
    mag = np.abs(mant)
    _, shift = np.frexp(mag)
    shift = np.where(mag > 0, shift, 0)
    out = np.ldexp(mant.real, -shift) + 1j * np.ldexp(mant.imag, -shift)
    return out, expo + shift.astype(np.int64)


def _scaled_deriv(seq: ScaledSeq, z: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(mant, expo) of the order-n derivative from rows n-1 and n."""
    if n == 0:
        return -seq.mant[1], seq.expo[1]
    e = np.maximum(seq.expo[n - 1], seq.expo[n])
    lower = seq.mant[n - 1] * np.exp2((seq.expo[n - 1] - e).astype(np.float64))
    own = seq.mant[n] * np.exp2((seq.expo[n] - e).astype(np.float64))
    return lower - (n / z) * own, e


def _wronskian_residual(jseq: ScaledSeq, hseq: ScaledSeq, z: np.ndarray, n: int) -> np.ndarray:
    """Relative residual of J_n H_n' - J_n' H_n = 2i/(pi z)."""
    jpm, jpe = _scaled_deriv(jseq, z, n)
    hpm, hpe = _scaled_deriv(hseq, z, n)
    t1 = (jseq.mant[n] * hpm) * np.exp2((jseq.expo[n] + hpe).astype(np.float64))
    t2 = (jpm * hseq.mant[n]) * np.exp2((jpe + hseq.expo[n]).astype(np.float64))
    target = 2j / (np.pi * z)
    return np.abs((t1 - t2) - target) / np.abs(target)


def bessel_j(n: int, z):
    """Bessel function J_n for integer n >= 0 and complex argument.

    Uses scipy's AMOS evaluation where it is reliable and falls back to the
    scaled Miller recurrence when order dwarfs the argument.  Results that
    genuinely underflow the double range come back as 0.0.
    """
    if n < 0:
        raise ValueError("order must be >= 0 (J_{-n} = (-1)^n J_n)")
    z = np.asarray(z, dtype=np.complex128)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)

    zero = z == 0
    out[zero] = 1.0 if n == 0 else 0.0
    todo = ~zero
    if todo.any():
        with np.errstate(invalid="ignore", over="ignore", under="ignore"):
            fast = _sp.jv(n, z[todo])
        ok = np.isfinite(fast)
        # AMOS may silently underflow to 0 for n >> |z|; route through the
        # scaled path so the caller gets a certified value.
        suspicious = ok & (fast == 0) & (n > 0)
        ok &= ~suspicious
        vals = np.where(ok, fast, 0.0)
        bad = ~ok
        if bad.any():
            zb = z[todo][bad]
            jseq, hseq = _scaled_sweep(n, zb)
            res = _wronskian_residual(jseq, hseq, zb, n)
            if np.any(res > 1e-6):
                raise SpecfunError(
                    f"scaled J path lost too many digits at order {n}"
                )
            vals[bad] = _ldexp_c(jseq.mant[n], jseq.expo[n])
        out[todo] = vals
    return out if not scalar else complex(out[0])


def _products_from_scaled(
    kind: HJKind, n: int, z: np.ndarray, omega: np.ndarray
) -> np.ndarray:
    jseq, hseq = _scaled_sweep(n, z)
    res = _wronskian_residual(jseq, hseq, z, n)
    if np.any(res > 1e-6):
        raise SpecfunError(f"scaled product path lost too many digits at order {n}")
    jm, je = jseq.mant[n], jseq.expo[n]
    hm, he = hseq.mant[n], hseq.expo[n]
    if kind is HJKind.S:
        pm, pe = jm * hm, je + he
    elif kind is HJKind.SDOT:
        pm, pe = -1j * omega * jm * hm, je + he
    elif kind is HJKind.D_MINUS_DT_PLUS:
        hpm, hpe = _scaled_deriv(hseq, z, n)
        pm, pe = z * hpm * jm, hpe + je
    elif kind is HJKind.D_PLUS_DT_MINUS:
        jpm, jpe = _scaled_deriv(jseq, z, n)
        pm, pe = z * hm * jpm, he + jpe
    elif kind is HJKind.M_OP:
        jpm, jpe = _scaled_deriv(jseq, z, n)
        hpm, hpe = _scaled_deriv(hseq, z, n)
        pm, pe = -(z**2) * hpm * jpm / (1j * omega), hpe + jpe
    else:  # pragma: no cover
        raise ValueError(f"unknown kind {kind!r}")
    out = _ldexp_c(pm, pe)
    if not np.all(np.isfinite(out)):
        raise SpecfunError(
            f"{kind.name} product overflows double range at order {n}"
        )
    return out


def _products_fast(
    kind: HJKind, n: int, z: np.ndarray, omega: np.ndarray
) -> np.ndarray:
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        h = _hankel1_cut_raw(n, z)
        if kind is HJKind.S:
            out = h * _sp.jv(n, z)
        elif kind is HJKind.SDOT:
            out = -1j * omega * h * _sp.jv(n, z)
        elif kind is HJKind.D_MINUS_DT_PLUS:
            out = z * _hankel1_cut_deriv_raw(n, z) * _sp.jv(n, z)
        elif kind is HJKind.D_PLUS_DT_MINUS:
            out = z * h * _sp.jvp(n, z)
        elif kind is HJKind.M_OP:
            out = -(z**2) * _hankel1_cut_deriv_raw(n, z) * _sp.jvp(n, z) / (1j * omega)
        else:  # pragma: no cover
            raise ValueError(f"unknown kind {kind!r}")
    return out


def hj_product(kind: HJKind, n: int, omega, c: float):
    """Overflow-safe Hankel x Bessel product of the given kind at order n.

    ``omega`` is the (complex) angular frequency, scalar or array; the
    Bessel argument is k = omega / c.  Symmetric in the sign of the order.
    """
    if n < 0:
        n = -n  # all five product kinds are even in the order
    if kind is HJKind.M_OP and np.any(np.asarray(omega) == 0):
        raise ValueError("M_OP divides by omega; omega = 0 not allowed")
    omega = np.asarray(omega, dtype=np.complex128)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    z = omega / c
    _check_off_cut(z)

    out = _products_fast(kind, n, z, omega)
    # Suspicious: non-finite, or an exact zero J/J' with n above the argument
    # scale (AMOS underflow rather than a true zero crossing).
    bad = ~np.isfinite(out)
    if n > 0:
        with np.errstate(invalid="ignore", over="ignore", under="ignore"):
            jv = _sp.jv(n, z)
        bad |= (jv == 0) | ~np.isfinite(jv)
    if bad.any():
        out = out.copy()
        out[bad] = _products_from_scaled(kind, n, z[bad], omega[bad])
    return out if not scalar else complex(out[0])


def _scaled_products_all_orders(
    n_max: int, z: np.ndarray, omega: np.ndarray
) -> dict[HJKind, np.ndarray]:
    """Five product kinds for orders 0..n_max through the scaled sweep."""
    jseq, hseq = _scaled_sweep(max(n_max, 1), z)
    orders = n_max + 1
    jm, je = jseq.mant[:orders], jseq.expo[:orders]
    hm, he = hseq.mant[:orders], hseq.expo[:orders]
    ns = np.arange(orders)[:, None]

    def deriv(mant, expo):
        # X'_n = X_{n-1} - (n/z) X_n along the order axis; row 0 of the
        # rolled arrays is garbage and gets overwritten with X'_0 = -X_1.
        e = np.maximum(np.roll(expo, 1, axis=0), expo)
        e[0] = expo[1]
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            lower = np.roll(mant, 1, axis=0) * np.exp2(
                np.clip(np.roll(expo, 1, axis=0) - e, -2400, 0).astype(float)
            )
            own = mant * np.exp2(np.clip(expo - e, -2400, 0).astype(float))
            d = lower - (ns / z) * own
        d[0] = -mant[1] * np.exp2(np.clip(expo[1] - e[0], -2400, 0).astype(float))
        return d, e

    jpm, jpe = deriv(jm, je)
    hpm, hpe = deriv(hm, he)

    table = {
        HJKind.S: _ldexp_c(hm * jm, he + je),
        HJKind.SDOT: _ldexp_c(-1j * omega * hm * jm, he + je),
        HJKind.D_MINUS_DT_PLUS: _ldexp_c(z * hpm * jm, hpe + je),
        HJKind.D_PLUS_DT_MINUS: _ldexp_c(z * hm * jpm, he + jpe),
        HJKind.M_OP: _ldexp_c(-(z**2) * hpm * jpm / (1j * omega), hpe + jpe),
    }
    for kind, vals in table.items():
        if not np.all(np.isfinite(vals)):
            raise SpecfunError(f"{kind.name} table overflows double range")
    return table


def hj_table(n_max: int, omega, c: float) -> dict[HJKind, np.ndarray]:
    """All five product kinds for every order 0..n_max at given frequencies.

    Used by the space-discretised operator, where orders run far beyond the
    argument magnitude; everything goes through the scaled sweep.  Returns
    arrays of shape (n_max+1,) for scalar omega, (n_max+1, B) for a batch.
    """
    omega = np.asarray(omega, dtype=np.complex128)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    z = omega / c
    _check_off_cut(z)
    table = _scaled_products_all_orders(n_max, z, omega)
    if scalar:
        table = {k: v[:, 0] for k, v in table.items()}
    return table


def hj_bundle(n: int, omega, c: float) -> dict[HJKind, np.ndarray]:
    """All five product kinds at a single order, sharing one J/H evaluation.

    The workhorse of the lattice series: omega is typically the array of
    shifted frequencies.  Falls back to the scaled sweep elementwise where
    scipy's evaluation over- or underflows.
    """
    if n < 0:
        n = -n
    omega = np.asarray(omega, dtype=np.complex128)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    z = omega / c
    _check_off_cut(z)
    if np.any(omega == 0):
        raise ValueError("bundle includes M_OP which divides by omega")

    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        j = _sp.jv(n, z)
        jp = _sp.jvp(n, z)
        h = _hankel1_cut_raw(n, z)
        hp = _hankel1_cut_deriv_raw(n, z)
    bad = ~(np.isfinite(j) & np.isfinite(jp) & np.isfinite(h) & np.isfinite(hp))
    if n > 0:
        bad |= j == 0
    out = {
        HJKind.S: h * j,
        HJKind.SDOT: -1j * omega * h * j,
        HJKind.D_MINUS_DT_PLUS: z * hp * j,
        HJKind.D_PLUS_DT_MINUS: z * h * jp,
        HJKind.M_OP: -(z**2) * hp * jp / (1j * omega),
    }
    if bad.any():
        zb, wb = z[bad], omega[bad]
        jseq, hseq = _scaled_sweep(n, zb)
        res = _wronskian_residual(jseq, hseq, zb, n)
        if np.any(res > 1e-6):
            raise SpecfunError(f"scaled bundle lost too many digits at order {n}")
        jm, je = jseq.mant[n], jseq.expo[n]
        hm, he = hseq.mant[n], hseq.expo[n]
        jpm, jpe = _scaled_deriv(jseq, zb, n)
        hpm, hpe = _scaled_deriv(hseq, zb, n)
        fixes = {
            HJKind.S: (jm * hm, je + he),
            HJKind.SDOT: (-1j * wb * jm * hm, je + he),
            HJKind.D_MINUS_DT_PLUS: (zb * hpm * jm, hpe + je),
            HJKind.D_PLUS_DT_MINUS: (zb * hm * jpm, he + jpe),
            HJKind.M_OP: (-(zb**2) * hpm * jpm / (1j * wb), hpe + jpe),
        }
        for kind, (pm, pe) in fixes.items():
            vals = out[kind].copy()
            vals[bad] = _ldexp_c(pm, pe)
            out[kind] = vals
    for kind, vals in out.items():
        if not np.all(np.isfinite(vals)):
            raise SpecfunError(f"{kind.name} bundle overflows double range")
    if scalar:
        out = {k: complex(v[0]) for k, v in out.items()}
    return out


def hj_bundle_grid(n_max: int, omega, c: float) -> dict[HJKind, np.ndarray]:
    """All five product kinds on the full (order 0..n_max) x (frequency) grid.

    Seeds H_0, H_1 and J_{n_max+1}, J_{n_max} from scipy and fills the grid
    by the three-term recurrences in their stable directions (H upward, J
    downward), so only O(1) AMOS evaluations are spent per frequency.
    Columns whose seeds degenerate (order far beyond |z|) are recomputed
    through the scaled sweep.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=np.complex128))
    z = omega / c
    _check_off_cut(z)
    if np.any(omega == 0):
        raise ValueError("grid includes M_OP which divides by omega")
    n_top = max(n_max, 1) + 1
    rows, cols = n_top + 1, z.shape[0]

    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        h = np.empty((rows, cols), dtype=np.complex128)
        h[0] = _hankel1_cut_raw(0, z)
        h[1] = _hankel1_cut_raw(1, z)
        for k in range(1, n_top):
            h[k + 1] = (2.0 * k / z) * h[k] - h[k - 1]
        j = np.empty((rows, cols), dtype=np.complex128)
        j[n_top] = _sp.jv(n_top, z)
        j[n_top - 1] = _sp.jv(n_top - 1, z)
        for k in range(n_top - 1, 0, -1):
            j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1]

    bad_cols = ~np.all(np.isfinite(h) & np.isfinite(j), axis=0)
    bad_cols |= (j[n_top] == 0) | (j[n_top - 1] == 0)
    good = ~bad_cols

    ns = np.arange(n_max + 1)[:, None]
    jj, hh = j[: n_max + 1], h[: n_max + 1]
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        jp = np.vstack([-j[1:2], j[: n_max] - (ns[1:] / z) * j[1 : n_max + 1]])
        hp = np.vstack([-h[1:2], h[: n_max] - (ns[1:] / z) * h[1 : n_max + 1]])
        out = {
            HJKind.S: hh * jj,
            HJKind.SDOT: -1j * omega * hh * jj,
            HJKind.D_MINUS_DT_PLUS: z * hp * jj,
            HJKind.D_PLUS_DT_MINUS: z * hh * jp,
            HJKind.M_OP: -(z**2) * hp * jp / (1j * omega),
        }
    if bad_cols.any():
        # products, not factors, survive extreme order/argument ratios
        fixed = _scaled_products_all_orders(n_max, z[bad_cols], omega[bad_cols])
        for kind in out:
            out[kind][:, bad_cols] = fixed[kind]
    for kind, vals in out.items():
        if not np.all(np.isfinite(vals[:, good])):
            raise SpecfunError(f"{kind.name} grid overflows double range")
    return out


def phi_hat(omega, dt: float):
    """Fourier symbol of the piecewise-linear hat: 2 (1 - cos(w dt)) / (w^2 dt).

    Entire in omega; the removable singularity at 0 is evaluated by series
    (value dt).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    omega = np.asarray(omega, dtype=np.complex128)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    x = omega * dt
    small = np.abs(x) < 0.5
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = dt * (
        1.0
        - x2 / 12.0
        + x2**2 / 360.0
        - x2**3 / 20160.0
        + x2**4 / 1814400.0
        - x2**5 / 239500800.0
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = 2.0 * (1.0 - np.cos(np.where(small, 1.0, x))) / (
            np.where(small, 1.0, omega) ** 2 * dt
        )
    out = np.where(small, series, direct)
    return out if not scalar else complex(out[0])
