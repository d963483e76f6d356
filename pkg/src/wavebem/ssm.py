"""Contour-integral nonlinear eigensolver and the strip-scanning driver.

``ssm_solve`` finds the eigenvalues of an analytic matrix family F(z)
inside an elliptic contour from moments of F(z)^{-1} against random probe
blocks, via the block-Hankel matrix pencil.  Candidates are kept only if
(a) two independent probe draws agree, (b) the scaled smallest singular
value of F at the candidate is tiny, and (c) the point is comfortably
inside the contour.

``scan_strip`` tiles one periodicity strip of the characteristic problem
with overlapping ellipses, runs the solver per (mode, box), deduplicates,
attaches the analytically-known omega = 0 marginal roots (a contour cannot
enclose the branch point at 0), and issues the stability verdict from the
sign of the largest imaginary part.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .charfun import CharProblem, CutProximityError

__all__ = [
    "ContourBox",
    "Root",
    "RootSet",
    "ssm_solve",
    "winding_number",
    "strip_boxes",
    "scan_strip",
]

IM_TOL = 1e-6  # verdict threshold on Im(omega)
RESIDUAL_TOL = 1e-8
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class ContourBox:
    """Elliptic contour: center, semi-axes (a, b), quadrature node count."""

    center: complex
    radii: tuple[float, float]
    n_quad: int = 64

    def __post_init__(self):
        if self.n_quad < 32:
            raise ValueError("need at least 32 quadrature nodes")
        if min(self.radii) <= 0:
            raise ValueError("semi-axes must be positive")

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        a, b = self.radii
        dx = (z.real - self.center.real) / a
        dy = (z.imag - self.center.imag) / b
        return dx * dx + dy * dy <= (1.0 - margin) ** 2


@dataclass
class Root:
    omega: complex
    mode: int
    label: str
    residual: float
    multiplicity: int = 1
    vec: np.ndarray | None = None  # right singular vector of F at the root


@dataclass
class RootSet:
    roots: list[Root] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def max_im(self) -> float:
        if not self.roots:
            return -math.inf
        return max(r.omega.imag for r in self.roots)

    @property
    def verdict(self) -> str:
        if any(r.omega.imag > IM_TOL for r in self.roots):
            return "unstable"
        if any(abs(r.omega.imag) <= IM_TOL for r in self.roots):
            return "marginal"
        return "stable"

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["formulation", "n", "re_omega", "im_omega", "residual"])
            for r in sorted(self.roots, key=lambda r: (r.mode, r.omega.real)):
                w.writerow(
                    [r.label, r.mode, repr(r.omega.real), repr(r.omega.imag), repr(r.residual)]
                )

    def summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "n_roots": len(self.roots),
            "max_im": None if not self.roots else self.max_im,
            "n_unstable": sum(r.omega.imag > IM_TOL for r in self.roots),
            "n_failures": len(self.failures),
        }


def _contour_nodes(box: ContourBox, rot: float = 0.0):
    q = box.n_quad
    theta = 2 * np.pi * (np.arange(q) + 0.5 + rot) / q
    a, b = box.radii
    z = box.center + a * np.cos(theta) + 1j * b * np.sin(theta)
    dz = -a * np.sin(theta) + 1j * b * np.cos(theta)
    return z, dz


def _sample(F: Callable[[complex], np.ndarray], box: ContourBox):
    """Evaluate F at the contour nodes, nudging the node set once if a node
    lands on a singular/forbidden point."""
    for attempt, rot in enumerate((0.0, 0.313)):
        try:
            z, dz = _contour_nodes(box, rot)
            mats = [np.atleast_2d(np.asarray(F(zi), dtype=complex)) for zi in z]
            ok = all(np.all(np.isfinite(m)) for m in mats)
            if ok:
                ones = np.ones(mats[0].shape[0], dtype=complex)
                for m in mats:  # raises LinAlgError on a singular node
                    np.linalg.solve(m, ones)
                return z, dz, mats
        except (CutProximityError, np.linalg.LinAlgError):
            if attempt:
                raise
    raise np.linalg.LinAlgError("contour sampling failed at perturbed nodes too")


def _hankel_candidates(z, dz, mats, box, n_moments, probes, rank_tol):
    """Eigenvalue candidates from one probe draw via the Hankel pencil."""
    q = len(z)
    d = mats[0].shape[0]
    R, P = probes
    L = R.shape[1]
    rho = max(box.radii)
    w = (z - box.center) / rho

    xs = np.empty((q, d, L), dtype=complex)
    for j, m in enumerate(mats):
        xs[j] = np.linalg.solve(m, R)
    ys = np.einsum("il,qlm->qim", P.conj().T, xs)  # (q, L, L)

    n_mom = 2 * n_moments
    moments = np.empty((n_mom, L, L), dtype=complex)
    base = ys * dz[:, None, None] / (1j * q)
    wk = np.ones_like(w)
    for k in range(n_mom):
        moments[k] = np.sum(base * wk[:, None, None], axis=0)
        wk = wk * w

    K = n_moments
    h0 = np.block([[moments[i + j] for j in range(K)] for i in range(K)])
    h1 = np.block([[moments[i + j + 1] for j in range(K)] for i in range(K)])
    u, s, vh = np.linalg.svd(h0)
    if s[0] < 1e-280:
        return [], 0
    r = int(np.sum(s > rank_tol * s[0]))
    if r == 0:
        return [], 0
    u, s, vh = u[:, :r], s[:r], vh[:r, :]
    pencil = u.conj().T @ h1 @ vh.conj().T / s[None, :]
    vals = np.linalg.eigvals(pencil)
    return [box.center + rho * v for v in vals], r


def _newton_polish(F, z0: complex, box: ContourBox, steps: int = 4) -> complex:
    """A few Newton steps on det F; bails out if it wanders off."""
    z = z0
    h = 1e-7 * max(box.radii)
    for _ in range(steps):
        try:
            f0 = np.linalg.det(np.atleast_2d(F(z)))
            fp = np.linalg.det(np.atleast_2d(F(z + h)))
            fm = np.linalg.det(np.atleast_2d(F(z - h)))
        except CutProximityError:
            return z0
        dfdz = (fp - fm) / (2 * h)
        if dfdz == 0 or not np.isfinite(dfdz):
            break
        step = f0 / dfdz
        if not np.isfinite(step) or abs(step) > 0.5 * max(box.radii):
            break
        z = z - step
        if abs(step) < 1e-13 * max(1.0, abs(z)):
            break
    return z if box.contains(z) else z0


def _scaled_residual(F, z: complex, scale: float) -> tuple[float, np.ndarray]:
    m = np.atleast_2d(np.asarray(F(z), dtype=complex))
    _, s, vh = np.linalg.svd(m)
    return float(s[-1] / scale), vh[-1].conj()


def ssm_solve(
    F: Callable[[complex], np.ndarray],
    box: ContourBox,
    *,
    size: int | None = None,
    n_moments: int = 8,
    probe_width: int | None = None,
    rank_tol: float = 1e-12,
    residual_tol: float = RESIDUAL_TOL,
    inside_margin: float = 0.08,
    rng: np.random.Generator | None = None,
    polish: bool = True,
) -> list[Root]:
    """Eigenvalues of F inside the contour, residual-certified.

    Returns Root records with mode = -1 (the scan driver relabels them).
    The residual is the smallest singular value of F at the root divided by
    the largest matrix norm seen on the contour, which keeps the criterion
    meaningful for 1x1 problems as well.
    """
    rng = rng or np.random.default_rng(1234)
    z, dz, mats = _sample(F, box)
    d = mats[0].shape[0]
    L = probe_width or min(4, d)
    scale = max(np.linalg.norm(m, 2) for m in mats)
    if scale == 0:
        return []

    draws = []
    for _ in range(2):
        R = rng.standard_normal((d, L)) + 1j * rng.standard_normal((d, L))
        P = rng.standard_normal((d, L)) + 1j * rng.standard_normal((d, L))
        cands, _rank = _hankel_candidates(z, dz, mats, box, n_moments, (R, P), rank_tol)
        cands = [c for c in cands if box.contains(c, inside_margin)]
        draws.append(cands)

    # keep candidates confirmed by both draws
    agreed = []
    for c in draws[0]:
        if any(abs(c - c2) < 1e-4 * max(box.radii) for c2 in draws[1]):
            agreed.append(c)

    roots: list[Root] = []
    for c in agreed:
        zc = _newton_polish(F, c, box) if (polish and d <= 4) else c
        try:
            res, vec = _scaled_residual(F, zc, scale)
        except CutProximityError:
            continue
        if res > residual_tol:
            continue
        for r in roots:
            if abs(r.omega - zc) < 1e-9 + 1e-7 * max(box.radii):
                r.multiplicity += 1
                if res < r.residual:
                    r.omega, r.residual, r.vec = zc, res, vec
                break
        else:
            roots.append(Root(omega=zc, mode=-1, label="", residual=res, vec=vec))
    return roots


def winding_number(f: Callable[[complex], complex], box: ContourBox, n: int = 1024) -> int:
    """Argument-principle zero count of a scalar analytic function."""
    for q in (n, 4 * n, 16 * n):
        theta = 2 * np.pi * (np.arange(q) + 0.5) / q
        a, b = box.radii
        z = box.center + a * np.cos(theta) + 1j * b * np.sin(theta)
        vals = np.asarray([complex(np.atleast_2d(f(zi))[0, 0]) for zi in z])
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            continue
        dphi = np.angle(vals[np.r_[1:q, 0]] / vals)
        if np.max(np.abs(dphi)) < 2.5:  # no half-turn jumps: unwrap is safe
            return int(round(np.sum(dphi) / (2 * np.pi)))
    raise RuntimeError("winding count did not stabilise (zero near contour?)")


# ---------------------------------------------------------------------------
# strip scanning
# ---------------------------------------------------------------------------


def strip_boxes(
    region: tuple[float, float, float, float],
    grid: tuple[int, int] = (10, 4),
    overlap: float = 0.2,
    n_quad: int = 64,
    x_edge_margin: float = 1e-3,
) -> list[ContourBox]:
    """Tile a rectangle with covering ellipses.

    Ellipses need sqrt(2) times the cell half-widths to cover their cell;
    the left column is clipped away from the analyticity edge Re omega = 0
    and its vertical axis stretched to keep the cell covered.
    """
    x0, x1, y0, y1 = region
    gx, gy = grid
    cover = math.sqrt(2.0) * (1.0 + 0.25 * overlap)
    xs = np.linspace(x0, x1, gx + 1)
    ys = np.linspace(y0, y1, gy + 1)
    boxes = []
    for i in range(gx):
        cx, hx = 0.5 * (xs[i] + xs[i + 1]), 0.5 * (xs[i + 1] - xs[i])
        for j in range(gy):
            cy, hy = 0.5 * (ys[j] + ys[j + 1]), 0.5 * (ys[j + 1] - ys[j])
            a = cover * hx
            b = cover * hy
            max_a = cx - x_edge_margin
            if a > max_a:  # clipped by the strip edge: keep the cell covered
                a = max_a
                if a <= hx:
                    raise ValueError("cell too close to the strip edge to cover")
                b = 1.02 * hy / math.sqrt(1.0 - (hx / a) ** 2)
            boxes.append(ContourBox(center=complex(cx, cy), radii=(a, b), n_quad=n_quad))
    return boxes


def scan_strip(
    problems: Sequence[CharProblem],
    region: tuple[float, float, float, float],
    grid: tuple[int, int] = (10, 4),
    overlap: float = 0.2,
    n_quad: int = 64,
    n_moments: int = 8,
    seed: int = 1234,
    include_zero_roots: bool = True,
    progress: Callable[[str], None] | None = None,
) -> RootSet:
    """Run the eigensolver for every (mode problem, box) and merge.

    Roots closer than DEDUP_TOL within one mode are merged, keeping the
    smaller residual.  Known omega = 0 marginal roots are appended
    analytically (the branch point cannot sit inside a contour).
    """
    boxes = strip_boxes(region, grid, overlap, n_quad)
    out = RootSet()
    for prob in problems:
        rng = np.random.default_rng(seed + 7919 * (prob.mode + 1))
        found: list[Root] = []
        for bi, box in enumerate(boxes):
            try:
                roots = ssm_solve(
                    prob, box, n_moments=n_moments, rng=rng,
                )
            except (CutProximityError, np.linalg.LinAlgError, RuntimeError) as exc:
                out.failures.append(f"{prob.label} n={prob.mode} box{bi}: {exc}")
                continue
            for r in roots:
                r.mode, r.label = prob.mode, prob.label
                found.append(r)
        found.sort(key=lambda r: r.residual)
        kept: list[Root] = []
        for r in found:
            dup = next((k for k in kept if abs(k.omega - r.omega) < DEDUP_TOL), None)
            if dup is None:
                kept.append(r)
            else:
                dup.multiplicity = max(dup.multiplicity, r.multiplicity)
        if include_zero_roots and prob.has_zero_root:
            kept.append(
                Root(omega=0.0 + 0.0j, mode=prob.mode, label=prob.label, residual=0.0)
            )
        out.roots.extend(kept)
        if progress is not None:
            progress(f"{prob.label} n={prob.mode}: {len(kept)} roots")
    return out
