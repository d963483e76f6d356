"""Parametric closed boundaries and their straight-element collocation meshes.

Built-in shapes: unit-style circle, the five-petal star
(1 + 0.3 cos 5t)(cos t, sin t)/1.3 and the kite
(0.18 (cos t + 2 (cos 2t - 1)), 0.72 sin t), plus user curves given either as
a callable or as a CSV table of (theta, x, y) samples interpolated by a
periodic cubic spline.

Meshes subdivide uniformly in the parameter, not in arclength.  Element
midpoints are the collocation points; normals point into the exterior domain
(the mesh is reoriented counterclockwise if the parametrisation runs the
other way).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

__all__ = [
    "Circle",
    "Star",
    "Kite",
    "Custom",
    "Shape",
    "BoundaryMesh",
    "shape_point",
    "build_mesh",
    "custom_from_csv",
]


@dataclass(frozen=True)
class Circle:
    radius: float = 1.0

    def cache_tag(self) -> str:
        return f"circle:{float(self.radius).hex()}"


@dataclass(frozen=True)
class Star:
    def cache_tag(self) -> str:
        return "star"


@dataclass(frozen=True)
class Kite:
    def cache_tag(self) -> str:
        return "kite"


@dataclass(frozen=True)
class Custom:
    """User-supplied 2*pi-periodic map theta -> ((x, y), d(x, y)/dtheta)."""

    fn: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    tag: str | None = None

    def cache_tag(self) -> str | None:
        return f"custom:{self.tag}" if self.tag else None


Shape = Union[Circle, Star, Kite, Custom]


def shape_point(shape: Shape, theta) -> tuple[np.ndarray, np.ndarray]:
    """Exact position and d/dtheta tangent of the parametric curve.

    Returns arrays of shape (..., 2); scalars in give shape (2,) out.
    """
    t = np.asarray(theta, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if isinstance(shape, Circle):
        r = shape.radius
        pos = r * np.stack([np.cos(t), np.sin(t)], axis=-1)
        tan = r * np.stack([-np.sin(t), np.cos(t)], axis=-1)
    elif isinstance(shape, Star):
        rho = (1.0 + 0.3 * np.cos(5 * t)) / 1.3
        drho = -1.5 * np.sin(5 * t) / 1.3
        pos = np.stack([rho * np.cos(t), rho * np.sin(t)], axis=-1)
        tan = np.stack(
            [drho * np.cos(t) - rho * np.sin(t), drho * np.sin(t) + rho * np.cos(t)],
            axis=-1,
        )
    elif isinstance(shape, Kite):
        pos = np.stack(
            [0.18 * (np.cos(t) + 2.0 * (np.cos(2 * t) - 1.0)), 0.72 * np.sin(t)],
            axis=-1,
        )
        tan = np.stack(
            [0.18 * (-np.sin(t) - 4.0 * np.sin(2 * t)), 0.72 * np.cos(t)], axis=-1
        )
    elif isinstance(shape, Custom):
        pos, tan = shape.fn(t)
        pos = np.asarray(pos, dtype=float)
        tan = np.asarray(tan, dtype=float)
    else:
        raise TypeError(f"not a shape: {shape!r}")
    if scalar:
        return pos[0], tan[0]
    return pos, tan


def custom_from_csv(path: str | Path) -> Custom:
    """Load a custom shape from a CSV table with header ``theta,x,y``.

    Samples are interpolated with a periodic cubic spline; the first and
    last rows may but need not repeat (a closing row at theta0 + 2*pi is
    appended if absent).
    """
    from scipy.interpolate import CubicSpline

    path = Path(path)
    raw = path.read_bytes()
    rows = np.genfromtxt(path, delimiter=",", names=True)
    names = rows.dtype.names
    if names is None or tuple(n.lower() for n in names) != ("theta", "x", "y"):
        raise ValueError(f"{path}: expected CSV header 'theta,x,y', got {names}")
    theta = np.asarray(rows["theta"], dtype=float)
    xy = np.stack([rows["x"], rows["y"]], axis=-1).astype(float)
    if not np.all(np.diff(theta) > 0):
        raise ValueError(f"{path}: theta column must be strictly increasing")
    if abs((theta[-1] - theta[0]) - 2 * np.pi) > 1e-12:
        theta = np.append(theta, theta[0] + 2 * np.pi)
        xy = np.vstack([xy, xy[:1]])
    elif not np.allclose(xy[0], xy[-1]):
        raise ValueError(f"{path}: closing sample must repeat the first point")
    spline = CubicSpline(theta, xy, axis=0, bc_type="periodic")
    t0 = theta[0]

    def fn(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        tw = t0 + np.mod(t - t0, 2 * np.pi)
        return spline(tw), spline(tw, 1)

    return Custom(fn=fn, tag=hashlib.sha256(raw).hexdigest()[:16])


@dataclass
class BoundaryMesh:
    """Closed polygon of straight elements with midpoint collocation data.

    vertices[p] sits at parameter thetas[p]; element p runs from vertex p to
    vertex p+1 (cyclic), counterclockwise.  Normals are unit vectors into
    the exterior.
    """

    vertices: np.ndarray  # (N, 2)
    thetas: np.ndarray  # (N,), parameter of each vertex
    midpoints: np.ndarray  # (N, 2) collocation points
    normals: np.ndarray  # (N, 2) outward unit normals
    tangents: np.ndarray  # (N, 2) unit tangents, CCW
    lengths: np.ndarray  # (N,)
    theta_mid: np.ndarray  # (N,) parameter midpoint of each element
    shape_tag: str | None = field(default=None)

    @property
    def n_elements(self) -> int:
        return len(self.lengths)

    def cache_key(self) -> str | None:
        if self.shape_tag is None:
            return None
        return f"{self.shape_tag}|N={self.n_elements}"

    def signed_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        return 0.5 * float(np.sum(x * yn - xn * y))


def build_mesh(shape: Shape, n_elems: int) -> BoundaryMesh:
    """Mesh a shape into n_elems straight elements, uniform in parameter.

    Vertices sit at theta_p = 2 pi p / N, p = 1..N; collocation points are
    chord midpoints; orientation is fixed to positive signed area so normals
    (tangent rotated by -90 degrees) point outward.
    """
    if n_elems < 3:
        raise ValueError("need at least 3 elements to close a polygon")
    p = np.arange(1, n_elems + 1)
    thetas = 2 * np.pi * p / n_elems
    verts, _ = shape_point(shape, thetas)

    # orientation: enforce CCW
    x, y = verts[:, 0], verts[:, 1]
    area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area2 < 0:
        verts = verts[::-1].copy()
        thetas = thetas[::-1].copy()

    nxt = np.roll(verts, -1, axis=0)
    seg = nxt - verts
    lengths = np.linalg.norm(seg, axis=1)
    if np.any(lengths < 1e-14):
        bad = int(np.argmin(lengths))
        raise ValueError(f"degenerate element {bad} (zero length)")
    tangents = seg / lengths[:, None]
    normals = np.stack([tangents[:, 1], -tangents[:, 0]], axis=-1)
    midpoints = 0.5 * (verts + nxt)
    theta_mid = thetas + np.pi / n_elems if area2 >= 0 else thetas - np.pi / n_elems

    return BoundaryMesh(
        vertices=verts,
        thetas=thetas,
        midpoints=midpoints,
        normals=normals,
        tangents=tangents,
        lengths=lengths,
        theta_mid=theta_mid,
        shape_tag=shape.cache_tag(),
    )
