"""Shapes, meshing, orientation."""

import numpy as np
import pytest

from wavebem.geometry import (
    BoundaryMesh,
    Circle,
    Custom,
    Kite,
    Star,
    build_mesh,
    custom_from_csv,
    shape_point,
)

# ---------------------------------------------------------------------------
# brute-force polygon oracles
# ---------------------------------------------------------------------------


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Proper intersection test for open segments (shared endpoints excluded)."""

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def polygon_self_intersects(verts) -> bool:
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if segments_intersect(verts[i], verts[(i + 1) % n], verts[j], verts[(j + 1) % n]):
                return True
    return False


# ---------------------------------------------------------------------------
# shape_point
# ---------------------------------------------------------------------------


def test_star_at_zero():
    pos, _ = shape_point(Star(), 0.0)
    assert np.allclose(pos, [1.0, 0.0])


def test_kite_at_half_pi():
    pos, _ = shape_point(Kite(), np.pi / 2)
    assert np.allclose(pos, [-0.72, 0.72])


def test_circle_radius_everywhere():
    rng = np.random.default_rng(0)
    t = rng.uniform(0, 2 * np.pi, 32)
    pos, tan = shape_point(Circle(1.0), t)
    assert np.allclose(np.linalg.norm(pos, axis=1), 1.0)
    # tangent orthogonal to position on a circle
    assert np.allclose(np.sum(pos * tan, axis=1), 0.0, atol=1e-14)


def test_tangent_matches_finite_difference():
    h = 1e-7
    for shape in (Star(), Kite()):
        for t in (0.3, 1.9, 4.4):
            p_plus, _ = shape_point(shape, t + h)
            p_minus, _ = shape_point(shape, t - h)
            _, tan = shape_point(shape, t)
            assert np.allclose((p_plus - p_minus) / (2 * h), tan, atol=1e-6)


# ---------------------------------------------------------------------------
# build_mesh
# ---------------------------------------------------------------------------


def test_square_mesh_from_circle():
    mesh = build_mesh(Circle(1.0), 4)
    angles = np.sort(np.mod(mesh.thetas, 2 * np.pi))
    assert np.allclose(angles, [0.0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-12)
    # all normals radial (parallel to midpoint direction)
    mid_dir = mesh.midpoints / np.linalg.norm(mesh.midpoints, axis=1)[:, None]
    assert np.allclose(np.abs(np.sum(mid_dir * mesh.normals, axis=1)), 1.0)
    assert np.all(np.sum(mid_dir * mesh.normals, axis=1) > 0)  # outward


def test_chord_lengths():
    mesh = build_mesh(Circle(1.0), 100)
    assert np.allclose(mesh.lengths, 2 * np.sin(np.pi / 100))


def test_star_mesh_simple_closed_positive():
    mesh = build_mesh(Star(), 100)
    assert mesh.signed_area() > 0
    assert not polygon_self_intersects(mesh.vertices)


def test_kite_mesh_simple_closed_positive():
    mesh = build_mesh(Kite(), 100)
    assert mesh.signed_area() > 0
    assert not polygon_self_intersects(mesh.vertices)


@pytest.mark.parametrize("shape", [Circle(1.0), Star(), Kite()])
def test_turning_angles_sum_to_two_pi(shape):
    mesh = build_mesh(shape, 64)
    t = mesh.tangents
    t_next = np.roll(t, -1, axis=0)
    turn = np.arctan2(
        t[:, 0] * t_next[:, 1] - t[:, 1] * t_next[:, 0],
        np.sum(t * t_next, axis=1),
    )
    assert abs(np.sum(turn) - 2 * np.pi) < 1e-10


def test_perimeter_second_order_convergence():
    exact = 2 * np.pi
    errs = []
    for n in (32, 64, 128):
        mesh = build_mesh(Circle(1.0), n)
        errs.append(abs(np.sum(mesh.lengths) - exact))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


def test_rejects_tiny_meshes():
    with pytest.raises(ValueError):
        build_mesh(Circle(1.0), 2)


def test_reversed_orientation_gets_fixed():
    def cw_circle(t):
        pos = np.stack([np.cos(-t), np.sin(-t)], axis=-1)
        tan = np.stack([np.sin(-t), -np.cos(-t)], axis=-1)
        return pos, tan

    mesh = build_mesh(Custom(fn=cw_circle), 16)
    assert mesh.signed_area() > 0
    mid_dir = mesh.midpoints / np.linalg.norm(mesh.midpoints, axis=1)[:, None]
    assert np.all(np.sum(mid_dir * mesh.normals, axis=1) > 0)


def test_custom_from_csv_roundtrip(tmp_path):
    t = np.linspace(0, 2 * np.pi, 241)
    x = np.cos(t) * (1 + 0.1 * np.cos(3 * t))
    y = np.sin(t) * (1 + 0.1 * np.cos(3 * t))
    csv = tmp_path / "blob.csv"
    lines = ["theta,x,y"] + [
        f"{float(ti)!r},{float(xi)!r},{float(yi)!r}" for ti, xi, yi in zip(t, x, y)
    ]
    csv.write_text("\n".join(lines) + "\n")

    shape = custom_from_csv(csv)
    assert shape.tag is not None
    pos, tan = shape_point(shape, 1.234)
    rho = 1 + 0.1 * np.cos(3 * 1.234)
    assert np.allclose(pos, [rho * np.cos(1.234), rho * np.sin(1.234)], atol=1e-6)
    mesh = build_mesh(shape, 32)
    assert isinstance(mesh, BoundaryMesh)
    assert mesh.cache_key() is not None
