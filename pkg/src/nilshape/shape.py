"""Limit shapes of word metrics: limit norms, vertical profiles, volumes, meshes.

The asymptotic unit ball of a word metric on a lattice in a 2-step group is
``{(v, z) : ||v||_0 <= 1, |z| <= z(v)}`` in exponential coordinates, where
``||.||_0`` is the gauge of the convex hull of the projected generators and
``z(v)`` is the maximal balayage area of a unit-length path from ``0`` to ``v``
times the bracket coefficient.
"""
from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .balls import GeneratingSet
from .dido import (
    DomainError,
    h5_closed_form_reduced,
    solver_for,
    z_profile_h5,
    z_profile_h5_sup,
)
from .group import GroupSpec, heisenberg
from .polygon import (
    GeometryError,
    PolygonalNorm,
    as_point,
    clip,
    convex_hull,
    integrate_quadratic,
    polygon_area,
)
from .quadrature import QuadratureError, adaptive_cube
from .quasinorm import PolytopeNorm

# -- limit norm ------------------------------------------------------------


def limit_norm(omega: GeneratingSet):
    """Gauge of ``conv(pi_1(Omega))``.

    Planar abelianizations give an exact ``PolygonalNorm``; higher dimensions
    give a floating-point ``PolytopeNorm``.
    """
    pts = [g.a for g in omega.elems]
    m = omega.group.m
    if m == 2:
        hull = convex_hull(pts)
        if len(hull) < 3 or polygon_area(hull) == 0:
            raise GeometryError("projected generators lie on a line; the set does not generate")
        return PolygonalNorm(hull)
    if m == 1:
        return PolytopeNorm(np.array([[max(abs(p[0]) for p in pts)], [-max(abs(p[0]) for p in pts)]]))
    return PolytopeNorm(np.array(pts, dtype=float))


def bracket_coefficient(G: GroupSpec) -> Fraction:
    """``B(e_1, e_2)`` for a group with ``m = 2`` and one-dimensional centre."""
    if G.m != 2 or G.c != 1:
        raise ValueError("bracket coefficient is defined for m = 2, c = 1")
    B = G.bracket_tensor()
    return Fraction(int(B[0, 1, 0]))


# -- profiles --------------------------------------------------------------


Quadratic = tuple  # (A, B, C, D, E, F): A x^2 + B x y + C y^2 + D x + E y + F


def _eval_quadratic(q: Quadratic, p) -> Fraction:
    A, B, C, D, E, F = q
    x, y = p
    return A * x * x + B * x * y + C * y * y + D * x + E * y + F


def _fit_quadratic(f: Callable) -> Quadratic:
    F = f((0, 0))
    fx, fmx, fy, fmy, fxy = f((1, 0)), f((-1, 0)), f((0, 1)), f((0, -1)), f((1, 1))
    A = (fx + fmx) / 2 - F
    D = (fx - fmx) / 2
    C = (fy + fmy) / 2 - F
    E = (fy - fmy) / 2
    B = fxy - A - C - D - E - F
    return (A, B, C, D, E, F)


def _max_quadratic_on_polygon(q: Quadratic, poly) -> Fraction:
    A, B, C, D, E, F = q
    cands = list(poly)
    n = len(poly)
    for i in range(n):
        p, r = poly[i], poly[(i + 1) % n]
        # restriction to the edge: alpha t^2 + beta t + const
        f0, f1 = _eval_quadratic(q, p), _eval_quadratic(q, r)
        fm = _eval_quadratic(q, ((p[0] + r[0]) / 2, (p[1] + r[1]) / 2))
        alpha = 2 * (f1 - 2 * fm + f0)
        beta = 4 * fm - 3 * f0 - f1
        if alpha < 0:
            t = -beta / (2 * alpha)
            if 0 < t < 1:
                cands.append((p[0] + t * (r[0] - p[0]), p[1] + t * (r[1] - p[1])))
    detH = 4 * A * C - B * B
    if detH != 0:
        x = (B * E - 2 * C * D) / detH
        y = (B * D - 2 * A * E) / detH
        if all(
            (poly[(i + 1) % n][0] - poly[i][0]) * (y - poly[i][1])
            - (poly[(i + 1) % n][1] - poly[i][1]) * (x - poly[i][0])
            >= 0
            for i in range(n)
        ):
            cands.append((x, y))
    return max(_eval_quadratic(q, p) for p in cands)


@dataclass(frozen=True)
class ProfilePiece:
    """Region of the unit polygon on which the profile is one quadratic."""

    region: tuple
    quadratic: Quadratic
    start_edge: int
    corners: int

    def value(self, p) -> Fraction:
        return _eval_quadratic(self.quadratic, as_point(p))


class ZProfile:
    """Maximal central coordinate over a horizontal point of the unit ball."""

    dim: int
    z_origin: float
    z_max: float

    def __call__(self, points) -> np.ndarray:
        raise NotImplementedError


class PolygonProfile(ZProfile):
    """Piecewise-quadratic profile for a planar polygonal norm.

    Pieces come from the enumerated isoperimetrix configurations; their
    feasibility regions tile the unit polygon.
    """

    dim = 2

    def __init__(self, P: PolygonalNorm, coefficient=1):
        self.P = P
        self.coefficient = abs(Fraction(coefficient))
        if self.coefficient == 0:
            raise ValueError("bracket coefficient must be non-zero")
        self.pieces = tuple(self._build_pieces())
        covered = sum((polygon_area(pc.region) for pc in self.pieces), Fraction(0))
        if covered != P.area():
            raise GeometryError(
                f"configuration regions cover area {covered}, expected {P.area()}; "
                "a non-connected configuration may be optimal"
            )
        self._edges = []
        for pc in self.pieces:
            R = np.array([[float(x), float(y)] for x, y in pc.region])
            d = np.roll(R, -1, axis=0) - R
            nrm = np.hypot(d[:, 0], d[:, 1])
            self._edges.append((R, d / nrm[:, None]))
        self._coef = np.array([[float(c) for c in pc.quadratic] for pc in self.pieces])

    def _build_pieces(self):
        solver = solver_for(self.P)
        c = self.coefficient
        for i in range(solver.n):
            for k in range(1, solver.n):
                sm = solver.solution_map(i, k)
                if sm is None:
                    continue
                S, s0 = sm
                rows = [(S[t][0], S[t][1], s0[t]) for t in range(5)]
                r, a, b = rows[0], rows[3], rows[4]
                cons = [r, a, tuple(x - y for x, y in zip(r, a)), b, tuple(x - y for x, y in zip(r, b))]
                poly = list(self.P.vertices)
                for con in cons:
                    poly = clip(poly, *con)
                    if len(poly) < 3:
                        break
                if len(poly) < 3 or polygon_area(poly) == 0:
                    continue
                q = _fit_quadratic(lambda v, i=i, k=k: c * solver.area_at(i, k, v))
                yield ProfilePiece(tuple(poly), q, i, k)

    def exact(self, v) -> Fraction:
        """Profile value at a rational point via the exact solver."""
        v = as_point(v)
        if self.P.norm(v) > 1:
            raise DomainError(f"{v} lies outside the unit ball")
        return self.coefficient * solver_for(self.P).solve(v, 1).area

    @cached_property
    def z_origin(self) -> float:
        return float(self.exact((0, 0)))

    @cached_property
    def z_max_exact(self) -> Fraction:
        return max(_max_quadratic_on_polygon(pc.quadratic, pc.region) for pc in self.pieces)

    @property
    def z_max(self) -> float:
        return float(self.z_max_exact)

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        flat = pts.reshape(-1, 2)
        if np.any(self.P(flat) > 1 + 1e-12):
            raise DomainError("point outside the unit ball of the horizontal norm")
        slack = np.empty((len(self.pieces), len(flat)))
        for j, (R, D) in enumerate(self._edges):
            rel = flat[:, None, :] - R[None, :, :]
            dist = D[None, :, 0] * rel[:, :, 1] - D[None, :, 1] * rel[:, :, 0]
            slack[j] = dist.min(axis=1)
        idx = np.argmax(slack, axis=0)
        A, B, C, Dc, E, F = self._coef[idx].T
        x, y = flat[:, 0], flat[:, 1]
        out = A * x * x + B * x * y + C * y * y + Dc * x + E * y + F
        out = np.maximum(out, 0.0).reshape(pts.shape[:-1])
        return out if out.ndim else float(out)

    def volume(self) -> Fraction:
        """Exact ``int 2 z``."""
        total = Fraction(0)
        for pc in self.pieces:
            total += integrate_quadratic(pc.region, lambda p, q=pc.quadratic: _eval_quadratic(q, p))
        return 2 * total


class H5Profile(ZProfile):
    """Closed-form profile for the standard generators of H5 (4-d l1 ball)."""

    dim = 4
    z_origin = 1 / 16
    # z_t(p) <= t^2 / 8 in each factor and t^2 + (1 - t)^2 <= 1
    z_max = 1 / 8

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return z_profile_h5(pts[..., 0], pts[..., 1], pts[..., 2], pts[..., 3])


class L1Norm4:
    def __call__(self, x):
        return np.abs(np.asarray(x, dtype=float)).sum(axis=-1)


@dataclass
class LimitShape:
    """``{(v, z) : ||v|| <= 1, |z| <= profile(v)}`` in exponential coordinates."""

    group: GroupSpec
    norm: Callable
    profile: ZProfile | None = None

    @property
    def is_abelian(self) -> bool:
        return self.profile is None

    def contains(self, points, tol: float = 1e-12) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        m = self.group.m
        hn = self.norm(pts[:, :m])
        inside = hn <= 1 + tol
        if self.is_abelian:
            return inside
        out = np.zeros(len(pts), dtype=bool)
        a = pts[inside, :m]
        a = a / np.maximum(self.norm(a), 1.0)[:, None]
        out[inside] = np.abs(pts[inside, m]) <= self.profile(a) + tol
        return out

    def volume(self):
        if isinstance(self.profile, PolygonProfile):
            return self.profile.volume()
        if isinstance(self.profile, H5Profile):
            return shape_volume_h5()
        raise NotImplementedError("volume is available for planar polygonal norms and standard H5")


def limit_shape(omega: GeneratingSet) -> LimitShape:
    G = omega.group
    if G.c > 1:
        raise NotImplementedError("limit shapes with a centre of dimension > 1 are not supported")
    norm = limit_norm(omega)
    if G.c == 0:
        return LimitShape(G, norm)
    if G.m == 2:
        return LimitShape(G, norm, PolygonProfile(norm, bracket_coefficient(G)))
    if G == heisenberg(2) and _is_cross_polytope(omega):
        return LimitShape(G, L1Norm4(), H5Profile())
    raise NotImplementedError(
        "profiles are implemented for planar abelianizations and the standard H5 generators"
    )


def _is_cross_polytope(omega: GeneratingSet) -> bool:
    m = omega.group.m
    hull_pts = {tuple(g.a) for g in omega.elems}
    axes = {tuple(s * int(i == j) for j in range(m)) for i in range(m) for s in (1, -1)}
    if not axes <= hull_pts:
        return False
    return all(sum(abs(x) for x in p) <= 1 for p in hull_pts)


# -- volumes ---------------------------------------------------------------


def shape_volume_h3(P: PolygonalNorm, coefficient=1) -> Fraction:
    """Exact volume of the limit shape for a planar polygonal norm."""
    return PolygonProfile(P, coefficient).volume()


H5_VOLUME_CLOSED_FORM = "2009/21870 + log(2)/32805"
_H5_SYMMETRY = 2**4 * 2**2 * 2


def _h5_parts(u1, u2, w2, w1):
    x1, y1 = (u1 + w1) / 2, (u1 - w1) / 2
    x2, y2 = (u2 + w2) / 2, (u2 - w2) / 2
    d1 = x1 * y1 / 2 + x2 / 2 * (1 - x1 - y1 - x2)
    d2 = x2 * y2 / 2 + x1 / 2 * (1 - x2 - y2 - x1)
    c1 = (1 + x1 + y1 - x2 - y2) ** 2 / 16 + (x2 * y2 - x1 * y1) / 2
    c2 = (1 + x2 + y2 - x1 - y1) ** 2 / 16 + (x1 * y1 - x2 * y2) / 2
    return d1, d2, c1, c2


def _quadratic_roots(f0, fh, f1, U):
    """Real roots of the quadratic through ``(0, f0), (U/2, fh), (U, f1)``."""
    with np.errstate(all="ignore"):
        a = 2 * (f1 - 2 * fh + f0) / U**2
        b = (4 * fh - 3 * f0 - f1) / U
        c = f0
        disc = b * b - 4 * a * c
        sq = np.sqrt(np.maximum(disc, 0))
        linear = np.abs(a) * np.maximum(U, 1e-300) < 1e-14 * (np.abs(b) + 1e-300)
        q = -0.5 * (b + np.copysign(sq, b))
        r1 = np.where(linear, -c / b, q / a)
        r2 = np.where(linear, np.nan, c / q)
        ok = disc >= 0
    return [np.where(ok, r1, np.nan), np.where(ok, r2, np.nan)]


def _h5_inner(u1, u2, w2):
    """Exact integral over ``w1`` in ``[0, min(u1, w2)]`` of the reduced profile.

    Between the region switch ``w1 = m`` and the crossings of the competing
    quadratics the integrand is a single quadratic, where Simpson's rule is exact.
    """
    U = np.minimum(u1, w2)
    samples = [_h5_parts(u1, u2, w2, w) for w in (0 * U, U / 2, U)]
    bps = [np.zeros_like(U), U, (1 - u1 - u2) / 2]
    for i, j in ((0, 1), (0, 2), (2, 3)):
        bps += _quadratic_roots(*(s[i] - s[j] for s in samples), U)
    B = np.stack(bps, axis=-1)
    B = np.sort(np.clip(np.where(np.isfinite(B), B, 0.0), 0, U[:, None]), axis=-1)
    lo, hi = B[:, :-1], B[:, 1:]
    x2, y2 = ((u2 + w2) / 2)[:, None], ((u2 - w2) / 2)[:, None]

    def f(w):
        return h5_closed_form_reduced((u1[:, None] + w) / 2, (u1[:, None] - w) / 2, x2, y2)

    return ((hi - lo) / 6 * (f(lo) + 4 * f((lo + hi) / 2) + f(hi))).sum(axis=-1)


def _h5_tetrahedra():
    """Split ``{u1, u2 >= 0, u1 + u2 <= 1, 0 <= w2 <= u2}`` along the kinks of the inner integral."""
    from scipy.optimize import linprog
    from scipy.spatial import Delaunay, HalfspaceIntersection

    base = [(-1, 0, 0, 0), (0, -1, 0, 0), (1, 1, 0, -1), (0, 0, -1, 0), (0, -1, 1, 0)]
    cuts = [(-1, 0, 1, 0), (1, 1, 2, -1), (3, 1, 0, -1)]
    tets = []
    for signs in itertools.product((1, -1), repeat=len(cuts)):
        hs = np.array(base + [tuple(s * c for c in cut) for s, cut in zip(signs, cuts)], dtype=float)
        A, b = hs[:, :3], hs[:, 3]
        res = linprog(
            [0, 0, 0, -1],
            A_ub=np.c_[A, np.linalg.norm(A, axis=1)],
            b_ub=-b,
            bounds=[(None, None)] * 3 + [(0, None)],
        )
        if not res.success or res.x[3] < 1e-9:
            continue
        V = np.unique(np.round(HalfspaceIntersection(hs, res.x[:3]).intersections, 14), axis=0)
        for simplex in Delaunay(V).simplices:
            T = V[simplex]
            if abs(np.linalg.det(T[1:] - T[0])) > 1e-14:
                tets.append(T)
    return tets


def _duffy(T):
    vol6 = abs(np.linalg.det(T[1:] - T[0]))

    def f(p):
        s, t, r = p[:, 0], p[:, 1], p[:, 2]
        l1 = s
        l2 = (1 - s) * t
        l3 = (1 - s) * (1 - t) * r
        l0 = 1 - l1 - l2 - l3
        X = l0[:, None] * T[0] + l1[:, None] * T[1] + l2[:, None] * T[2] + l3[:, None] * T[3]
        return _h5_inner(X[:, 0], X[:, 1], X[:, 2]) * (1 - s) ** 2 * (1 - t) * vol6

    return f


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    error: float
    evaluations: int = 0


def shape_volume_h5(tol: float = 1e-7, max_cells: int = 400_000, workers: int = 1) -> VolumeEstimate:
    """Volume of the limit shape of H5 with standard generators.

    Uses ``x_i +- y_i`` coordinates on the fundamental domain of the
    128-element symmetry group, an exact inner integral and adaptive cubature
    over tetrahedra on which the remaining integrand is smooth.  Tetrahedra
    run in a thread pool; results are summed in a fixed order, so the value
    does not depend on ``workers``.
    """
    tets = _h5_tetrahedra()
    # volume = 128 * 2 * (1/4) * integral in (u, w) coordinates
    scale = _H5_SYMMETRY * 2 / 4

    def one(T):
        try:
            return adaptive_cube(_duffy(T), 3, tol / scale / len(tets), initial=2, max_cells=max_cells)
        except QuadratureError as exc:
            raise QuadratureError("H5 volume cubature did not converge", scale * exc.value, scale * exc.error)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, tets))
    else:
        results = [one(T) for T in tets]
    value = scale * math.fsum(r.value for r in results)
    error = scale * math.fsum(r.error for r in results)
    return VolumeEstimate(value, error, sum(r.evaluations for r in results))


def sample_l1_ball(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Uniform samples from the unit l1 ball."""
    g = rng.exponential(size=(n, dim + 1))
    pts = g[:, :dim] / g.sum(axis=1, keepdims=True)
    return pts * rng.choice((-1.0, 1.0), size=(n, dim))


def h5_volume_monte_carlo(samples: int = 10**7, seed: int = 0, batch: int = 10**6) -> VolumeEstimate:
    """Independent estimate using the sup-over-``t`` profile; error is one standard error."""
    rng = np.random.default_rng(seed)
    ball = 2**4 / math.factorial(4)
    s1 = s2 = 0.0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        p = sample_l1_ball(rng, k, 4)
        v = 2 * z_profile_h5_sup(p[:, 0], p[:, 1], p[:, 2], p[:, 3])
        s1 += float(v.sum())
        s2 += float((v * v).sum())
        done += k
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0)
    return VolumeEstimate(ball * mean, ball * math.sqrt(var / samples), samples)


def polygon_volume_monte_carlo(
    P: PolygonalNorm, profile: Callable, samples: int = 10**6, seed: int = 0
) -> VolumeEstimate:
    """Monte-Carlo ``int 2 z`` over the unit polygon for any profile callable."""
    rng = np.random.default_rng(seed)
    V = P.float_vertices()
    lo, hi = V.min(axis=0), V.max(axis=0)
    box = float(np.prod(hi - lo))
    p = lo + (hi - lo) * rng.random((samples, 2))
    inside = P(p) <= 1
    vals = np.zeros(samples)
    vals[inside] = 2 * profile(p[inside])
    mean = vals.mean()
    return VolumeEstimate(box * mean, box * vals.std() / math.sqrt(samples), samples)


# -- meshes and export -----------------------------------------------------


@dataclass
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]], self.triangles[:, [2, 0]]])
        e = np.sort(e, axis=1)
        return np.unique(e, axis=0)


def shape_boundary_mesh(shape: LimitShape, resolution: int = 8) -> Mesh:
    """Triangulated boundary of a planar limit shape.

    The polygon is fanned from the origin and each fan triangle is split into
    ``resolution^2`` pieces.  The top sheet is ``z = profile(v)``, the bottom
    sheet its mirror image, and vertical walls close the rim where the
    profile is positive.  Coincident vertices are merged.
    """
    if shape.group.m != 2 or not isinstance(shape.norm, PolygonalNorm):
        raise NotImplementedError("meshes are available for planar abelianizations")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    V = shape.norm.float_vertices()
    n, k = resolution, len(V)
    keys: dict[tuple, int] = {}
    pts = []

    def pid(e, i, j):
        # (i V[e] + j V[e+1]) / n with shared points keyed canonically
        if i == 0 and j == 0:
            key = ("o",)
        elif j == 0:
            key = ("ray", e, i)
        elif i == 0:
            key = ("ray", (e + 1) % k, j)
        else:
            key = ("in", e, i, j)
        if key not in keys:
            keys[key] = len(pts)
            pts.append((i * V[e] + j * V[(e + 1) % k]) / n)
        return keys[key]

    tris, rim = [], []
    for e in range(k):
        for i in range(n):
            for j in range(n - i):
                a, b, c = pid(e, i, j), pid(e, i + 1, j), pid(e, i, j + 1)
                tris.append((a, b, c))
                if i + j + 2 <= n:
                    tris.append((b, pid(e, i + 1, j + 1), c))
        rim.extend(pid(e, n - j, j) for j in range(n))
    xy = np.array(pts)
    z = shape.profile(xy) if shape.profile is not None else np.zeros(len(xy))
    N = len(xy)
    verts = np.concatenate([np.column_stack([xy, z]), np.column_stack([xy, -z])])
    tris = np.array(tris, dtype=np.int64)
    faces = [tris, tris[:, ::-1] + N]
    walls = []
    for t in range(len(rim)):
        p, q = rim[t], rim[(t + 1) % len(rim)]
        walls += [(p, p + N, q), (q, p + N, q + N)]
    faces.append(np.array(walls, dtype=np.int64))
    faces = np.concatenate(faces)
    uniq, inv = np.unique(np.round(verts, 12), axis=0, return_inverse=True)
    faces = inv.reshape(-1)[faces]
    keep = (faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2]) & (faces[:, 0] != faces[:, 2])
    return Mesh(uniq, faces[keep])


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def mesh_to_svg(mesh: Mesh, azimuth: float = 0.6, elevation: float = 0.35, zscale: float = 4.0) -> str:
    """Orthographic wireframe; deterministic output."""
    ca, sa = math.cos(azimuth), math.sin(azimuth)
    ce, se = math.cos(elevation), math.sin(elevation)
    x, y, z = mesh.vertices.T
    px = x * ca - y * sa
    depth = x * sa + y * ca
    py = -(zscale * z * ce + depth * se)
    lines = []
    for i, j in mesh.edges():
        lines.append(f"M{_fmt(px[i])} {_fmt(py[i])}L{_fmt(px[j])} {_fmt(py[j])}")
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.2 -1.2 2.4 2.4">\n'
        '<path fill="none" stroke="black" stroke-width="0.002" d="'
        + "".join(lines)
        + '"/>\n</svg>\n'
    )


def rational_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def shape_to_json(shape: LimitShape, samples: int = 16) -> str:
    if not isinstance(shape.norm, PolygonalNorm):
        raise NotImplementedError("JSON export is available for planar polygonal shapes")
    P = shape.norm
    out: dict = {
        "group": shape.group.name,
        "polygon": [[rational_str(x), rational_str(y)] for x, y in P.vertices],
    }
    if isinstance(shape.profile, PolygonProfile):
        prof = shape.profile
        out["z_origin"] = rational_str(prof.exact((0, 0)))
        out["z_max"] = rational_str(prof.z_max_exact)
        out["volume"] = rational_str(prof.volume())
        out["pieces"] = [
            {
                "start_edge": pc.start_edge,
                "corners": pc.corners,
                "region": [[rational_str(x), rational_str(y)] for x, y in pc.region],
                "quadratic": [rational_str(c) for c in pc.quadratic],
            }
            for pc in prof.pieces
        ]
        grid = []
        for i in range(-samples, samples + 1):
            for j in range(-samples, samples + 1):
                v = (Fraction(i, samples), Fraction(j, samples))
                if P.norm(v) <= 1:
                    grid.append([rational_str(v[0]), rational_str(v[1]), rational_str(prof.exact(v))])
        out["profile_samples"] = grid
    return json.dumps(out, indent=1, sort_keys=True) + "\n"
