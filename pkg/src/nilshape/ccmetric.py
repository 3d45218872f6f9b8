"""Homogeneous CC distance from a limit shape, and Pansu convergence checks."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .balls import GeneratingSet, iter_spheres, KeyCodec, coordinate_bounds
from .group import dilate, heisenberg, to_exponential
from .shape import LimitShape, limit_shape, shape_boundary_mesh

REL_TOL = 1e-13


def _membership(shape: LimitShape, a: np.ndarray, z: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Whether ``delta_{1/t}(a, z)`` lies in the shape."""
    at = a / t[:, None]
    h = shape.norm(at)
    ok = h <= 1.0
    out = np.zeros(len(t), dtype=bool)
    if ok.any():
        prof = shape.profile(at[ok] / np.maximum(h[ok], 1.0)[:, None])
        out[ok] = z[ok] / t[ok] ** 2 <= prof
    return out


def cc_distance(shape: LimitShape, p) -> np.ndarray | float:
    """``d_infinity(e, p)`` for points ``p`` in exponential coordinates.

    Found by bisection on ``t`` for membership of ``delta_{1/t}(p)``, which is
    monotone in ``t``.
    """
    pts = np.asarray(p, dtype=float)
    flat = np.atleast_2d(pts)
    m = shape.group.m
    a = flat[:, :m]
    h = np.asarray(shape.norm(a), dtype=float)
    if shape.is_abelian:
        out = h
    else:
        z = np.abs(flat[:, m])
        # bisect on delta_{1/s}(p), which has order-one coordinates even for tiny or huge p
        s = np.maximum(h, np.sqrt(z))
        s = np.where(s > 0, s, 1.0)
        a, h, z = a / s[:, None], h / s, z / s / s
        prof = shape.profile
        lo = np.maximum(h, np.sqrt(z / prof.z_max))
        hi = h + np.sqrt(z / prof.z_origin)
        out = hi.copy()
        todo = (z > 0) & (hi > lo)
        out[z == 0] = h[z == 0]
        lo, hi = lo[todo], hi[todo]
        aa, zz = a[todo], z[todo]
        for _ in range(200):
            if not len(lo) or np.all(hi - lo <= REL_TOL * hi):
                break
            mid = (lo + hi) / 2
            inside = _membership(shape, aa, zz, mid)
            hi = np.where(inside, mid, hi)
            lo = np.where(inside, lo, mid)
        out[todo] = hi
        out = out * s
    out = out.reshape(pts.shape[:-1]) if pts.ndim > 1 else out[0]
    return out if np.ndim(out) else float(out)


# -- convergence harness ---------------------------------------------------


@dataclass
class ConvergenceReport:
    rows: list[tuple[int, float, float, float]]

    def max_dev(self, n: int) -> float:
        return next(r[1] for r in self.rows if r[0] == n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "max_dev", "mean_dev", "hausdorff"])
        for n, mx, mean, haus in self.rows:
            w.writerow([n, repr(float(mx)), repr(float(mean)), "" if math.isnan(haus) else repr(float(haus))])
        return buf.getvalue()


def _subsample(points: np.ndarray, cap: int) -> np.ndarray:
    if len(points) <= cap:
        return points
    idx = np.linspace(0, len(points) - 1, cap).round().astype(np.int64)
    return points[idx]


def pansu_convergence(
    omega: GeneratingSet,
    shape: LimitShape | None = None,
    nmax: int = 30,
    radii=None,
    sample_cap: int = 200_000,
    hausdorff: bool = False,
    workers: int = 1,
) -> ConvergenceReport:
    """Deviation ``|rho / d_infinity - 1|`` over spheres ``S(n)``.

    Lattice points are embedded at their exponential coordinates.  Spheres
    above ``sample_cap`` elements are subsampled at evenly spaced indices of
    the sorted key array, so the report is deterministic.
    """
    shape = shape or limit_shape(omega)
    G = omega.group
    radii = sorted(set(radii)) if radii is not None else list(range(1, nmax + 1))
    nmax = max(radii)
    codec = KeyCodec.from_bounds(coordinate_bounds(omega, nmax))
    wanted = set(radii)
    rows = []
    for n, keys in iter_spheres(omega, nmax, codec=codec, workers=workers):
        if n not in wanted:
            continue
        pts = to_exponential(G, codec.unpack(_subsample(keys, sample_cap)))
        d = cc_distance(shape, pts)
        dev = np.abs(n / d - 1.0)
        haus = rescaled_ball_hausdorff(omega, shape, n) if hausdorff else float("nan")
        rows.append((n, float(dev.max()), float(dev.mean()), haus))
    return ConvergenceReport(rows)


def _ball_points(omega: GeneratingSet, n: int) -> np.ndarray:
    codec = KeyCodec.from_bounds(coordinate_bounds(omega, n))
    chunks = [codec.unpack(keys) for _, keys in iter_spheres(omega, n, codec=codec)]
    return to_exponential(omega.group, np.concatenate(chunks))


def shape_samples(shape: LimitShape, spacing: float) -> np.ndarray:
    """Points filling the shape on a grid of the given spacing, plus its boundary mesh."""
    m = shape.group.m
    if m != 2:
        raise NotImplementedError("shape sampling is available for planar abelianizations")
    V = shape.norm.float_vertices()
    lo, hi = V.min(axis=0), V.max(axis=0)
    xs = np.arange(lo[0], hi[0] + spacing / 2, spacing)
    ys = np.arange(lo[1], hi[1] + spacing / 2, spacing)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    xy = np.column_stack([X.ravel(), Y.ravel()])
    xy = xy[shape.norm(xy) <= 1 + 1e-12]
    if shape.is_abelian:
        base = xy
    else:
        z = shape.profile(xy / np.maximum(shape.norm(xy), 1.0)[:, None])
        layers = []
        for zi in np.arange(-float(z.max()), float(z.max()) + spacing / 2, spacing):
            keep = np.abs(zi) <= z
            layers.append(np.column_stack([xy[keep], np.full(keep.sum(), zi)]))
        base = np.concatenate(layers)
    res = max(2, int(round(1 / spacing)))
    mesh = shape_boundary_mesh(shape, res).vertices
    if shape.is_abelian:
        mesh = mesh[:, :2]
    return np.concatenate([base, mesh])


def rescaled_ball_hausdorff(omega: GeneratingSet, shape: LimitShape, n: int, spacing: float = 0.01) -> float:
    """Two-sided sampled Hausdorff distance between ``delta_{1/n}(B(n))`` and the shape.

    Cloud points inside the shape count as distance 0; the estimate is
    accurate to about ``spacing``.
    """
    G = omega.group
    cloud = _ball_points(omega, n)
    cloud = dilate(G, 1.0 / n, cloud) if G.c else cloud / n
    samples = shape_samples(shape, spacing)
    to_shape = cKDTree(samples).query(cloud)[0]
    to_shape[shape.contains(cloud)] = 0.0
    to_cloud = cKDTree(cloud).query(samples)[0]
    return float(max(to_shape.max(), to_cloud.max()))


# -- product metric on R x H3 ---------------------------------------------


@lru_cache(maxsize=1)
def _h3_shape() -> LimitShape:
    G = heisenberg(1)
    return limit_shape(GeneratingSet.standard(G))


def bm_product_distance(z0: float, v, x, y, z):
    """``|v| + d_H3(e, (x, y, z - v z0))`` for the standard H3 limit metric."""
    v, x, y, z = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (v, x, y, z)))
    pts = np.stack([x, y, z - v * z0], axis=-1)
    out = np.abs(v) + cc_distance(_h3_shape(), pts)
    return out if np.ndim(out) else float(out)
