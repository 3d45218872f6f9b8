"""Dido's problem for polygonal norms and the vertical profiles of CC unit balls.

For a horizontal path in a 2-step group the central coordinate (in exponential
coordinates) is the signed area swept between the path and its chord.  The
maximal area over paths of given length from ``0`` to ``v`` is attained by an
arc of a scaled, translated isoperimetrix traversed counterclockwise.  The
solver enumerates such arcs combinatorially: the arc starts on edge ``i`` and
crosses ``k`` corners before ending on edge ``i + k``.  With unknowns
``(r, c, a, b)`` (scale, translation, scaled positions on the two edges) the
incidence and length conditions are linear, so every configuration is a small
exact rational system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .linalg import inverse, solve_affine
from .polygon import PolygonalNorm, as_point, det, isoperimetrix, l1_norm

_ZERO = Fraction(0)


class InfeasibleError(ValueError):
    """The endpoint is farther than the available length."""


class DomainError(ValueError):
    """Point lies outside the unit ball of the horizontal norm."""


@dataclass(frozen=True)
class Configuration:
    start_edge: int
    corners: int
    r: Fraction
    c: tuple
    area: Fraction


@dataclass
class DidoSolution:
    area: Fraction
    configurations: list[Configuration] = field(default_factory=list)
    family: bool = False

    @property
    def multiplicity(self) -> float:
        return math.inf if self.family else len(self.configurations)


class DidoSolver:
    """Exact maximal balayage area for a fixed polygonal norm."""

    def __init__(self, P: PolygonalNorm):
        self.P = P
        self.I = isoperimetrix(P)
        W = self.I.vertices
        n = len(W)
        self.n = n
        self.W = W
        self.E = [(W[(m + 1) % n][0] - W[m][0], W[(m + 1) % n][1] - W[m][1]) for m in range(n)]
        self.lengths = [P.norm(e) for e in self.E]
        self.perimeter = sum(self.lengths, _ZERO)
        self._inv: dict[tuple[int, int], list | None] = {}

    # -- configuration systems ------------------------------------------

    def _matrix(self, i: int, k: int):
        n = self.n
        j = (i + k) % n
        Wi, Wj, Ei, Ej = self.W[i], self.W[j], self.E[i], self.E[j]
        mid = sum((self.lengths[(i + t) % n] for t in range(1, k)), _ZERO)
        li, lj = self.lengths[i], self.lengths[j]
        return [
            [Wi[0], 1, 0, Ei[0], 0],
            [Wi[1], 0, 1, Ei[1], 0],
            [Wj[0], 1, 0, 0, Ej[0]],
            [Wj[1], 0, 1, 0, Ej[1]],
            [li + mid, 0, 0, -li, lj],
        ]

    def _inverse(self, i: int, k: int):
        key = (i, k)
        if key not in self._inv:
            self._inv[key] = inverse(self._matrix(i, k))
        return self._inv[key]

    def _constraints(self, X, k: int):
        r, _, _, a, b = X
        g = [r, a, r - a, b, r - b]
        if k == self.n:
            g.append(a - b)
        return g

    def _area(self, X, i: int, k: int, v) -> Fraction:
        r, cx, cy = X[0], X[1], X[2]
        n = self.n
        corners = [
            (cx + r * self.W[(i + t) % n][0], cy + r * self.W[(i + t) % n][1])
            for t in range(1, k + 1)
        ]
        pts = corners + [v]
        return sum((det(pts[t], pts[t + 1]) for t in range(len(pts) - 1)), _ZERO) / 2

    def solution_map(self, i: int, k: int):
        """Affine map ``v -> X`` for unit length, or None if the system is singular."""
        Minv = self._inverse(i, k)
        if Minv is None:
            return None
        S = [(row[2], row[3]) for row in Minv]
        s0 = [row[4] for row in Minv]
        return S, s0

    def area_at(self, i: int, k: int, v, L=1) -> Fraction:
        """Area of the configuration's arc, without feasibility checks."""
        Minv = self._inverse(i, k)
        v = as_point(v)
        rhs = (0, 0, v[0], v[1], Fraction(L))
        X = [sum((row[t] * rhs[t] for t in range(5)), _ZERO) for row in Minv]
        return self._area(X, i, k, v)

    # -- solver ----------------------------------------------------------

    def solve(self, v, L=1) -> DidoSolution:
        v = as_point(v)
        L = Fraction(L)
        if L <= 0:
            raise ValueError("length must be positive")
        if self.P.norm(v) > L:
            raise InfeasibleError(f"||v|| = {self.P.norm(v)} exceeds the length {L}")
        rhs = [0, 0, v[0], v[1], L]
        candidates: list[tuple[Fraction, Configuration, bool]] = []
        for i in range(self.n):
            for k in range(1, self.n + 1):
                Minv = self._inverse(i, k)
                if Minv is not None:
                    X = [sum((row[t] * rhs[t] for t in range(5)), _ZERO) for row in Minv]
                    if min(self._constraints(X, k)) >= 0:
                        area = self._area(X, i, k, v)
                        candidates.append((area, self._config(i, k, X, area), False))
                    continue
                sol = solve_affine(self._matrix(i, k), rhs)
                if sol is None:
                    continue
                X0, basis = sol
                if len(basis) != 1:
                    raise NotImplementedError(
                        f"configuration ({i}, {k}) has a {len(basis)}-dimensional family"
                    )
                candidates.extend(self._family(i, k, X0, basis[0], v))
        if not candidates:
            # only the straight segment remains (||v|| == L along a direction without corners)
            return DidoSolution(_ZERO, [], False)
        best = max(c[0] for c in candidates)
        configs: dict[tuple, Configuration] = {}
        family = False
        for area, cfg, is_family in candidates:
            if area == best:
                configs.setdefault((cfg.r, cfg.c), cfg)
                family = family or is_family
        return DidoSolution(best, list(configs.values()), family)

    def _config(self, i, k, X, area) -> Configuration:
        return Configuration(i, k, X[0], (X[1], X[2]), area)

    def _family(self, i, k, X0, d, v):
        lo, hi = None, None
        g0 = self._constraints(X0, k)
        X1 = [x + y for x, y in zip(X0, d)]
        g1 = [b - a for a, b in zip(g0, self._constraints(X1, k))]
        for c0, c1 in zip(g0, g1):
            if c1 == 0:
                if c0 < 0:
                    return []
            elif c1 > 0:
                t = -c0 / c1
                lo = t if lo is None else max(lo, t)
            else:
                t = -c0 / c1
                hi = t if hi is None else min(hi, t)
        if lo is None or hi is None or lo > hi:
            return []

        def at(t):
            X = [x + t * y for x, y in zip(X0, d)]
            return X, self._area(X, i, k, v)

        # area is quadratic in t
        f0, f1, fm = at(_ZERO)[1], at(Fraction(1))[1], at(Fraction(-1))[1]
        qa = (f1 + fm) / 2 - f0
        qb = (f1 - fm) / 2
        ts = [lo, hi]
        if qa < 0:
            tv = -qb / (2 * qa)
            if lo < tv < hi:
                ts.append(tv)
        out = []
        constant = qa == 0 and qb == 0 and lo < hi
        for t in ts:
            X, area = at(t)
            out.append((area, self._config(i, k, X, area), constant))
        return out


_SOLVERS: dict[PolygonalNorm, DidoSolver] = {}


def solver_for(P: PolygonalNorm) -> DidoSolver:
    if P not in _SOLVERS:
        _SOLVERS[P] = DidoSolver(P)
    return _SOLVERS[P]


def dido_max_area(P: PolygonalNorm, v, L=1) -> Fraction:
    """Largest signed sweep area of a path of ``P``-length ``L`` from 0 to ``v``."""
    return solver_for(P).solve(v, L).area


def dido_solve(P: PolygonalNorm, v, L=1) -> DidoSolution:
    return solver_for(P).solve(v, L)


# -- closed forms for the standard Heisenberg generators -------------------


def _check_l1(total, tol=1e-12):
    if np.any(total > 1 + tol):
        raise DomainError("point outside the unit l1 ball")


def z_profile_h3(x, y):
    """Vertical extent of the limit CC ball of H3 with standard generators."""
    x = np.abs(np.asarray(x, dtype=float))
    y = np.abs(np.asarray(y, dtype=float))
    _check_l1(x + y)
    hi = np.maximum(x, y)
    lo = np.minimum(x, y)
    three_sides = hi * (1 - hi) / 2
    four_sides = (1 + hi + lo) ** 2 / 16 - hi * lo / 2
    out = np.where(lo < 3 * hi - 1, three_sides, four_sides)
    return out if out.ndim else float(out)


def z_profile_h3_exact(x, y) -> Fraction:
    x, y = abs(Fraction(x)), abs(Fraction(y))
    if x + y > 1:
        raise DomainError("point outside the unit l1 ball")
    if y > x:
        x, y = y, x
    if y < 3 * x - 1:
        return x * (1 - x) / 2
    return (1 + x + y) ** 2 / 16 - x * y / 2


def _reduce_pairs(x1, y1, x2, y2):
    x1, y1, x2, y2 = (np.abs(np.asarray(t, dtype=float)) for t in (x1, y1, x2, y2))
    _check_l1(x1 + y1 + x2 + y2)
    x1, y1 = np.maximum(x1, y1), np.minimum(x1, y1)
    x2, y2 = np.maximum(x2, y2), np.minimum(x2, y2)
    swap = (x2 - y2) < (x1 - y1)
    x1, x2 = np.where(swap, x2, x1), np.where(swap, x1, x2)
    y1, y2 = np.where(swap, y2, y1), np.where(swap, y1, y2)
    return x1, y1, x2, y2


def h5_closed_form_reduced(x1, y1, x2, y2):
    """Closed form on the fundamental domain (no reduction, no checks)."""
    d1 = x1 * y1 / 2 + x2 / 2 * (1 - x1 - y1 - x2)
    d2 = x2 * y2 / 2 + x1 / 2 * (1 - x2 - y2 - x1)
    c1 = (1 + x1 + y1 - x2 - y2) ** 2 / 16 + (x2 * y2 - x1 * y1) / 2
    c2 = (1 + x2 + y2 - x1 - y1) ** 2 / 16 + (x1 * y1 - x2 * y2) / 2
    m = (1 - x1 - x2 - y1 - y2) / 2
    w1 = x1 - y1
    w2 = x2 - y2
    return np.where(
        m <= w1,
        np.maximum(d1, d2),
        np.where(m < w2, np.maximum(d1, c1), np.maximum(c1, c2)),
    )


def z_profile_h5(x1, y1, x2, y2):
    """Vertical extent of the limit CC ball of H5 with standard generators."""
    out = h5_closed_form_reduced(*_reduce_pairs(x1, y1, x2, y2))
    return out if out.ndim else float(out)


def _scaled_h3(t, x, y):
    """``t^2 z(x/t, y/t)`` for ``0 <= y <= x``, ``x + y <= t``."""
    return np.where(t <= 3 * x - y, x * (t - x) / 2, (t + x + y) ** 2 / 16 - x * y / 2)


def z_profile_h5_sup(x1, y1, x2, y2):
    """``sup_t z_t(x1, y1) + z_{1-t}(x2, y2)`` evaluated exactly.

    Each summand is linear or convex in ``t`` between the branch switches, so
    the supremum sits at an interval end or a switch point.
    """
    x1, y1, x2, y2 = (np.abs(np.asarray(t, dtype=float)) for t in (x1, y1, x2, y2))
    _check_l1(x1 + y1 + x2 + y2)
    x1, y1 = np.maximum(x1, y1), np.minimum(x1, y1)
    x2, y2 = np.maximum(x2, y2), np.minimum(x2, y2)
    lo = x1 + y1
    hi = 1 - x2 - y2
    cands = [lo, hi, np.clip(3 * x1 - y1, lo, hi), np.clip(1 - 3 * x2 + y2, lo, hi)]
    best = None
    for t in cands:
        val = _scaled_h3(t, x1, y1) + _scaled_h3(1 - t, x2, y2)
        best = val if best is None else np.maximum(best, val)
    return best if best.ndim else float(best)


# -- discretized oracle ----------------------------------------------------


@dataclass
class DidoGrid:
    """Maximal sweep area on the lattice reachable with ``steps`` steps."""

    values: np.ndarray
    spacing: float
    radius: int

    def snap(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return np.rint(pts / self.spacing).astype(np.int64)

    def lookup(self, idx) -> np.ndarray:
        idx = np.asarray(idx)
        return self.values[idx[..., 0] + self.radius, idx[..., 1] + self.radius]

    def value_at(self, points):
        """Grid value at the nearest lattice point, with that point's coordinates."""
        idx = self.snap(points)
        return self.lookup(idx), idx * self.spacing


def dido_dp(P: PolygonalNorm, steps: int = 400, L: float = 1.0) -> DidoGrid:
    """Dynamic program over step sequences along the directions of ``P``'s vertices.

    Every step has ``P``-length ``L / steps``.  Directions are the unit-ball
    vertices, which suffice for polygonal norms.  Values are the best area
    over at most ``steps`` steps (the true profile is monotone in length).
    """
    verts = P.vertices
    denom = math.lcm(*(Fraction(c).denominator for v in verts for c in v))
    dirs = np.array([[int(c * denom) for c in v] for v in verts], dtype=np.int64)
    spacing = L / steps / denom
    radius = int(steps * np.max(np.abs(dirs)))
    unit = dirs.astype(float) / denom
    values = _kernels.dido_dp(dirs, unit, steps, radius, spacing, L / steps)
    return DidoGrid(values, spacing, radius)


def l1_dido_profile(v, L=1) -> Fraction:
    """Exact Dido area for the l1 norm via the general solver."""
    return dido_max_area(l1_norm(), v, L)
