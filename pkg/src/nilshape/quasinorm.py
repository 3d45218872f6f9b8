"""Homogeneous quasi-norms of supremum type and Guivarc'h's rescaling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .group import GroupSpec


class DegenerateNormError(ValueError):
    pass


class LayerNorm:
    """A norm on one layer of the grading, evaluated on trailing axes."""

    dim: int

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def unit_vertices(self) -> np.ndarray | None:
        """Extreme points of the unit ball, or None if it is not a polytope."""
        return None


class L1Norm(LayerNorm):
    def __init__(self, dim: int, weights: Sequence[float] | None = None):
        w = np.ones(dim) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (dim,) or np.any(w <= 0):
            raise DegenerateNormError(f"l1 weights must be {dim} positive numbers")
        self.dim = dim
        self.weights = w

    def __call__(self, x):
        return np.abs(np.asarray(x, dtype=float)) @ self.weights

    def unit_vertices(self):
        eye = np.diag(1.0 / self.weights)
        return np.vstack([eye, -eye])

    def __repr__(self):
        return f"L1Norm({self.dim})"


class LinfNorm(LayerNorm):
    def __init__(self, dim: int):
        self.dim = dim

    def __call__(self, x):
        return np.max(np.abs(np.asarray(x, dtype=float)), axis=-1)

    def unit_vertices(self):
        return np.array(list(np.ndindex(*(2,) * self.dim)), dtype=float) * 2 - 1


class EuclideanNorm(LayerNorm):
    """``sqrt(sum w_i x_i^2)``."""

    def __init__(self, dim: int, weights: Sequence[float] | None = None):
        w = np.ones(dim) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (dim,) or np.any(w <= 0):
            raise DegenerateNormError(f"euclidean weights must be {dim} positive numbers")
        self.dim = dim
        self.weights = w

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.sqrt((x * x) @ self.weights)


class PolytopeNorm(LayerNorm):
    """Gauge of a centrally symmetric polytope given by its vertices."""

    def __init__(self, vertices):
        from scipy.spatial import ConvexHull

        v = np.asarray(vertices, dtype=float)
        self.dim = v.shape[1]
        try:
            hull = ConvexHull(v)
        except Exception as exc:  # qhull raises on flat input
            raise DegenerateNormError(f"polytope is degenerate: {exc}") from None
        eq = hull.equations
        if np.any(eq[:, -1] >= 0):
            raise DegenerateNormError("origin must be interior to the unit ball")
        self._facets = eq[:, :-1] / -eq[:, -1:]
        self._vertices = v[hull.vertices]

    def __call__(self, x):
        return np.max(np.asarray(x, dtype=float) @ self._facets.T, axis=-1)

    def unit_vertices(self):
        return self._vertices


@dataclass(frozen=True)
class QuasiNormSpec:
    layer_norms: tuple
    lambdas: tuple

    def __post_init__(self):
        if len(self.layer_norms) != len(self.lambdas):
            raise ValueError("need one scale factor per layer")
        if self.lambdas[0] != 1:
            raise ValueError("lambda_1 must be 1")
        if any(lam <= 0 for lam in self.lambdas):
            raise ValueError("scale factors must be positive")

    @property
    def dims(self) -> list[int]:
        return [n.dim for n in self.layer_norms]


def quasinorm(spec: QuasiNormSpec, p) -> np.ndarray | float:
    """``max_p (lambda_p ||pi_p(x)||_p)^(1/p)`` on points with coordinates on the last axis."""
    p = np.asarray(p, dtype=float)
    out = None
    start = 0
    for deg, (norm, lam) in enumerate(zip(spec.layer_norms, spec.lambdas), start=1):
        part = p[..., start : start + norm.dim]
        start += norm.dim
        val = (float(lam) * norm(part)) ** (1.0 / deg)
        out = val if out is None else np.maximum(out, val)
    if start != p.shape[-1]:
        raise ValueError(f"points have {p.shape[-1]} coordinates, quasi-norm covers {start}")
    return out if out.ndim else float(out)


def _bilinear_bound(G: GroupSpec, horizontal: LayerNorm, central: LayerNorm, tensor) -> float:
    """``sup ||T(u, u')||`` over horizontal unit vectors, attained at vertex pairs."""
    verts = horizontal.unit_vertices()
    if verts is not None:
        vals = central(np.einsum("ui,vj,ijk->uvk", verts, verts, tensor))
        return float(np.max(vals))
    if isinstance(horizontal, EuclideanNorm) and G.c == 1:
        scale = 1.0 / np.sqrt(horizontal.weights)
        M = tensor[:, :, 0] * np.outer(scale, scale)
        return float(np.linalg.norm(M, 2) * central(np.ones(1)))
    raise DegenerateNormError(
        f"cannot bound the bracket for horizontal norm {horizontal!r}; use a polytope norm"
    )


def bracket_constant(G: GroupSpec, layer_norms, law: str = "stratified") -> float:
    """Operator bound of the degree-2 correction term of the chosen group law."""
    if G.c == 0:
        return 0.0
    if law == "stratified":
        tensor = 0.5 * G.bracket_tensor().astype(float)
    elif law == "normal":
        tensor = G.Q.astype(float)
    else:
        raise ValueError(f"unknown law {law!r}")
    return _bilinear_bound(G, layer_norms[0], layer_norms[1], tensor)


# Coefficient of |x||y| in (|x| + |y| + eps)^2; for two layers it is the only
# mixed term, so it serves as the admissible slack for every eps >= 0.
_CROSS_TERM = 2.0


def rescale_quasinorm(
    G: GroupSpec, layer_norms, epsilon: float = 0.0, law: str = "stratified"
) -> QuasiNormSpec:
    """Choose ``lambda_2`` so that ``|xy| <= |x| + |y| + epsilon``.

    For a two-step law ``pi_2(xy) = pi_2(x) + pi_2(y) + P(a, a')`` with
    ``||P(a, a')|| <= C ||a|| ||a'||`` it suffices that ``lambda_2 C <= 2``.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    layer_norms = tuple(layer_norms)
    if len(layer_norms) != len(G.dims):
        raise ValueError(f"need {len(G.dims)} layer norms, got {len(layer_norms)}")
    for norm, d in zip(layer_norms, G.dims):
        if norm.dim != d:
            raise DegenerateNormError(f"layer norm of dimension {norm.dim} for layer of dimension {d}")
    if G.c == 0:
        return QuasiNormSpec(layer_norms, (1,))
    C2 = bracket_constant(G, layer_norms, law)
    if C2 == 0:
        raise DegenerateNormError("bracket vanishes on the unit ball")
    lam2 = Fraction(_CROSS_TERM) / Fraction(C2)
    return QuasiNormSpec(layer_norms, (1, lam2))


def inverse_constant(G: GroupSpec, spec: QuasiNormSpec, law: str = "normal") -> float:
    """Constant ``C`` with ``|x^-1| <= C |x|``.

    In exponential coordinates ``x^-1 = -x`` and ``C = 1``.  In normal form
    ``x^-1 = (-a, -z + Q(a, a))`` so ``C = sqrt(1 + lambda_2 C_Q)``.
    """
    if G.c == 0 or law == "stratified":
        return 1.0
    CQ = bracket_constant(G, spec.layer_norms, "normal")
    return float(np.sqrt(1.0 + float(spec.lambdas[1]) * CQ))


def standard_layer_norms(G: GroupSpec) -> tuple:
    """l1 on the horizontal layer, l1 on the centre."""
    norms = [L1Norm(G.m)]
    if G.c:
        norms.append(L1Norm(G.c))
    return tuple(norms)



def _exact_weights(norm: LayerNorm) -> tuple[list[int], int] | None:
    """Integer weights and common denominator of an l1 norm; None for the sup norm."""
    if isinstance(norm, L1Norm):
        w = [Fraction(float(x)) for x in norm.weights]
        den = math.lcm(*(f.denominator for f in w))
        return [int(f * den) for f in w], den
    if isinstance(norm, LinfNorm):
        return None
    raise NotImplementedError(f"no exact evaluation for {norm!r}")


def _int_norm(cols: list, weights) -> np.ndarray:
    if weights is None:
        out = np.abs(cols[0])
        for c in cols[1:]:
            out = np.maximum(out, np.abs(c))
        return out
    return sum(w * np.abs(c) for w, c in zip(weights[0], cols))


def _within_sqrt_sum(lhs, u, u2) -> np.ndarray:
    """``sqrt(lhs) <= sqrt(u) + sqrt(u2)`` for non-negative integers, without roots."""
    d = lhs - u - u2
    return np.array([di <= 0 or di * di <= 4 * a * b for di, a, b in zip(d, u, u2)], dtype=bool)


def _dyadic_integers(pts: np.ndarray, m: int) -> tuple[list[list[int]], int]:
    """Exact integer numerators of float entries over ``2^k`` (horizontal) and ``4^k`` (centre)."""
    ratios = [[float(v).as_integer_ratio() for v in col] for col in pts.T]
    k = 0
    for j, col in enumerate(ratios):
        e = max(d.bit_length() - 1 for _, d in col)
        k = max(k, e if j < m else (e + 1) // 2)
    out = []
    for j, col in enumerate(ratios):
        scale = 2**k if j < m else 4**k
        out.append([n * (scale // d) for n, d in col])
    return out, k


def subadditivity_violations(G: GroupSpec, spec: QuasiNormSpec, x, y) -> int:
    """Count pairs with ``|x * y| > |x| + |y|`` under the stratified law, in exact arithmetic.

    ``x`` and ``y`` are rows of exponential coordinates; float entries are
    read as the dyadic rationals they are.  Both points are dilated to
    integer coordinates (the inequality is dilation invariant) and every
    comparison is squared, so no rounding or square root enters.  Supports
    two-layer specs with l1 or sup layer norms.
    """
    if len(spec.layer_norms) != 2:
        raise NotImplementedError("exact check needs exactly two layers")
    m, c = G.m, G.c
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    cols, _ = _dyadic_integers(np.vstack([x, y]), m)
    n = len(x)
    # one more doubling makes B(a, a') / 2 integral
    cols = [np.array(col, dtype=object) * (2 if j < m else 4) for j, col in enumerate(cols)]
    a, a2 = [col[:n] for col in cols[:m]], [col[n:] for col in cols[:m]]
    z, z2 = [col[:n] for col in cols[m:]], [col[n:] for col in cols[m:]]
    B = G.bracket_tensor()
    pa = [s + t for s, t in zip(a, a2)]
    pz = []
    for k in range(c):
        acc = z[k] + z2[k]
        for i in range(m):
            for j in range(m):
                if B[i, j, k]:
                    acc = acc + int(B[i, j, k]) * a[i] * a2[j] // 2
        pz.append(acc)
    hw, cw = _exact_weights(spec.layer_norms[0]), _exact_weights(spec.layer_norms[1])
    lam = Fraction(spec.lambdas[1])
    hden = hw[1] if hw else 1
    cden = cw[1] if cw else 1
    # u = max(||a||^2, lambda ||z||) scaled by hden^2 * cden * lam.denominator
    sh = cden * lam.denominator
    sc = hden * hden * lam.numerator

    def u_of(av, zv):
        return np.maximum(_int_norm(av, hw) ** 2 * sh, _int_norm(zv, cw) * sc)

    u, u2 = u_of(a, z), u_of(a2, z2)
    ok = _within_sqrt_sum(_int_norm(pa, hw) ** 2 * sh, u, u2) & _within_sqrt_sum(_int_norm(pz, cw) * sc, u, u2)
    return int((~ok).sum())
