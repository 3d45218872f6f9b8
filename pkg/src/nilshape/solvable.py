"""The solvable groups ``Z x| R^2``: slow-speed certificates and cone limit shapes.

``G_alpha`` is ``Z`` acting on ``R^2`` by rotation of angle ``pi alpha``.  For
``alpha = sum 3^(-n_i)`` the orbit ``k alpha`` avoids ``Z + 1/2`` for all small
``|k|``, which keeps vertical directions long and makes balls converge slowly
to their limit shape.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.spatial import ConvexHull


iv = mpmath.iv

# volume of the rho_0 ball is c n^3 + O(n^2), with the constant as stated for this example
VOLUME_CONSTANT = "4*pi/3"
SCAN_LIMIT = 2_000_000


class PrecisionError(ValueError):
    pass


@dataclass(frozen=True)
class LiouvilleAlpha:
    """``alpha = sum_i 3^(-n_i)`` for a strictly increasing list of exponents."""

    exponents: tuple[int, ...]
    witnesses: tuple[int, ...] = ()

    def __post_init__(self):
        e = tuple(int(x) for x in self.exponents)
        if any(x <= 0 for x in e) or any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError("exponents must be positive and strictly increasing")
        object.__setattr__(self, "exponents", e)
        object.__setattr__(self, "witnesses", tuple(int(w) for w in self.witnesses))

    @property
    def value(self) -> Fraction:
        return sum((Fraction(1, 3**n) for n in self.exponents), Fraction(0))

    def partial(self, j: int) -> Fraction:
        return sum((Fraction(1, 3**n) for n in self.exponents[:j]), Fraction(0))

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "witnesses": list(self.witnesses)}


@dataclass(frozen=True)
class LiouvilleCheck:
    holds: bool
    worst_k: int
    distance: Fraction


def _dist_half(num: int, q: int) -> Fraction:
    """``d(num / q, Z + 1/2)``."""
    r = (2 * num) % (2 * q)
    return Fraction(abs(r - q), 2 * q)


def _as_fraction(alpha, n: int) -> Fraction:
    if isinstance(alpha, LiouvilleAlpha):
        return alpha.value
    if isinstance(alpha, (Fraction, int)):
        return Fraction(alpha)
    if isinstance(alpha, mpmath.mpf):
        guard = 20
        needed = max(1, n).bit_length() + guard
        if mpmath.mp.prec < needed:
            raise PrecisionError(f"alpha carries {mpmath.mp.prec} bits, need at least {needed} for n = {n}")
        man, exp = mpmath.mpf(alpha).man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    if isinstance(alpha, float):
        raise PrecisionError("floating-point alpha has 53 bits; pass a LiouvilleAlpha, Fraction or mpmath value")
    raise TypeError(f"unsupported alpha type {type(alpha).__name__}")


def min_half_distance(alpha, n: int) -> tuple[Fraction, int]:
    """Exact ``min_{|k| <= n} d(k alpha, Z + 1/2)`` and a minimizing ``k >= 0``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a = _as_fraction(alpha, n)
    if isinstance(alpha, LiouvilleAlpha):
        return _scan_liouville(alpha, n)
    p, q = a.numerator, a.denominator
    if n > SCAN_LIMIT and n < q:
        raise ValueError(f"direct scan of {n} multiples is too large for a general rational")
    best, arg = Fraction(1, 2), 0
    for k in range(1, min(n, q) + 1):
        d = _dist_half(k * p, q)
        if d < best:
            best, arg = d, k
    return best, arg


def _scan_liouville(alpha: LiouvilleAlpha, n: int) -> tuple[Fraction, int]:
    """Residue-class scan: ``k alpha = k alpha_J + k tau`` where ``k alpha_J`` depends only on ``k mod 3^(n_J)``.

    ``J`` is the shortest prefix whose tail ``tau`` satisfies ``n tau < 1/2``;
    within a residue class ``k tau`` is an arithmetic progression crossing at
    most one half-integer, so a handful of candidates per class suffices.
    """
    exps = alpha.exponents
    N = exps[-1] if exps else 0
    q = 3**N
    p = sum(3 ** (N - e) for e in exps)
    best, arg = Fraction(1, 2), 0
    if n == 0 or p == 0:
        return best, arg

    def consider(k):
        nonlocal best, arg
        d = _dist_half(k * p, q)
        if d < best or (d == best and k < arg):
            best, arg = d, k

    J = 0
    while J < len(exps) and 2 * n * (alpha.value - alpha.partial(J)) >= 1:
        J += 1
    QJ = 3 ** exps[J - 1] if J else 1
    if min(QJ, n) > SCAN_LIMIT:
        raise ValueError(f"scan needs {min(QJ, n)} classes, above the limit {SCAN_LIMIT}")
    if n <= QJ:
        for k in range(1, n + 1):
            consider(k)
        return best, arg
    # k = c + j QJ with 0 <= c < QJ; fractional part of k alpha is frac(c alpha_J) + k tau
    tail = alpha.value - alpha.partial(J)
    aJ = alpha.partial(J)
    for c in range(QJ):
        k0 = c if c >= 1 else QJ
        if k0 > n:
            continue
        k1 = k0 + ((n - k0) // QJ) * QJ
        consider(k0)
        consider(k1)
        base = (c * aJ) % 1
        for h in (Fraction(1, 2), Fraction(3, 2)):
            if tail == 0:
                break
            kstar = (h - base) / tail
            if k0 <= kstar <= k1:
                j = (kstar - k0) // QJ
                for kk in (k0 + j * QJ, k0 + (j + 1) * QJ):
                    if k0 <= kk <= k1:
                        consider(int(kk))
    return best, arg


def check_liouville(alpha, n: int, delta) -> LiouvilleCheck:
    """Whether ``d(k alpha, Z + 1/2) >= 2 delta`` for every ``|k| <= n``."""
    dist, k = min_half_distance(alpha, n)
    if isinstance(delta, (int, Fraction)):
        return LiouvilleCheck(dist >= 2 * Fraction(delta), k, dist)
    # certified only if the whole interval satisfies the bound
    holds = _interval(dist) >= 2 * _interval(delta)
    return LiouvilleCheck(holds is True, k, dist)


def _interval(x):
    if isinstance(x, Fraction):
        return iv.mpf([x.numerator, x.numerator]) / x.denominator
    return iv.mpf(x)


def delta_from_epsilon(eps):
    """``delta = (4 eps)^(1/3)`` as an interval."""
    e = _interval(eps)
    if e.b == 0:
        return iv.mpf(0)
    return iv.exp(iv.log(4 * e) / 3)


def default_epsilon(n: int) -> float:
    return 1.0 / math.log(n + 2)


def norm_ratio_extremes():
    """Extremes of ``||x|| / ||x||_0`` with ``||x||^2 = x1^2/4 + x2^2`` and ``||x||_0 = |x|/2``.

    The ratio is ``sqrt(1 + 3 cos(phi)^2)`` with ``phi`` the angle to the
    vertical axis: 2 on the vertical axis, 1 on the horizontal axis.
    """
    def ratio(x):
        x = np.asarray(x, dtype=float)
        return math.sqrt(x[0] ** 2 / 4 + x[1] ** 2) / (math.hypot(x[0], x[1]) / 2)

    return ratio((0.0, 1.0)), ratio((1.0, 0.0))


@dataclass(frozen=True)
class Certificate:
    n: int
    epsilon: float
    delta: float
    worst_k: int
    distance: Fraction
    margin: float
    volume_bound: float

    def to_json(self) -> dict:
        d = self.distance
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "worst_k": self.worst_k,
            "distance": f"{d.numerator}/{d.denominator}",
            "margin": self.margin,
            "volume_bound": self.volume_bound,
        }


def rotation_margin(distance: Fraction, delta):
    """Interval lower bound of ``min ||R_{k alpha} x|| / ||x||_0 - (1 + delta^2)`` over the sector.

    For ``x`` within ``delta`` of the vertical axis and ``d(k alpha, Z + 1/2) >= d``,
    ``R_{k alpha} x`` stays at least ``pi d - delta`` away from the horizontal
    axis, where the ratio ``sqrt(1 + 3 sin(psi)^2)`` is increasing in that gap.
    """
    d = _interval(distance)
    dl = _interval(delta) if not isinstance(delta, type(iv.mpf(0))) else delta
    gap = iv.pi * d - dl
    lo = max(mpmath.mpf(0), mpmath.mpf(gap.a))
    s = iv.sin(iv.mpf([lo, lo]))
    return iv.sqrt(1 + 3 * s * s) - (1 + dl * dl)


def slow_speed_certificate(
    alpha: LiouvilleAlpha,
    epsilons: Sequence[float] | Callable[[int], float] | float | None = None,
    radii: Iterable[int] | None = None,
) -> list[Certificate]:
    """Certified radii: Liouville condition plus the rotation inequality, with implied deficit.

    ``epsilons`` is one value per radius, a callable of ``n`` or a constant;
    by default ``1 / ln(n + 2)``.
    """
    radii = list(radii) if radii is not None else list(alpha.witnesses)
    if callable(epsilons):
        eps_list = [epsilons(n) for n in radii]
    elif epsilons is None:
        eps_list = [default_epsilon(n) for n in radii]
    elif isinstance(epsilons, (int, float, Fraction)):
        eps_list = [epsilons] * len(radii)
    else:
        eps_list = list(epsilons)
        if len(eps_list) != len(radii):
            raise ValueError("need one epsilon per radius")
    c = 4 * math.pi / 3
    out = []
    for n, eps in zip(radii, eps_list):
        delta = delta_from_epsilon(eps)
        chk = check_liouville(alpha, n, delta)
        if not chk.holds:
            continue
        margin = rotation_margin(chk.distance, delta)
        if not margin.a >= 0:
            continue
        out.append(
            Certificate(
                n,
                float(eps),
                float(mpmath.mpf(delta.b)),
                chk.worst_k,
                chk.distance,
                float(mpmath.mpf(margin.a)),
                (1 - float(eps)) * c * n**3,
            )
        )
    return out


def certificates_json(alpha: LiouvilleAlpha, certs: Sequence[Certificate]) -> str:
    return json.dumps(
        {"alpha": alpha.to_json(), "volume_constant": VOLUME_CONSTANT, "certificates": [c.to_json() for c in certs]},
        indent=1,
        sort_keys=True,
    ) + "\n"


def construct_alpha(
    witnesses: Sequence[int],
    epsilons: Sequence[float] | float,
    max_exponent: int = 120,
) -> LiouvilleAlpha:
    """Greedy lacunary exponents making each witness satisfy the Liouville condition.

    Each new exponent is the smallest one that certifies the next witness
    with a ten percent slack while moving ``k alpha`` by less than
    ``delta / 10`` for every earlier witness.  A witness already certified by
    the current prefix adds no term.
    """
    ws = list(witnesses)
    if any(b <= a for a, b in zip(ws, ws[1:])) or (ws and ws[0] < 1):
        raise ValueError("witnesses must be positive and increasing")
    eps = [epsilons] * len(ws) if isinstance(epsilons, (int, float, Fraction)) else list(epsilons)
    deltas = [float(mpmath.mpf(delta_from_epsilon(e).b)) for e in eps]
    exps: list[int] = []

    def certifies(alpha, j):
        dist, _ = min_half_distance(alpha, ws[j])
        return float(dist) >= 2.2 * deltas[j]

    for j in range(len(ws)):
        prefix = LiouvilleAlpha(tuple(exps)) if exps else None
        if prefix is not None and certifies(prefix, j):
            continue
        lo = exps[-1] + 1 if exps else 1
        for i in range(j):
            # perturbation of k alpha for |k| <= w_i stays below delta_i / 10
            while 3**lo <= 15 * ws[i] / max(deltas[i], 1e-300):
                lo += 1
        for e in range(lo, max_exponent + 1):
            cand = LiouvilleAlpha(tuple(exps) + (e,))
            if certifies(cand, j) and all(certifies(cand, i) for i in range(j)):
                exps.append(e)
                break
        else:
            raise ValueError(
                f"witness {ws[j]} cannot be certified after exponents {exps}; "
                "with a fixed epsilon every witness must stay below about (1/2 - 2 delta) / alpha"
            )
    return LiouvilleAlpha(tuple(exps), tuple(ws))


# -- cone limit shapes -----------------------------------------------------


@dataclass(frozen=True)
class ConeShape:
    r0: float
    r1: float
    r2: float

    def to_json(self) -> dict:
        return {"r0": self.r0, "r1": self.r1, "r2": self.r2}


def _points(pts) -> np.ndarray:
    arr = np.asarray(pts, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("point sets must be lists of planar points")
    return arr


def _hull(pts: np.ndarray) -> np.ndarray:
    if len(pts) >= 3:
        try:
            return pts[ConvexHull(pts).vertices]
        except Exception:  # collinear input
            pass
    # collinear: the two extreme points along the spanning direction
    d = pts - pts[0]
    u = d[np.argmax(np.hypot(d[:, 0], d[:, 1]))]
    if not np.any(u):
        return pts[:1]
    s = d @ u
    return pts[[int(np.argmin(s)), int(np.argmax(s))]]


def cone_shape(omega0, omega1) -> ConeShape:
    """Radii of the double truncated cone for ``(0, Omega0) u (1, Omega1) u (1, Omega1)^-1``.

    ``r2`` integrates ``max_{w in Omega1} <R_theta w, e1>`` over a full turn with
    the support point's switching angles as breakpoints.  Translating
    ``Omega1`` does not change the integral, so it is centred first.
    """
    p0 = _points(omega0)
    p1 = _points(omega1)
    if not len(p1):
        raise ValueError("Omega1 must be non-empty")
    if len(p0):
        if not np.allclose(np.sort(p0, axis=0), np.sort(-p0, axis=0)):
            raise ValueError("Omega0 must be symmetric about the origin")
        r0 = float(np.hypot(p0[:, 0], p0[:, 1]).max())
    else:
        r0 = 0.0
    diff = p1[:, None, :] - p1[None, :, :]
    r1 = float(np.hypot(diff[..., 0], diff[..., 1]).max()) / 2
    h = _hull(p1)
    h = h - h.mean(axis=0)
    if not np.any(h):
        return ConeShape(r0, r1, 0.0)

    def support(theta):
        c, s = math.cos(theta), math.sin(theta)
        return float(np.max(h[:, 0] * c - h[:, 1] * s))

    # the maximiser switches where R_theta maps an edge normal onto e1
    breaks = set()
    k = len(h)
    for i in range(k):
        e = h[(i + 1) % k] - h[i]
        phi = math.atan2(e[1], e[0])
        for off in (math.pi / 2, -math.pi / 2):
            breaks.add((off - phi) % (2 * math.pi))
    pts = sorted(b for b in breaks if 0 < b < 2 * math.pi)
    val, _ = quad(support, 0.0, 2 * math.pi, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-13)
    return ConeShape(r0, r1, val / (2 * math.pi))


def cone_r2_cauchy(omega1) -> float:
    """Cauchy's formula: mean width over a turn equals perimeter of the hull over ``pi``."""
    h = _hull(_points(omega1))
    if len(h) == 1:
        return 0.0
    if len(h) == 2:
        return float(np.hypot(*(h[1] - h[0]))) / math.pi
    per = float(np.hypot(*(np.roll(h, -1, axis=0) - h).T).sum())
    return per / (2 * math.pi)
