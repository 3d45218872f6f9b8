"""Word metrics on ``Z x H3(Z)`` that are asymptotic yet not at bounded distance.

Coordinates on ``Z x H3`` are ``(v, x, y; z)``.  Two generating sets are
compared:

* ``Omega``  = ``{(1; 0, 0, +-1)^{+-1}, a^{+-1}, b^{+-1}}``
* ``Omega2`` = ``{(1; e)^{+-1}, a^{+-1}, b^{+-1}}``

Both induce the limit metric ``|v| + d_H3``, up to a shear of the centre in
the first case.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .balls import GeneratingSet, word_length
from .ccmetric import bm_product_distance
from .group import Element, heisenberg, heisenberg_times_z

DEFAULT_Z0_GRID = tuple(np.linspace(-1.5, 1.5, 41).round(12))


class NotFound(LookupError):
    """Word length exceeds the search cap."""


def _cap(n: int) -> int:
    return 4 * math.isqrt(n) + 12


def central_word_length(n: int, cap: int | None = None) -> int:
    """Word length of ``(0, 0; n)`` in H3 with standard generators."""
    if n < 0:
        raise ValueError("n must be non-negative")
    G = heisenberg(1)
    omega = GeneratingSet.standard(G)
    res = word_length(omega, Element.of((0, 0), (n,)), cap or _cap(n))
    if res is None:
        raise NotFound(f"word length of (0,0;{n}) exceeds the cap")
    return res


def omega_sheared() -> GeneratingSet:
    G = heisenberg_times_z()
    gens = [Element.of((1, 0, 0), (1,)), Element.of((1, 0, 0), (-1,))]
    gens += [Element.of((0, 1, 0), (0,)), Element.of((0, 0, 1), (0,))]
    return GeneratingSet.symmetrized(G, gens)


def omega_product() -> GeneratingSet:
    G = heisenberg_times_z()
    gens = [Element.of((1, 0, 0), (0,)), Element.of((0, 1, 0), (0,)), Element.of((0, 0, 1), (0,))]
    return GeneratingSet.symmetrized(G, gens)


@dataclass(frozen=True)
class GapRecord:
    n: int
    rho_sheared: int
    rho_product: int

    @property
    def gap(self) -> int:
        return self.rho_product - self.rho_sheared


def bm_gap_direct(n: int, cap: int | None = None) -> GapRecord:
    """Word lengths of ``(n; 0, 0, n)`` under both generating sets, by BFS on ``Z x H3``."""
    target = Element.of((n, 0, 0), (n,))
    cap = cap or n + _cap(n)
    r1 = word_length(omega_sheared(), target, cap)
    r2 = word_length(omega_product(), target, cap)
    if r1 is None or r2 is None:
        raise NotFound(f"word length of (n;0,0,n) exceeds the cap {cap}")
    return GapRecord(n, r1, r2)


def bm_gap_C(n: int, cap: int | None = None) -> int:
    """``rho_Omega2(n; 0, 0, n) - rho_Omega(n; 0, 0, n)``, computed by BFS on the product group."""
    return bm_gap_direct(n, cap).gap


@dataclass
class QuasiNormTable:
    N: int
    rows: list[tuple[float, float]]
    checked_lengths: dict

    @property
    def min_dev(self) -> float:
        return min(r[1] for r in self.rows)

    def to_json(self) -> str:
        return json.dumps(
            {
                "N": self.N,
                "inputs": {"N": self.N, "z0_grid": [r[0] for r in self.rows]},
                "rows": [{"z0": z, "max_dev": d} for z, d in self.rows],
                "min_over_grid": self.min_dev,
                "bfs_word_lengths": {str(k): v for k, v in self.checked_lengths.items()},
                "verdict": "no z0 keeps both test families bounded"
                if self.min_dev > 0
                else "some z0 keeps both families bounded",
            },
            indent=1,
            sort_keys=True,
        ) + "\n"


def bm_no_quasinorm_B(N: int, z0_grid=DEFAULT_Z0_GRID, bfs_check: int = 3) -> QuasiNormTable:
    """For each ``z0``: ``max_{n <= N}`` deviation of the sheared product distance from ``n``.

    The test elements ``(n; 0, 0, +-n)`` have word length ``n`` for ``Omega``
    (checked by BFS for ``n <= bfs_check``), so a limit metric at bounded
    distance would keep both deviations bounded.
    """
    if N < 1:
        raise ValueError("N must be positive")
    ns = np.arange(1, N + 1, dtype=float)
    rows = []
    for z0 in z0_grid:
        up = np.abs(bm_product_distance(z0, ns, 0, 0, ns) - ns)
        down = np.abs(bm_product_distance(z0, ns, 0, 0, -ns) - ns)
        rows.append((float(z0), float(max(up.max(), down.max()))))
    checked = {}
    omega = omega_sheared()
    for n in range(1, bfs_check + 1):
        for s in (1, -1):
            checked[(n, s * n)] = word_length(omega, Element.of((n, 0, 0), (s * n,)), n + 1)
    return QuasiNormTable(N, rows, checked)


def gap_report(ns=(1, 4, 9, 16)) -> str:
    out = []
    for n in ns:
        rec = bm_gap_direct(n)
        cw = central_word_length(n)
        out.append(
            {
                "n": n,
                "rho_omega": rec.rho_sheared,
                "rho_omega2": rec.rho_product,
                "gap": rec.gap,
                "central_word_length": cw,
                # observational only: bounded-distance behaviour is not asserted
                "central_minus_4sqrt_n": cw - 4 * math.sqrt(n),
                "match": rec.gap == cw,
            }
        )
    gaps = [r["gap"] for r in out]
    verdict = "gap strictly increasing" if all(b > a for a, b in zip(gaps, gaps[1:])) else "gap not increasing"
    return json.dumps({"inputs": {"n": list(ns)}, "rows": out, "verdict": verdict}, indent=1, sort_keys=True) + "\n"
