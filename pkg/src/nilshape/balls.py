"""Breadth-first enumeration of word-metric balls in 2-step nilpotent groups.

Elements are packed into int64 keys (one bit field per coordinate, widths
derived from a priori coordinate bounds), so each BFS level is a sorted key
array.  Because generating sets are symmetric, the neighbours of the sphere
``S(n)`` lie in ``S(n-1) | S(n) | S(n+1)``; only the last two levels are
needed for deduplication.  Keys that would not fit in 63 bits fall back to a
pure-Python path with arbitrary-precision tuples.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .group import Element, GroupSpec, inverse, multiply, to_exponential

log = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 8 * 2**30


class GeneratingSetError(ValueError):
    pass


class GeneratingSet:
    """Finite symmetric generating set of a lattice in a 2-step group."""

    def __init__(self, group: GroupSpec, elems: Sequence[Element]):
        elems = list(dict.fromkeys(elems))
        for g in elems:
            group.check(g)
        if not elems:
            raise GeneratingSetError("generating set is empty")
        present = set(elems)
        for g in elems:
            if inverse(group, g) not in present:
                raise GeneratingSetError(f"generating set is not symmetric: missing inverse of {g!r}")
        rank = np.linalg.matrix_rank(np.array([g.a for g in elems], dtype=float))
        if rank < group.m:
            raise GeneratingSetError(
                f"projections to the abelianization span rank {rank} < {group.m}; the set does not generate"
            )
        self.group = group
        self.elems = tuple(elems)

    @classmethod
    def standard(cls, group: GroupSpec) -> "GeneratingSet":
        return cls(group, group.standard_generators())

    @classmethod
    def symmetrized(cls, group: GroupSpec, elems: Sequence[Element]) -> "GeneratingSet":
        out = list(elems)
        out += [inverse(group, g) for g in elems]
        return cls(group, out)

    @classmethod
    def loads(cls, group: GroupSpec, text: str) -> "GeneratingSet":
        elems = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            vals = [int(tok) for tok in line.replace(";", " ").replace(",", " ").split()]
            if len(vals) == group.m:
                vals += [0] * group.c
            if len(vals) != group.dim:
                raise GeneratingSetError(f"expected {group.dim} coordinates, got {line!r}")
            elems.append(Element.of(vals[: group.m], vals[group.m :]))
        return cls(group, elems)

    @classmethod
    def load(cls, group: GroupSpec, path) -> "GeneratingSet":
        return cls.loads(group, Path(path).read_text())

    def dumps(self) -> str:
        return "".join(" ".join(map(str, g.coords)) + "\n" for g in self.elems)

    def array(self) -> np.ndarray:
        return np.array([g.coords for g in self.elems], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __repr__(self) -> str:
        return f"GeneratingSet({self.group!r}, {len(self.elems)} elements)"


# -- key packing -----------------------------------------------------------


@dataclass(frozen=True)
class KeyCodec:
    offsets: np.ndarray
    shifts: np.ndarray
    masks: np.ndarray

    @classmethod
    def from_bounds(cls, bounds: Sequence[int]) -> "KeyCodec | None":
        widths = [max(1, int(2 * b + 1).bit_length()) for b in bounds]
        if sum(widths) > 63:
            return None
        shifts = np.concatenate([[0], np.cumsum(widths[:-1])]).astype(np.int64)
        return cls(
            np.array(bounds, dtype=np.int64),
            shifts,
            np.array([(1 << w) - 1 for w in widths], dtype=np.int64),
        )

    def pack(self, coords) -> np.ndarray:
        return _kernels.pack(np.atleast_2d(coords), self.offsets, self.shifts)

    def unpack(self, keys) -> np.ndarray:
        return _kernels.unpack(np.asarray(keys, dtype=np.int64), self.offsets, self.shifts, self.masks)


def coordinate_bounds(omega: GeneratingSet, radius: int, start: Element | None = None) -> list[int]:
    """A priori bounds on ``|coordinate|`` for ``start * w`` with ``|w| <= radius``."""
    G = omega.group
    gens = omega.array()
    amax = np.abs(gens[:, : G.m]).max(axis=0)
    zmax = np.abs(gens[:, G.m :]).max(axis=0) if G.c else np.zeros(0, dtype=np.int64)
    s = start or G.identity()
    bounds = [abs(int(s.a[i])) + radius * int(amax[i]) for i in range(G.m)]
    reach = max(bounds) if bounds else 0
    A = int(amax.max())
    for k in range(G.c):
        qsum = int(np.abs(G.Q[:, :, k]).sum())
        bounds.append(abs(int(s.z[k])) + radius * int(zmax[k]) + qsum * reach * radius * A)
    return bounds


# -- BFS -------------------------------------------------------------------


class BudgetExceeded(RuntimeError):
    pass


def _generator_data(omega: GeneratingSet):
    G = omega.group
    gens = omega.array()
    Qg = np.einsum("ijk,gj->gik", G.Q, gens[:, : G.m]) if G.c else np.zeros((len(gens), G.m, 0), np.int64)
    return np.ascontiguousarray(gens), np.ascontiguousarray(Qg.astype(np.int64))


def _expand_level(cur, codec, gens, Qg, m, workers):
    if workers <= 1 or len(cur) < 4096:
        nbrs = _kernels.expand(cur, codec.offsets, codec.shifts, codec.masks, gens, Qg, m)
        return np.unique(nbrs)
    chunks = np.array_split(cur, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda ch: np.unique(
                    _kernels.expand(ch, codec.offsets, codec.shifts, codec.masks, gens, Qg, m)
                ),
                chunks,
            )
        )
    return np.unique(np.concatenate(parts))


def _minus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if not len(b) or not len(a):
        return a
    return a[~np.isin(a, b, assume_unique=True)]


def iter_spheres(
    omega: GeneratingSet,
    nmax: int,
    start: Element | None = None,
    codec: KeyCodec | None = None,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, keys of start * S(n))`` for ``n = 0 .. nmax`` as sorted int64 arrays.

    Raises ``BudgetExceeded`` (after yielding the completed levels) if the
    working set would outgrow ``memory_budget`` bytes.
    """
    G = omega.group
    start = start or G.identity()
    codec = codec or KeyCodec.from_bounds(coordinate_bounds(omega, nmax, start))
    if codec is None:
        raise OverflowError("coordinates do not fit in 63-bit keys")
    gens, Qg = _generator_data(omega)
    prev = np.zeros(0, dtype=np.int64)
    cur = codec.pack(start.coords)
    yield 0, cur
    for n in range(1, nmax + 1):
        need = 8 * (len(prev) + len(cur) * (1 + 2 * len(gens)))
        if need > memory_budget:
            raise BudgetExceeded(f"level {n} needs about {need} bytes")
        nbrs = _expand_level(cur, codec, gens, Qg, G.m, workers)
        new = _minus(_minus(nbrs, cur), prev)
        yield n, new
        prev, cur = cur, new


def _iter_spheres_python(omega: GeneratingSet, nmax: int, start: Element | None = None):
    """Arbitrary-precision fallback over Python tuples."""
    G = omega.group
    start = start or G.identity()
    prev: set = set()
    cur = {start}
    yield 0, cur
    for n in range(1, nmax + 1):
        nbrs = {multiply(G, g, s) for g in cur for s in omega.elems}
        new = nbrs - cur - prev
        yield n, new
        prev, cur = cur, new


@dataclass
class GrowthTable:
    rows: list[tuple[int, int, int]]
    truncated: bool = False
    note: str = ""

    @property
    def nmax(self) -> int:
        return self.rows[-1][0]

    def ball(self, n: int) -> int:
        return self.rows[n][1]

    def sphere(self, n: int) -> int:
        return self.rows[n][2]

    def to_csv(self, d: int | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "ball", "sphere", "ratio_nd"])
        for n, ball, sphere in self.rows:
            ratio = "" if (d is None or n == 0) else f"{ball / n**d:.12g}"
            w.writerow([n, ball, sphere, ratio])
        if self.truncated:
            w.writerow(["# truncated", self.note, "", ""])
        return buf.getvalue()


def ball_sizes(
    omega: GeneratingSet,
    nmax: int,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> GrowthTable:
    """Exact ``|B(n)|`` and ``|S(n)|`` for ``n <= nmax``."""
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    rows: list[tuple[int, int, int]] = []
    total = 0
    codec = KeyCodec.from_bounds(coordinate_bounds(omega, nmax))
    it = (
        iter_spheres(omega, nmax, codec=codec, workers=workers, memory_budget=memory_budget)
        if codec is not None
        else _iter_spheres_python(omega, nmax)
    )
    try:
        for n, sphere in it:
            total += len(sphere)
            rows.append((n, total, len(sphere)))
    except BudgetExceeded as exc:
        log.warning("ball enumeration truncated: %s", exc)
        return GrowthTable(rows, truncated=True, note=str(exc))
    return GrowthTable(rows)


def sphere_points(omega: GeneratingSet, nmax: int, workers: int = 1) -> Iterator[tuple[int, np.ndarray]]:
    """Spheres as arrays of normal-form coordinates."""
    codec = KeyCodec.from_bounds(coordinate_bounds(omega, nmax))
    if codec is None:
        for n, sphere in _iter_spheres_python(omega, nmax):
            yield n, np.array(sorted(g.coords for g in sphere), dtype=object)
        return
    for n, keys in iter_spheres(omega, nmax, codec=codec, workers=workers):
        yield n, codec.unpack(keys)


def folner_ratios(table: GrowthTable) -> list[tuple[int, float]]:
    """``|S(n)| / |B(n)|`` with ``S(0) = {e}``."""
    return [(n, sphere / ball) for n, ball, sphere in table.rows]


def growth_ratio(table: GrowthTable, d: int) -> list[tuple[int, float]]:
    """``|B(n)| / n^d`` for ``n >= 1``."""
    return [(n, ball / n**d) for n, ball, _ in table.rows if n >= 1]


# -- word length -----------------------------------------------------------


def _quasi_size(G: GroupSpec, g: Element) -> float:
    p = to_exponential(G, [g.coords])[0]
    h = float(np.abs(p[: G.m]).sum())
    v = float(np.abs(p[G.m :]).sum()) ** 0.5 if G.c else 0.0
    return max(h, v)


def word_length(
    omega: GeneratingSet, g: Element, cap: int, bidirectional: bool | None = None
) -> int | None:
    """Smallest ``n`` with ``g`` in ``Omega^n``, or ``None`` if it exceeds ``cap``."""
    G = omega.group
    G.check(g)
    if g == G.identity():
        return 0
    if bidirectional is None:
        bidirectional = _quasi_size(G, g) > 8
    bounds_e = coordinate_bounds(omega, cap)
    bounds_g = coordinate_bounds(omega, cap, start=g)
    codec = KeyCodec.from_bounds([max(x, y) for x, y in zip(bounds_e, bounds_g)])
    if codec is None:
        for n, sphere in _iter_spheres_python(omega, cap):
            if g in sphere:
                return n
        return None
    target = codec.pack(g.coords)
    if not bidirectional:
        for n, keys in iter_spheres(omega, cap, codec=codec):
            if np.isin(target, keys).any():
                return n
        return None
    return _bidirectional(omega, g, cap, codec)


def _bidirectional(omega, g, cap, codec) -> int | None:
    fwd = iter_spheres(omega, cap, codec=codec)
    bwd = iter_spheres(omega, cap, start=g, codec=codec)
    levels = {0: [next(fwd)[1]], 1: [next(bwd)[1]]}
    iters = {0: fwd, 1: bwd}
    while len(levels[0]) - 1 + len(levels[1]) - 1 < cap:
        side = 0 if len(levels[0][-1]) <= len(levels[1][-1]) else 1
        depth, new = next(iters[side])
        levels[side].append(new)
        other = levels[1 - side]
        hits = [j for j, lvl in enumerate(other) if len(np.intersect1d(new, lvl, assume_unique=True))]
        if hits:
            return depth + min(hits)
    return None
