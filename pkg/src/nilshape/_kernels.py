"""Hot loops with a numba implementation and a pure-numpy fallback.

Set ``NILSHAPE_NUMBA=0`` to force the numpy path (also used when numba is
not importable).  Both paths return identical results.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

USE_NUMBA = numba is not None and os.environ.get("NILSHAPE_NUMBA", "1") != "0"


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# -- BFS expansion ---------------------------------------------------------


def _expand_numpy(keys, offsets, shifts, masks, gens, Qg, m):
    coords = _unpack_numpy(keys, offsets, shifts, masks)
    a = coords[:, :m]
    nbr = coords[:, None, :] + gens[None, :, :]
    if Qg.shape[2]:
        nbr[:, :, m:] += np.einsum("ni,gik->ngk", a, Qg)
    return _pack_numpy(nbr.reshape(-1, coords.shape[1]), offsets, shifts)


def _pack_numpy(coords, offsets, shifts):
    keys = np.zeros(coords.shape[0], dtype=np.int64)
    for j in range(coords.shape[1]):
        keys |= (coords[:, j] + offsets[j]) << shifts[j]
    return keys


def _unpack_numpy(keys, offsets, shifts, masks):
    out = np.empty((keys.shape[0], offsets.shape[0]), dtype=np.int64)
    for j in range(offsets.shape[0]):
        out[:, j] = ((keys >> shifts[j]) & masks[j]) - offsets[j]
    return out


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _expand_numba(keys, offsets, shifts, masks, gens, Qg, m):
        n = keys.shape[0]
        ng = gens.shape[0]
        d = offsets.shape[0]
        c = d - m
        out = np.empty(n * ng, dtype=np.int64)
        coords = np.empty(d, dtype=np.int64)
        for p in range(n):
            key = keys[p]
            for j in range(d):
                coords[j] = ((key >> shifts[j]) & masks[j]) - offsets[j]
            for g in range(ng):
                packed = np.int64(0)
                for j in range(m):
                    packed |= (coords[j] + gens[g, j] + offsets[j]) << shifts[j]
                for k in range(c):
                    zk = coords[m + k] + gens[g, m + k]
                    for i in range(m):
                        zk += coords[i] * Qg[g, i, k]
                    packed |= (zk + offsets[m + k]) << shifts[m + k]
                out[p * ng + g] = packed
        return out

    @numba.njit(cache=True, nogil=True)
    def _unpack_numba(keys, offsets, shifts, masks):
        n = keys.shape[0]
        d = offsets.shape[0]
        out = np.empty((n, d), dtype=np.int64)
        for p in range(n):
            for j in range(d):
                out[p, j] = ((keys[p] >> shifts[j]) & masks[j]) - offsets[j]
        return out


def expand(keys, offsets, shifts, masks, gens, Qg, m):
    """Packed keys of ``g * s`` for every frontier key ``g`` and generator ``s``."""
    if USE_NUMBA:
        return _expand_numba(keys, offsets, shifts, masks, gens, Qg, m)
    return _expand_numpy(keys, offsets, shifts, masks, gens, Qg, m)


def unpack(keys, offsets, shifts, masks):
    if USE_NUMBA:
        return _unpack_numba(keys, offsets, shifts, masks)
    return _unpack_numpy(keys, offsets, shifts, masks)


def pack(coords, offsets, shifts):
    return _pack_numpy(np.asarray(coords, dtype=np.int64), offsets, shifts)


# -- Dido dynamic program --------------------------------------------------


def _dido_dp_numpy(dirs, unit, steps, radius, spacing, h):
    size = 2 * radius + 1
    idx = (np.arange(size) - radius) * spacing
    px, py = np.meshgrid(idx, idx, indexing="ij")
    gains = [0.5 * h * (px * u[1] - py * u[0]) for u in unit]
    cur = np.full((size, size), -np.inf)
    cur[radius, radius] = 0.0
    best = cur.copy()
    for _ in range(steps):
        new = np.full((size, size), -np.inf)
        for d, gain in zip(dirs, gains):
            dx, dy = int(d[0]), int(d[1])
            src = cur[max(0, -dx) : size - max(0, dx), max(0, -dy) : size - max(0, dy)]
            dst = (slice(max(0, dx), size - max(0, -dx)), slice(max(0, dy), size - max(0, -dy)))
            np.maximum(new[dst], src + gain[dst], out=new[dst])
        cur = new
        np.maximum(best, cur, out=best)
    return best


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _dido_dp_numba(dirs, unit, steps, radius, spacing, h):
        size = 2 * radius + 1
        cur = np.full((size, size), -np.inf)
        new = np.full((size, size), -np.inf)
        cur[radius, radius] = 0.0
        best = cur.copy()
        reach = 0
        dmax = 0
        for q in range(dirs.shape[0]):
            dmax = max(dmax, abs(dirs[q, 0]), abs(dirs[q, 1]))
        for _ in range(steps):
            reach = min(radius, reach + dmax)
            lo = radius - reach
            hi = radius + reach + 1
            for ix in range(lo, hi):
                for iy in range(lo, hi):
                    px = (ix - radius) * spacing
                    py = (iy - radius) * spacing
                    val = -np.inf
                    for q in range(dirs.shape[0]):
                        sx = ix - dirs[q, 0]
                        sy = iy - dirs[q, 1]
                        if 0 <= sx < size and 0 <= sy < size:
                            prev = cur[sx, sy]
                            if prev > -np.inf:
                                cand = prev + 0.5 * h * (px * unit[q, 1] - py * unit[q, 0])
                                if cand > val:
                                    val = cand
                    new[ix, iy] = val
            for ix in range(lo, hi):
                for iy in range(lo, hi):
                    cur[ix, iy] = new[ix, iy]
                    if new[ix, iy] > best[ix, iy]:
                        best[ix, iy] = new[ix, iy]
        return best


def dido_dp(dirs, unit, steps, radius, spacing, h):
    dirs = np.ascontiguousarray(dirs, dtype=np.int64)
    unit = np.ascontiguousarray(unit, dtype=np.float64)
    if USE_NUMBA:
        return _dido_dp_numba(dirs, unit, int(steps), int(radius), float(spacing), float(h))
    return _dido_dp_numpy(dirs, unit, int(steps), int(radius), float(spacing), float(h))
