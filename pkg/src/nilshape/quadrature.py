"""Adaptive tensor Gauss-Legendre cubature on boxes with deterministic reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    def __init__(self, message: str, value: float, error: float):
        super().__init__(f"{message} (value {value!r}, error bound {error:.3e})")
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    cells: int
    evaluations: int


def _rule(order: int, dim: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrid = np.meshgrid(*([w] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrid], axis=-1), axis=-1)
    return nodes, weights


def _children(lo, width):
    dim = lo.shape[1]
    offs = np.array(np.meshgrid(*([[0.0, 0.5]] * dim), indexing="ij")).reshape(dim, -1).T
    half = width / 2
    clo = (lo[:, None, :] + offs[None, :, :] * width[:, None, :]).reshape(-1, dim)
    cw = np.repeat(half, len(offs), axis=0)
    return clo, cw


def adaptive_cube(
    f: Callable[[np.ndarray], np.ndarray],
    dim: int,
    tol: float,
    order: int = 4,
    initial: int = 4,
    max_cells: int = 2_000_000,
) -> QuadratureResult:
    """Integrate a vectorised ``f`` over ``[0, 1]^dim``.

    Each cell's value is its 2^dim-children estimate and its error the
    difference to the parent rule.  Cells whose error exceeds the mean share
    of the remaining budget are split until the summed error is below ``tol``.
    Sums are compensated (``math.fsum``) and taken in cell-creation order, so
    the result does not depend on batching.
    """
    nodes, weights = _rule(order, dim)
    evals = 0

    chunk = max(1, 2**20 // len(nodes))

    def integrate(lo, width):
        nonlocal evals
        out = np.empty(len(lo))
        for s in range(0, len(lo), chunk):
            l, w = lo[s : s + chunk], width[s : s + chunk]
            pts = l[:, None, :] + nodes[None, :, :] * w[:, None, :]
            vals = f(pts.reshape(-1, dim)).reshape(len(l), -1)
            out[s : s + chunk] = (vals @ weights) * np.prod(w, axis=1)
        evals += len(lo) * len(nodes)
        return out

    def assess(lo, width):
        parent = integrate(lo, width)
        clo, cw = _children(lo, width)
        kids = integrate(clo, cw).reshape(len(lo), -1).sum(axis=1)
        return kids, np.abs(kids - parent)

    g = (np.arange(initial) / initial)
    lo = np.array(np.meshgrid(*([g] * dim), indexing="ij")).reshape(dim, -1).T.copy()
    width = np.full_like(lo, 1.0 / initial)
    val, err = assess(lo, width)
    while True:
        total_err = math.fsum(err)
        if total_err <= tol:
            return QuadratureResult(math.fsum(val), total_err, len(lo), evals)
        if len(lo) > max_cells:
            raise QuadratureError("cubature did not converge", math.fsum(val), total_err)
        split = err > max(tol / len(lo), 0.25 * err.max())
        keep = ~split
        clo, cw = _children(lo[split], width[split])
        cval, cerr = assess(clo, cw)
        lo = np.concatenate([lo[keep], clo])
        width = np.concatenate([width[keep], cw])
        val = np.concatenate([val[keep], cval])
        err = np.concatenate([err[keep], cerr])
