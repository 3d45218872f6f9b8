"""Small exact linear algebra over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def solve_affine(M: Sequence[Sequence], rhs: Sequence):
    """Solution set of ``M x = rhs`` as ``(particular, nullspace_basis)``.

    Returns ``None`` when the system is inconsistent.
    """
    rows = len(M)
    cols = len(M[0])
    A = [[Fraction(v) for v in M[r]] + [Fraction(rhs[r])] for r in range(rows)]
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][col]
        A[r] = [v * inv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [vi - f * vr for vi, vr in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if A[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        x[col] = A[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -A[i][f]
        basis.append(vec)
    return x, basis


def inverse(M: Sequence[Sequence]):
    """Exact inverse, or ``None`` if singular."""
    n = len(M)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        sol = solve_affine(M, e)
        if sol is None or sol[1]:
            return None
        cols.append(sol[0])
    return [[cols[j][i] for j in range(n)] for i in range(n)]
