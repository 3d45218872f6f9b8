"""Two-step nilpotent groups in normal-form (Mal'cev) coordinates.

A group is described by a horizontal dimension ``m``, a central dimension
``c`` and an integer tensor ``Q`` of shape ``(m, m, c)``.  Lattice elements
are pairs ``(a, z)`` of integer vectors and the product is

    (a, z) * (a', z') = (a + a', z + z' + Q(a, a'))

so the commutator bracket is ``B(a, a') = Q(a, a') - Q(a', a)``.  The same
group seen inside its real Lie group in exponential coordinates has
``z_exp = z - Q(a, a) / 2`` and the symmetric law ``z + z' + B(a, a') / 2``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Element coordinates do not match the group dimensions."""


@dataclass(frozen=True)
class Element:
    a: tuple[int, ...]
    z: tuple[int, ...]

    @classmethod
    def of(cls, a: Iterable[int], z: Iterable[int] = ()) -> "Element":
        return cls(tuple(int(v) for v in a), tuple(int(v) for v in z))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.a + self.z

    def __repr__(self) -> str:
        return f"Element({','.join(map(str, self.a))};{','.join(map(str, self.z))})"


class GroupSpec:
    """Presentation of a 2-step nilpotent group by a polarized integer cocycle."""

    def __init__(self, m: int, c: int, Q=None, name: str | None = None):
        if m < 1 or c < 0:
            raise ValueError(f"need m >= 1 and c >= 0, got m={m}, c={c}")
        arr = np.zeros((m, m, c), dtype=np.int64) if Q is None else np.array(Q, dtype=np.int64)
        if arr.shape != (m, m, c):
            raise DimensionError(f"Q has shape {arr.shape}, expected {(m, m, c)}")
        arr.setflags(write=False)
        self.m = m
        self.c = c
        self.Q = arr
        self.name = name
        self._entries = [
            (int(i), int(j), int(k), int(arr[i, j, k])) for i, j, k in zip(*np.nonzero(arr))
        ]
        if c:
            rank = np.linalg.matrix_rank(self.bracket_tensor().reshape(m * m, c).astype(float))
            if rank != c:
                raise ValueError(
                    f"commutators span a {rank}-dimensional subspace, but c={c}: "
                    "the central layer must equal [N, N]"
                )

    @property
    def dim(self) -> int:
        return self.m + self.c

    @property
    def dims(self) -> list[int]:
        return [self.m, self.c] if self.c else [self.m]

    @property
    def is_abelian(self) -> bool:
        return self.c == 0

    def bracket_tensor(self) -> np.ndarray:
        """``B[i, j, :] = Q[i, j, :] - Q[j, i, :]``."""
        return self.Q - self.Q.transpose(1, 0, 2)

    def cocycle(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.c
        for i, j, k, v in self._entries:
            out[k] += v * a[i] * b[j]
        return tuple(out)

    def bracket(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        q1 = self.cocycle(a, b)
        q2 = self.cocycle(b, a)
        return tuple(x - y for x, y in zip(q1, q2))

    def identity(self) -> Element:
        return Element((0,) * self.m, (0,) * self.c)

    def element(self, a: Iterable[int], z: Iterable[int] | None = None) -> Element:
        g = Element.of(a, () if z is None else z)
        if z is None and self.c:
            g = Element(g.a, (0,) * self.c)
        self.check(g)
        return g

    def check(self, g: Element) -> None:
        if len(g.a) != self.m or len(g.z) != self.c:
            raise DimensionError(
                f"element {g!r} does not conform to group with m={self.m}, c={self.c}"
            )

    def standard_generators(self) -> list[Element]:
        gens = []
        for i in range(self.m):
            for s in (1, -1):
                a = [0] * self.m
                a[i] = s
                gens.append(self.element(a))
        return gens

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupSpec)
            and self.m == other.m
            and self.c == other.c
            and np.array_equal(self.Q, other.Q)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.c, tuple(self._entries)))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<GroupSpec{label} m={self.m} c={self.c}>"

    # -- text format -----------------------------------------------------

    def dumps(self) -> str:
        lines = [f"{self.m} {self.c}"]
        lines += [f"{i} {j} {k} {v}" for i, j, k, v in self._entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, name: str | None = None) -> "GroupSpec":
        rows = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append([int(tok) for tok in line.split()])
        if not rows or len(rows[0]) != 2:
            raise ValueError("group file must start with a line 'm c'")
        m, c = rows[0]
        Q = np.zeros((m, m, c), dtype=np.int64)
        for row in rows[1:]:
            if len(row) != 4:
                raise ValueError(f"expected 'i j k value', got {row}")
            i, j, k, v = row
            Q[i, j, k] += v
        return cls(m, c, Q, name=name)


def heisenberg(n_pairs: int = 1) -> GroupSpec:
    """Discrete Heisenberg group of dimension ``2 n_pairs + 1``.

    Horizontal coordinates are ordered ``(x1, y1, x2, y2, ...)`` and
    ``Q(a, a') = sum_i x_i y'_i`` so that ``[a_i, b_i] = c``.
    """
    m = 2 * n_pairs
    Q = np.zeros((m, m, 1), dtype=np.int64)
    for p in range(n_pairs):
        Q[2 * p, 2 * p + 1, 0] = 1
    return GroupSpec(m, 1, Q, name=f"H{m + 1}")


def heisenberg_times_z() -> GroupSpec:
    """``Z x H3(Z)`` with horizontal coordinates ``(v, x, y)``."""
    Q = np.zeros((3, 3, 1), dtype=np.int64)
    Q[1, 2, 0] = 1
    return GroupSpec(3, 1, Q, name="H3xZ")


def abelian(d: int) -> GroupSpec:
    return GroupSpec(d, 0, name=f"Z{d}")


PRESETS = {
    "H3": lambda: heisenberg(1),
    "H5": lambda: heisenberg(2),
    "H3xZ": heisenberg_times_z,
    "Z": lambda: abelian(1),
    "Z2": lambda: abelian(2),
}


def load_group(spec: str) -> GroupSpec:
    """Resolve a preset name or read a group file."""
    if spec in PRESETS:
        return PRESETS[spec]()
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"unknown group {spec!r}: not a preset ({', '.join(PRESETS)}) or a file")
    return GroupSpec.loads(path.read_text(), name=path.stem)


# -- group law -------------------------------------------------------------


def multiply(G: GroupSpec, g: Element, *rest: Element) -> Element:
    """Product ``g * h * ...`` in normal form."""
    G.check(g)
    a, z = list(g.a), list(g.z)
    for h in rest:
        G.check(h)
        q = G.cocycle(a, h.a)
        a = [x + y for x, y in zip(a, h.a)]
        z = [x + y + w for x, y, w in zip(z, h.z, q)]
    return Element(tuple(a), tuple(z))


def inverse(G: GroupSpec, g: Element) -> Element:
    G.check(g)
    q = G.cocycle(g.a, g.a)
    return Element(tuple(-x for x in g.a), tuple(-x + y for x, y in zip(g.z, q)))


def commutator(G: GroupSpec, g: Element, h: Element) -> Element:
    """``[g, h] = g h g^-1 h^-1``, which is central: ``(0, B(g.a, h.a))``."""
    G.check(g)
    G.check(h)
    return Element((0,) * G.m, G.bracket(g.a, h.a))


def power(G: GroupSpec, g: Element, n: int) -> Element:
    base = g if n >= 0 else inverse(G, g)
    out = G.identity()
    for _ in range(abs(n)):
        out = multiply(G, out, base)
    return out


def pi1(G: GroupSpec, g: Element) -> tuple[int, ...]:
    """Projection to the abelianization (a homomorphism onto Z^m)."""
    G.check(g)
    return g.a


# -- real points -----------------------------------------------------------


def to_exponential(G: GroupSpec, coords) -> np.ndarray:
    """Map normal-form coordinates (rows of length m + c) to exponential ones."""
    pts = np.asarray(coords, dtype=float)
    if pts.shape[-1] != G.dim:
        raise DimensionError(f"points have {pts.shape[-1]} coordinates, group needs {G.dim}")
    out = pts.copy()
    if G.c:
        a = pts[..., : G.m]
        out[..., G.m :] -= 0.5 * np.einsum("...i,...j,ijk->...k", a, a, G.Q.astype(float))
    return out


def from_exponential(G: GroupSpec, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    out = pts.copy()
    if G.c:
        a = pts[..., : G.m]
        out[..., G.m :] += 0.5 * np.einsum("...i,...j,ijk->...k", a, a, G.Q.astype(float))
    return out


def stratified_multiply(G: GroupSpec, p, q) -> np.ndarray:
    """Real group law in exponential coordinates: ``z + z' + B(a, a')/2``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = p + q
    if G.c:
        B = G.bracket_tensor().astype(float)
        out[..., G.m :] += 0.5 * np.einsum("...i,...j,ijk->...k", p[..., : G.m], q[..., : G.m], B)
    return out


def normal_form_multiply(G: GroupSpec, p, q) -> np.ndarray:
    """Real extension of the lattice law: ``z + z' + Q(a, a')``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = p + q
    if G.c:
        Qf = G.Q.astype(float)
        out[..., G.m :] += np.einsum("...i,...j,ijk->...k", p[..., : G.m], q[..., : G.m], Qf)
    return out


def dilate(G: GroupSpec, t: float, p) -> np.ndarray:
    """``delta_t``: horizontal coordinates times ``t``, central times ``t**2``."""
    if not t > 0:
        raise ValueError(f"dilation factor must be positive, got {t}")
    out = np.array(p, dtype=float, copy=True)
    out[..., : G.m] *= t
    out[..., G.m :] *= t * t
    return out


# -- gradings --------------------------------------------------------------


def homogeneous_dimension(dims: Sequence[int]) -> int:
    """Bass-Guivarc'h exponent ``sum_i i * dim m_i`` (layers indexed from 1)."""
    if not dims:
        raise ValueError("grading must have at least one layer")
    if any(d <= 0 for d in dims):
        raise ValueError(f"layer dimensions must be positive: {list(dims)}")
    return sum(i * d for i, d in enumerate(dims, start=1))


def homogeneous_dimension_jordan(block_counts: dict[int, int]) -> int:
    """Growth degree of ``R x| R^n`` from the Jordan block sizes of the unipotent part."""
    if any(v < 0 for v in block_counts.values()):
        raise ValueError("block counts must be non-negative")
    return 1 + sum(k * (k + 1) // 2 * n for k, n in block_counts.items())


def exhaustive_words(G: GroupSpec, gens: Sequence[Element], length: int) -> set[Element]:
    """All products of exactly ``length`` generators (small-word oracle)."""
    out = set()
    for word in itertools.product(gens, repeat=length):
        out.add(multiply(G, G.identity(), *word))
    return out
