import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilshape import balls
from nilshape.balls import (
    GeneratingSet,
    GeneratingSetError,
    KeyCodec,
    ball_sizes,
    coordinate_bounds,
    folner_ratios,
    growth_ratio,
    iter_spheres,
    sphere_points,
    word_length,
)
from nilshape.group import Element, abelian, exhaustive_words, heisenberg, heisenberg_times_z, multiply

H3 = heisenberg(1)
H3_BALLS = [1, 5, 17, 53, 135, 299, 593]


def _oracle_balls(G, gens, nmax):
    ball = {G.identity()}
    sizes = [1]
    for n in range(1, nmax + 1):
        ball |= exhaustive_words(G, gens, n)
        sizes.append(len(ball))
    return sizes


def test_h3_ball_sizes(backend):
    table = ball_sizes(GeneratingSet.standard(H3), 6)
    assert [r[1] for r in table.rows] == H3_BALLS


def test_ball_sizes_match_exhaustive_words():
    for G in (H3, heisenberg_times_z()):
        omega = GeneratingSet.standard(G)
        table = ball_sizes(omega, 4)
        assert [r[1] for r in table.rows] == _oracle_balls(G, omega.elems, 4)


def test_nonstandard_generators_match_oracle():
    gens = [Element.of((1, 0), (0,)), Element.of((0, 1), (0,)), Element.of((1, 1), (0,))]
    omega = GeneratingSet.symmetrized(H3, gens)
    assert [r[1] for r in ball_sizes(omega, 4).rows] == _oracle_balls(H3, omega.elems, 4)


def test_abelian_ball_sizes():
    table = ball_sizes(GeneratingSet.standard(abelian(2)), 10)
    assert [r[1] for r in table.rows] == [2 * n * n + 2 * n + 1 for n in range(11)]


def test_backends_and_workers_agree(monkeypatch):
    from nilshape import _kernels

    omega = GeneratingSet.standard(heisenberg(2))
    ref = ball_sizes(omega, 8).rows
    for use in (False, True):
        if use and _kernels.numba is None:
            continue
        monkeypatch.setattr(_kernels, "USE_NUMBA", use)
        for workers in (1, 4):
            assert ball_sizes(omega, 8, workers=workers).rows == ref


def test_python_fallback_agrees():
    omega = GeneratingSet.standard(H3)
    spheres = [len(s) for _, s in balls._iter_spheres_python(omega, 6)]
    assert np.cumsum(spheres).tolist() == H3_BALLS


def test_spheres_are_sorted_and_disjoint():
    omega = GeneratingSet.standard(H3)
    seen = set()
    for n, keys in iter_spheres(omega, 8):
        assert np.all(np.diff(keys) > 0)
        assert not seen.intersection(keys.tolist())
        seen.update(keys.tolist())


def test_sphere_points_have_correct_word_length():
    omega = GeneratingSet.standard(H3)
    for n, pts in sphere_points(omega, 5):
        for row in pts[:: max(1, len(pts) // 5)]:
            g = Element.of(row[:2], row[2:])
            assert word_length(omega, g, 10, bidirectional=False) == n


def test_word_length_directions_agree():
    omega = GeneratingSet.standard(H3)
    for n in (1, 4, 9, 16, 25):
        g = Element.of((0, 0), (n,))
        assert word_length(omega, g, 40, bidirectional=True) == word_length(omega, g, 40, bidirectional=False)
    g = Element.of((3, -2), (7,))
    assert word_length(omega, g, 30, bidirectional=True) == word_length(omega, g, 30, bidirectional=False)
    assert word_length(omega, H3.identity(), 3) == 0
    assert word_length(omega, Element.of((0, 0), (100,)), 3) is None


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_codec_roundtrip(coords):
    codec = KeyCodec.from_bounds([50, 50, 50])
    assert codec.unpack(codec.pack(coords))[0].tolist() == coords


def test_codec_overflow_returns_none():
    assert KeyCodec.from_bounds([2**40, 2**40]) is None


def test_coordinate_bounds_cover_ball():
    omega = GeneratingSet.standard(H3)
    bounds = coordinate_bounds(omega, 6)
    for _, pts in sphere_points(omega, 6):
        assert np.all(np.abs(pts) <= bounds)


def test_generating_set_validation():
    with pytest.raises(GeneratingSetError):
        GeneratingSet(H3, [Element.of((1, 0), (0,))])
    with pytest.raises(GeneratingSetError):
        GeneratingSet.symmetrized(H3, [Element.of((1, 0), (0,)), Element.of((2, 0), (1,))])
    with pytest.raises(GeneratingSetError):
        GeneratingSet.loads(H3, "1 0 0 0\n")


def test_generating_set_io(tmp_path):
    text = "# a and b\n1 0\n-1 0\n0 1\n0 -1\n"
    omega = GeneratingSet.loads(H3, text)
    assert set(omega.elems) == set(GeneratingSet.standard(H3).elems)
    f = tmp_path / "gens.txt"
    f.write_text(omega.dumps())
    assert GeneratingSet.load(H3, f).elems == omega.elems


def test_budget_truncates_table():
    omega = GeneratingSet.standard(H3)
    table = ball_sizes(omega, 30, memory_budget=200_000)
    assert table.truncated
    assert [r[1] for r in table.rows[:7]] == H3_BALLS
    assert table.to_csv(4).splitlines()[-1].startswith("# truncated")


def test_csv_and_ratios():
    table = ball_sizes(GeneratingSet.standard(H3), 3)
    assert table.to_csv(4).splitlines() == ["n,ball,sphere,ratio_nd", "0,1,1,", "1,5,4,5", "2,17,12,1.0625", "3,53,36,0.654320987654"]
    assert folner_ratios(table)[0] == (0, 1.0)
    assert growth_ratio(table, 4)[1] == (2, 17 / 16)


def test_multiply_consistent_with_bfs_step():
    omega = GeneratingSet.standard(H3)
    codec = KeyCodec.from_bounds(coordinate_bounds(omega, 2))
    s1 = {tuple(r) for r in codec.unpack(dict(iter_spheres(omega, 2, codec=codec))[1]).tolist()}
    assert s1 == {multiply(H3, H3.identity(), g).coords for g in omega.elems}


def test_growth_constant_tail_trend():
    # the signed deviation changes sign between n = 10 and 11 and then decays like 1/n
    table = ball_sizes(GeneratingSet.standard(H3), 80)
    dev = {n: table.ball(n) / n**4 - 31 / 72 for n in (10, 11, 20, 40, 80)}
    assert dev[10] > 0 > dev[11]
    assert abs(dev[80]) < abs(dev[40]) < abs(dev[20]) <= 0.1


def _full_visited_bfs(G, gens, nmax):
    """Textbook BFS keeping every visited element."""
    seen = {G.identity()}
    frontier = [G.identity()]
    sizes = [1]
    for _ in range(nmax):
        nxt = []
        for g in frontier:
            for s in gens:
                h = multiply(G, g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


@pytest.mark.parametrize(
    "omega",
    [
        GeneratingSet.standard(H3),
        GeneratingSet.standard(heisenberg_times_z()),
        GeneratingSet.symmetrized(H3, [Element.of((1, 0), (0,)), Element.of((0, 1), (0,)), Element.of((2, 1), (5,))]),
    ],
    ids=["H3", "H3xZ", "H3-skew"],
)
def test_two_level_dedup_matches_full_visited_set(omega):
    # right multiplication by a generator moves word length by at most one
    nmax = 9
    assert [r[1] for r in ball_sizes(omega, nmax).rows] == _full_visited_bfs(omega.group, omega.elems, nmax)
