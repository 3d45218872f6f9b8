import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilshape.balls import GeneratingSet
from nilshape.ccmetric import (
    bm_product_distance,
    cc_distance,
    pansu_convergence,
    rescaled_ball_hausdorff,
)
from nilshape.dido import z_profile_h3
from nilshape.group import Element, abelian, dilate, heisenberg, stratified_multiply, to_exponential
from nilshape.shape import limit_shape

H3 = heisenberg(1)
SHAPE = limit_shape(GeneratingSet.standard(H3))
coord = st.floats(-3, 3, allow_subnormal=False)
point = st.tuples(coord, coord, coord)


def test_known_distances():
    assert cc_distance(SHAPE, [0, 0, 1]) == pytest.approx(4.0, rel=1e-12)
    assert cc_distance(SHAPE, [1, 0, 0]) == pytest.approx(1.0, rel=1e-12)
    assert cc_distance(SHAPE, [0.5, 0, 0.125]) == pytest.approx(1.0, rel=1e-12)
    assert cc_distance(SHAPE, [0, 0, 0]) == 0.0


def test_boundary_points_have_unit_distance():
    rng = np.random.default_rng(2)
    v = rng.uniform(-1, 1, (2000, 2))
    v = v[np.abs(v).sum(1) < 1]
    z = z_profile_h3(v[:, 0], v[:, 1]) * rng.choice([-1, 1], len(v))
    d = cc_distance(SHAPE, np.column_stack([v, z]))
    np.testing.assert_allclose(d, 1.0, rtol=1e-11)


@given(point, st.floats(0.01, 100))
@settings(max_examples=200)
def test_scaling_law(p, t):
    d = cc_distance(SHAPE, p)
    dt = cc_distance(SHAPE, dilate(H3, t, p))
    assert dt == pytest.approx(t * d, rel=1e-9, abs=1e-300)


@given(point)
def test_symmetric(p):
    assert cc_distance(SHAPE, np.negative(p)) == pytest.approx(cc_distance(SHAPE, p), rel=1e-12, abs=0)


@given(point, point)
@settings(max_examples=200)
def test_triangle_inequality(p, q):
    pq = stratified_multiply(H3, np.array(p), np.array(q))
    assert cc_distance(SHAPE, pq) <= cc_distance(SHAPE, p) + cc_distance(SHAPE, q) + 1e-9


def test_distance_dominates_horizontal_norm():
    rng = np.random.default_rng(8)
    p = rng.normal(size=(5000, 3))
    assert np.all(cc_distance(SHAPE, p) >= np.abs(p[:, :2]).sum(1) * (1 - 1e-12))


def test_lattice_word_length_is_asymptotic():
    # (0,0;n^2) has word length 4n; the limit distance is 4 sqrt(n^2)
    for n in (3, 5):
        p = to_exponential(H3, [[0, 0, n * n]])[0]
        assert cc_distance(SHAPE, p) == pytest.approx(4 * n)


def test_abelian_distance_is_norm():
    sh = limit_shape(GeneratingSet.standard(abelian(2)))
    assert cc_distance(sh, [[3.0, -4.0]])[0] == pytest.approx(7.0)


def test_pansu_deviation_decreases():
    rep = pansu_convergence(GeneratingSet.standard(H3), radii=[10, 20, 30])
    devs = [rep.max_dev(n) for n in (10, 20, 30)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.1
    assert rep.to_csv().splitlines()[0] == "n,max_dev,mean_dev,hausdorff"


def test_pansu_other_generators():
    omega = GeneratingSet.symmetrized(
        H3, [Element.of((1, 0), (0,)), Element.of((0, 1), (0,)), Element.of((1, 1), (0,))]
    )
    rep = pansu_convergence(omega, radii=[8, 16])
    assert rep.max_dev(16) < rep.max_dev(8)


def test_pansu_workers_deterministic():
    omega = GeneratingSet.standard(H3)
    a = pansu_convergence(omega, radii=[6, 12], workers=1).to_csv()
    b = pansu_convergence(omega, radii=[6, 12], workers=4).to_csv()
    assert a == b


def test_hausdorff_decreases():
    omega = GeneratingSet.standard(H3)
    h = [rescaled_ball_hausdorff(omega, SHAPE, n, spacing=0.02) for n in (6, 12, 24)]
    assert h[0] > h[1] > h[2]


def test_abelian_hausdorff_small():
    omega = GeneratingSet.standard(abelian(2))
    sh = limit_shape(omega)
    assert rescaled_ball_hausdorff(omega, sh, 20, spacing=0.01) < 0.05


def test_product_distance():
    assert bm_product_distance(0.0, 2.0, 0.0, 0.0, 0.0) == pytest.approx(2.0)
    assert bm_product_distance(0.0, 0.0, 0.0, 0.0, 1.0) == pytest.approx(4.0)
    # the shear moves (n; 0, 0, n z0) to the horizontal axis
    assert bm_product_distance(1.0, 5.0, 0.0, 0.0, 5.0) == pytest.approx(5.0)
