from fractions import Fraction as F
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilshape.solvable import (
    LiouvilleAlpha,
    PrecisionError,
    certificates_json,
    check_liouville,
    cone_r2_cauchy,
    cone_shape,
    construct_alpha,
    default_epsilon,
    delta_from_epsilon,
    min_half_distance,
    norm_ratio_extremes,
    slow_speed_certificate,
)


def _brute(alpha: F, n: int):
    best, arg = F(1, 2), 0
    for k in range(1, n + 1):
        x = k * alpha
        d = abs(x - math.floor(x) - F(1, 2))
        if d < best:
            best, arg = d, k
    return best, arg


@given(
    st.lists(st.integers(1, 9), min_size=1, max_size=3, unique=True).map(sorted),
    st.integers(0, 400),
)
@settings(max_examples=60, deadline=None)
def test_liouville_scan_matches_brute_force(exps, n):
    alpha = LiouvilleAlpha(tuple(exps))
    assert min_half_distance(alpha, n)[0] == _brute(alpha.value, n)[0]


@given(st.fractions(min_value=0, max_value=1, max_denominator=300), st.integers(0, 200))
def test_rational_scan_matches_brute_force(alpha, n):
    assert min_half_distance(alpha, n)[0] == _brute(alpha, n)[0]


def test_precision_guards():
    with pytest.raises(PrecisionError):
        min_half_distance(0.3, 10)
    with mpmath.workdps(5):
        with pytest.raises(PrecisionError):
            min_half_distance(mpmath.mpf(1) / 3, 10**6)
    with mpmath.workdps(30):
        d, _ = min_half_distance(mpmath.mpf(1) / 16, 5)
    assert d == F(3, 16)
    with pytest.raises(ValueError):
        LiouvilleAlpha((3, 2))


def test_check_liouville_exact_tie():
    # alpha = 1/5: the multiples come within 1/10 of Z + 1/2
    assert check_liouville(F(1, 5), 10, F(1, 20)).holds
    assert not check_liouville(F(1, 5), 10, F(1, 20) + F(1, 10**12)).holds
    # 1/3 stays 1/6 away from Z + 1/2
    assert check_liouville(F(1, 3), 10, F(1, 12)).holds


def test_delta_interval():
    d = delta_from_epsilon(1e-3)
    assert float(mpmath.mpf(d.a)) == pytest.approx((4e-3) ** (1 / 3), rel=1e-12)
    assert d.a <= d.b
    assert default_epsilon(0) == pytest.approx(1 / math.log(2))


def test_norm_ratio_extremes():
    hi, lo = norm_ratio_extremes()
    assert hi == pytest.approx(2.0)
    assert lo == pytest.approx(1.0)


def test_certificates_at_fixed_epsilon():
    alpha = construct_alpha([40, 70, 100], 1e-3)
    certs = slow_speed_certificate(alpha, 1e-3, [40, 70, 100])
    assert len(certs) >= 3
    for c in certs:
        assert c.margin >= 0
        assert c.distance >= 2 * F(c.delta)
        assert c.volume_bound == pytest.approx((1 - 1e-3) * 4 * math.pi / 3 * c.n**3)
        assert _brute(alpha.value, c.n)[0] == c.distance
    text = certificates_json(alpha, certs)
    assert text == certificates_json(alpha, certs)
    assert '"volume_constant": "4*pi/3"' in text


def test_no_certificate_when_liouville_fails():
    # alpha = 1/3 + 1/9 = 4/9 and k = 9 gives 4, far from Z + 1/2, but k = 1 is 1/18 away
    alpha = LiouvilleAlpha((1, 2))
    assert min_half_distance(alpha, 4)[0] == F(1, 18)
    assert slow_speed_certificate(alpha, 1e-3, [4]) == []


def test_cone_two_points():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = rng.normal(size=(2, 2))
        cs = cone_shape([], [a, b])
        assert cs.r2 == pytest.approx(np.linalg.norm(a - b) / math.pi, rel=1e-9)
        assert cs.r1 == pytest.approx(np.linalg.norm(a - b) / 2)
    assert cone_shape([[1, 0], [-1, 0]], [[0.3, 0.4]]).r2 == 0.0


def test_cone_polygon_against_cauchy():
    rng = np.random.default_rng(2)
    for _ in range(10):
        pts = rng.normal(size=(7, 2))
        assert cone_shape([], pts).r2 == pytest.approx(cone_r2_cauchy(pts), rel=1e-9)


def test_cone_radii_and_errors():
    cs = cone_shape([[2, 0], [-2, 0], [0, 1], [0, -1]], [[0, 0], [1, 0]])
    assert cs.r0 == 2.0
    with pytest.raises(ValueError):
        cone_shape([[1, 0]], [[0, 0]])
    with pytest.raises(ValueError):
        cone_shape([], [])
