import json

import pytest

from nilshape.balls import GeneratingSet, word_length
from nilshape.counterexamples import (
    NotFound,
    bm_gap_C,
    bm_gap_direct,
    bm_no_quasinorm_B,
    central_word_length,
    gap_report,
    omega_product,
    omega_sheared,
)
from nilshape.group import Element, heisenberg


def test_central_word_length():
    assert [central_word_length(n) for n in (0, 1, 4, 9, 16, 25)] == [0, 4, 8, 12, 16, 20]
    # non-squares: (0,0;2) needs 6 letters
    assert central_word_length(2) == 6
    with pytest.raises(NotFound):
        central_word_length(100, cap=5)
    with pytest.raises(ValueError):
        central_word_length(-1)


def test_gap_equals_central_length():
    gaps = [bm_gap_C(n) for n in (1, 4, 9, 16)]
    assert gaps == [central_word_length(n) for n in (1, 4, 9, 16)]
    assert all(b > a for a, b in zip(gaps, gaps[1:]))
    rec = bm_gap_direct(4)
    assert rec.rho_sheared == 4 and rec.rho_product == 12


def test_generating_sets_share_abelianization():
    a = {g.a for g in omega_sheared()}
    b = {g.a for g in omega_product()}
    assert a == b


def test_quasinorm_table():
    small = bm_no_quasinorm_B(16)
    big = bm_no_quasinorm_B(64)
    assert small.min_dev == pytest.approx(16.0, rel=1e-9)
    assert big.min_dev == pytest.approx(32.0, rel=1e-9)
    assert all(v == n for (n, _), v in big.checked_lengths.items())
    data = json.loads(big.to_json())
    assert len(data["rows"]) == 41
    with pytest.raises(ValueError):
        bm_no_quasinorm_B(0)


def test_gap_report_json():
    data = json.loads(gap_report((1, 4)))
    assert [r["match"] for r in data["rows"]] == [True, True]
    assert data["verdict"] == "gap strictly increasing"


def test_sheared_word_length_matches_bfs_oracle():
    omega = omega_sheared()
    assert word_length(omega, Element.of((2, 0, 0), (-2,)), 5, bidirectional=False) == 2
    assert word_length(GeneratingSet.standard(heisenberg(1)), Element.of((0, 0), (1,)), 6) == 4
