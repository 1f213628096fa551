import time

import pytest

from rgrade.grading import RODegree
from rgrade.lastdiff import (BottomBoundaryModel, c_value, certificates_json, companion_certificate,
                             engine_differential, last_differential_certificate)

C = {2: 9, 3: 24, 4: 55, 5: 118, 6: 245, 7: 500, 8: 1011}


def test_c_values():
    assert {n: c_value(n) for n in C} == C
    for n in C:
        assert c_value(n) == 2 * BottomBoundaryModel(n).D + n - 1


def test_certificates_fast_and_valid():
    start = time.perf_counter()
    certs = [last_differential_certificate(n) for n in range(2, 9)]
    assert time.perf_counter() - start < 1
    for cert in certs:
        assert cert.ok and cert.page == cert.n and cert.candidate_degrees == [cert.n]
        assert cert.source == RODegree(0, -cert.c) and cert.target == RODegree(-1, -cert.c)
        assert cert.distance == cert.n
        assert cert.entry_diagonal == 2 ** (cert.n + 2) - 6


def test_n3_target():
    cert = last_differential_certificate(3)
    assert cert.ideal_basepoint == RODegree(12, -14) and cert.u_power_x == 12
    assert cert.dual_of_source == RODegree(-17, 15)
    assert "d_3(a^24) != 0" in cert.text()


def test_engine_agrees_for_n3():
    d = engine_differential(24)
    assert d.page == 3 and d.target.top_display == RODegree(-1, -24)
    comp = companion_certificate(3, engine=True)
    assert comp.ok and comp.page == 3 and comp.candidate_degrees == [2, 3]


def test_companion_without_engine_leaves_page_open():
    comp = companion_certificate(5)
    assert comp.ok and comp.page is None and comp.candidate_degrees == [4, 5]


def test_low_n_rejected():
    with pytest.raises(ValueError):
        last_differential_certificate(1)


def test_json():
    import json

    data = json.loads(certificates_json([2, 3]))
    assert [d["main"]["c"] for d in data] == [9, 24]
    assert all(d["main"]["ok"] for d in data)
