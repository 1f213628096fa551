import pytest

from rgrade.abgroup import AbGroup
from rgrade.duality import (PAIRING_SUMS, anderson_dual, dual_position, forbidden, gbb17_splitting,
                            gorenstein_shift_of, pairing_diagonal, pairing_from_json, pairing_table,
                            render_pairing_table, shifted_dual_group, verify_gorenstein_duality)
from rgrade.grading import RODegree
from rgrade.modalg import Chart, Window


def test_shift():
    assert gorenstein_shift_of(3).W == RODegree(-16, -9)
    assert gorenstein_shift_of(2).W == RODegree(-8, -2)
    with pytest.raises(ValueError):
        gorenstein_shift_of(0)


def test_dual_positions():
    W = RODegree(-16, -9)
    assert dual_position(RODegree(0, 0), True, W) == W
    assert dual_position(RODegree(0, 0), False, W) == RODegree(-17, -9)


def test_forbidden_region():
    assert not forbidden("NB", RODegree(-3, 3))
    assert forbidden("NB", RODegree(2, -5))
    assert forbidden("BB", RODegree(-1, -5)) and forbidden("BB", RODegree(3, -5))
    assert not forbidden("BB", RODegree(2, -5))


def test_anderson_dual_places_ext_term():
    c = Chart(Window.square(-3, 3))
    c.add(RODegree(1, 2), AbGroup(1, (1,)))
    d = anderson_dual(c)
    assert d[RODegree(-1, -2)] == AbGroup.Z() and d[RODegree(-2, -2)] == AbGroup.F2()
    assert anderson_dual(d).entries == c.entries


def test_shifted_dual_group():
    W = RODegree(-16, -9)
    c = Chart(Window.square(-30, 30))
    c.add(RODegree(0, 0), AbGroup.Z())
    c.add(RODegree(0, -1), AbGroup.F2())
    assert shifted_dual_group(c, W, W) == AbGroup.Z()
    assert shifted_dual_group(c, W - RODegree(1, -1), W) == AbGroup.F2()


def test_master_check_small_window():
    report = verify_gorenstein_duality(Window.square(-20, 20))
    assert report.ok and report.degrees_checked == 41 * 41 and report.nonzero_degrees > 0
    assert "0 mismatches" in report.summary()


def test_master_check_off_center_window():
    assert verify_gorenstein_duality(Window(10, 50, -70, -20)).ok


def test_master_check_needs_block_data():
    with pytest.raises(ValueError):
        verify_gorenstein_duality(Window.square(-4, 4), n=4)


def test_pairing_diagonal_formula():
    # a free H^3 class of BB_0 pairs with NB_28
    assert pairing_diagonal(0, 3, False) == 28
    assert pairing_diagonal(0, 3, True) == 27


@pytest.fixture(scope="module")
def table():
    return pairing_table()


def test_pairing_sums(table):
    assert len(table) == 2 * 29
    for r in table:
        assert r.sums_ok(), r
        for p, shifts in r.shifts:
            assert all(r.delta + p == 28 - e for _, e in shifts) or r.delta + p in PAIRING_SUMS


def test_pairing_rows(table):
    rows = {(r.direction, r.delta): r.cell() for r in table}
    assert rows[("BB->NB", 0)] == "28"
    assert rows[("NB->BB", 7)].startswith("d2")
    assert rows[("BB->NB", 23)].startswith("d3")
    assert rows[("BB->NB", 27)] == "."


def test_pairing_json_round_trip(table):
    data = {"rows": [{"direction": r.direction, "delta": r.delta, "cell": r.cell()} for r in table]}
    again = pairing_from_json(data)
    assert [(r.direction, r.delta, r.partners, r.flags) for r in again] == \
        [(r.direction, r.delta, r.partners, r.flags) for r in table]
    text = render_pairing_table(table)
    assert text.splitlines()[0].split("|")[0].strip() == "delta"


def test_gbb17_splits():
    s = gbb17_splitting()
    assert s.ok, s.mismatches
    assert s.free_basepoint == RODegree(-12, 12)
    assert s.tower_bottom == RODegree(-8, 16) and s.suspension == 4
