import pytest

from rgrade.abgroup import AbGroup
from rgrade.grading import RHO, RODegree
from rgrade.modalg import (Chart, InvalidConstruction, Window, dual_chart, graded_piece, iter_standard_names,
                           module_chart, parse_module_name, piece_group, pretty_name, standard_module)


def test_names():
    assert parse_module_name("(2,v1)P") == ("integral", 0, ("2", "v1"))
    assert parse_module_name("Pb2") == ("mod2", 2, None)
    assert pretty_name("(v2)Pb1") == "(v̄₂)P̄₁"
    names = list(iter_standard_names())
    assert len(names) == len(set(names)) == 15


def test_ring_pieces():
    assert [piece_group("P", k).free for k in range(8)] == [1, 1, 1, 2, 2, 2, 3, 4]
    # Pbar_2 = F2[vbar3]: one class every 7 steps
    assert [k for k in range(22) if not piece_group("Pb2", k).is_zero] == [0, 7, 14, 21]
    assert piece_group("Pb3", 0) == AbGroup.F2() and piece_group("Pb3", 1).is_zero


@pytest.mark.parametrize("name", list(iter_standard_names()))
def test_counting_matches_presentation(name):
    M = standard_module(name)
    for k in range(0, 12):
        assert graded_piece(M, k) == piece_group(name, k), (name, k)


def test_mod2_ideal_pieces():
    M = standard_module("(v1)Pb0", RODegree(2, 1))
    assert M.basepoint == RODegree(2, 1)
    assert graded_piece(M, 0).is_zero and graded_piece(M, 1) == AbGroup.F2()


def test_bad_names_rejected():
    with pytest.raises((InvalidConstruction, ValueError)):
        standard_module("Q7")


def test_window_and_chart():
    w = Window(-2, 3, -1, 1)
    assert RODegree(3, 1) in w and RODegree(4, 0) not in w
    assert len(list(w.degrees())) == 6 * 3
    assert list(w.rho_range(RODegree(0, 0))) == [-1, 0, 1]
    with pytest.raises(ValueError):
        Window(1, 0, 0, 0)
    c = Chart(w)
    c.add(RODegree(0, 0), AbGroup.Z())
    c.add(RODegree(0, 0), AbGroup.F2())
    c.add(RODegree(9, 9), AbGroup.Z())  # outside: ignored
    assert c[RODegree(0, 0)] == AbGroup(1, (1,)) and len(c) == 1
    assert Chart.from_json(c.to_json()) == c


def test_module_chart_and_dual():
    M = standard_module("P")
    w = Window.square(-5, 5)
    chart = module_chart(M, w)
    assert chart[RODegree(3, 3)] == AbGroup.Z(2)
    assert module_chart(M, w, exact=True) == chart
    d = dual_chart(M, w)
    assert d[RODegree(-3, -3)] == AbGroup.Z(2) and d[RODegree(1, 1)].is_zero
    assert dual_chart(dual_chart(chart)) == chart
    assert d[RHO * -5] == AbGroup.Z(2)
