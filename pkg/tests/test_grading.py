import pytest

from rgrade.grading import RHO, GeneratorDegrees, RODegree, diagonal_of, display_position, u_power_a_power


def test_degree_arithmetic():
    v = RODegree(3, -2)
    assert v + RHO == RODegree(4, -1)
    assert 2 * v == v * 2 == RODegree(6, -4)
    assert -v == RODegree(-3, 2)
    assert v.delta == diagonal_of(v) == 5
    assert str(v) == "3-2σ" and str(RODegree(0, 4)) == "0+4σ"
    assert RODegree.from_json(v.to_json()) == v


def test_generator_degrees():
    g = GeneratorDegrees(3)
    assert g.weights == (1, 3, 7)
    assert g.D == 11
    assert g.U == RODegree(16, -16) and g.U.delta == 32
    assert [GeneratorDegrees(n).D for n in (1, 2, 4)] == [1, 4, 26]
    with pytest.raises(ValueError):
        GeneratorDegrees(0)


def test_display_and_u_powers():
    assert display_position(2, RODegree(0, 5)) == RODegree(-2, 5)
    with pytest.raises(ValueError):
        display_position(-1, RODegree(0, 0))
    v = u_power_a_power(3, 2)
    assert v == RODegree(6, -8) and v.delta == 4 * 3 + 2
