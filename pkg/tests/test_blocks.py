import pytest

from rgrade.blocks import (BB, NB, U, BlockDataError, BlockEntry, assemble_coefficients, augmentation_kernel_check,
                           basic_block, block, block_from_json, negative_block, translates)
from rgrade.grading import RODegree
from rgrade.modalg import Window


def test_block_shapes():
    bb, nb = basic_block(), negative_block()
    assert len(bb.entries) == len(nb.entries) == 32
    assert bb.entry(0, 0).module == "P" and bb.entry(0, 0).basepoint == RODegree(0, 0)
    assert nb.entry(0, 0).module == "(2,v1,v2,v3)P"
    assert nb.entry(8, 2).module == "(2,v1)P" and nb.entry(8, 2).basepoint == RODegree(4, -4)
    assert block(BB) is bb and block(NB) is nb
    with pytest.raises(ValueError):
        block("XX")


def test_a_tower_members():
    bb, nb = basic_block(), negative_block()
    e = bb.entry(25, 0)
    assert e.tail and e.module == "Pb3" and e.basepoint == RODegree(0, -25)
    assert bb.entry(14, 0) is None or not bb.entry(14, 0).tail
    f = nb.entry(-5, 0)
    assert f.tail and f.basepoint == RODegree(-1, 4)


def test_json_round_trip():
    for data in (basic_block(), negative_block()):
        again = block_from_json(data.to_json())
        assert again.entries == data.entries and again.tails == data.tails


def test_basepoint_must_lie_on_its_diagonal():
    with pytest.raises(BlockDataError):
        BlockEntry(3, 0, "P", RODegree(0, 0), BB)


def test_translates():
    w = Window.square(-64, 64)
    assert translates(BB, w) == [0, 1, 2, 3, 4]
    assert translates(NB, w)[-1] == -1 and all(m < 0 for m in translates(NB, w))
    assert U == RODegree(16, -16)


def test_augmentation_kernels():
    assert augmentation_kernel_check(Window.square(-40, 40)) == []


def test_coefficients_near_the_origin():
    c = assemble_coefficients(Window.square(-4, 4))
    assert c[RODegree(0, 0)].free == 1  # the unit
    assert c[RODegree(0, -1)].torsion == (1,)  # a
    assert c[RODegree(2, -2)].free == 1  # u


def test_left_half_plane_is_connective():
    c = assemble_coefficients(Window.square(-64, 64))
    assert all(v.x + v.y >= 0 for v, _ in c if v.x < 0)
    # below the line on the right only on the u-power a-strings
    assert {v.x for v, _ in c if v.x >= 0 and v.x + v.y < 0} <= {x for x in range(0, 65, 2)}
