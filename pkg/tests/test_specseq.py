import pytest

from rgrade.duality import analyze_block, gorenstein_shift_of
from rgrade.modalg import Window
from rgrade.specseq import (ABUTMENT, ROW, Inconsistency, build_e2, compute_e_infinity, euler_characteristics,
                            infer_differentials, table_cells)


@pytest.fixture(scope="module")
def bb():
    return analyze_block("BB")


@pytest.fixture(scope="module")
def nb():
    return analyze_block("NB")


def test_no_problems(bb, nb):
    assert bb.problems == [] and nb.problems == []


def test_nb_differentials(nb):
    assert [(d.page, d.source.entry.delta, d.target.entry.module) for d in nb.differentials] == [
        (2, 9, "(v1)Pb0"), (2, 8, "(v1)Pb0"), (2, 7, "(2,v1)P")]
    assert all(d.source.entry.module == "(v3)Pb2" for d in nb.differentials)


def test_bb_differentials(bb):
    pages = sorted((d.source.entry.delta, d.page) for d in bb.differentials)
    assert len(pages) == 13
    assert {(7, 2), (8, 2), (9, 2)} <= set(pages)
    tail = {delta: p for delta, p in pages if delta >= 15}
    assert tail == {15: 2, 16: 2, 17: 2, 18: 2, 19: 2, 20: 2, 21: 2, 22: 3, 23: 3, 24: 3}


def test_d3_on_diagonal_22_lands_on_a_splice_summand(bb):
    d = next(d for d in bb.differentials if d.source.entry.delta == 22)
    assert d.page == 3 and d.target.degree == 3 and d.target.summand.origin_degree == 2
    assert d.target.entry.module == "(2,v1)P"


def test_degree_law(bb, nb):
    for d in bb.differentials + nb.differentials:
        assert d.degree_law_holds()
        assert d.target.column == d.source.column - d.page


def test_extension_rows(bb, nb):
    assert sorted(r.row for r in bb.extensions) == [1, 9, 17, 25]
    assert sorted(r.row for r in nb.extensions) == [1, 9, 17]
    assert all(r.kind in (ROW, ABUTMENT) for r in bb.extensions)


def test_row_17_is_a_nonsplit_extension(bb):
    r = next(r for r in bb.extensions if r.row == 17)
    (sub, _), = r.subgroup
    (quo, _), = r.quotient
    assert sub.entry.module == "(2)P" and sub.entry.column == 5 and sub.label == "P^*"
    assert quo.entry.module == "(v2)Pb1" and quo.degree == 2
    assert r.result.free == 1 and not r.result.torsion


def test_rank_conservation(bb, nb):
    ys = range(-100, 40)
    for a in (bb, nb):
        assert euler_characteristics(a.e2, ys) == euler_characteristics(a.einf, ys)


def test_table_cells_mark_differential_sources(nb):
    cells = table_cells(nb.e2, None, nb.differentials)
    marked = [(c["row"], c["column"]) for c in cells if c.get("differential")]
    assert sorted(marked) == [(6, 0), (7, 0), (8, 0)]


def test_differentials_beyond_last_page_rejected(nb):
    d = nb.differentials[0]
    fake = type(d)(9, d.source, d.target, d.trigger)
    with pytest.raises(Inconsistency):
        compute_e_infinity(nb.e2, [fake], 3)


def test_inference_is_translation_invariant():
    W = gorenstein_shift_of(3).W
    w = Window(-120, 80, -120, 60)
    page = build_e2("BB", w, 1)
    found = infer_differentials(page, 3, W)
    base = analyze_block("BB").differentials
    assert sorted((d.page, d.source.entry.delta) for d in found) == sorted((d.page, d.source.entry.delta) for d in base)
