import pytest

from rgrade.grading import RODegree
from rgrade.localcoh import (CLOSED_FORM, SPLICED, SpliceAmbiguity, Unsupported, compare_with_oracle, koszul_lc,
                             local_cohomology, spliced_lc)
from rgrade.modalg import Window, iter_standard_names


def summands(name):
    return [(s.degree, s.label, s.top, s.origin_degree) for s in local_cohomology(name).summands]


def test_rings_have_one_top_cohomology():
    assert summands("P") == [(3, "P^*", -11, 3)]
    assert summands("Pb0") == [(3, "Pb0^v", -11, 3)]
    assert summands("Pb2") == [(1, "Pb2^v", -7, 1)]
    assert summands("Pb3") == [(0, "F2", 0, 0)]
    assert local_cohomology("P").provenance == CLOSED_FORM


def test_principal_ideal_is_shifted_ring():
    assert summands("(v1)Pb0") == [(3, "Pb0^v", -10, 3)]
    assert summands("(2)P") == summands("P")


def test_splice_of_two_generator_ideal():
    r = local_cohomology("(2,v1)P")
    assert r.provenance == SPLICED
    assert [(s.degree, s.label, s.origin_degree) for s in r.summands] == [(3, "P^*", 3), (3, "Pb1^v", 2)]
    assert all("zero" in c or "split" in c for c in r.certificates)


def test_splice_needs_an_ideal():
    with pytest.raises(Unsupported):
        spliced_lc("P")


def test_ambiguous_splice_is_refused():
    with pytest.raises((SpliceAmbiguity, Unsupported)):
        spliced_lc("(2,v1)P", R="P", Q="P")


def test_oracle_on_a_small_window():
    w = Window.square(-14, 4)
    oracle = koszul_lc("(v2)Pb1", w)
    assert oracle.nonzero_degrees() == [2]
    assert not compare_with_oracle("(v2)Pb1", w)


@pytest.mark.parametrize("name", list(iter_standard_names()))
def test_closed_form_matches_oracle(name):
    assert compare_with_oracle(name, Window.square(-24, 8)) == []


def test_oracle_at_a_basepoint():
    assert not compare_with_oracle("(2,v1,v2)P", Window.square(-20, 10), RODegree(3, 1))
