"""Property suites: randomized checks with no reference values attached."""

from hypothesis import given, settings
from hypothesis import strategies as st

from rgrade.abgroup import AbGroup, cokernel, matmul, smith_normal_form
from rgrade.blocks import assemble_coefficients
from rgrade.duality import analyze_block, anderson_dual
from rgrade.grading import RODegree
from rgrade.modalg import Chart, Window
from rgrade.specseq import euler_characteristics

groups = st.builds(AbGroup, st.integers(0, 3), st.lists(st.integers(1, 4), max_size=3).map(tuple))
degrees = st.builds(RODegree, st.integers(-20, 20), st.integers(-20, 20))


@st.composite
def charts(draw):
    chart = Chart(Window.square(-20, 20))
    for v, g in draw(st.lists(st.tuples(degrees, groups), max_size=25)):
        chart.add(v, g)
    return chart


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=1, max_size=5))


@settings(max_examples=1000, deadline=None)
@given(charts())
def test_anderson_dual_is_an_involution(chart):
    assert anderson_dual(anderson_dual(chart)).entries == chart.entries


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_is_idempotent(A):
    diag, U, V, _ = smith_normal_form(A)
    m, n = len(A), len(A[0])
    D = [[diag[i] if i == j and i < len(diag) else 0 for j in range(n)] for i in range(m)]
    assert matmul(matmul(U, A), V) == D
    assert smith_normal_form(D)[0] == diag
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert cokernel(A, m, n) == cokernel(D, m, n)


def test_degree_law_on_all_records():
    records = [d for k in ("BB", "NB") for d in analyze_block(k).differentials]
    assert len(records) == 16
    for d in records:
        assert d.degree_law_holds(), d.source.describe()
        assert 2 <= d.page <= 3


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["BB", "NB"]), st.integers(-100, 30), st.integers(1, 20))
def test_rank_conservation_per_line(kind, y0, height):
    a = analyze_block(kind)
    ys = range(y0, y0 + height)
    assert euler_characteristics(a.e2, ys) == euler_characteristics(a.einf, ys)


@settings(max_examples=25, deadline=None)
@given(st.integers(-64, -1), st.integers(-64, 64), st.integers(1, 12))
def test_left_half_plane_connectivity(x0, y0, size):
    w = Window(x0, min(x0 + size, -1), y0, y0 + size)
    chart = assemble_coefficients(w)
    assert all(v.x + v.y >= 0 for v, _ in chart)
