import xml.etree.ElementTree as ET

from rgrade.blocks import basic_block
from rgrade.golden import engine_e2_cells
from rgrade.modalg import Window
from rgrade.render import SVGChart, coefficient_svg, e2_svg, render_block_table, render_e2_table

NS = "{http://www.w3.org/2000/svg}"


def test_empty_chart_has_axes_only():
    svg = SVGChart(Window.square(-2, 2)).render()
    root = ET.fromstring(svg)
    assert root.tag == NS + "svg"
    assert len(root.findall(NS + "line")) == 10
    assert not root.findall(NS + "circle")


def test_coefficient_chart():
    svg = coefficient_svg(Window.square(-12, 12))
    root = ET.fromstring(svg)
    assert root.findall(NS + "rect") and root.findall(NS + "circle")
    assert svg == coefficient_svg(Window.square(-12, 12))


def test_e2_chart_has_arrows_and_reflection_point():
    svg = e2_svg("BB", Window(-40, 10, -40, 20))
    assert svg.count('marker-end="url(#head)"') > 0
    assert 'fill="#f2c200"' in svg
    ET.fromstring(svg)


def test_text_tables():
    text = render_block_table(basic_block(), range(0, 4))
    assert text.splitlines()[2].startswith("0     | P")
    cells = engine_e2_cells("NB")
    table = render_e2_table(cells, range(-3, 1), range(0, 4), include_tail=False)
    assert "F2" not in table.splitlines()[2]
