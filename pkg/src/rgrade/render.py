"""Text tables and SVG charts.

Output is deterministic: everything is emitted in sorted order and numbers
are formatted as integers, so identical inputs give byte-identical files.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .grading import RHO, RODegree
from .modalg import Chart, Window, pretty_name

LEVEL_COLOURS = {0: "#c00000", 1: "#1f4fd0", 2: "#1a9a3a", 3: "#c00000"}
DEGREE_COLOURS = {3: "#c00000", 2: "#1f4fd0", 1: "#1a9a3a", 0: "#000000"}
# generator markers for copies of P and its ideals containing 2
SHAPES = {"P": "square", "(2)P": "small-circle", "(2,v1)P": "dot", "(2,v1,v2)P": "diamond",
          "(2,v1,v2,v3)P": "big-circle"}


# ---------------------------------------------------------------------------
# text tables


def _grid(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    line = lambda r: " | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    out = [line(header), "-+-".join("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def render_block_table(data, deltas: range, columns: range = range(8)) -> str:
    """Rows delta, columns u^j, entries the module names."""
    header = ["delta"] + [f"u^{j}" if j else "1" for j in columns]
    rows = []
    for d in deltas:
        row = [str(d)]
        for j in columns:
            e = data.entry(d, j)
            row.append(pretty_name(e.module) if e else "")
        rows.append(row)
    return _grid(header, rows)


def cell_text(cell: dict) -> str:
    label = cell["label"].replace("Pb", "P̄").replace("^v", "^∨")
    text = label if label == "F2" else f"{label}({cell['x']}ρ)"
    if cell.get("differential"):
        text += f", {cell['differential']}"
    return text


def render_e2_table(cells: list[dict], rows: range, columns: range, include_tail: bool = True) -> str:
    """Local cohomology table: summands of one cell joined by a direct sum sign."""
    header = ["row"] + [f"u^{j}" if j else "1" for j in columns]
    grid = {}
    for c in cells:
        if c["row"] in rows and c["column"] in columns and (include_tail or not c["tail"]):
            grid.setdefault((c["row"], c["column"]), []).append(cell_text(c))
    out = [[str(r)] + [" ⊕ ".join(grid.get((r, j), [])) for j in columns] for r in rows]
    return _grid(header, out)


# ---------------------------------------------------------------------------
# SVG


class SVGChart:
    """A chart canvas with x to the right and y upwards, one unit per grid step."""

    def __init__(self, window: Window, scale: int = 12, title: str = ""):
        self.window = window
        self.scale = scale
        self.title = title
        self.margin = 30
        self.items: list[tuple[int, str]] = []  # (layer, element)

    def _px(self, v: RODegree) -> tuple[int, int]:
        s, w = self.scale, self.window
        return (self.margin + (v.x - w.xmin) * s, self.margin + (w.ymax - v.y) * s)

    def _add(self, layer: int, text: str):
        self.items.append((layer, text))

    def line(self, a: RODegree, b: RODegree, colour: str = "#000", width: float = 1.0, layer: int = 1, dash: str = ""):
        (x1, y1), (x2, y2) = self._px(a), self._px(b)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self._add(layer, f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="{width}"{extra}/>')

    def arrow(self, a: RODegree, b: RODegree, label: str = "", colour: str = "#7a3db8"):
        (x1, y1), (x2, y2) = self._px(a), self._px(b)
        self._add(3, f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="1.5" '
                     f'marker-end="url(#head)"/>')
        if label:
            self._add(3, f'<text x="{(x1 + x2) // 2}" y="{(y1 + y2) // 2 - 3}" font-size="8" fill="{colour}">'
                         f'{escape(label)}</text>')

    def mark(self, v: RODegree, shape: str, colour: str = "#000", label: str = ""):
        x, y = self._px(v)
        r = self.scale // 4
        if shape == "square":
            el = f'<rect x="{x - r}" y="{y - r}" width="{2 * r}" height="{2 * r}" fill="{colour}"/>'
        elif shape == "diamond":
            el = (f'<polygon points="{x},{y - r - 1} {x + r + 1},{y} {x},{y + r + 1} {x - r - 1},{y}" '
                  f'fill="{colour}"/>')
        elif shape == "small-circle":
            el = f'<circle cx="{x}" cy="{y}" r="{r}" fill="none" stroke="{colour}"/>'
        elif shape == "big-circle":
            el = f'<circle cx="{x}" cy="{y}" r="{r + 2}" fill="none" stroke="{colour}"/>'
        elif shape == "reflection":
            el = (f'<polygon points="{x},{y - r - 2} {x + r + 2},{y} {x},{y + r + 2} {x - r - 2},{y}" '
                  f'fill="#f2c200" stroke="#8a6d00"/>')
        else:  # dot
            el = f'<circle cx="{x}" cy="{y}" r="{max(2, r - 1)}" fill="{colour}"/>'
        self._add(2, el)
        if label:
            self._add(2, f'<text x="{x + r + 1}" y="{y - r}" font-size="7">{escape(label)}</text>')

    def group(self, v: RODegree, free: int, torsion: int):
        """Z^free as a black square, F2^torsion as red dots side by side."""
        if free:
            self.mark(v, "square", "#000", str(free) if free > 1 else "")
        for t in range(torsion):
            x, y = self._px(v)
            self._add(2, f'<circle cx="{x + 3 * t - (3 * (torsion - 1)) // 2}" cy="{y + (4 if free else 0)}" '
                         f'r="2" fill="#c00000"/>')

    def chart(self, chart: Chart):
        for v in sorted(chart.entries, key=lambda v: (v.x, v.y)):
            g = chart.entries[v]
            self.group(v, g.free, len(g.torsion))

    def tower(self, end: RODegree, colour: str, width: float = 1.0, up: bool = False):
        """Diagonal line from ``end`` along -rho (or +rho when ``up``), clipped to the window."""
        k = self.window.rho_range(end)
        lo, hi = (max(k.start, 0), k.stop - 1) if up else (k.start, min(k.stop - 1, 0))
        if lo < hi:
            self.line(end + RHO * lo, end + RHO * hi, colour, width)

    def render(self) -> str:
        w = self.window
        s, m = self.scale, self.margin
        width = 2 * m + (w.xmax - w.xmin) * s
        height = 2 * m + (w.ymax - w.ymin) * s
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}">',
               '<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
               '<path d="M0,0 L6,3 L0,6 z" fill="#7a3db8"/></marker></defs>',
               f'<rect width="{width}" height="{height}" fill="#ffffff"/>']
        if self.title:
            out.append(f'<text x="{m}" y="{m // 2}" font-size="11">{escape(self.title)}</text>')
        for x in range(w.xmin, w.xmax + 1):
            px = m + (x - w.xmin) * s
            colour = "#888" if x == 0 else "#eee"
            out.append(f'<line x1="{px}" y1="{m}" x2="{px}" y2="{height - m}" stroke="{colour}" stroke-width="0.5"/>')
        for y in range(w.ymin, w.ymax + 1):
            py = m + (w.ymax - y) * s
            colour = "#888" if y == 0 else "#eee"
            out.append(f'<line x1="{m}" y1="{py}" x2="{width - m}" y2="{py}" stroke="{colour}" stroke-width="0.5"/>')
        for _, el in sorted(self.items, key=lambda t: t[0]):
            out.append(el)
        out.append("</svg>")
        return "\n".join(out) + "\n"


def coefficient_svg(window: Window) -> str:
    """The coefficient chart with generator markers, coloured towers and a-strings."""
    from .blocks import BB, NB, U, assemble_coefficients, block, translates

    svg = SVGChart(window, title=f"coefficients on {window.to_json()}")
    for kind in (BB, NB):
        data = block(kind)
        for m in translates(kind, window):
            shift = U * m
            lo = window.xmin - window.ymax - shift.delta
            hi = window.xmax - window.ymin - shift.delta
            tails = []
            for e in data.materialize(lo, hi):
                base = e.basepoint + shift
                pres = e.presented
                colour = "#000" if pres.coefficients == "integral" else LEVEL_COLOURS[pres.ring_level]
                if e.tail:
                    tails.append(base)
                    continue
                first = base + RHO * min(w for _, w in _gen_rho(pres))
                svg.tower(first, colour, up=True)
                shape = SHAPES.get(e.module)
                if shape and first in window:
                    svg.mark(first, shape)
            tails.sort(key=lambda v: (v.x, v.y))
            for a, b in zip(tails, tails[1:]):
                if a.x == b.x and abs(a.y - b.y) == 1 and a in window and b in window:
                    svg.line(a, b, "#c00000", 0.8)
    svg.chart(assemble_coefficients(window))
    return svg.render()


def _gen_rho(pres):
    """(token, rho-degree) of each generator of a presented module."""
    from .modalg import weights

    ws = weights(pres.n)
    return [(tok, sum(w * b for w, b in zip(ws, mono))) for tok, mono in pres.generators]


def e2_svg(kind: str, window: Window, with_einf: bool = False) -> str:
    """E2 (or E-infinity) of one block: towers coloured by cohomological degree,
    differentials as arrows."""
    from .duality import analyze_block, gorenstein_shift_of

    a = analyze_block(kind)
    page = a.einf if with_einf else a.e2
    svg = SVGChart(window, title=f"{kind} {'E-infinity' if with_einf else 'E2'} on {window.to_json()}")
    for e in page.entries:
        svg.tower(e.top_display, DEGREE_COLOURS[e.degree], 1.2 if e.free else 0.8)
    svg.chart(page.chart(window))
    if not with_einf:
        for d in a.differentials:
            for k in sorted(d.kills)[:1]:
                src, tgt = d.source.display(k), d.target.display(k + d.alignment)
                if src in window and tgt in window:
                    svg.arrow(src, tgt, f"d{d.page}")
    W = gorenstein_shift_of(3).W
    half = RODegree(W.x // 2, W.y // 2)
    if half in window:
        svg.mark(half, "reflection")
    return svg.render()
