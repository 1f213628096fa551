"""Transcribed reference data and semantic comparison against the engine.

Golden files live in ``rgrade/data/golden`` (or a directory given by the
caller). Comparisons are made on groups and module identifications, not on
text, so that formatting never hides a mathematical difference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

COLOURS = {"red": 3, "blue": 2, "green": 1}
OMITTED = "omitted-in-paper"


def load_golden(name: str, directory: str | Path | None = None) -> dict:
    if directory is not None:
        return json.loads((Path(directory) / name).read_text())
    text = resources.files("rgrade").joinpath("data").joinpath("golden").joinpath(name).read_text()
    return json.loads(text)


def e2_golden(kind: str, directory=None) -> dict:
    return load_golden(f"{kind.lower()}_e2.json", directory)


@dataclass
class E2Comparison:
    block: str
    matched: int = 0
    mismatches: list[str] = field(default_factory=list)
    omitted: list[dict] = field(default_factory=list)  # engine cells absent from the transcription
    errata_applied: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return (f"{self.block}: {self.matched} cells match, {len(self.mismatches)} differ, "
                f"{len(self.omitted)} extra cells flagged {OMITTED}")


def _cell_key(c: dict) -> tuple:
    return (c["row"], c["column"], c["label"])


def engine_e2_cells(kind: str) -> list[dict]:
    """E2 cells of a block at its canonical translate, differential sources marked."""
    from .duality import analyze_block
    from .specseq import table_cells

    analysis = analyze_block(kind)
    return table_cells(analysis.e2, None, analysis.differentials)


def _table_of(golden: dict, cell: dict) -> str | None:
    for t in golden["tables"]:
        lo, hi = t["rows"]
        if cell["column"] in t["columns"] and lo <= cell["row"] <= hi:
            return t["id"]
    last = max(t["rows"][1] for t in golden["tables"])
    for f in golden.get("families", []):
        if cell["column"] == f["column"] and f["rows_from"] <= cell["row"] <= last:
            return f["table"]
    return None


def compare_e2(kind: str, golden: dict | None = None, apply_errata: bool = False,
               cells: list[dict] | None = None) -> E2Comparison:
    """Cell-by-cell comparison of the E2 page with a transcription.

    Each golden cell must be matched by an engine cell with the same row,
    column and label, the same top-class x (unless the golden x is null),
    a colour matching the cohomological degree or the degree of origin, and the same
    differential mark. Engine cells of a-tower members are reported as
    omitted rather than as differences; so is any other engine cell that
    the transcription lacks.
    """
    golden = golden or e2_golden(kind)
    cells = cells if cells is not None else engine_e2_cells(kind)
    out = E2Comparison(kind)
    pool: dict[tuple, list[dict]] = {}
    for c in cells:
        tab = _table_of(golden, c)
        if tab is None:
            continue
        pool.setdefault((tab,) + _cell_key(c), []).append(c)
    for g in golden["cells"]:
        key = (g["table"],) + _cell_key(g)
        found = pool.get(key)
        where = f"{kind} {g['table']} row {g['row']} u^{g['column']} {g['label']}"
        if not found:
            out.mismatches.append(f"{where}: not produced")
            continue
        c = found.pop(0)
        want_x = g["x"]
        if apply_errata and "erratum" in g:
            want_x = g["erratum"]["x"]
            out.errata_applied += 1
        problems = []
        if want_x is not None and c["x"] != want_x:
            problems.append(f"x {c['x']} vs {want_x}")
        # the transcription colours spliced summands by origin in some cells
        # and by actual degree in others; either is accepted
        if g["colour"] is not None and COLOURS[g["colour"]] not in (c["origin_degree"], c["degree"]):
            problems.append(f"H^{c['degree']} (origin H^{c['origin_degree']}) vs {g['colour']}")
        if g.get("differential") != c.get("differential"):
            problems.append(f"mark {c.get('differential')} vs {g.get('differential')}")
        if problems:
            out.mismatches.append(f"{where}: " + ", ".join(problems))
        else:
            out.matched += 1
    families = golden.get("families", [])
    for rest in pool.values():
        for c in rest:
            fam = any(c["column"] == f["column"] and c["source_delta"] >= f["rows_from"] and c["tail"]
                      for f in families)
            if c["tail"] or fam:
                out.omitted.append(dict(c, flag=OMITTED, family=fam))
            else:
                out.mismatches.append(f"{kind} row {c['row']} u^{c['column']} {c['label']}: not transcribed")
    return out


def golden_differentials(directory=None) -> list[dict]:
    return load_golden("differentials.json", directory)["records"]


def _record_key(d) -> tuple:
    s = d.source
    return (s.entry.block, s.entry.delta, s.entry.column, s.degree)


def compare_differentials(computed: dict[str, list], golden: list[dict] | None = None) -> list[str]:
    """Golden records against computed ones, keyed by source; pages and
    (when given) targets must agree, and nothing extra may be found."""
    golden = golden if golden is not None else golden_differentials()
    have = {}
    for recs in computed.values():
        for d in recs:
            have[_record_key(d)] = d
    diffs = []
    seen = set()
    for g in golden:
        s = g["source"]
        key = (g["block"], s["delta"], s["column"], s["degree"])
        seen.add(key)
        d = have.get(key)
        name = f"{g['block']}_{s['delta']} u^{s['column']} H^{s['degree']}"
        if d is None:
            diffs.append(f"{name}: no differential found, expected d{g['page']}")
            continue
        if d.page != g["page"]:
            diffs.append(f"{name}: found d{d.page}, expected d{g['page']}")
        t = g.get("target")
        if t is not None:
            got = (d.target.entry.delta, d.target.entry.column, d.target.degree)
            if got != (t["delta"], t["column"], t["degree"]):
                diffs.append(f"{name}: target {got}, expected {tuple(t.values())}")
    for key, d in have.items():
        if key not in seen:
            diffs.append(f"{key[0]}_{key[1]} u^{key[2]} H^{key[3]}: unexpected d{d.page}")
    return diffs


def golden_pairing(directory=None):
    from .duality import pairing_from_json

    return pairing_from_json(load_golden("pairing.json", directory))
