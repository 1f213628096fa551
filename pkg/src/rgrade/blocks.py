"""The basic block BB and the negative block NB of the n = 3 coefficients,
and the assembly BB[U] + U^-1 NB[U^-1] of the whole coefficient chart."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .abgroup import AbGroup
from .grading import GeneratorDegrees, RODegree, u_power_a_power
from .modalg import Chart, PresentedModule, Window, module_chart, standard_module

BB = "BB"
NB = "NB"
U = GeneratorDegrees(3).U


class BlockDataError(ValueError):
    pass


@dataclass(frozen=True)
class BlockEntry:
    delta: int
    column: int
    module: str
    basepoint: RODegree
    block: str
    provenance: str = ""
    lc_method: str = "auto"  # 'splice' for the augmentation kernels of NB
    tail: bool = False  # member of an a-tower family row

    def __post_init__(self):
        if self.basepoint.delta != self.delta:
            raise BlockDataError(f"basepoint {self.basepoint} of {self.module} is off diagonal {self.delta}")

    @property
    def presented(self) -> PresentedModule:
        return _presented(self.module, self.basepoint)

    @property
    def key(self) -> tuple:
        return (self.block, self.delta, self.column, self.module)

    def to_json(self):
        out = {"delta": self.delta, "column": self.column, "module": self.module,
               "basepoint": self.basepoint.to_json(), "provenance": self.provenance}
        if self.lc_method != "auto":
            out["local_cohomology"] = self.lc_method
        return out


@lru_cache(maxsize=None)
def _presented(name: str, basepoint: RODegree) -> PresentedModule:
    return standard_module(name, basepoint)


@dataclass(frozen=True)
class ATower:
    """A vertical column of F2's (one per diagonal) at fixed x.

    ``delta_from`` / ``delta_to`` bound the diagonals; the other end is open.
    """

    x: int
    module: str = "Pb3"
    column: int = 0
    delta_from: int | None = None
    delta_to: int | None = None
    provenance: str = ""

    def deltas(self, lo: int, hi: int) -> range:
        a = lo if self.delta_from is None else max(lo, self.delta_from)
        b = hi if self.delta_to is None else min(hi, self.delta_to)
        return range(a, b + 1)

    def entry(self, delta: int, block: str) -> BlockEntry:
        return BlockEntry(delta, self.column, self.module, RODegree(self.x, self.x - delta), block,
                          self.provenance, tail=True)


@dataclass
class BlockData:
    kind: str
    n: int
    entries: list[BlockEntry]
    tails: list[ATower] = field(default_factory=list)

    def entry(self, delta: int, column: int) -> BlockEntry | None:
        for e in self.entries:
            if e.delta == delta and e.column == column:
                return e
        for t in self.tails:
            if t.column == column and delta in t.deltas(delta, delta):
                return t.entry(delta, self.kind)
        return None

    def row(self, delta: int) -> list[BlockEntry]:
        return [e for e in self.materialize(delta, delta)]

    def materialize(self, delta_lo: int, delta_hi: int) -> list[BlockEntry]:
        """Finite entries with delta in range, tail members included."""
        out = [e for e in self.entries if delta_lo <= e.delta <= delta_hi]
        for t in self.tails:
            out.extend(t.entry(d, self.kind) for d in t.deltas(delta_lo, delta_hi))
        return sorted(out, key=lambda e: (e.delta, e.column))

    def chart(self, window: Window, shift: RODegree = RODegree(0, 0)) -> Chart:
        """The block translated by ``shift``, restricted to ``window``."""
        chart = Chart(window)
        lo = window.xmin - window.ymax - shift.delta
        hi = window.xmax - window.ymin - shift.delta
        for e in self.materialize(lo, hi):
            M = e.presented.rebased(e.basepoint + shift)
            for v, g in module_chart(M, window):
                chart.add(v, g)
        return chart

    def to_json(self):
        return {
            "schema": "rgrade.block/1",
            "block": self.kind,
            "n": self.n,
            "entries": [e.to_json() for e in self.entries],
            "tails": [
                {k: v for k, v in {"family": "a-tower", "module": t.module, "column": t.column, "x": t.x,
                                   "delta_from": t.delta_from, "delta_to": t.delta_to,
                                   "provenance": t.provenance}.items() if v is not None}
                for t in self.tails
            ],
        }


def load_block(path: str | Path) -> BlockData:
    data = json.loads(Path(path).read_text())
    return block_from_json(data)


def block_from_json(data) -> BlockData:
    if data.get("schema") != "rgrade.block/1":
        raise BlockDataError("unknown block schema")
    kind = data["block"]
    entries = []
    for e in data["entries"]:
        base = RODegree.from_json(e["basepoint"])
        if e["column"] and base != u_power_a_power(e["column"], e["delta"] - 4 * e["column"]):
            raise BlockDataError(f"entry {e} is not based at its u-power")
        entries.append(BlockEntry(e["delta"], e["column"], e["module"], base, kind,
                                  e.get("provenance", ""), e.get("local_cohomology", "auto")))
    tails = [ATower(t["x"], t.get("module", "Pb3"), t.get("column", 0), t.get("delta_from"),
                    t.get("delta_to"), t.get("provenance", "")) for t in data.get("tails", [])]
    return BlockData(kind, data.get("n", 3), entries, tails)


def _packaged(name: str) -> BlockData:
    text = resources.files("rgrade").joinpath("data").joinpath(name).read_text()
    return block_from_json(json.loads(text))


@lru_cache(maxsize=None)
def basic_block() -> BlockData:
    return _packaged("bb.json")


@lru_cache(maxsize=None)
def negative_block() -> BlockData:
    return _packaged("nb.json")


def block(kind: str) -> BlockData:
    if kind == BB:
        return basic_block()
    if kind == NB:
        return negative_block()
    raise ValueError(f"unknown block {kind!r}")


def translates(kind: str, window: Window, margin: int = 2) -> list[int]:
    """Powers m of U such that U^m * block can meet ``window``.

    BB appears with m >= 0 and NB with m <= -1. Both blocks sit in
    0 <= x + 1 on their own; U moves x by 16 and the diagonal by 32.
    """
    span = (max(abs(window.xmin), abs(window.xmax)) + max(abs(window.ymin), abs(window.ymax))) // 16 + margin
    if kind == BB:
        return [m for m in range(0, span + 1) if 16 * m <= window.xmax + 1]
    return [m for m in range(-span - 1, 0)]


def assemble_coefficients(window: Window) -> Chart:
    """BB[U] + U^-1 NB[U^-1] on ``window``; overlapping groups are summed."""
    chart = Chart(window)
    for kind in (BB, NB):
        data = block(kind)
        for m in translates(kind, window):
            for v, g in data.chart(window, U * m):
                chart.add(v, g)
    return chart


def augmentation_kernel_check(window: Window) -> list[str]:
    """Compare NB's column-0 modules with ker(BB-module -> F2) degreewise.

    The kernel agrees with the BB module except at the bottom class, where Z
    becomes 2Z (same group) or F2 becomes 0.
    """
    problems = []
    nb = negative_block()
    for e in basic_block().entries:
        if e.column != 0:
            continue
        k = nb.entry(e.delta, 0)
        if k is None or k.basepoint != e.basepoint:
            problems.append(f"delta {e.delta}: no matching kernel entry")
            continue
        a = module_chart(e.presented, window)
        b = module_chart(k.presented, window)
        for v, ga, gb in a.differences(b):
            expected = AbGroup(ga.free, ga.torsion[1:]) if ga.free == 0 else ga
            if v != e.basepoint or gb != expected:
                problems.append(f"delta {e.delta} at {v}: {ga} vs {gb}")
    return problems
