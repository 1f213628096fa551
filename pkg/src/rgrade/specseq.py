"""The local cohomology spectral sequence H^*_J(R) => pi_*(Gamma_J R), one
block at a time.

An E2 page is a list of summands (one per local cohomology summand of one
block entry); a summand is a tower of groups hanging down a rho-diagonal from
its top class. Differentials and extensions are found by asking that the
shifted Anderson dual of what survives be a possible coefficient chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .abgroup import AbGroup, ZERO_GROUP
from .blocks import BB, NB, U, BlockData, BlockEntry, block
from .duality import dual_position, forbidden, gorenstein_shift_of
from .grading import ONE, RHO, RODegree, display_position
from .localcoh import LCSummand, local_cohomology
from .modalg import INTEGRAL, Chart, Window

CONNECTIVITY = "connectivity-forced"
PROPAGATED = "propagated-monomorphism"
ROW = "E2-row"
ABUTMENT = "abutment"


class Inconsistency(RuntimeError):
    """The data cannot be made to satisfy duality."""


class Ambiguity(RuntimeError):
    """More than one differential fits a violating class."""


@lru_cache(maxsize=None)
def _summands(module: str, method: str) -> tuple[LCSummand, ...]:
    return tuple(local_cohomology(module, method=method).summands)


@dataclass(frozen=True)
class SSEntry:
    """One local cohomology summand of one block entry, translated by U^m."""

    entry: BlockEntry
    summand: LCSummand
    power: int = 0  # U-translate

    @property
    def degree(self) -> int:
        return self.summand.degree

    @property
    def column(self) -> int:
        return -self.summand.degree

    @property
    def free(self) -> bool:
        return self.summand.coefficients == INTEGRAL

    @property
    def shift(self) -> RODegree:
        return U * self.power

    @property
    def top_internal(self) -> RODegree:
        return self.entry.basepoint + self.shift + RHO * self.summand.top

    @property
    def top_display(self) -> RODegree:
        return display_position(self.degree, self.top_internal)

    def display(self, k: int) -> RODegree:
        """Display degree of the class k rho-steps below the top."""
        return self.top_display - RHO * k

    def rank(self, k: int) -> int:
        return self.summand.rank_at(self.summand.top - k) if k >= 0 else 0

    def offset_of(self, v: RODegree) -> int | None:
        d = self.top_display - v
        if d.x != d.y or d.x < 0:
            return None
        return d.x

    def offsets_in(self, window: Window) -> range:
        r = window.rho_range(self.top_display)
        lo = max(0, -r.stop + 1)
        hi = -r.start
        return range(lo, hi + 1)

    @property
    def row(self) -> int:
        """Table row: the entry's diagonal minus the cohomological degree."""
        return self.entry.delta - self.degree

    @property
    def label(self) -> str:
        return self.summand.label

    @property
    def key(self) -> tuple:
        s = self.summand
        return (self.entry.block, self.entry.delta, self.entry.column, self.entry.module,
                s.degree, s.level, s.top, self.power)

    def translated(self, power: int) -> SSEntry:
        return SSEntry(self.entry, self.summand, power)

    def describe(self) -> str:
        return (f"{self.entry.block}_{self.entry.delta} u^{self.entry.column} {self.entry.module}: "
                f"H^{self.degree} {self.label} top {self.top_display}")

    def to_json(self):
        return {
            "block": self.entry.block, "delta": self.entry.delta, "column": self.entry.column,
            "module": self.entry.module, "degree": self.degree, "label": self.label,
            "row": self.row, "top_display": self.top_display.to_json(), "U_power": self.power,
            "origin_degree": self.summand.origin_degree,
        }


@dataclass
class DifferentialRecord:
    page: int
    source: SSEntry
    target: SSEntry
    trigger: RODegree  # display degree of the class that forced it
    justification: str = CONNECTIVITY
    kills: dict[int, int] = field(default_factory=dict)  # source offset -> rank killed
    alignment: int = 0  # target offset = source offset + alignment

    @property
    def rank_killed(self) -> int:
        return sum(self.kills.values())

    def degree_law_holds(self) -> bool:
        s, t = self.source, self.target
        if t.column != s.column - self.page:
            return False
        for k in self.kills:
            a, b = s.display(k), t.display(k + self.alignment)
            if b != a - ONE:
                return False
        return True

    def to_json(self):
        return {
            "page": self.page,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "trigger": self.trigger.to_json(),
            "justification": self.justification,
            "rank_killed": self.rank_killed,
        }


@dataclass
class ExtensionRecord:
    """A torsion summand glued onto free summands in the same degrees.

    ``degree`` is the top surviving class of the torsion summand;
    ``degrees`` lists every degree where a class is absorbed.
    """

    degree: RODegree
    kind: str
    subgroup: list[tuple[SSEntry, int]]  # higher filtration (larger i), ranks at ``degree``
    quotient: list[tuple[SSEntry, int]]
    absorbed: int  # copies of F2 absorbed at ``degree``
    result: AbGroup  # the group at ``degree``
    row: int
    torsion: SSEntry | None = None
    free: tuple[SSEntry, ...] = ()
    degrees: dict[RODegree, int] = field(default_factory=dict)
    offsets: dict[int, int] = field(default_factory=dict)  # torsion summand offset -> absorbed
    reach: int = 0  # offsets beyond this were not examined

    def to_json(self):
        return {
            "degree": self.degree.to_json(), "kind": self.kind, "row": self.row,
            "subgroup": [dict(e.to_json(), rank=r) for e, r in self.subgroup],
            "quotient": [dict(e.to_json(), rank=r) for e, r in self.quotient],
            "absorbed": self.absorbed, "result": self.result.to_json(),
            "degrees_absorbed": len(self.degrees),
        }


@dataclass
class SSPage:
    block: str
    power: int
    window: Window
    entries: list[SSEntry]
    page: int = 2
    killed: dict[tuple, dict[int, int]] = field(default_factory=dict)
    differentials: list[DifferentialRecord] = field(default_factory=list)

    def remaining(self, e: SSEntry, k: int) -> int:
        return e.rank(k) - self.killed.get(e.key, {}).get(k, 0)

    def classes_at(self, v: RODegree) -> list[tuple[SSEntry, int, int]]:
        out = []
        for e in self._by_diagonal().get(v.delta, ()):
            k = e.offset_of(v)
            if k is not None:
                r = self.remaining(e, k)
                if r:
                    out.append((e, k, r))
        return out

    def _by_diagonal(self):
        cache = getattr(self, "_diag_cache", None)
        if cache is None:
            cache = {}
            for e in self.entries:
                cache.setdefault(e.top_display.delta, []).append(e)
            self._diag_cache = cache
        return cache

    def group_at(self, v: RODegree) -> AbGroup:
        free = tors = 0
        for e, _, r in self.classes_at(v):
            if e.free:
                free += r
            else:
                tors += r
        return AbGroup(free, (1,) * tors) if free or tors else ZERO_GROUP

    def iter_classes(self, window: Window | None = None):
        """(entry, offset, remaining rank) for every surviving class."""
        win = window or self.window
        for e in self.entries:
            for k in e.offsets_in(win):
                r = self.remaining(e, k)
                if r:
                    yield e, k, r

    def chart(self, window: Window | None = None) -> Chart:
        win = window or self.window
        chart = Chart(win)
        for e, k, r in self.iter_classes(win):
            chart.add(e.display(k), AbGroup.Z(r) if e.free else AbGroup.F2(r))
        return chart

    def copy(self) -> SSPage:
        return SSPage(self.block, self.power, self.window, list(self.entries), self.page,
                      {k: dict(v) for k, v in self.killed.items()}, list(self.differentials))

    def find(self, key: tuple) -> SSEntry | None:
        for e in self.entries:
            if e.key == key:
                return e
        return None


# ---------------------------------------------------------------------------
# E2


def build_e2(data: BlockData | str, window: Window, power: int | None = None) -> SSPage:
    """Local cohomology of every entry of the block (translated by U^power)
    whose classes can be displayed in ``window``."""
    if isinstance(data, str):
        data = block(data)
    if power is None:
        power = 0 if data.kind == BB else -1
    shift = U * power
    lo = window.xmin - window.ymax - shift.delta
    hi = window.xmax - window.ymin - shift.delta + data.n
    entries = []
    for be in data.materialize(lo, hi):
        for s in _summands(be.module, be.lc_method):
            e = SSEntry(be, s, power)
            if e.offsets_in(window):
                entries.append(e)
    entries.sort(key=lambda e: (e.entry.delta, e.entry.column, -e.degree, e.summand.level))
    return SSPage(data.kind, power, window, entries)


def table_cells(page: SSPage, max_row: int | None = None,
                differentials: list[DifferentialRecord] | None = None) -> list[dict]:
    """Cells of the local cohomology table: one per summand, keyed by row and
    u-power column, with the top class's display x measured from u^j.

    Sources of ``differentials`` (default: those applied to the page) carry
    the page as a mark; a-tower members are flagged ``tail``.
    """
    sources = {d.source.translated(page.power).key: d.page
               for d in (page.differentials if differentials is None else differentials)}
    cells = []
    for e in page.entries:
        if e.power != page.power:
            continue
        if max_row is not None and e.row > max_row:
            continue
        cell = {
            "row": e.row, "column": e.entry.column, "label": e.label, "degree": e.degree,
            "origin_degree": e.summand.origin_degree, "x": e.top_display.x - e.shift.x - 2 * e.entry.column,
            "source_delta": e.entry.delta, "module": e.entry.module, "tail": e.entry.tail,
        }
        page_no = sources.get(e.key)
        if page_no is not None:
            cell["differential"] = f"d{page_no}"
        cells.append(cell)
    cells.sort(key=lambda c: (c["row"], c["column"], -c["degree"], c["label"], c["source_delta"]))
    return cells


# ---------------------------------------------------------------------------
# differentials


def target_block(kind: str) -> str:
    return NB if kind == BB else BB


def violates(page: SSPage, e: SSEntry, k: int, W: RODegree, as_free: bool | None = None) -> bool:
    free = e.free if as_free is None else as_free
    return forbidden(target_block(page.block), dual_position(e.display(k), free, W))


def monomorphism_propagate(page: SSPage, d: DifferentialRecord) -> DifferentialRecord:
    """Extend a differential that is non-zero on the top class of its source
    to the whole source summand (the dual modules are vbar-divisible, so a
    map non-zero on the top class is injective). Kills the overlap degreewise;
    where the target is smaller the remainder survives."""
    s, t = d.source, d.target
    if page.remaining(s, 0) == 0 or page.remaining(t, d.alignment) == 0:
        raise Inconsistency(f"cannot propagate {s.describe()} -> {t.describe()}: top class not hit")
    offsets = set(s.offsets_in(page.window))
    offsets.update(k - d.alignment for k in t.offsets_in(page.window))
    kills = {}
    for k in sorted(offsets):
        if k < 0:
            continue
        r = min(page.remaining(s, k), page.remaining(t, k + d.alignment))
        if r > 0:
            kills[k] = r
    return DifferentialRecord(d.page, s, t, d.trigger, PROPAGATED, kills, d.alignment)


def apply_differential(page: SSPage, d: DifferentialRecord) -> None:
    sk = page.killed.setdefault(d.source.key, {})
    tk = page.killed.setdefault(d.target.key, {})
    for k, r in d.kills.items():
        sk[k] = sk.get(k, 0) + r
        tk[k + d.alignment] = tk.get(k + d.alignment, 0) + r
        if page.remaining(d.source, k) < 0 or page.remaining(d.target, k + d.alignment) < 0:
            raise Inconsistency(f"negative rank after {d.source.describe()} -> {d.target.describe()}")
    page.differentials.append(d)


def _alignment(s: SSEntry, t: SSEntry) -> int | None:
    """c with t.display(k + c) == s.display(k) - 1, if the two towers share a diagonal."""
    d = t.top_display - (s.top_display - ONE)
    if d.x != d.y:
        return None
    return d.x


def _partners(page: SSPage, e: SSEntry, k: int, r: int) -> list[tuple[SSEntry, SSEntry, int]]:
    """Possible d_r through the class (e, k): (source, target, source offset)."""
    v = e.display(k)
    out = []
    for t, kt, _ in page.classes_at(v - ONE):
        if t.degree == e.degree + r:
            out.append((e, t, k))
    for s, ks, _ in page.classes_at(v + ONE):
        if s.degree == e.degree - r:
            out.append((s, e, ks))
    return out


def infer_differentials(page: SSPage, n: int = 3, W: RODegree | None = None) -> list[DifferentialRecord]:
    """Constraint propagation: every class whose dual position is forbidden
    must support or receive a differential. Pages are taken in order; a
    violating class with a unique partner on the current page fixes that
    differential, which is then propagated over the source summand.

    Classes left violating are handed to the extension step.
    """
    W = W or gorenstein_shift_of(n).W
    found = []
    for r in range(2, n + 1):
        progress = True
        while progress:
            progress = False
            for e, k, _ in sorted(page.iter_classes(), key=lambda c: (c[0].display(c[1]), c[0].key)):
                if page.remaining(e, k) == 0 or not violates(page, e, k, W):
                    continue
                cands = _partners(page, e, k, r)
                if not cands:
                    continue
                if len(cands) > 1:
                    preferred = [c for c in cands
                                 if violates(page, c[1] if c[0] is e else c[0],
                                             (c[2] + _alignment(c[0], c[1])) if c[0] is e else c[2], W)]
                    if len(preferred) != 1:
                        raise Ambiguity(f"{len(cands)} candidate d{r} through {e.describe()} at {e.display(k)}")
                    cands = preferred
                s, t, ks = cands[0]
                c = _alignment(s, t)
                top = DifferentialRecord(r, s, t, e.display(k), CONNECTIVITY, {ks: 1}, c)
                d = monomorphism_propagate(page, top)
                apply_differential(page, d)
                found.append(d)
                progress = True
                break
    page.page = n + 1
    return found


def compute_e_infinity(page: SSPage, differentials: list[DifferentialRecord], n: int = 3) -> SSPage:
    """Apply differential records (from this or a translated page) to a fresh copy."""
    out = page.copy()
    out.killed = {}
    out.differentials = []
    for d in differentials:
        if d.page > n or d.page < 2:
            raise Inconsistency(f"differential on page {d.page} beyond the last page {n}")
        s = out.find(d.source.translated(out.power).key)
        t = out.find(d.target.translated(out.power).key)
        if s is None or t is None:
            continue
        moved = DifferentialRecord(d.page, s, t, d.trigger + U * (out.power - d.source.power),
                                   d.justification, {}, d.alignment)
        kills = {}
        offsets = set(s.offsets_in(out.window)) | {k - d.alignment for k in t.offsets_in(out.window)}
        for k in sorted(offsets):
            if k < 0:
                continue
            r = min(out.remaining(s, k), out.remaining(t, k + d.alignment))
            if r > 0:
                kills[k] = r
        moved.kills = kills
        apply_differential(out, moved)
    out.page = n + 1
    return out


def euler_characteristics(page: SSPage, ys: range) -> dict[int, int]:
    """Sum of (-1)^x * rank over each horizontal line y of the display.

    A d_r keeps y and lowers x by one, so it removes one class of each sign
    and these sums agree on every page. Each tower meets a line at most
    once, so the sum is finite and needs no x-window.
    """
    out = {}
    for y in ys:
        total = 0
        for e in page.entries:
            k = e.top_display.y - y
            if k < 0:
                continue
            r = page.remaining(e, k)
            if r:
                total += (-1) ** (e.display(k).x % 2) * r
        out[y] = total
    return out


# ---------------------------------------------------------------------------
# extensions


def infer_extensions(einf: SSPage, expected: Callable[[RODegree], AbGroup], n: int = 3,
                     window: Window | None = None) -> tuple[list[ExtensionRecord], list[str]]:
    """Compare the split E-infinity groups with the groups duality demands.

    All torsion here is F2, so the only possible additive extension glues an
    F2 onto a Z (giving Z). Where E-infinity has t copies of F2 but duality
    allows only t' < t, t - t' of them must be absorbed by the free part.
    The absorbed classes are attributed to whole torsion summands; a degree
    where that attribution is not forced is reported as undetermined.
    Returns one record per torsion summand and the unexplained mismatches.
    """
    win = window or einf.window
    degrees = sorted({e.display(k) for e, k, _ in einf.iter_classes(win)})
    problems = []
    glued: dict[tuple, dict[RODegree, int]] = {}
    partners: dict[tuple, set] = {}
    by_key = {e.key: e for e in einf.entries}
    for v in degrees:
        got = einf.group_at(v)
        want = expected(v)
        if got == want:
            continue
        t, t2 = got.f2_count, want.f2_count
        if got.free != want.free or t < t2 or t - t2 > got.free or len(want.torsion) != t2:
            problems.append(f"{v}: E-infinity {got}, duality needs {want}")
            continue
        classes = einf.classes_at(v)
        tors = [(e, k, r) for e, k, r in classes if not e.free]
        frees = [e for e, _, _ in classes if e.free]
        absorbed = t - t2
        if t2 and len(tors) > 1:
            problems.append(f"{v}: undetermined which of {len(tors)} torsion summands extend")
            continue
        for e, k, r in tors:
            glued.setdefault(e.key, {})[k] = r if not t2 else absorbed
            partners.setdefault(e.key, set()).update(f.key for f in frees)
    records = []
    for key, offsets in glued.items():
        e = by_key[key]
        where = {e.display(k): a for k, a in offsets.items()}
        top = e.display(min(offsets))
        classes = einf.classes_at(top)
        hi = max(c[0].degree for c in classes)
        sub = [(c[0], c[2]) for c in classes if c[0].degree == hi]
        quo = [(c[0], c[2]) for c in classes if c[0].degree != hi]
        got = einf.group_at(top)
        result = AbGroup(got.free, got.torsion[offsets[min(offsets)]:])
        records.append(ExtensionRecord(top, ROW, sub, quo, offsets[min(offsets)], result, e.row,
                                       e, tuple(by_key[f] for f in sorted(partners[key])), where,
                                       dict(offsets), max(e.offsets_in(win))))
    records.sort(key=lambda r: (r.row, r.degree))
    return records, problems


def classify_abutment_extensions(records: list[ExtensionRecord]) -> list[ExtensionRecord]:
    """Extensions invisible inside one row of the local cohomology tables:
    the constituents' cohomological degrees differ by two or more, so the
    extension only shows up in the abutment."""
    out = []
    for rec in records:
        degrees = [e.degree for e, _ in rec.subgroup + rec.quotient]
        if max(degrees) - min(degrees) >= 2:
            out.append(ExtensionRecord(rec.degree, ABUTMENT, rec.subgroup, rec.quotient, rec.absorbed,
                                       rec.result, rec.row, rec.torsion, rec.free, rec.degrees,
                                       rec.offsets, rec.reach))
    return out


def translate_extension(rec: ExtensionRecord, power: int) -> ExtensionRecord:
    shift = U * (power - rec.torsion.power)
    return ExtensionRecord(rec.degree + shift, rec.kind,
                           [(e.translated(power), r) for e, r in rec.subgroup],
                           [(e.translated(power), r) for e, r in rec.quotient],
                           rec.absorbed, rec.result, rec.row, rec.torsion.translated(power),
                           tuple(f.translated(power) for f in rec.free),
                           {v + shift: r for v, r in rec.degrees.items()}, rec.offsets, rec.reach)


def assemble_abutment(einf: SSPage, extensions: list[ExtensionRecord], window: Window | None = None) -> Chart:
    """The abutment chart: E-infinity with the recorded torsion classes
    absorbed into the free classes sharing their degrees."""
    win = window or einf.window
    absorbed: dict[RODegree, int] = {}
    for rec in extensions:
        if rec.kind != ROW:
            continue
        e = rec.torsion.translated(einf.power)
        for k in e.offsets_in(win):
            if k > rec.reach and einf.remaining(e, k):
                raise Inconsistency(f"extension record for {e.describe()} does not reach offset {k}")
            a = rec.offsets.get(k, 0)
            if a:
                v = e.display(k)
                absorbed[v] = absorbed.get(v, 0) + a
    chart = Chart(win)
    for v, g in einf.chart(win):
        a = absorbed.get(v, 0)
        if a > g.f2_count or a > g.free:
            raise Inconsistency(f"extension at {v} absorbs {a} classes from {g}")
        chart.add(v, AbGroup(g.free, g.torsion[a:]) if a else g)
    return chart
