"""Anderson duality at chart level, the Gorenstein shift, the master duality
check and the table of paired diagonals."""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import AbGroup, ZERO_GROUP
from .grading import ONE, RHO, RODegree, GeneratorDegrees
from .modalg import Chart, Window

BB = "BB"
NB = "NB"


@dataclass(frozen=True)
class GorensteinShift:
    n: int
    W: RODegree

    def to_json(self):
        return {"n": self.n, "W": self.W.to_json()}


def gorenstein_shift_of(n: int) -> GorensteinShift:
    """W = -(D_n rho + n + 2(1 - sigma))."""
    if n < 1:
        raise ValueError("n must be positive")
    D = GeneratorDegrees(n).D
    return GorensteinShift(n, -(RHO * D + ONE * n + RODegree(2, -2)))


def dual_position(v: RODegree, free: bool, W: RODegree) -> RODegree:
    """Where a class at abutment degree v appears in the coefficient chart:
    free classes reflect through W, torsion classes pick up a further -1."""
    return W - v if free else W - v - ONE


def forbidden(target_block: str, t: RODegree) -> bool:
    """True when the coefficient chart cannot have a class of ``target_block``
    type at t.

    NB translates are connective (x + y >= 0) everywhere. BB translates are
    connective in the left half-plane; in the right half-plane the only
    classes below x + y = 0 lie on the vertical a-strings hanging from the
    powers of u, which sit at even x.
    """
    if t.x + t.y >= 0:
        return False
    if target_block == NB:
        return True
    return t.x < 0 or t.x % 2 == 1


def anderson_dual(chart: Chart, window: Window | None = None) -> Chart:
    """Free part at V from the free part at -V; torsion at V from the torsion
    at -V - 1 (the Ext term). The sequence splits since Hom is free.

    Applying it twice gives back the original chart: -(-v - 1) - 1 = v.
    """
    win = window or chart.window.reflected().grow(left=1)
    out = Chart(win)
    for v, g in chart.entries.items():
        if g.free:
            out.add(-v, AbGroup.Z(g.free))
        if g.torsion:
            out.add(-v - ONE, AbGroup(0, g.torsion))
    return out


def shifted_dual_group(coefficients: Chart, v: RODegree, W: RODegree) -> AbGroup:
    """(Sigma^W I R) at v: free part of R at W - v plus torsion of R at W - v - 1."""
    free = coefficients[W - v].free
    tors = coefficients[W - v - ONE].torsion
    if not free and not tors:
        return ZERO_GROUP
    return AbGroup(free, tors)


# ---------------------------------------------------------------------------
# the master check


CANONICAL_WINDOW = Window(-120, 60, -120, 60)
CANONICAL_POWER = {BB: 0, NB: -1}


@dataclass
class BlockAnalysis:
    """Differentials and extensions of one block, found at its canonical
    translate (BB at U^0, NB at U^-1) and valid for every translate."""

    kind: str
    power: int
    e2: object
    einf: object
    differentials: list
    extensions: list
    abutment_extensions: list
    problems: list[str]

    def to_json(self):
        return {
            "block": self.kind,
            "U_power": self.power,
            "differentials": [d.to_json() for d in self.differentials],
            "extensions": [r.to_json() for r in self.extensions],
            "abutment_extensions": [r.to_json() for r in self.abutment_extensions],
            "problems": self.problems,
        }


def target_chart_for(kind: str, window: Window, W: RODegree) -> Chart:
    """The block that the shifted dual of ``kind`` must reproduce, on the
    degrees W - v and W - v - 1 for v in ``window``."""
    from .blocks import U, block

    other = NB if kind == BB else BB
    power = CANONICAL_POWER[other]
    reflected = Window(W.x - window.xmax - 1, W.x - window.xmin, W.y - window.ymax, W.y - window.ymin)
    return block(other).chart(reflected, U * power)


_ANALYSES: dict = {}


def analyze_block(kind: str, n: int = 3, window: Window = CANONICAL_WINDOW) -> BlockAnalysis:
    """E2, forced differentials, E-infinity and extensions for one block."""
    from .specseq import build_e2, classify_abutment_extensions, compute_e_infinity, infer_differentials, infer_extensions

    cache_key = (kind, n, window)
    if cache_key in _ANALYSES:
        return _ANALYSES[cache_key]
    W = gorenstein_shift_of(n).W
    power = CANONICAL_POWER[kind]
    e2 = build_e2(kind, window, power)
    work = build_e2(kind, window, power)
    diffs = infer_differentials(work, n, W)
    einf = compute_e_infinity(e2, diffs, n)
    target = target_chart_for(kind, window, W)
    inner = window.grow(left=-24, right=-12, down=-24, up=-12)
    records, problems = infer_extensions(einf, lambda v: shifted_dual_group(target, v, W), n, inner)
    result = BlockAnalysis(kind, power, e2, einf, diffs, records, classify_abutment_extensions(records), problems)
    _ANALYSES[cache_key] = result
    return result


def canonical_window_for(window: Window) -> Window:
    """Analysis window whose inner part reaches every summand offset that a
    translate can show inside ``window``."""
    span = max(abs(window.xmin), abs(window.xmax), abs(window.ymin), abs(window.ymax))
    lo = min(CANONICAL_WINDOW.xmin, -2 * span - 40)
    hi = max(CANONICAL_WINDOW.xmax, span)
    return Window(lo, hi, lo, hi)


def block_abutment(kind: str, power: int, window: Window, n: int = 3) -> Chart:
    """pi_* of the part of Gamma_J R coming from U^power * block, on ``window``."""
    from .specseq import assemble_abutment, build_e2, compute_e_infinity, translate_extension

    analysis = analyze_block(kind, n, canonical_window_for(window))
    page = build_e2(kind, window, power)
    einf = compute_e_infinity(page, analysis.differentials, n)
    exts = [translate_extension(r, power) for r in analysis.extensions]
    return assemble_abutment(einf, exts, window)


@dataclass
class DualityReport:
    window: Window
    W: RODegree
    mismatches: list[tuple[RODegree, AbGroup, AbGroup]] = field(default_factory=list)
    degrees_checked: int = 0
    nonzero_degrees: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return (f"window {self.window.to_json()}, shift {self.W}: {self.degrees_checked} degrees, "
                f"{self.nonzero_degrees} non-zero, {len(self.mismatches)} mismatches")

    def to_json(self):
        return {
            "window": self.window.to_json(), "W": self.W.to_json(),
            "degrees_checked": self.degrees_checked, "nonzero_degrees": self.nonzero_degrees,
            "mismatches": [{"degree": v.to_json(), "abutment": str(a), "dual": str(b)} for v, a, b in self.mismatches],
        }


def verify_gorenstein_duality(window: Window, n: int = 3) -> DualityReport:
    """Check pi_*(Gamma_J R) = Sigma^W I R degreewise on ``window``.

    The left side is assembled from the spectral sequence of every U-translate
    of both blocks; the right side from the coefficient chart.
    """
    from .blocks import assemble_coefficients, translates

    if n != 3:
        raise ValueError("block data exist for n = 3 only")
    W = gorenstein_shift_of(n).W
    report = DualityReport(window, W)
    coeff_window = Window(W.x - window.xmax - 1, W.x - window.xmin, W.y - window.ymax, W.y - window.ymin)
    coefficients = assemble_coefficients(coeff_window)
    left = Chart(window)
    for kind in (BB, NB):
        for m in translates(kind, window.grow(left=4, right=4), margin=3):
            for v, g in block_abutment(kind, m, window, n):
                left.add(v, g)
    for v in window.degrees():
        report.degrees_checked += 1
        want = shifted_dual_group(coefficients, v, W)
        got = left[v]
        if not want.is_zero or not got.is_zero:
            report.nonzero_degrees += 1
        if got != want:
            report.mismatches.append((v, got, want))
    return report


# ---------------------------------------------------------------------------
# paired diagonals


PAIRING_SUMS = (25, 26, 27, 28)


@dataclass(frozen=True)
class PairingRecord:
    """The diagonals delta' of the other block that receive the dual of
    H^*_J(block_delta), with the pages of the differentials it supports.

    ``shifts`` maps each delta' to the (epsilon, epsilon') pairs realizing
    H^{3-epsilon}_J(block_delta)^* ~ other_{28-delta-epsilon'}.
    """

    direction: str
    delta: int
    partners: tuple[int, ...]
    flags: tuple[str, ...] = ()
    shifts: tuple[tuple[int, tuple[tuple[int, int], ...]], ...] = ()

    @property
    def source(self) -> str:
        return self.direction.split("->")[0]

    def sums_ok(self) -> bool:
        return all(self.delta + p in PAIRING_SUMS for p in self.partners)

    def cell(self) -> str:
        parts = list(self.flags) + [str(p) for p in self.partners]
        return ", ".join(parts) if parts else "."

    def to_json(self):
        return {"direction": self.direction, "delta": self.delta, "partners": list(self.partners),
                "flags": list(self.flags),
                "shifts": {str(p): [list(e) for e in es] for p, es in self.shifts}}


def pairing_diagonal(delta: int, i: int, torsion: bool) -> int:
    """delta' of the dual of an H^i class from entry diagonal delta.

    A class displayed on diagonal delta - i dualizes to W - v (free) or
    W - v - 1 (torsion), i.e. to diagonal -7 - (delta - i) or one less, and
    the other block's canonical translate is U^-1 away (32 diagonals).
    The formula is the same in both directions.
    """
    W = gorenstein_shift_of(3).W
    return W.delta - (delta - i) - int(torsion) + 32


def pairing_table(n: int = 3, deltas: range = range(0, 29)) -> list[PairingRecord]:
    """For each block and delta, the diagonals receiving the dual of what
    survives of H^*_J(block_delta).

    A torsion class absorbed into a free class by an extension is paired as
    free. Members of a block's own a-tower family are left out (they are
    not individual cells of the tables). Flags record the pages of the
    differentials supported by the diagonal.
    """
    if n != 3:
        raise ValueError("block data exist for n = 3 only")
    records = []
    for kind in (BB, NB):
        other = NB if kind == BB else BB
        analysis = analyze_block(kind, n)
        einf = analysis.einf
        inner = einf.window.grow(left=-24, right=-12, down=-24, up=-12)
        absorbed = {}
        for rec in analysis.extensions:
            for k, r in rec.offsets.items():
                absorbed[(rec.torsion.key, k)] = r
        pages = {}
        for d in analysis.differentials:
            pages.setdefault(d.source.entry.delta, set()).add(d.page)
        found: dict[int, dict[int, set]] = {d: {} for d in deltas}
        for e in einf.entries:
            delta = e.entry.delta
            if e.power != analysis.power or delta not in found or e.entry.tail:
                continue
            for k in e.offsets_in(inner):
                r = einf.remaining(e, k)
                if not r:
                    continue
                a = absorbed.get((e.key, k), 0)
                kinds = []
                if e.free or a:
                    kinds.append(False)
                if not e.free and r > a:
                    kinds.append(True)
                for torsion in kinds:
                    p = pairing_diagonal(delta, e.degree, torsion)
                    found[delta].setdefault(p, set()).add((3 - e.degree, 28 - delta - p))
        for delta in deltas:
            partners = found[delta]
            records.append(PairingRecord(
                f"{kind}->{other}", delta, tuple(sorted(partners, reverse=True)),
                tuple(f"d{r}" for r in sorted(pages.get(delta, ()))),
                tuple((p, tuple(sorted(partners[p]))) for p in sorted(partners, reverse=True)),
            ))
    return records


def _canonical_shift(kind: str) -> RODegree:
    from .blocks import U

    return U * CANONICAL_POWER[kind]


def pairing_from_json(data) -> list[PairingRecord]:
    """Read a pairing table stored as rows {direction, delta, cell}."""
    out = []
    for row in data["rows"]:
        flags, partners = [], []
        for tok in row["cell"].replace(" ", "").split(","):
            if tok in (".", ""):
                continue
            if tok.startswith("d"):
                flags.append(tok)
            else:
                partners.append(int(tok))
        out.append(PairingRecord(row["direction"], row["delta"], tuple(sorted(partners, reverse=True)),
                                 tuple(flags)))
    return out


def compare_pairings(computed: list[PairingRecord], expected: list[PairingRecord]) -> list[str]:
    """Rows whose partner sets or flags differ (order inside a cell is ignored)."""
    have = {(r.direction, r.delta): r for r in computed}
    diffs = []
    for want in expected:
        got = have.get((want.direction, want.delta))
        if got is None:
            diffs.append(f"{want.direction} {want.delta}: missing")
            continue
        if set(got.partners) != set(want.partners) or set(got.flags) != set(want.flags):
            diffs.append(f"{want.direction} {want.delta}: computed '{got.cell()}', expected '{want.cell()}'")
    return diffs


def render_pairing_table(records: list[PairingRecord]) -> str:
    """Two-column text layout: delta | BB->NB | delta | NB->BB."""
    left = {r.delta: r for r in records if r.source == BB}
    right = {r.delta: r for r in records if r.source == NB}
    rows = [f"{'delta':>5} | {'BB_delta -> NB_delta_':<22} | {'delta':>5} | {'NB_delta -> BB_delta_':<22}"]
    rows.append("-" * len(rows[0]))
    for d in sorted(set(left) | set(right)):
        a = left[d].cell() if d in left else ""
        b = right[d].cell() if d in right else ""
        rows.append(f"{d:>5} | {a:<22} | {d:>5} | {b:<22}")
    return "\n".join(rows)


# ---------------------------------------------------------------------------
# the diagonal GBB_17


@dataclass
class SplittingReport:
    """Dual of the abutment diagonal 17 of BB, split into its free part and
    its torsion part, compared with (2, vbar1)P at NB_8 and a Pbar_2 tower."""

    free_matches: bool
    free_basepoint: RODegree
    torsion_degrees: list[RODegree]
    tower_bottom: RODegree | None
    suspension: int | None  # rho-multiple of the tower bottom over the free basepoint
    torsion_is_pbar2: bool
    torsion_in_nb7: bool
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.free_matches and self.torsion_is_pbar2 and self.torsion_in_nb7 and self.suspension == 4

    def to_json(self):
        return {
            "free_matches": self.free_matches, "free_basepoint": self.free_basepoint.to_json(),
            "tower_bottom": self.tower_bottom.to_json() if self.tower_bottom else None,
            "suspension_rho": self.suspension, "torsion_is_pbar2": self.torsion_is_pbar2,
            "torsion_in_nb7": self.torsion_in_nb7, "mismatches": self.mismatches,
        }


def gbb17_splitting(window: Window = Window(-100, 10, -100, 10)) -> SplittingReport:
    """Split Z^{GBB_17} as abelian groups.

    Every degree of the abutment diagonal is reflected through W as a plain
    group (torsion without the extra -1, so that suspensions read as in the
    module statement). The free part must be the chart of (2, vbar1)P at the
    NB_8 basepoint and the torsion part a single Pbar_2 tower: one F2 at
    bottom + 7k rho for each k >= 0 inside the window.
    """
    from .blocks import negative_block
    from .modalg import module_chart

    W = gorenstein_shift_of(3).W
    shift = _canonical_shift(NB)
    abutment = block_abutment(BB, 0, window)
    diag = [(v, g) for v, g in abutment if v.delta == 17]
    nb8 = negative_block().entry(8, 2)
    base = nb8.basepoint + shift
    reflected = Window(W.x - window.xmax, W.x - window.xmin, W.y - window.ymax, W.y - window.ymin)
    expected = module_chart(nb8.presented.rebased(base), reflected)
    free = Chart(reflected)
    torsion = []
    for v, g in diag:
        if g.free:
            free.add(W - v, AbGroup.Z(g.free))
        if g.torsion:
            torsion.extend([W - v] * len(g.torsion))
    mismatches = [f"free part at {v}: {a} vs {b}" for v, a, b in free.differences(expected)]
    torsion.sort(key=lambda t: (t.x, t.y))
    bottom = torsion[0] if torsion else None
    suspension = None
    is_tower = False
    in_nb7 = False
    if bottom is not None:
        d = bottom - base
        suspension = d.x if d.x == d.y else None
        steps = [t - bottom for t in torsion]
        is_tower = len(set(torsion)) == len(torsion) and all(s.x == s.y and s.x % 7 == 0 for s in steps)
        is_tower = is_tower and [s.x // 7 for s in steps] == list(range(len(steps)))
        nb7 = negative_block().entry(7, 0)
        # as plain groups the tower sits one step right of its torsion position
        in_nb7 = all(not module_chart(nb7.presented.rebased(nb7.basepoint + shift),
                                      Window(t.x - 1, t.x - 1, t.y, t.y))[t - ONE].is_zero for t in torsion)
    return SplittingReport(not mismatches, base, torsion, bottom, suspension, is_tower, in_nb7, mismatches)
