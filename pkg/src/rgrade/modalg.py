"""Finitely presented graded modules over P = Z_(2)[vbar_1, ..., vbar_n] and
its quotients P_i, Pbar_i, together with charts of abelian groups.

Modules are multigraded by exponent vectors of the vbar's; the rho-degree of
multidegree b is sum(b_j * w_j) with w_j = 2^j - 1. Every module used here
(the rings, and ideals generated by 2 and vbar's) has a multihomogeneous
presentation, so each multidegree piece is a tiny integer cokernel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .abgroup import ZERO_GROUP, AbGroup, cokernel
from .grading import RHO, RODegree, ZERO

INTEGRAL = "integral"
MOD2 = "mod2"


class InvalidConstruction(ValueError):
    """A module name or ideal that does not make sense in the named ring."""


def weights(n: int) -> tuple[int, ...]:
    return tuple(2**j - 1 for j in range(1, n + 1))


def rho_degree(b: tuple[int, ...]) -> int:
    return sum(bj * (2 ** (j + 1) - 1) for j, bj in enumerate(b))


@lru_cache(maxsize=None)
def monomial_count(k: int, level: int, n: int) -> int:
    """Number of monomials in vbar_{level+1}, ..., vbar_n of rho-degree k."""
    if k < 0:
        return 0
    ws = weights(n)[level:]
    counts = [1] + [0] * k
    for w in ws:
        for d in range(w, k + 1):
            counts[d] += counts[d - w]
    return counts[k]


def multidegrees(k: int, n: int, lower: tuple[int, ...] | None = None,
                 upper: tuple[int, ...] | None = None) -> Iterator[tuple[int, ...]]:
    """All b in Z^n with rho_degree(b) == k and lower <= b <= upper.

    ``lower`` defaults to 0; ``upper`` is required when some lower bound is
    negative (otherwise the set can be infinite).
    """
    ws = weights(n)
    lo = lower or (0,) * n
    if upper is None:
        if min(lo) < 0:
            raise ValueError("upper bound required for negative multidegrees")
        up = tuple(max(lo[j], (k - sum(lo[i] * ws[i] for i in range(n) if i != j)) // ws[j]) for j in range(n))
    else:
        up = upper

    def rec(j: int, remaining: int, prefix: tuple[int, ...]):
        if j == n - 1:
            w = ws[j]
            if remaining % w == 0 and lo[j] <= remaining // w <= up[j]:
                yield prefix + (remaining // w,)
            return
        # the later coordinates can absorb at most this much / at least this much
        rest_max = sum(up[i] * ws[i] for i in range(j + 1, n))
        rest_min = sum(lo[i] * ws[i] for i in range(j + 1, n))
        w = ws[j]
        start = max(lo[j], -((rest_max - remaining) // w))
        stop = min(up[j], (remaining - rest_min) // w)
        for bj in range(start, stop + 1):
            yield from rec(j + 1, remaining - bj * w, prefix + (bj,))

    if n == 0:
        if k == 0:
            yield ()
        return
    yield from rec(0, k, ())


@dataclass(frozen=True)
class Relation:
    """A multihomogeneous relation sum_g coef_g * x^{mono_g} * e_g = 0."""

    terms: tuple[tuple[int, int, tuple[int, ...]], ...]  # (generator index, coefficient, monomial)


@dataclass(frozen=True)
class PresentedModule:
    """Generators with multidegrees, multihomogeneous relations, a basepoint.

    ``coefficients == MOD2`` adds the relation 2 e = 0 for every generator.
    ``ring_level`` and ``ideal`` record the standard-module identity (if any)
    so that closed-form local cohomology can recognize it.
    """

    name: str
    n: int
    coefficients: str
    ring_level: int
    generators: tuple[tuple[str, tuple[int, ...]], ...]
    relations: tuple[Relation, ...] = ()
    basepoint: RODegree = ZERO
    ideal: tuple[str, ...] | None = None
    relation_degrees: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.coefficients not in (INTEGRAL, MOD2):
            raise InvalidConstruction(f"unknown coefficients {self.coefficients!r}")
        degs = []
        for rel in self.relations:
            deg = None
            for g, coef, mono in rel.terms:
                d = tuple(a + b for a, b in zip(self.generators[g][1], mono))
                if min(mono, default=0) < 0:
                    raise InvalidConstruction("negative exponent in relation")
                if deg is None:
                    deg = d
                elif d != deg:
                    raise InvalidConstruction(f"relation not homogeneous in {self.name}")
            degs.append(deg if deg is not None else (0,) * self.n)
        object.__setattr__(self, "relation_degrees", tuple(degs))

    def rebased(self, basepoint: RODegree) -> PresentedModule:
        return PresentedModule(self.name, self.n, self.coefficients, self.ring_level,
                               self.generators, self.relations, basepoint, self.ideal)

    @property
    def saturation(self) -> tuple[int, ...]:
        """c with x_j: M_b -> M_{b+e_j} an isomorphism whenever b_j >= c_j."""
        degs = [g for _, g in self.generators] + list(self.relation_degrees)
        return tuple(max((d[j] for d in degs), default=0) for j in range(self.n))

    def piece_presentation(self, b: tuple[int, ...]):
        """(generator indices present, relation matrix) in multidegree b.

        The basis of the free module in degree b is {x^(b - g) e_g : g <= b}.
        """
        gens = [i for i, (_, g) in enumerate(self.generators) if all(gj <= bj for gj, bj in zip(g, b))]
        index = {g: r for r, g in enumerate(gens)}
        cols = []
        for rel, deg in zip(self.relations, self.relation_degrees):
            if all(dj <= bj for dj, bj in zip(deg, b)):
                col = [0] * len(gens)
                for g, coef, _ in rel.terms:
                    col[index[g]] += coef
                cols.append(col)
        if self.coefficients == MOD2:
            for r in range(len(gens)):
                col = [0] * len(gens)
                col[r] = 2
                cols.append(col)
        matrix = [[cols[c][r] for c in range(len(cols))] for r in range(len(gens))]
        return gens, matrix

    def multidegree_piece(self, b: tuple[int, ...]) -> AbGroup:
        if min(b) < 0:
            return ZERO_GROUP
        gens, matrix = self.piece_presentation(b)
        ncols = len(matrix[0]) if matrix else 0
        return cokernel(matrix, len(gens), ncols)

    def rho_degrees_of_generators(self) -> list[int]:
        return [rho_degree(g) for _, g in self.generators]


def graded_piece(M: PresentedModule, k: int) -> AbGroup:
    """The rho-degree-k piece of M as a 2-local abelian group."""
    total = ZERO_GROUP
    for b in multidegrees(k, M.n):
        piece = M.multidegree_piece(b)
        if not piece.is_zero:
            total = total + piece
    return total


# ---------------------------------------------------------------------------
# standard modules

_NAME = re.compile(r"^(?:\((?P<ideal>[^)]*)\))?(?P<ring>P|Pb)(?P<level>\d*)$")

PRETTY_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def pretty_name(name: str) -> str:
    """Unicode rendering, e.g. '(v1)Pb0' -> '(v̄₁)P̄₀'."""
    m = _NAME.match(name)
    if not m:
        return name
    ideal = m.group("ideal")
    out = ""
    if ideal is not None:
        toks = [t.strip() for t in ideal.split(",")]
        out = "(" + ",".join("v̄" + t[1:].translate(PRETTY_SUB) if t.startswith("v") else t for t in toks) + ")"
    ring = "P̄" if m.group("ring") == "Pb" else "P"
    level = m.group("level")
    if level and not (ring == "P" and level == "0"):
        ring += level.translate(PRETTY_SUB)
    elif ring == "P̄" and not level:
        ring += "₀"
    return out + ring


def parse_module_name(name: str) -> tuple[str, int, tuple[str, ...] | None]:
    """'(2,v1)P' -> (INTEGRAL, 0, ('2', 'v1')); 'Pb2' -> (MOD2, 2, None)."""
    if name == "F2":
        name = "Pb3"
    m = _NAME.match(name.replace(" ", ""))
    if not m:
        raise InvalidConstruction(f"cannot parse module name {name!r}")
    coeffs = MOD2 if m.group("ring") == "Pb" else INTEGRAL
    level = int(m.group("level") or 0)
    ideal = None
    if m.group("ideal") is not None:
        ideal = tuple(t.strip() for t in m.group("ideal").split(","))
    return coeffs, level, ideal


def _generator_degree(token: str, n: int) -> tuple[int, ...]:
    if token == "2":
        return (0,) * n
    if token.startswith("v") and token[1:].isdigit():
        j = int(token[1:])
        if not 1 <= j <= n:
            raise InvalidConstruction(f"no generator {token} for n = {n}")
        return tuple(int(i == j - 1) for i in range(n))
    raise InvalidConstruction(f"unknown ideal generator {token!r}")


def standard_module(name: str, basepoint: RODegree = ZERO, n: int = 3) -> PresentedModule:
    """Presentation of P_i, Pbar_i or an ideal (g_1, ..., g_k) in one of them.

    Ideals are presented by their generators subject to the ring relations and
    the Koszul syzygies g_b e_a - g_a e_b; for the regular sequences used here
    these relations are complete.
    """
    coeffs, level, ideal = parse_module_name(name)
    if not 0 <= level <= n:
        raise InvalidConstruction(f"ring level {level} out of range for n = {n}")
    zero_vars = list(range(level))  # vbar_1 .. vbar_level act as zero
    if ideal is None:
        gens = (("1", (0,) * n),)
        tokens: tuple[str, ...] = ("1",)
    else:
        if len(set(ideal)) != len(ideal) or not ideal:
            raise InvalidConstruction(f"bad ideal in {name!r}")
        for tok in ideal:
            if tok == "2" and coeffs == MOD2:
                raise InvalidConstruction(f"2 is zero in the mod-2 ring of {name!r}")
            if tok.startswith("v") and tok[1:].isdigit() and int(tok[1:]) - 1 in zero_vars:
                raise InvalidConstruction(f"{tok} is zero in the ring of {name!r}")
        tokens = ideal
        gens = tuple((tok, _generator_degree(tok, n)) for tok in ideal)
    relations = []
    zero_mono = (0,) * n
    for g in range(len(gens)):
        for j in zero_vars:
            mono = tuple(int(i == j) for i in range(n))
            relations.append(Relation(((g, 1, mono),)))
    if ideal is not None:
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                ta, tb = tokens[a], tokens[b]
                # g_b e_a - g_a e_b
                ca, ma = (2, zero_mono) if tb == "2" else (1, gens[b][1])
                cb, mb = (2, zero_mono) if ta == "2" else (1, gens[a][1])
                relations.append(Relation(((a, ca, ma), (b, -cb, mb))))
    return PresentedModule(name, n, coeffs, level, gens, tuple(relations), basepoint, ideal)


def ideal_piece_oracle(name: str, b: tuple[int, ...], n: int = 3) -> AbGroup:
    """Brute-force description of a standard module in multidegree b, read
    off directly from which monomials (times 2 or 1) lie in the ideal."""
    coeffs, level, ideal = parse_module_name(name)
    if min(b) < 0 or any(b[j] for j in range(level)):
        return ZERO_GROUP
    if ideal is None:
        member = True
    else:
        member = any(tok == "2" or b[int(tok[1:]) - 1] >= 1 for tok in ideal)
    if not member:
        return ZERO_GROUP
    return AbGroup.F2() if coeffs == MOD2 else AbGroup.Z()


@lru_cache(maxsize=None)
def _count_in_variables(k: int, ws: tuple[int, ...]) -> int:
    if k < 0:
        return 0
    counts = [1] + [0] * k
    for w in ws:
        for d in range(w, k + 1):
            counts[d] += counts[d - w]
    return counts[k]


@lru_cache(maxsize=None)
def piece_group(name: str, k: int, n: int = 3) -> AbGroup:
    """Closed-form rho-degree-k piece of a standard module.

    Each multidegree piece is Z, F2 or 0 (see ideal_piece_oracle), so the
    piece is determined by counting member monomials; graded_piece computes
    the same groups from the presentation.
    """
    coeffs, level, ideal = parse_module_name(name)
    ws = weights(n)[level:]
    total = _count_in_variables(k, ws)
    if ideal is not None and "2" not in ideal:
        outside = tuple(w for j, w in enumerate(weights(n)) if j >= level and f"v{j + 1}" not in ideal)
        total -= _count_in_variables(k, outside)
    if not total:
        return ZERO_GROUP
    return AbGroup.F2(total) if coeffs == MOD2 else AbGroup.Z(total)


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class Window:
    xmin: int
    xmax: int
    ymin: int
    ymax: int

    def __post_init__(self):
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise ValueError("empty window")

    @classmethod
    def square(cls, lo: int, hi: int) -> Window:
        return cls(lo, hi, lo, hi)

    def __contains__(self, v: RODegree) -> bool:
        return self.xmin <= v.x <= self.xmax and self.ymin <= v.y <= self.ymax

    def degrees(self) -> Iterator[RODegree]:
        for y in range(self.ymax, self.ymin - 1, -1):
            for x in range(self.xmin, self.xmax + 1):
                yield RODegree(x, y)

    def grow(self, left=0, right=0, down=0, up=0) -> Window:
        return Window(self.xmin - left, self.xmax + right, self.ymin - down, self.ymax + up)

    def reflected(self, center2: RODegree = ZERO) -> Window:
        """Image under V -> center2 - V."""
        return Window(center2.x - self.xmax, center2.x - self.xmin, center2.y - self.ymax, center2.y - self.ymin)

    def rho_range(self, base: RODegree) -> range:
        """Integers k with base + k*rho inside the window."""
        lo = max(self.xmin - base.x, self.ymin - base.y)
        hi = min(self.xmax - base.x, self.ymax - base.y)
        return range(lo, hi + 1)

    def to_json(self):
        return [self.xmin, self.xmax, self.ymin, self.ymax]


@dataclass
class Chart:
    """Finitely many non-zero groups inside a window, keyed by degree."""

    window: Window
    entries: dict[RODegree, AbGroup] = field(default_factory=dict)
    annotations: list = field(default_factory=list)

    def add(self, v: RODegree, group: AbGroup) -> None:
        if v not in self.window or group.is_zero:
            return
        old = self.entries.get(v)
        self.entries[v] = group if old is None else old + group

    def __getitem__(self, v: RODegree) -> AbGroup:
        return self.entries.get(v, ZERO_GROUP)

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chart):
            return NotImplemented
        return self.entries == other.entries

    def merged(self, other: Chart) -> Chart:
        out = Chart(self.window, dict(self.entries))
        for v, g in other.entries.items():
            out.add(v, g)
        return out

    def shifted(self, by: RODegree, window: Window | None = None) -> Chart:
        out = Chart(window or self.window)
        for v, g in self.entries.items():
            out.add(v + by, g)
        return out

    def restricted(self, window: Window) -> Chart:
        out = Chart(window)
        for v, g in self.entries.items():
            out.add(v, g)
        return out

    def differences(self, other: Chart) -> list[tuple[RODegree, AbGroup, AbGroup]]:
        keys = sorted(set(self.entries) | set(other.entries))
        return [(v, self[v], other[v]) for v in keys if self[v] != other[v]]

    def to_json(self):
        return {
            "window": self.window.to_json(),
            "entries": [[v.x, v.y, g.free, list(g.torsion)] for v, g in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data) -> Chart:
        chart = cls(Window(*data["window"]))
        for x, y, free, tors in data["entries"]:
            chart.add(RODegree(x, y), AbGroup(free, tuple(tors)))
        return chart


def module_chart(M: PresentedModule, window: Window, exact: bool = False) -> Chart:
    """Place the pieces of M along its diagonal.

    With ``exact`` every piece comes from the presentation by Smith normal
    form; otherwise the monomial count of piece_group is used.
    """
    chart = Chart(window)
    lowest = min(M.rho_degrees_of_generators(), default=0)
    for k in window.rho_range(M.basepoint):
        if k >= lowest:
            g = graded_piece(M, k) if exact else piece_group(M.name, k, M.n)
            chart.add(M.basepoint + RHO * k, g)
    return chart


def dual_group(g: AbGroup) -> AbGroup:
    """Hom(-, Z) on free parts and the Pontryagin dual on torsion parts; as
    abstract groups both are isomorphic to the input."""
    return g


def dual_chart(obj: PresentedModule | Chart, window: Window | None = None, center: RODegree | None = None) -> Chart:
    """Graded dual: the group in degree base - k*rho is the dual of the group
    in degree base + k*rho (reflection through the basepoint, or through
    ``center`` for a chart)."""
    if isinstance(obj, PresentedModule):
        if window is None:
            raise ValueError("window required to dualize a module")
        chart = Chart(window)
        base = obj.basepoint
        lowest = min(obj.rho_degrees_of_generators(), default=0)
        for k in window.rho_range(base):
            if -k >= lowest:
                chart.add(base + RHO * k, dual_group(graded_piece(obj, -k)))
        return chart
    c = center if center is not None else ZERO
    win = window or obj.window.reflected(c * 2)
    chart = Chart(win)
    for v, g in obj.entries.items():
        chart.add(c * 2 - v, dual_group(g))
    return chart


def iter_standard_names(n: int = 3) -> Iterable[str]:
    """Every module kind appearing in the block tables."""
    yield from ["P", "Pb0", "Pb1", "Pb2", "Pb3", "(2)P", "(2,v1)P", "(2,v1,v2)P", "(2,v1,v2,v3)P",
                "(v1)Pb0", "(v1,v2)Pb0", "(v1,v2,v3)Pb0", "(v2)Pb1", "(v2,v3)Pb1", "(v3)Pb2"]
