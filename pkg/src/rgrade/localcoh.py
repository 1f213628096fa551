"""Local cohomology H^*_J at J = (vbar_1, ..., vbar_n).

Two independent routes:

* closed forms: P_i and Pbar_i are J-Cohen-Macaulay and J-Gorenstein, so their
  local cohomology is the shifted graded dual in the single degree n - i;
  ideals are handled through the short exact sequence 0 -> I -> R -> R/I -> 0
  or, for principal ideals, through I = Sigma^{deg g} R;
* ``koszul_lc``: the colimit over t of Koszul cohomology of
  (vbar_1^t, ..., vbar_n^t), evaluated one multidegree at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .abgroup import ZERO_GROUP, AbGroup, hstack, integer_kernel, lattice_basis, coordinates, subquotient
from .grading import RHO, RODegree, display_position
from .modalg import (
    INTEGRAL,
    MOD2,
    Chart,
    InvalidConstruction,
    PresentedModule,
    Window,
    monomial_count,
    multidegrees,
    parse_module_name,
    standard_module,
    weights,
)

CLOSED_FORM = "closed-form"
ORACLE = "oracle"
SPLICED = "spliced-SES"


class Unsupported(ValueError):
    """Closed forms only cover the standard modules."""


class SpliceAmbiguity(ValueError):
    """A connecting map in the long exact sequence is not forced to vanish."""


class StabilizationError(RuntimeError):
    """Koszul cohomology failed to stabilize within the safety bound."""


@dataclass(frozen=True)
class LCSummand:
    """One shifted dual module inside H^degree_J.

    The summand is the dual of P_level (integral) or Pbar_level (mod 2), with
    its top class in rho-offset ``top`` from the module's basepoint; the group
    at offset top - k is Z^c or F2^c with c the number of monomials of degree
    k in vbar_{level+1}, ..., vbar_n. ``origin_degree`` is the local
    cohomological degree of the standard module it came from (it differs from
    ``degree`` for summands produced by a splice).
    """

    degree: int
    level: int
    coefficients: str
    top: int
    origin_degree: int
    n: int = 3

    @property
    def label(self) -> str:
        if self.level == self.n:
            return "F2" if self.coefficients == MOD2 else "Z"
        if self.coefficients == MOD2:
            return f"Pb{self.level}^v"
        return "P^*" if self.level == 0 else f"P{self.level}^*"

    def rank_at(self, offset: int) -> int:
        """Rank (or F2-dimension) at rho-offset ``offset`` from the basepoint."""
        return monomial_count(self.top - offset, self.level, self.n)

    def group_at(self, offset: int) -> AbGroup:
        c = self.rank_at(offset)
        if not c:
            return ZERO_GROUP
        return AbGroup.F2(c) if self.coefficients == MOD2 else AbGroup.Z(c)

    def shifted(self, by: int) -> LCSummand:
        return LCSummand(self.degree, self.level, self.coefficients, self.top + by, self.origin_degree, self.n)


@dataclass
class LocalCohomologyResult:
    module: str
    basepoint: RODegree
    n: int
    provenance: str
    summands: list[LCSummand] = field(default_factory=list)
    charts: dict[int, Chart] | None = None
    certificates: list[str] = field(default_factory=list)

    def nonzero_degrees(self) -> list[int]:
        if self.charts is not None:
            return sorted(i for i, c in self.charts.items() if len(c))
        return sorted({s.degree for s in self.summands})

    def chart(self, i: int, window: Window) -> Chart:
        """H^i placed at internal degrees basepoint + k*rho."""
        if self.charts is not None:
            return self.charts[i].restricted(window) if i in self.charts else Chart(window)
        chart = Chart(window)
        for s in self.summands:
            if s.degree != i:
                continue
            for k in window.rho_range(self.basepoint):
                chart.add(self.basepoint + RHO * k, s.group_at(k))
        return chart

    def display_chart(self, window: Window) -> Chart:
        chart = Chart(window)
        for i in range(self.n + 1):
            internal = self.chart(i, window.grow(right=i))
            for v, g in internal.entries.items():
                chart.add(display_position(i, v), g)
        return chart

    def to_json(self):
        return {
            "module": self.module,
            "basepoint": self.basepoint.to_json(),
            "provenance": self.provenance,
            "summands": [
                {"degree": s.degree, "label": s.label, "top": s.top, "origin_degree": s.origin_degree}
                for s in self.summands
            ],
            "certificates": self.certificates,
        }


# ---------------------------------------------------------------------------
# closed forms


def _ring_summand(level: int, coefficients: str, n: int, shift: int = 0, degree: int | None = None) -> LCSummand:
    top = -sum(weights(n)[level:]) + shift
    return LCSummand(n - level if degree is None else degree, level, coefficients, top, n - level, n)


def closed_form_lc(M: PresentedModule | str, basepoint: RODegree | None = None, n: int = 3) -> LocalCohomologyResult:
    """H^*_J of P_i or Pbar_i: the dual in degree n - i, top class at
    basepoint - (w_{i+1} + ... + w_n) rho."""
    if isinstance(M, str):
        M = standard_module(M, basepoint or RODegree(0, 0), n)
    if M.ideal is not None:
        raise Unsupported(f"{M.name} is not one of the rings P_i, Pbar_i")
    s = _ring_summand(M.ring_level, M.coefficients, M.n)
    return LocalCohomologyResult(M.name, M.basepoint, M.n, CLOSED_FORM, [s])


def _token_degree(tok: str, n: int) -> int:
    return 0 if tok == "2" else weights(n)[int(tok[1:]) - 1]


def _quotient_name(coefficients: str, level: int, ideal: tuple[str, ...], n: int) -> str:
    """R/I as a standard ring name, or raise if it is not one."""
    coeffs = MOD2 if "2" in ideal else coefficients
    vs = sorted(int(t[1:]) for t in ideal if t != "2")
    if vs != list(range(level + 1, level + 1 + len(vs))):
        raise Unsupported(f"quotient by {ideal} is not a standard ring")
    new_level = level + len(vs)
    return ("Pb" if coeffs == MOD2 else "P") + str(new_level)


def principal_lc(M: PresentedModule) -> LocalCohomologyResult:
    """(g)R with g a non-zero-divisor is Sigma^{deg g} R."""
    if M.ideal is None or len(M.ideal) != 1:
        raise Unsupported(f"{M.name} is not a principal ideal")
    (tok,) = M.ideal
    shift = _token_degree(tok, M.n)
    s = _ring_summand(M.ring_level, M.coefficients, M.n, shift)
    return LocalCohomologyResult(M.name, M.basepoint, M.n, CLOSED_FORM, [s],
                                 certificates=[f"{M.name} = Sigma^{shift}rho of its ring"])


def spliced_lc(I: PresentedModule | str, R: str | None = None, Q: str | None = None,
               basepoint: RODegree | None = None, n: int = 3) -> LocalCohomologyResult:
    """Assemble H^*_J(I) from 0 -> I -> R -> Q -> 0 with R, Q standard.

    The maps H^k(R) -> H^k(Q) must vanish because one side is zero (R and Q
    are Cohen-Macaulay of different depths); then H^k(I) is an extension of
    H^k(R) by H^{k-1}(Q), split as abelian groups when H^k(R) is free or
    everything is an F2-vector space.
    """
    if isinstance(I, str):
        I = standard_module(I, basepoint or RODegree(0, 0), n)
    if I.ideal is None:
        raise Unsupported(f"{I.name} is not an ideal")
    n = I.n
    ring_name = ("Pb" if I.coefficients == MOD2 else "P") + str(I.ring_level)
    R = R or ring_name
    Q = Q or _quotient_name(I.coefficients, I.ring_level, I.ideal, n)
    rc, rl, rid = parse_module_name(R)
    qc, ql, qid = parse_module_name(Q)
    if rid is not None or qid is not None:
        raise Unsupported("splice requires standard rings R and Q")
    r, q = n - rl, n - ql
    certs = []
    for k in range(n + 1):
        if k == r and k == q:
            raise SpliceAmbiguity(f"H^{k}({R}) -> H^{k}({Q}) not forced to vanish for {I.name}")
        certs.append(f"H^{k}({R}) -> H^{k}({Q}) is zero: " + ("target is zero" if k == r else "source is zero"))
    if not (rc == MOD2 or qc == MOD2) and q + 1 == r:
        raise SpliceAmbiguity(f"integral extension in H^{r}({I.name}) need not split")
    certs.append(f"H^{q + 1}({I.name}) contains H^{q}({Q}); groupwise split since "
                 + ("all groups are F2-vector spaces" if rc == MOD2 else f"H^{r}({R}) is free"))
    summands = [
        _ring_summand(rl, rc, n, degree=r),
        _ring_summand(ql, qc, n, degree=q + 1),
    ]
    summands.sort(key=lambda s: (-s.degree, s.level))
    return LocalCohomologyResult(I.name, I.basepoint, n, SPLICED, summands, certificates=certs)


def local_cohomology(M: PresentedModule | str, basepoint: RODegree | None = None, n: int = 3,
                     method: str = "auto") -> LocalCohomologyResult:
    """Closed-form local cohomology of any standard module.

    ``method`` is 'auto' (rings directly, principal ideals by the shift
    isomorphism, larger ideals by splicing), 'splice' or 'principal'.
    """
    if isinstance(M, str):
        M = standard_module(M, basepoint or RODegree(0, 0), n)
    if M.ideal is None:
        return closed_form_lc(M)
    if method == "splice" or (method == "auto" and len(M.ideal) > 1):
        return spliced_lc(M)
    return principal_lc(M)


# ---------------------------------------------------------------------------
# the Koszul oracle


def _subsets(n: int, i: int):
    return list(combinations(range(n), i))


def _clip(v: int, c: int) -> int:
    return -1 if v < 0 else min(v, c)


def _stage_key(M: PresentedModule, a: tuple[int, ...], t: int):
    c = M.saturation
    n = M.n
    return tuple(
        tuple(_clip(a[j] + (t if j in S else 0), c[j]) for j in range(n))
        for i in range(n + 1) for S in _subsets(n, i)
    )


def _stage_complex(M: PresentedModule, a: tuple[int, ...], t: int):
    """Free lifts of the stage-t Koszul cochain complex in multidegree a.

    Returns, for each cohomological degree i, the list of (subset, generator
    indices) blocks, the relation matrix and the differential to degree i+1.
    """
    n = M.n
    blocks = []
    for i in range(n + 1):
        row = []
        for S in _subsets(n, i):
            b = tuple(a[j] + (t if j in S else 0) for j in range(n))
            if min(b) < 0:
                row.append((S, [], []))
            else:
                gens, rel = M.piece_presentation(b)
                row.append((S, gens, rel))
        blocks.append(row)
    return blocks


def _assemble(blocks):
    """Offsets, total dimension and block-diagonal relation matrix per degree."""
    out = []
    for row in blocks:
        offsets, dim = {}, 0
        for S, gens, _ in row:
            offsets[S] = dim
            dim += len(gens)
        rels = []
        for S, gens, rel in row:
            ncols = len(rel[0]) if rel else 0
            for c in range(ncols):
                col = [0] * dim
                for r in range(len(gens)):
                    col[offsets[S] + r] = rel[r][c]
                rels.append(col)
        relmat = [[col[r] for col in rels] for r in range(dim)]
        out.append((offsets, dim, relmat, len(rels)))
    return out


def _differential(blocks, layout, i: int):
    """Matrix of K^i -> K^{i+1}: e_S -> sum_j sign * x_j^t e_{S+j}."""
    src_off, src_dim, _, _ = layout[i]
    dst_off, dst_dim, _, _ = layout[i + 1]
    mat = [[0] * src_dim for _ in range(dst_dim)]
    dst_gens = {S: gens for S, gens, _ in blocks[i + 1]}
    for S, gens, _ in blocks[i]:
        for j in range(len(blocks) - 1):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            sign = -1 if sum(1 for s in S if s < j) % 2 else 1
            tg = dst_gens[T]
            pos = {g: r for r, g in enumerate(tg)}
            for r, g in enumerate(gens):
                mat[dst_off[T] + pos[g]][src_off[S] + r] += sign
    return mat


def _cycles_and_boundaries(blocks, layout, i: int):
    n = len(blocks) - 1
    _, dim, rel, nrel = layout[i]
    if i < n:
        d = _differential(blocks, layout, i)
        _, ddim, drel, dnrel = layout[i + 1]
        big = hstack(d, drel, rows=ddim)
        ker = integer_kernel(big, ddim, dim + dnrel) if ddim else [
            [int(r == c) for c in range(dim)] for r in range(dim)]
        Z = [row[:] for row in ker[:dim]] if ddim else ker
    else:
        Z = [[int(r == c) for c in range(dim)] for r in range(dim)]
    B_parts = [rel]
    if i > 0:
        B_parts.insert(0, _differential(blocks, layout, i - 1))
    B = hstack(*B_parts, rows=dim)
    return Z, B, dim


def _stage_cohomology(M: PresentedModule, a: tuple[int, ...], t: int) -> tuple[AbGroup, ...]:
    blocks = _stage_complex(M, a, t)
    layout = _assemble(blocks)
    out = []
    for i in range(M.n + 1):
        Z, B, dim = _cycles_and_boundaries(blocks, layout, i)
        out.append(subquotient(Z, B, dim) if dim else ZERO_GROUP)
    return tuple(out)


def _comparison_is_onto(M: PresentedModule, a: tuple[int, ...], t: int) -> bool:
    """The map K(x^t) -> K(x^{t+1}) (multiplication by x_S on the S summand)
    induces a surjection on cohomology, after inverting odd integers."""
    b0, b1 = _stage_complex(M, a, t), _stage_complex(M, a, t + 1)
    l0, l1 = _assemble(b0), _assemble(b1)
    for i in range(M.n + 1):
        Z0, _, dim0 = _cycles_and_boundaries(b0, l0, i)
        Z1, B1, dim1 = _cycles_and_boundaries(b1, l1, i)
        if not dim1:
            continue
        off0, _, _, _ = l0[i]
        off1, _, _, _ = l1[i]
        phi = [[0] * dim0 for _ in range(dim1)]
        g1 = {S: gens for S, gens, _ in b1[i]}
        for S, gens, _ in b0[i]:
            pos = {g: r for r, g in enumerate(g1[S])}
            for r, g in enumerate(gens):
                phi[off1[S] + pos[g]][off0[S] + r] = 1
        from .abgroup import matmul
        image = matmul(phi, Z0) if dim0 and Z0 and Z0[0] else [[] for _ in range(dim1)]
        _, zdiag, zU = lattice_basis(Z1, dim1)
        if not zdiag:
            continue
        gens = hstack(image, B1, rows=dim1)
        X = coordinates(gens, zdiag, zU, dim1)
        from .abgroup import elementary_divisors
        k = len(X[0]) if X and X[0] else 0
        divs = elementary_divisors(X, len(zdiag), k)
        if len(divs) < len(zdiag) or any(d % 2 == 0 for d in divs):
            return False
    return True


@lru_cache(maxsize=None)
def _stable_value_cached(M: PresentedModule, key, a: tuple[int, ...], t: int) -> tuple[AbGroup, ...]:
    return _stage_cohomology(M, a, t)


def stable_multidegree_lc(M: PresentedModule, a: tuple[int, ...], check: bool = True) -> tuple[AbGroup, ...]:
    """colim_t H^i(K(x^t; M))_a for i = 0..n.

    Starts at the first t for which every piece M_{a + t 1_S} (j in S) is
    saturated; agreement of stages t and t + 1 together with surjectivity of
    the comparison map is checked, within a safety bound of n + 2 extra steps.
    """
    c = M.saturation
    t = max(1, max(cj - aj for cj, aj in zip(c, a)))
    for _ in range(M.n + 3):
        h0 = _stable_value_cached(M, _stage_key(M, a, t), a, t)
        if not check:
            return h0
        h1 = _stable_value_cached(M, _stage_key(M, a, t + 1), a, t + 1)
        if h0 == h1 and _onto_cached(M, _stage_key(M, a, t), _stage_key(M, a, t + 1), a, t):
            return h0
        t += 1
    raise StabilizationError(f"no stabilization for {M.name} in multidegree {a}")


@lru_cache(maxsize=None)
def _onto_cached(M, key0, key1, a, t) -> bool:
    return _comparison_is_onto(M, a, t)


def _lc_multidegrees(M: PresentedModule, k: int):
    """Multidegrees of rho-degree k that can carry local cohomology.

    If a_j >= c_j (the saturation index), multiplication by x_j^t is an
    isomorphism in the j-th Koszul factor, so the complex is acyclic there.
    """
    c = M.saturation
    ws = weights(M.n)
    upper = tuple(cj - 1 for cj in c)
    lower = []
    for j in range(M.n):
        rest = sum(upper[i] * ws[i] for i in range(M.n) if i != j)
        lower.append(-((rest - k) // ws[j]))
    return multidegrees(k, M.n, tuple(lower), upper)


def koszul_rho_degree(M: PresentedModule, k: int, check: bool = True) -> tuple[AbGroup, ...]:
    """Stable Koszul cohomology of M in rho-degree k, for i = 0..n."""
    totals = [ZERO_GROUP] * (M.n + 1)
    for a in _lc_multidegrees(M, k):
        h = stable_multidegree_lc(M, a, check)
        for i, g in enumerate(h):
            if not g.is_zero:
                totals[i] = totals[i] + g
    return tuple(totals)


def koszul_lc(M: PresentedModule | str, window: Window, basepoint: RODegree | None = None,
              n: int = 3, check: bool = True) -> LocalCohomologyResult:
    """Oracle local cohomology on every internal degree of ``window`` and
    every display degree (internal degree shifted by -i) in it."""
    if isinstance(M, str):
        M = standard_module(M, basepoint or RODegree(0, 0), n)
    grown = window.grow(right=M.n)
    charts = {i: Chart(grown) for i in range(M.n + 1)}
    for k in grown.rho_range(M.basepoint):
        for i, g in enumerate(koszul_rho_degree(M, k, check)):
            charts[i].add(M.basepoint + RHO * k, g)
    return LocalCohomologyResult(M.name, M.basepoint, M.n, ORACLE, charts=charts)


def compare_with_oracle(M: PresentedModule | str, window: Window, basepoint: RODegree | None = None,
                        n: int = 3, method: str = "auto") -> list[tuple[int, RODegree, AbGroup, AbGroup]]:
    """Degreewise differences between closed form and oracle (empty if equal)."""
    if isinstance(M, str):
        M = standard_module(M, basepoint or RODegree(0, 0), n)
    closed = local_cohomology(M, method=method)
    oracle = koszul_lc(M, window)
    diffs = []
    for i in range(M.n + 1):
        a = closed.chart(i, window)
        b = oracle.chart(i, window)
        diffs.extend((i, v, g, h) for v, g, h in a.differences(b))
    return diffs
