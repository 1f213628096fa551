"""Finitely generated 2-local abelian groups and the exact integer linear
algebra behind them (Smith normal form over Python ints)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Matrix = list[list[int]]


@dataclass(frozen=True, order=True)
class AbGroup:
    """Z^free plus a sum of Z/2^e for e in ``torsion`` (sorted, all >= 1)."""

    free: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free < 0:
            raise ValueError("negative free rank")
        if any(e < 1 for e in self.torsion):
            raise ValueError("torsion exponents must be >= 1")
        if tuple(sorted(self.torsion)) != self.torsion:
            object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @classmethod
    def Z(cls, rank: int = 1) -> AbGroup:
        return cls(rank)

    @classmethod
    def F2(cls, dim: int = 1) -> AbGroup:
        return cls(0, (1,) * dim)

    @classmethod
    def from_invariants(cls, free: int, divisors: Iterable[int]) -> AbGroup:
        """Build from elementary divisors, keeping only their 2-parts."""
        return cls(free, tuple(sorted(e for e in map(two_adic_valuation, divisors) if e)))

    def __add__(self, other: AbGroup) -> AbGroup:
        return AbGroup(self.free + other.free, tuple(sorted(self.torsion + other.torsion)))

    @property
    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion

    @property
    def f2_count(self) -> int:
        return sum(1 for e in self.torsion if e == 1)

    @property
    def log2_torsion_order(self) -> int:
        return sum(self.torsion)

    def to_json(self):
        return {"free": self.free, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data) -> AbGroup:
        return cls(data["free"], tuple(data["torsion"]))

    def __str__(self) -> str:
        parts = []
        if self.free:
            parts.append("Z" if self.free == 1 else f"Z^{self.free}")
        counts: dict[int, int] = {}
        for e in self.torsion:
            counts[e] = counts.get(e, 0) + 1
        for e, c in sorted(counts.items()):
            name = "F2" if e == 1 else f"Z/{2**e}"
            parts.append(name if c == 1 else f"{name}^{c}")
        return " + ".join(parts) if parts else "0"


ZERO_GROUP = AbGroup()


def two_adic_valuation(d: int) -> int:
    d = abs(d)
    if d == 0:
        raise ValueError("valuation of zero")
    e = 0
    while d % 2 == 0:
        d //= 2
        e += 1
    return e


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A: Sequence[Sequence[int]], rows: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(rows or 0)]
    return [list(col) for col in zip(*A)]


def hstack(*blocks: Sequence[Sequence[int]], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for block in blocks:
        for i in range(rows):
            out[i].extend(block[i] if block else [])
    return out


def smith_normal_form(A: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None):
    """Return (diag, U, V, Uinv) with U @ A @ V diagonal and unimodular U, V.

    ``diag`` lists the non-zero diagonal entries (positive, each dividing the
    next); the rest of the diagonal is zero. Dimensions must be passed when
    ``A`` has no rows or no columns.
    """
    m = len(A) if nrows is None else nrows
    n = (len(A[0]) if A else 0) if ncols is None else ncols
    D = [list(row) for row in A] if m and n else [[0] * n for _ in range(m)]
    U = identity(m)
    Uinv = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if q:
            Ds, Dd = D[src], D[dst]
            for c in range(n):
                Dd[c] += q * Ds[c]
            Us, Ud = U[src], U[dst]
            for c in range(m):
                Ud[c] += q * Us[c]
            for row in Uinv:
                row[src] -= q * row[dst]

    def add_col(src, dst, q):
        if q:
            for row in D:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                v = Di[j]
                if v and (best is None or abs(v) < best):
                    best, pivot = abs(v), (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            done = True
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(t, i, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(t, j, -q)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility condition against the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest entry of row/column t to the pivot
            best, pos = abs(D[t][t]), None
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best:
                    best, pos = abs(D[i][t]), ("r", i)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best:
                    best, pos = abs(D[t][j]), ("c", j)
            if pos is not None:
                if pos[0] == "r":
                    swap_rows(t, pos[1])
                else:
                    swap_cols(t, pos[1])
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
            for row in Uinv:
                row[t] = -row[t]
        t += 1
    diag = [D[i][i] for i in range(min(m, n)) if D[i][i]]
    return diag, U, V, Uinv


def elementary_divisors(A: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None) -> list[int]:
    return smith_normal_form(A, nrows, ncols)[0]


def cokernel(A: Sequence[Sequence[int]], nrows: int, ncols: int | None = None) -> AbGroup:
    """Z^nrows modulo the column span of A, localized at 2."""
    diag = elementary_divisors(A, nrows, ncols if ncols is not None else (len(A[0]) if A else 0))
    return AbGroup.from_invariants(nrows - len(diag), diag)


def integer_kernel(A: Sequence[Sequence[int]], nrows: int, ncols: int) -> Matrix:
    """Columns spanning the kernel lattice of A: Z^ncols -> Z^nrows."""
    diag, _, V, _ = smith_normal_form(A, nrows, ncols)
    r = len(diag)
    return [[V[i][j] for j in range(r, ncols)] for i in range(ncols)]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> tuple[Matrix, list[int], Matrix]:
    """Basis of the column span of ``gens`` (dim x k).

    Returns (basis, diag, U) where basis columns are diag[i] * Uinv[:, i] and
    U is the left transform from the Smith form, so that coordinates of a
    lattice vector v are (U v)[i] / diag[i].
    """
    k = len(gens[0]) if gens and gens[0] else 0
    diag, U, _, Uinv = smith_normal_form(gens, dim, k)
    basis = [[diag[j] * Uinv[i][j] for j in range(len(diag))] for i in range(dim)]
    return basis, diag, U


def coordinates(vectors: Sequence[Sequence[int]], diag: list[int], U: Matrix, dim: int) -> Matrix:
    """Coordinates of the columns of ``vectors`` in the basis from lattice_basis."""
    k = len(vectors[0]) if vectors and vectors[0] else 0
    r = len(diag)
    Uv = matmul(U, vectors) if k else [[] for _ in range(dim)]
    out = [[0] * k for _ in range(r)]
    for i in range(r):
        for j in range(k):
            q, rem = divmod(Uv[i][j], diag[i])
            if rem:
                raise ArithmeticError("vector not in lattice")
            out[i][j] = q
    for i in range(r, dim):
        if any(Uv[i]):
            raise ArithmeticError("vector not in lattice")
    return out


def subquotient(Z: Sequence[Sequence[int]], B: Sequence[Sequence[int]], dim: int) -> AbGroup:
    """The group span(Z) / span(B) for lattices span(B) <= span(Z) in Z^dim."""
    _, zdiag, zU = lattice_basis(Z, dim)
    r = len(zdiag)
    if r == 0:
        return ZERO_GROUP
    X = coordinates(B, zdiag, zU, dim)
    k = len(X[0]) if X and X[0] else 0
    return cokernel(X, r, k)


def rank_mod2(A: Sequence[Sequence[int]]) -> int:
    rows = [sum(1 << j for j, v in enumerate(row) if v % 2) for row in A]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank
