"""Certificates that the last possible differential d_n is non-zero.

For each n >= 2 the bottom of the basic block has an a-tower class a^c at
(0, -c) whose dual is forbidden, and a single F2 at (-1, -c) that it can
hit. The F2 is the top class of H^n_J of the principal ideal generated by
u^(2^n - 2) vbar1 a^2 in Pbar_0. Local cohomology tops of the entries
along the u-power line lie on or above x + y = -2 D_n, which is n steps to
the right of (-1, -c), so only H^n can reach that point and the
differential killing a^c is d_n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .duality import dual_position, gorenstein_shift_of
from .grading import RHO, GeneratorDegrees, RODegree, display_position, u_power_a_power
from .localcoh import local_cohomology


class CertificateFailure(RuntimeError):
    pass


def c_value(n: int) -> int:
    return 4 * (2**n - 1) - (n + 1)


@dataclass(frozen=True)
class BottomBoundaryModel:
    """The cast of the argument for one n."""

    n: int

    @property
    def D(self) -> int:
        return GeneratorDegrees(self.n).D

    @property
    def c(self) -> int:
        return c_value(self.n)

    @property
    def final_free_generator(self) -> RODegree:
        """2 u^(2^n - 1), which generates a copy of P."""
        return u_power_a_power(2**self.n - 1, 0)

    @property
    def final_free_top(self) -> RODegree:
        """Display position of the top class of H^n_J of that copy of P."""
        return display_position(self.n, self.final_free_generator - RHO * self.D)

    @property
    def a_column(self) -> range:
        """y values of the F2 column at x = -1, top to bottom."""
        return range(-(2 ** (self.n + 1) - 1), self.n - 4 * (2**self.n - 1), -1)

    def ideal_basepoint(self, a_power: int = 2) -> RODegree:
        """Degree of u^(2^n - 2) a^a_power; the ideal is generated by vbar1 times it."""
        return u_power_a_power(2**self.n - 2, a_power)

    @property
    def boundary(self) -> int:
        """Local cohomology tops lie on or above x + y = boundary."""
        return -2 * self.D


@dataclass
class Certificate:
    n: int
    exponent: int  # the power of a
    c: int
    source: RODegree
    target: RODegree
    dual_of_source: RODegree
    ideal: str
    ideal_basepoint: RODegree
    entry_diagonal: int
    u_power_x: int
    distance: int
    candidate_degrees: list[int]
    page: int | None
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self):
        return {
            "n": self.n, "a_power": self.exponent, "c": self.c,
            "source": self.source.to_json(), "target": self.target.to_json(),
            "dual_of_source": self.dual_of_source.to_json(),
            "ideal": self.ideal, "ideal_basepoint": self.ideal_basepoint.to_json(),
            "entry_diagonal": self.entry_diagonal, "u_power_x": self.u_power_x,
            "distance": self.distance, "candidate_degrees": self.candidate_degrees,
            "page": self.page, "checks": [{"check": c, "ok": ok} for c, ok in self.checks], "ok": self.ok,
        }

    def text(self) -> str:
        lines = [f"n = {self.n}: d_{self.page if self.page else '?'}(a^{self.exponent}) != 0"
                 if self.ok else f"n = {self.n}: certificate for a^{self.exponent} FAILED"]
        lines.append(f"  c = {self.c}; source {self.source}, target {self.target}")
        lines.append(f"  target from H^{self.n}_J of ({self.ideal}) based at {self.ideal_basepoint}, "
                     f"entry diagonal {self.entry_diagonal}")
        lines.append(f"  distance to x + y = {-2 * GeneratorDegrees(self.n).D}: {self.distance}; "
                     f"cohomological degrees that can reach the target: {self.candidate_degrees}")
        for name, ok in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {name}")
        return "\n".join(lines)


def _certificate(n: int, drop: int) -> Certificate:
    """Certificate for a^(c - drop); drop = 0 is the main one."""
    if n < 2:
        raise ValueError("the last differential is d_n with n >= 2")
    model = BottomBoundaryModel(n)
    c = model.c
    e = c - drop
    W = gorenstein_shift_of(n).W
    source = RODegree(0, -e)
    target = RODegree(-1, -e)
    checks = []
    checks.append((f"c = 4(2^n - 1) - (n + 1) = 2 D_n + n - 1 = {c}", c == 2 * model.D + n - 1))
    checks.append(("final copy of P has its top class on the sigma axis at (n - 4(2^n - 1)) sigma",
                   model.final_free_top == RODegree(0, n - 4 * (2**n - 1))))
    checks.append((f"-{e} lies in the F2 column at x = -1", -e in model.a_column))
    dual = dual_position(source, False, W)
    checks.append((f"dual of a^{e} at {dual} is forbidden (x < 0 and x + y < 0)", dual.x < 0 and dual.x + dual.y < 0))
    checks.append((f"dual x is -(2^(n+1) + 1)", dual.x == -(2 ** (n + 1) + 1)))
    # the F2 at the target: top class of H^n of the principal ideal
    a_power = 2 - drop
    base = model.ideal_basepoint(a_power)
    lc = local_cohomology("(v1)Pb0", base, n)
    tops = [display_position(s.degree, base + RHO * s.top) for s in lc.summands]
    hits = [s for s, t in zip(lc.summands, tops) if t == target]
    checks.append((f"H^{n}_J of (vbar1) u^{2**n - 2} a^{a_power} Pbar_0 has an F2 top class at {target}",
                   len(hits) == 1 and hits[0].degree == n and hits[0].rank_at(hits[0].top) == 1))
    # uniqueness: an H^i class at the target sits at internal (i - 1, -e)
    distance = model.boundary - (target.x + target.y)
    candidates = [i for i in range(0, n + 1) if (i - 1) - e >= model.boundary]
    checks.append((f"distance from {target} to the boundary line is {n - drop}", distance == n - drop))
    entry_diagonal = base.delta  # vbar1 has rho-degree, so the generator stays on this diagonal
    checks.append(("entry diagonal is 2^(n+2) - 6 - drop", entry_diagonal == 2 ** (n + 2) - 6 - drop))
    checks.append(("u-power column has x = 2(2^n - 1) - 2", base.x == 2 * (2**n - 1) - 2))
    page = None
    if drop == 0:
        checks.append(("only H^n can reach the target", candidates == [n]))
        page = n
    else:
        checks.append((f"H^n reaches the target; candidates {candidates}", n in candidates))
        page = n if candidates == [n] else None
    return Certificate(n, e, c, source, target, dual, "(v1)Pb0", base, entry_diagonal, base.x,
                       distance, candidates, page, checks)


def last_differential_certificate(n: int) -> Certificate:
    cert = _certificate(n, 0)
    if not cert.ok:
        failed = [name for name, ok in cert.checks if not ok]
        raise CertificateFailure(f"n = {n}: " + "; ".join(failed))
    return cert


def companion_certificate(n: int, engine: bool = False) -> Certificate:
    """The same bookkeeping for a^(c - 1).

    The boundary line is then only n - 1 steps away, so H^(n-1) is not
    excluded by the line alone; the certificate records both candidates and
    names the page only when the engine data settle it (n = 3, engine=True).
    """
    cert = _certificate(n, 1)
    if engine and n == 3:
        d = engine_differential(cert.exponent)
        ok = d is not None and d.target.degree == n and d.target.top_display == cert.target
        cert.checks.append((f"spectral sequence engine kills a^{cert.exponent} by a d_n onto {cert.target}", ok))
        cert.page = d.page if ok else None
    return cert


def engine_differential(exponent: int):
    """The differential on a^exponent found by the n = 3 engine, if any."""
    from .duality import BB, analyze_block

    for d in analyze_block(BB).differentials:
        s = d.source
        if s.entry.tail and s.entry.delta == exponent and s.power == 0:
            return d
    return None


def certificates_json(ns) -> str:
    return json.dumps([{"main": last_differential_certificate(n).to_json(),
                        "companion": companion_certificate(n).to_json()} for n in ns], indent=1)
