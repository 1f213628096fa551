"""RO(Q) degrees x + y*sigma for the group of order two, and the degree
bookkeeping shared by every other module."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True, slots=True)
class RODegree:
    """An element x + y*sigma of RO(Q), drawn at the point (x, y)."""

    x: int
    y: int

    def __add__(self, other: RODegree) -> RODegree:
        return RODegree(self.x + other.x, self.y + other.y)

    def __sub__(self, other: RODegree) -> RODegree:
        return RODegree(self.x - other.x, self.y - other.y)

    def __neg__(self) -> RODegree:
        return RODegree(-self.x, -self.y)

    def __mul__(self, k: int) -> RODegree:
        return RODegree(k * self.x, k * self.y)

    __rmul__ = __mul__

    @property
    def delta(self) -> int:
        return self.x - self.y

    def to_json(self) -> list[int]:
        return [self.x, self.y]

    @classmethod
    def from_json(cls, data) -> RODegree:
        x, y = data
        return cls(int(x), int(y))

    def __str__(self) -> str:
        sign = "-" if self.y < 0 else "+"
        return f"{self.x}{sign}{abs(self.y)}σ"


ZERO = RODegree(0, 0)
ONE = RODegree(1, 0)
SIGMA = RODegree(0, 1)
RHO = RODegree(1, 1)


def diagonal_of(v: RODegree) -> int:
    """Return delta with v = delta + y*rho."""
    return v.x - v.y


def display_position(i: int, v: RODegree) -> RODegree:
    """Chart position of an H^i_J class of internal degree ``v``.

    H^i is drawn on column -i, which moves the total degree by -i in the
    trivial direction; a d_r then lowers the drawn x-coordinate by one.
    """
    if i < 0:
        raise ValueError("cohomological degree must be non-negative")
    return RODegree(v.x - i, v.y)


def rho_multiple(k: int) -> RODegree:
    return RODegree(k, k)


@dataclass(frozen=True)
class GeneratorDegrees:
    """Degrees of the named generators of BPR<n>^Q_* for a fixed n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def weights(self) -> tuple[int, ...]:
        """rho-degrees w_i = 2^i - 1 of vbar_1, ..., vbar_n."""
        return tuple(2**i - 1 for i in range(1, self.n + 1))

    def vbar(self, i: int) -> RODegree:
        return rho_multiple(2**i - 1)

    @property
    def D(self) -> int:
        return 2 ** (self.n + 1) - self.n - 2

    a = RODegree(0, -1)
    u = RODegree(2, -2)

    @property
    def U(self) -> RODegree:
        """Periodicity class u^(2^n), of degree 2^(n+1)(1 - sigma)."""
        return self.u * 2**self.n


def u_power_a_power(j: int, k: int) -> RODegree:
    """Degree of u^j a^k; it lies on diagonal 4j + k."""
    return RODegree(2 * j, -2 * j - k)
