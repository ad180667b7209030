"""The twistor line P^1 in two charts with mu = 1/lambda, its antipodal
involution lambda -> -1/conj(lambda), and the PSU(2) maps commuting with it.

Points are stored in a canonical chart: the standard chart when the
lambda-coordinate has modulus <= 1, otherwise the infinity chart.  Internally
everything goes through homogeneous coordinates ``[z0 : z1]`` with
``lambda = z0 / z1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

DET_TOL = 1e-12


class Chart(str, Enum):
    STANDARD = "standard"
    INFINITY = "infinity"

    def other(self) -> "Chart":
        return Chart.INFINITY if self is Chart.STANDARD else Chart.STANDARD


def _canonical(z0: complex, z1: complex) -> tuple[Chart, complex]:
    if abs(z0) <= abs(z1):
        return Chart.STANDARD, z0 / z1
    return Chart.INFINITY, z1 / z0


@dataclass(frozen=True)
class SpherePoint:
    chart: Chart
    coord: complex

    def __post_init__(self):
        chart = Chart(self.chart)
        coord = complex(self.coord)
        if not (math.isfinite(coord.real) and math.isfinite(coord.imag)):
            raise ValueError("chart coordinate must be finite")
        if abs(coord) > 1.0:
            chart, coord = chart.other(), 1.0 / coord
        elif abs(coord) == 1.0 and chart is Chart.INFINITY:
            chart, coord = Chart.STANDARD, 1.0 / coord
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "coord", coord)

    @classmethod
    def from_lambda(cls, lam) -> "SpherePoint":
        """Build from a lambda value; ``math.inf`` (or ``None``) is the point at infinity."""
        if lam is None or (isinstance(lam, float) and math.isinf(lam)):
            return cls(Chart.INFINITY, 0.0)
        lam = complex(lam)
        if cmath.isinf(lam):
            return cls(Chart.INFINITY, 0.0)
        if abs(lam) <= 1.0:
            return cls(Chart.STANDARD, lam)
        return cls(Chart.INFINITY, 1.0 / lam)

    @classmethod
    def from_homogeneous(cls, z0: complex, z1: complex) -> "SpherePoint":
        chart, coord = _canonical(z0, z1)
        return cls(chart, coord)

    @property
    def is_infinity(self) -> bool:
        return self.chart is Chart.INFINITY and self.coord == 0

    @property
    def lam(self) -> complex:
        """Standard-chart coordinate; ``inf`` at the point at infinity."""
        if self.chart is Chart.STANDARD:
            return self.coord
        if self.coord == 0:
            return complex(math.inf, 0.0)
        return 1.0 / self.coord

    def coordinate_in(self, chart: Chart) -> complex:
        chart = Chart(chart)
        if chart is self.chart:
            return self.coord
        if self.coord == 0:
            raise ZeroDivisionError(f"point is the center of the opposite chart to {chart.value}")
        return 1.0 / self.coord

    def homogeneous(self) -> tuple[complex, complex]:
        if self.chart is Chart.STANDARD:
            return self.coord, 1.0 + 0j
        return 1.0 + 0j, self.coord

    def distance(self, other: "SpherePoint") -> float:
        """Chordal distance; independent of chart representation."""
        a0, a1 = self.homogeneous()
        b0, b1 = other.homogeneous()
        num = abs(a0 * b1 - a1 * b0)
        return num / math.sqrt((abs(a0) ** 2 + abs(a1) ** 2) * (abs(b0) ** 2 + abs(b1) ** 2))


ZERO = SpherePoint(Chart.STANDARD, 0.0)
INFINITY = SpherePoint(Chart.INFINITY, 0.0)


def antipode(p: SpherePoint) -> SpherePoint:
    """lambda -> -1/conj(lambda); swaps the two chart centers."""
    # same modulus, so the swapped chart is already canonical except on |coord| = 1
    if p.chart is Chart.STANDARD:
        return SpherePoint(Chart.INFINITY, -p.coord.conjugate())
    return SpherePoint(Chart.STANDARD, -p.coord.conjugate())


@dataclass(frozen=True)
class MoebiusMap:
    """lambda -> (u lambda + v) / (-conj(v) lambda + conj(u)), |u|^2 + |v|^2 = 1.

    ``(u, v)`` and ``(-u, -v)`` give the same map; the representative is chosen
    with the first nonzero real component of ``(u.real, u.imag, v.real, v.imag)``
    positive.
    """

    u: complex
    v: complex

    def __post_init__(self):
        u, v = complex(self.u), complex(self.v)
        det = abs(u) ** 2 + abs(v) ** 2
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"|u|^2 + |v|^2 = {det!r}, expected 1")
        for c in (u.real, u.imag, v.real, v.imag):
            if c != 0:
                if c < 0:
                    u, v = -u, -v
                break
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def normalized(cls, u: complex, v: complex) -> "MoebiusMap":
        n = math.sqrt(abs(u) ** 2 + abs(v) ** 2)
        return cls(u / n, v / n)

    @classmethod
    def rotation(cls, axis, angle: float) -> "MoebiusMap":
        """Element of SU(2) rotating by ``angle`` about a unit 3-vector ``axis``."""
        nx, ny, nz = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return cls.normalized(complex(c, -nz * s), complex(-ny * s, -nx * s))

    def matrix(self) -> np.ndarray:
        u, v = self.u, self.v
        return np.array([[u, v], [-v.conjugate(), u.conjugate()]])

    def __call__(self, p: SpherePoint) -> SpherePoint:
        return moebius_apply(self, p)

    def distance(self, other: "MoebiusMap") -> float:
        """Distance as projective maps (up to the overall sign)."""
        d1 = max(abs(self.u - other.u), abs(self.v - other.v))
        d2 = max(abs(self.u + other.u), abs(self.v + other.v))
        return min(d1, d2)


IDENTITY_MAP = MoebiusMap(1.0, 0.0)


def moebius_apply(f: MoebiusMap, p: SpherePoint) -> SpherePoint:
    z0, z1 = p.homogeneous()
    w0 = f.u * z0 + f.v * z1
    w1 = -f.v.conjugate() * z0 + f.u.conjugate() * z1
    return SpherePoint.from_homogeneous(w0, w1)


def moebius_compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """The map ``f o g``."""
    u = f.u * g.u - f.v * g.v.conjugate()
    v = f.u * g.v + f.v * g.u.conjugate()
    return MoebiusMap.normalized(u, v)


def moebius_inverse(f: MoebiusMap) -> MoebiusMap:
    return MoebiusMap(f.u.conjugate(), -f.v)


def random_point(rng: np.random.Generator, scale: float = 1.0) -> SpherePoint:
    """A point of P^1 drawn from a (scaled) Gaussian in the standard chart."""
    lam = complex(rng.normal(scale=scale), rng.normal(scale=scale))
    return SpherePoint.from_lambda(lam)


def random_map(rng: np.random.Generator) -> MoebiusMap:
    q = rng.normal(size=4)
    return MoebiusMap.normalized(complex(q[0], q[1]), complex(q[2], q[3]))
