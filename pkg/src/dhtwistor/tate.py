"""The logarithmic Tate twistor structure T(1, log): the tangent bundle of P^1
with the antipodal lift negated in the fiber direction.

Frames: standard-chart values are coefficients of d/dlambda, infinity-chart
values are coefficients of d/dmu.  Since d/dlambda = -mu^2 d/dmu, a global
section ``(a0 + a1 x + a2 x^2) d/dlambda`` reads ``-(a2 + a1 mu + a0 mu^2) d/dmu``
at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sphere import Chart, MoebiusMap, SpherePoint, antipode

INVARIANCE_TOL = 1e-10
UNIT_TOL = 1e-10
ZERO_TOL = 1e-10


class NonInvariantError(ValueError):
    def __init__(self, defect: float):
        super().__init__(f"section is not sigma-invariant (defect {defect:.3e})")
        self.defect = defect


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class TwistorSection:
    a0: complex
    a1: complex
    a2: complex

    def __post_init__(self):
        for name in ("a0", "a1", "a2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def coeffs(self) -> tuple[complex, complex, complex]:
        return self.a0, self.a1, self.a2

    def infinity_coeffs(self) -> tuple[complex, complex, complex]:
        """Coefficients ``(b0, b1, b2)`` of the d/dmu polynomial at infinity."""
        return -self.a2, -self.a1, -self.a0

    @classmethod
    def from_infinity_coeffs(cls, b0, b1, b2) -> "TwistorSection":
        return cls(-b2, -b1, -b0)

    def coeffs_in(self, chart: Chart) -> tuple[complex, complex, complex]:
        return self.coeffs if Chart(chart) is Chart.STANDARD else self.infinity_coeffs()

    def __add__(self, other: "TwistorSection") -> "TwistorSection":
        return TwistorSection(self.a0 + other.a0, self.a1 + other.a1, self.a2 + other.a2)

    def __sub__(self, other: "TwistorSection") -> "TwistorSection":
        return TwistorSection(self.a0 - other.a0, self.a1 - other.a1, self.a2 - other.a2)

    def scale(self, c: complex) -> "TwistorSection":
        return TwistorSection(c * self.a0, c * self.a1, c * self.a2)

    def norm(self) -> float:
        return max(abs(self.a0), abs(self.a1), abs(self.a2))


@dataclass(frozen=True)
class InvariantSection:
    """psi(a, alpha) = (alpha - a lambda - conj(alpha) lambda^2) d/dlambda."""

    a: float
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "alpha", complex(self.alpha))

    def __add__(self, other: "InvariantSection") -> "InvariantSection":
        return InvariantSection(self.a + other.a, self.alpha + other.alpha)

    def __sub__(self, other: "InvariantSection") -> "InvariantSection":
        return InvariantSection(self.a - other.a, self.alpha - other.alpha)

    def scale(self, t: float) -> "InvariantSection":
        return InvariantSection(t * self.a, t * self.alpha)

    def distance(self, other: "InvariantSection") -> float:
        return max(abs(self.a - other.a), abs(self.alpha - other.alpha))


GAUGE_GENERATOR = InvariantSection(1.0, 0.0)


@dataclass(frozen=True)
class FiberVector:
    """A point of the total space: ``value`` is in the frame of ``base``'s chart."""

    base: SpherePoint
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    @classmethod
    def make(cls, chart: Chart, coord: complex, value: complex) -> "FiberVector":
        """Build from any chart representation, converting to the canonical one."""
        chart = Chart(chart)
        base = SpherePoint(chart, coord)
        if base.chart is not chart:
            value = -(base.coord ** 2) * value
        return cls(base, value)

    def value_in(self, chart: Chart) -> complex:
        chart = Chart(chart)
        if chart is self.base.chart:
            return self.value
        new = self.base.coordinate_in(chart)
        return -(new ** 2) * self.value

    def distance(self, other: "FiberVector") -> float:
        """Zero iff equal; compares in a common chart."""
        d = self.base.distance(other.base)
        try:
            dv = abs(self.value - other.value_in(self.base.chart))
        except ZeroDivisionError:
            return math.inf
        return max(d, dv)


def sigma_total(x: FiberVector, log: bool = True) -> FiberVector:
    """Antipodal involution on the total space.

    ``log=True`` is the T(1, log) version (lambda, v) -> (-1/conj(lambda),
    -conj(lambda)^-2 conj(v)); ``log=False`` is the plain tangent-bundle lift.
    """
    sign = 1.0 if log else -1.0
    # (lambda, v) in one chart lands at (-conj(lambda), conj(v)) in the other
    new_chart = x.base.chart.other()
    return FiberVector.make(new_chart, -x.base.coord.conjugate(), sign * x.value.conjugate())


def sigma_section(s: TwistorSection) -> TwistorSection:
    return TwistorSection(-s.a2.conjugate(), s.a1.conjugate(), -s.a0.conjugate())


def invariance_defect(t: TwistorSection) -> float:
    return (sigma_section(t) - t).norm()


def embed_invariant(s: InvariantSection) -> TwistorSection:
    return TwistorSection(s.alpha, -s.a, -s.alpha.conjugate())


def extract_invariant(t: TwistorSection, tol: float = INVARIANCE_TOL) -> InvariantSection:
    defect = invariance_defect(t)
    if defect > tol * max(1.0, t.norm()):
        raise NonInvariantError(defect)
    alpha = 0.5 * (t.a0 - t.a2.conjugate())
    return InvariantSection(-t.a1.real, alpha)


def _poly(c: tuple[complex, complex, complex], x: complex) -> complex:
    return c[0] + x * (c[1] + x * c[2])


def evaluate(s: TwistorSection, p: SpherePoint) -> FiberVector:
    return FiberVector(p, _poly(s.coeffs_in(p.chart), p.coord))


def res_p(s: InvariantSection, p: complex) -> complex:
    p = complex(p)
    return s.alpha - s.a * p - s.alpha.conjugate() * p * p


def weight_p(s: InvariantSection, p: complex) -> float:
    p = complex(p)
    return s.a + 2.0 * (s.alpha * p.conjugate()).real


def coords_at(s: InvariantSection, p: complex) -> tuple[float, complex]:
    """(parabolic weight, residue) at lambda = p."""
    return weight_p(s, p), res_p(s, p)


def from_coords(weight: float, residue: complex, p: complex) -> InvariantSection:
    """Inverse of ``coords_at``: ``weight * nu_p`` plus the weight-zero section
    with the given residue."""
    p, residue = complex(p), complex(residue)
    n = 1.0 + abs(p) ** 2
    alpha = (weight * p + residue) / n
    a = (weight * (1.0 - abs(p) ** 2) - 2.0 * (residue * p.conjugate()).real) / n
    return InvariantSection(a, alpha)


def nu(p: SpherePoint | complex) -> InvariantSection:
    """The invariant section vanishing at p and its antipode with expansion factor -1 at p."""
    if not isinstance(p, SpherePoint):
        p = SpherePoint.from_lambda(p)
    c = p.coord
    n = 1.0 + abs(c) ** 2
    if p.chart is Chart.STANDARD:
        return InvariantSection((1.0 - abs(c) ** 2) / n, c / n)
    return InvariantSection((abs(c) ** 2 - 1.0) / n, c.conjugate() / n)


def expansion_factor(s: TwistorSection, p: SpherePoint, tol: float = ZERO_TOL) -> complex:
    """Linear coefficient at a zero of the section, computed in p's chart."""
    c = s.coeffs_in(p.chart)
    value = _poly(c, p.coord)
    if abs(value) > tol * max(1.0, s.norm()):
        raise PreconditionError(f"section does not vanish at the point (value {abs(value):.3e})")
    return c[1] + 2.0 * c[2] * p.coord


def inner(s: InvariantSection, t: InvariantSection) -> float:
    return s.a * t.a + 4.0 * (s.alpha * t.alpha.conjugate()).real


def pushforward(f: MoebiusMap, s: TwistorSection) -> TwistorSection:
    """Transport the vector field ``P(lambda) d/dlambda`` along f."""
    a, b = f.u, f.v
    c, d = -f.v.conjugate(), f.u.conjugate()
    p0, p1, p2 = s.coeffs
    # Q(w) = P(f^-1 w) (a - c w)^2 with f^-1 w = (d w - b) / (a - c w)
    q0 = p0 * a * a - p1 * a * b + p2 * b * b
    q1 = -2.0 * a * c * p0 + (a * d + b * c) * p1 - 2.0 * b * d * p2
    q2 = c * c * p0 - c * d * p1 + d * d * p2
    return TwistorSection(q0, q1, q2)


def pushforward_invariant(f: MoebiusMap, s: InvariantSection) -> InvariantSection:
    return extract_invariant(pushforward(f, embed_invariant(s)))


def sphere_from_unit(s: InvariantSection, tol: float = UNIT_TOL) -> SpherePoint:
    """The point p with nu(p) == s, for s on the unit sphere of ``inner``."""
    n = inner(s, s)
    if abs(n - 1.0) > tol:
        raise PreconditionError(f"inner(s, s) = {n!r}, expected 1")
    if s.a >= 0:
        return SpherePoint.from_lambda(2.0 * s.alpha / (1.0 + s.a))
    return SpherePoint(Chart.INFINITY, 2.0 * s.alpha.conjugate() / (1.0 - s.a))


def gauge_shift_section(s: InvariantSection, n: int) -> InvariantSection:
    return InvariantSection(s.a + n, s.alpha)


def zero_locus(s: InvariantSection) -> tuple[SpherePoint, SpherePoint] | None:
    """The two antipodal zeros of a nonzero invariant section."""
    m = max(abs(s.a), abs(s.alpha))
    if m == 0:
        return None
    # prescale so inner(s, s) neither underflows nor overflows
    s = InvariantSection(s.a / m, s.alpha / m)
    p = sphere_from_unit(s.scale(1.0 / math.sqrt(inner(s, s))))
    return p, antipode(p)
