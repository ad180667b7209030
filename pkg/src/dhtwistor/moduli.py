"""Explicit Deligne-Hitchin model for X = P^1, D = {0, oo}.

A logarithmic lambda-connection on the trivial bundle is ``lambda d + alpha dz/z``,
so the Hodge moduli space is the plane of pairs (lambda, alpha).  The
conjugate chart carries pairs (mu, beta) and the two are glued by
``(lambda, alpha) -> (1/lambda, -alpha/lambda^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import tate
from .circle import CirclePoint, exp_perp
from .sphere import Chart, SpherePoint
from .tate import InvariantSection

EQUIV_TOL = 1e-9


class HodChart(str, Enum):
    STANDARD = "standard"
    CONJUGATE = "conjugate"

    def other(self) -> "HodChart":
        return HodChart.CONJUGATE if self is HodChart.STANDARD else HodChart.STANDARD


class GluingLocusError(ValueError):
    """The operation needs lambda != 0 in the current chart."""


class IncomparablePointsError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class HodPoint:
    chart: HodChart
    lam: complex
    alpha: complex

    def __post_init__(self):
        # the involutions build many points, so skip conversions that are no-ops
        if type(self.chart) is not HodChart:
            object.__setattr__(self, "chart", HodChart(self.chart))
        if type(self.lam) is not complex:
            object.__setattr__(self, "lam", complex(self.lam))
        if type(self.alpha) is not complex:
            object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def standard(cls, lam, alpha) -> "HodPoint":
        return cls(HodChart.STANDARD, lam, alpha)

    @classmethod
    def conjugate(cls, mu, beta) -> "HodPoint":
        return cls(HodChart.CONJUGATE, mu, beta)

    def base(self) -> SpherePoint:
        chart = Chart.STANDARD if self.chart is HodChart.STANDARD else Chart.INFINITY
        return SpherePoint(chart, self.lam)


def deligne_glue(p: HodPoint) -> HodPoint:
    if p.lam == 0:
        raise GluingLocusError("lambda = 0 is not in the gluing locus")
    return HodPoint(p.chart.other(), 1.0 / p.lam, -p.alpha / (p.lam * p.lam))


def in_chart(p: HodPoint, chart: HodChart) -> HodPoint:
    return p if HodChart(chart) is p.chart else deligne_glue(p)


def point_distance(p: HodPoint, q: HodPoint) -> float:
    """Distance between two glued-space points, measured in a common chart."""
    if p.chart is not q.chart:
        try:
            q = deligne_glue(q)
        except GluingLocusError:
            try:
                p = deligne_glue(p)
            except GluingLocusError:
                return math.inf
    scale = max(1.0, abs(p.alpha), abs(q.alpha))
    return max(abs(p.lam - q.lam), abs(p.alpha - q.alpha) / scale)


def monodromy(p: HodPoint) -> CirclePoint:
    """Local monodromy around 0 of the represented connection on X."""
    if p.lam == 0:
        raise GluingLocusError("no monodromy at a Higgs fiber")
    if p.chart is HodChart.STANDARD:
        return exp_perp(p.alpha / p.lam)
    # conjugate chart: monodromy on conj(X) is exp_perp(beta/mu), pulled back inverted
    return exp_perp(-p.alpha / p.lam)


def inv_D(p: HodPoint) -> HodPoint:
    """Duality: alpha -> -alpha, covers the identity."""
    return HodPoint(p.chart, p.lam, -p.alpha)


def inv_N(p: HodPoint) -> HodPoint:
    """Multiplication by -1 in G_m."""
    return HodPoint(p.chart, -p.lam, -p.alpha)


def inv_C(p: HodPoint) -> HodPoint:
    """Complex conjugation; swaps the charts."""
    return HodPoint(p.chart.other(), p.lam.conjugate(), p.alpha.conjugate())


def inv_sigma(p: HodPoint) -> HodPoint:
    """The antipodal involution C D N: (lambda, alpha) -> (-conj(lambda), conj(alpha))
    in the other chart, i.e. (-1/conj(lambda), -conj(alpha)/conj(lambda)^2) in the same one."""
    return HodPoint(p.chart.other(), -p.lam.conjugate(), p.alpha.conjugate())


def canonical_gauge(p: HodPoint, k: int) -> HodPoint:
    """The chart-local formula alpha -> alpha - lambda k applied in p's own chart."""
    return HodPoint(p.chart, p.lam, p.alpha - p.lam * k)


def gauge(p: HodPoint, k: int) -> HodPoint:
    """Meromorphic gauge action of k in Z on the glued space.

    The conjugate chart sees the canonical action of -k.
    """
    if p.chart is HodChart.STANDARD:
        return canonical_gauge(p, k)
    return canonical_gauge(p, -k)


def gauge_offset(p: HodPoint, q: HodPoint, tol: float = EQUIV_TOL) -> int | None:
    """The integer k with gauge(p, k) == q, or None."""
    if p.chart is not q.chart:
        if q.lam != 0:
            q = deligne_glue(q)
        elif p.lam != 0:
            p = deligne_glue(p)
        else:
            raise IncomparablePointsError("points lie over 0 and oo")
    if abs(p.lam - q.lam) > tol * max(1.0, abs(p.lam)):
        raise IncomparablePointsError(f"different lambda: {p.lam} vs {q.lam}")
    if p.lam == 0:
        # the action is trivial on the Higgs fiber
        return 0 if p.alpha == q.alpha else None
    kk = (p.alpha - q.alpha) / p.lam
    if p.chart is HodChart.CONJUGATE:
        kk = -kk
    k = round(kk.real)
    if abs(kk - k) > tol:
        return None
    return int(k)


def gauge_equivalent(p: HodPoint, q: HodPoint, tol: float = EQUIV_TOL) -> bool:
    return gauge_offset(p, q, tol) is not None


@dataclass(frozen=True)
class SectionGraph:
    """The section lambda -> (lambda, psi(a, alpha)(lambda)) of the glued space."""

    section: InvariantSection

    def __call__(self, lam) -> HodPoint:
        return self.at(lam if isinstance(lam, SpherePoint) else SpherePoint.from_lambda(lam))

    def at(self, p: SpherePoint) -> HodPoint:
        t = tate.embed_invariant(self.section)
        value = tate.evaluate(t, p).value
        chart = HodChart.STANDARD if p.chart is Chart.STANDARD else HodChart.CONJUGATE
        return HodPoint(chart, p.coord, value)


def section_space_bridge(s: InvariantSection) -> SectionGraph:
    return SectionGraph(s)


def higgs_to_derham(s: InvariantSection) -> tuple[float, complex]:
    """Parabolic weight and residue at lambda = 1."""
    return tate.coords_at(s, 1.0)


def legacy_coordinates(s: InvariantSection) -> tuple[float, float, float]:
    """Older decreasing-filtration notation (alpha_old, b, c) with alpha_old = -a, b + ic = alpha."""
    return -s.a, s.alpha.real, s.alpha.imag


def derham_from_legacy(alpha_old: float, b: float, c: float) -> tuple[float, complex]:
    """lambda = 1 weight and residue written in the older notation."""
    return -alpha_old + 2.0 * b, alpha_old + 2j * c


def residue_of_connection(p: HodPoint) -> complex:
    """Residue at 0 of the normalized connection d + (alpha/lambda) dz/z."""
    if p.lam == 0:
        raise GluingLocusError("Higgs field has no normalized connection")
    q = in_chart(p, HodChart.STANDARD)
    return q.alpha / q.lam
