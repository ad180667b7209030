"""The imaginary multiplicative group in circular coordinates.

A point is a pair ``(x, y)`` of complex numbers with ``x**2 + y**2 == 1``.
We fix once and for all the multiplicative coordinate ``z = x + 1j*y``;
with this identification the group law is multiplication of ``z`` and
``exp_perp(theta)`` is ``exp(2*pi*1j*theta)``.  The other choice of square
root of -1 corresponds to ``y -> -y``, which inverts every point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

UNIT_TOL = 1e-12


class UnitInvariantError(ValueError):
    """Raised when ``x**2 + y**2`` is not 1 to tolerance."""


def unit_defect(x: complex, y: complex) -> float:
    """Scaled defect ``|x^2 + y^2 - 1| / max(1, |x|^2 + |y|^2)``."""
    scale = max(1.0, abs(x) ** 2 + abs(y) ** 2)
    return abs(x * x + y * y - 1.0) / scale


@dataclass(frozen=True)
class CirclePoint:
    x: complex
    y: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))
        d = unit_defect(self.x, self.y)
        if not d <= UNIT_TOL:
            raise UnitInvariantError(f"x^2 + y^2 - 1 has scaled defect {d:.3e}")

    @property
    def z(self) -> complex:
        """Multiplicative coordinate ``x + iy``."""
        return self.x + 1j * self.y

    def inverse(self) -> "CirclePoint":
        return CirclePoint(self.x, -self.y)

    def distance(self, other: "CirclePoint") -> float:
        return max(abs(self.x - other.x), abs(self.y - other.y))


IDENTITY = CirclePoint(1.0, 0.0)


@dataclass(frozen=True)
class CircularLog:
    """A circular logarithm; the full preimage is ``theta + Z``."""

    theta: complex

    def point(self) -> CirclePoint:
        return exp_perp(self.theta)

    def __complex__(self):
        return complex(self.theta)


def exp_perp(theta: complex) -> CirclePoint:
    t = 2.0 * math.pi * complex(theta)
    return CirclePoint(cmath.cos(t), cmath.sin(t))


def circle_mul(u: CirclePoint, v: CirclePoint) -> CirclePoint:
    # multiply x + iy and x - iy separately; the bilinear formula cancels badly
    # when the factors are far from the unit circle in C^2
    z = (u.x + 1j * u.y) * (v.x + 1j * v.y)
    w = (u.x - 1j * u.y) * (v.x - 1j * v.y)
    x, y = 0.5 * (z + w), -0.5j * (z - w)
    # rounding in the inputs is amplified by their size, so the product is
    # checked against the condition number rather than its own magnitude
    cond = (abs(u.x) ** 2 + abs(u.y) ** 2) * (abs(v.x) ** 2 + abs(v.y) ** 2)
    return _checked(x, y, cond)


def _checked(x: complex, y: complex, scale: float) -> CirclePoint:
    d = abs(x * x + y * y - 1.0) / max(1.0, abs(x) ** 2 + abs(y) ** 2, scale)
    if not d <= UNIT_TOL:
        raise UnitInvariantError(f"x^2 + y^2 - 1 has scaled defect {d:.3e}")
    out = object.__new__(CirclePoint)
    object.__setattr__(out, "x", complex(x))
    object.__setattr__(out, "y", complex(y))
    return out


def circle_inv(u: CirclePoint) -> CirclePoint:
    return u.inverse()


def conjugate_choice(u: CirclePoint) -> CirclePoint:
    """Re-read a point with the opposite square root of -1 (flip ``y``)."""
    return CirclePoint(u.x, -u.y)


def circular_log(c: CirclePoint) -> CircularLog:
    """Principal circular logarithm, real part in ``[0, 1)``."""
    d = unit_defect(c.x, c.y)
    if not d <= UNIT_TOL:
        raise UnitInvariantError(f"x^2 + y^2 - 1 has scaled defect {d:.3e}")
    z = c.x + 1j * c.y
    zinv = c.x - 1j * c.y
    # x + iy and x - iy are reciprocal; use the larger one against cancellation
    if abs(z) >= abs(zinv):
        w = cmath.log(z)
    else:
        w = -cmath.log(zinv)
    theta = w / (2j * math.pi)
    re = theta.real % 1.0
    if re >= 1.0:
        re = 0.0
    return CircularLog(complex(re, theta.imag))
