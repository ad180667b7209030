"""Rank-one harmonic data along the divisor: per component a parabolic weight
``a`` and Higgs residue ``alpha``, read as the invariant section
``psi(a, alpha)``.  Its coordinates at lambda = p are the weight and residue of
the associated lambda-connection; following the weights along a path in p
tracks the KMS chambers ``[c, c + 1)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import tate
from .circle import CirclePoint
from .lattice import GeometryDescriptor, ShapeMismatchError, c1_defect
from .tate import InvariantSection

REFINE_THRESHOLD = 0.5
C1_TOL = 1e-9
CLOSED_TOL = 1e-12
# weights this close to a wall count as on it, so that rounding in an integer
# shift cannot move a sample to the other chamber; the band does not depend on
# the weight itself, so it is the same for w and w + n
WALL_TOL = 1e-12


class RefinePathError(ValueError):
    def __init__(self, sample: int, divisor: int, jump: float):
        super().__init__(
            f"refine path: weight of divisor {divisor} jumps by {jump:.6g} between samples {sample - 1} and {sample}"
        )
        self.sample = sample
        self.divisor = divisor
        self.jump = jump


class C1ObstructionError(ValueError):
    def __init__(self, defect: np.ndarray):
        super().__init__(f"c1 obstruction: zeta + sum b_i [D_i] = {np.array2string(np.asarray(defect), precision=6)}")
        self.defect = np.asarray(defect)


@dataclass(frozen=True)
class HarmonicDatum:
    sections: tuple[InvariantSection, ...]
    descriptor: GeometryDescriptor | None = None
    monodromy: tuple[CirclePoint, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "sections", tuple(self.sections))
        if self.descriptor is not None and len(self.sections) != self.descriptor.k:
            raise ShapeMismatchError(f"{len(self.sections)} sections for a descriptor with k = {self.descriptor.k}")
        if self.monodromy is not None:
            object.__setattr__(self, "monodromy", tuple(self.monodromy))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, complex]], **kw) -> "HarmonicDatum":
        return cls(tuple(InvariantSection(a, alpha) for a, alpha in pairs), **kw)

    @property
    def k(self) -> int:
        return len(self.sections)

    def weights(self, p: complex) -> np.ndarray:
        return np.array([tate.weight_p(s, p) for s in self.sections])

    def gauge_shift(self, g: Sequence[int]) -> "HarmonicDatum":
        """Twist by sum g_i D_i: every weight moves up by g_i."""
        if len(g) != self.k:
            raise ShapeMismatchError(f"gauge vector has {len(g)} entries, expected {self.k}")
        return HarmonicDatum(
            tuple(tate.gauge_shift_section(s, int(n)) for s, n in zip(self.sections, g)),
            self.descriptor, self.monodromy,
        )

    def distance(self, other: "HarmonicDatum") -> float:
        if other.k != self.k:
            return math.inf
        return max((s.distance(t) for s, t in zip(self.sections, other.sections)), default=0.0)


def preferred_residue_sections(h: HarmonicDatum) -> list[InvariantSection]:
    return list(h.sections)


def evaluate_at(h: HarmonicDatum, p: complex) -> list[tuple[float, complex]]:
    """Per-divisor (weight, residue) at lambda = p."""
    return [tate.coords_at(s, p) for s in preferred_residue_sections(h)]


def c1_check(descriptor: GeometryDescriptor, weights: Sequence[float], zeta: Sequence[float]) -> np.ndarray:
    """The real class ``zeta + sum b_i [D_i]`` on the free part of H^2."""
    return c1_defect(descriptor, zeta, [complex(w) for w in weights], lam=1.0).real


def invert_from_point(
    data: Sequence[tuple[float, complex]],
    p: complex,
    descriptor: GeometryDescriptor | None = None,
    zeta: Sequence[float] | None = None,
    tol: float = C1_TOL,
    monodromy: Sequence[CirclePoint] | None = None,
) -> HarmonicDatum:
    if not (math.isfinite(complex(p).real) and math.isfinite(complex(p).imag)):
        raise ValueError("p must be finite")
    sections = tuple(tate.from_coords(w, r, p) for w, r in data)
    if descriptor is not None and zeta is not None:
        defect = c1_check(descriptor, [w for w, _ in data], zeta)
        if defect.size and np.max(np.abs(defect)) > tol:
            raise C1ObstructionError(defect)
    return HarmonicDatum(sections, descriptor, tuple(monodromy) if monodromy is not None else None)


def same_by_point_data(h1: HarmonicDatum, h2: HarmonicDatum, p: complex, tol: float = 1e-12) -> bool:
    """Equal monodromy labels and equal (weight, residue) at one p."""
    if h1.monodromy != h2.monodromy or h1.k != h2.k:
        return False
    for (w1, r1), (w2, r2) in zip(evaluate_at(h1, p), evaluate_at(h2, p)):
        if abs(w1 - w2) > tol or abs(r1 - r2) > tol:
            return False
    return True


# -- chambers ----------------------------------------------------------------


@dataclass(frozen=True)
class ChamberState:
    """``weights[i] + offsets[i]`` lies in ``[base[i], base[i] + 1)``; a sample
    exactly on a wall belongs to the upper chamber."""

    index: int
    p: complex
    weights: tuple[float, ...]
    offsets: tuple[int, ...]
    base: tuple[float, ...]
    on_wall: tuple[bool, ...] = ()

    def invariant_holds(self) -> bool:
        return all(_offset(w, c) == n for w, n, c in zip(self.weights, self.offsets, self.base))


@dataclass
class ChamberTrace:
    states: list[ChamberState] = field(default_factory=list)

    @property
    def initial(self) -> ChamberState:
        return self.states[0]

    @property
    def final(self) -> ChamberState:
        return self.states[-1]

    @property
    def final_offsets(self) -> tuple[int, ...]:
        return self.final.offsets

    @property
    def net_offsets(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.initial.offsets, self.final.offsets))

    @property
    def wall_hits(self) -> list[tuple[int, int]]:
        return [(s.index, i) for s in self.states for i, w in enumerate(s.on_wall) if w]

    def to_csv(self) -> str:
        buf = io.StringIO()
        write_trace_csv(self, buf)
        return buf.getvalue()


def _bases(c0, k: int) -> tuple[float, ...]:
    if np.ndim(c0) == 0:
        return (float(c0),) * k
    c0 = tuple(float(c) for c in c0)
    if len(c0) != k:
        raise ShapeMismatchError(f"chamber base has {len(c0)} entries, expected {k}")
    return c0


def _wall(w: float, c: float) -> int | None:
    """The integer m with w - c == m up to WALL_TOL, if any."""
    m = round(w - c)
    if abs((w - c) - m) <= WALL_TOL * max(1.0, abs(c)):
        return int(m)
    return None


def _offset(w: float, c: float) -> int:
    m = _wall(w, c)
    return -(m if m is not None else math.floor(w - c))


def track_chambers(h: HarmonicDatum, path: Sequence[complex], c0=0.0) -> ChamberTrace:
    path = [complex(p) for p in path]
    if not path:
        raise ValueError("empty path")
    bases = _bases(c0, h.k)
    trace = ChamberTrace()
    prev = None
    for j, p in enumerate(path):
        w = h.weights(p)
        if prev is not None:
            for i in range(h.k):
                jump = abs(w[i] - prev[i])
                if jump >= REFINE_THRESHOLD:
                    raise RefinePathError(j, i, jump)
        # below the threshold the window is left through at most one wall per
        # step, so the offset moves by at most one
        offsets = [_offset(wi, c) for wi, c in zip(w, bases)]
        walls = tuple(_wall(wi, c) is not None for wi, c in zip(w, bases))
        trace.states.append(ChamberState(j, p, tuple(float(x) for x in w), tuple(offsets), bases, walls))
        prev = w
    return trace


def monodromy_of_weights(h: HarmonicDatum, path: Sequence[complex], c0=0.0, tol: float = CLOSED_TOL) -> tuple[int, ...]:
    """Net elementary-transformation count along a closed path."""
    path = list(path)
    if not path or abs(complex(path[0]) - complex(path[-1])) > tol:
        raise ValueError("path is not closed")
    return track_chambers(h, path, c0).net_offsets


def refine_path(path: Sequence[complex], factor: int) -> list[complex]:
    """Insert ``factor - 1`` equally spaced points in every segment."""
    path = [complex(p) for p in path]
    out = [path[0]]
    for p, q in zip(path, path[1:]):
        out += [p + (q - p) * (t / factor) for t in range(1, factor)]
        out.append(q)
    return out


def auto_refine(h: HarmonicDatum, path: Sequence[complex], max_depth: int = 16) -> list[complex]:
    """Bisect segments until every weight changes by less than the threshold."""
    path = [complex(p) for p in path]
    out = [path[0]]
    for p, q in zip(path, path[1:]):
        stack = [(p, q, 0)]
        while stack:
            a, b, depth = stack.pop()
            if np.max(np.abs(h.weights(b) - h.weights(a)), initial=0.0) < REFINE_THRESHOLD:
                out.append(b)
                continue
            if depth >= max_depth:
                raise RefinePathError(len(out), int(np.argmax(np.abs(h.weights(b) - h.weights(a)))),
                                      float(np.max(np.abs(h.weights(b) - h.weights(a)))))
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    return out


def circle_path(n: int, radius: float = 1.0, center: complex = 0.0, start_angle: float = 0.0) -> list[complex]:
    """n segments around a circle; the last sample equals the first exactly."""
    if n < 1:
        raise ValueError("need at least one segment")
    pts = [center + radius * complex(math.cos(start_angle + 2 * math.pi * j / n),
                                     math.sin(start_angle + 2 * math.pi * j / n)) for j in range(n)]
    return pts + [pts[0]]


def segment_path(p: complex, q: complex, n: int) -> list[complex]:
    return [p + (q - p) * (j / n) for j in range(n + 1)]


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


CSV_COLUMNS = ("sample", "p_re", "p_im", "divisor", "weight", "offset")


def write_trace_csv(trace: ChamberTrace, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in trace.states:
        for i, (wt, n) in enumerate(zip(s.weights, s.offsets)):
            w.writerow([s.index, _fmt(s.p.real), _fmt(s.p.imag), i, _fmt(wt), n])
