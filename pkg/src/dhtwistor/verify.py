"""Seeded identity suites behind ``dhtwistor verify``.

Each check draws its own samples from a generator seeded by (seed, suite,
check) so results do not depend on which suites run.  Functions are looked
up through their modules at call time, which lets tests swap one out.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import circle, harmonic, lattice, moduli, sphere, tate

SUITES = ("circle", "sphere", "tate", "moduli", "lattice", "harmonic")


@dataclass(frozen=True)
class IdentityResult:
    suite: str
    name: str
    max_defect: float
    tol: float
    samples: int
    seed: int
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = (f"{status}  {self.suite:<8} {self.name:<44} max defect {self.max_defect:.3e}"
               f"  (tol {self.tol:.1e}, n={self.samples}, seed={self.seed})")
        if self.error:
            out += f"  error: {self.error}"
        return out


def _rng(seed: int, suite: str, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(suite.encode()), zlib.crc32(name.encode())])


def _cpx(rng, scale=1.0) -> complex:
    return complex(rng.normal(scale=scale), rng.normal(scale=scale))


def _section(rng) -> tate.InvariantSection:
    return tate.InvariantSection(rng.normal(), _cpx(rng))


def _twistor(rng) -> tate.TwistorSection:
    return tate.TwistorSection(_cpx(rng), _cpx(rng), _cpx(rng))


def _hod(rng) -> moduli.HodPoint:
    chart = moduli.HodChart.STANDARD if rng.random() < 0.5 else moduli.HodChart.CONJUGATE
    lam = _cpx(rng)
    while abs(lam) < 1e-3:
        lam = _cpx(rng)
    return moduli.HodPoint(chart, lam, _cpx(rng))


Check = Callable[[np.random.Generator, int], float]
CHECKS: dict[str, list[tuple[str, float, Check]]] = {s: [] for s in SUITES}


def check(suite: str, name: str, tol: float):
    def deco(fn: Check) -> Check:
        CHECKS[suite].append((name, tol, fn))
        return fn
    return deco


def _max(values) -> float:
    out = 0.0
    for v in values:
        if not v <= out:
            out = v if not math.isnan(v) else math.inf
    return out


# -- circle ------------------------------------------------------------------


@check("circle", "exp-perp unit invariant", 1e-12)
def _(rng, n):
    return _max(circle.unit_defect(c.x, c.y) for c in
                (circle.exp_perp(complex(rng.normal(scale=5), rng.normal())) for _ in range(n)))


@check("circle", "exp-perp homomorphism", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        s, t = complex(rng.normal(), rng.normal(scale=0.3)), complex(rng.normal(), rng.normal(scale=0.3))
        lhs = circle.exp_perp(s + t)
        rhs = circle.circle_mul(circle.exp_perp(s), circle.exp_perp(t))
        out.append(lhs.distance(rhs) / max(1.0, abs(lhs.x), abs(lhs.y)))
    return _max(out)


@check("circle", "circular log inverts exp-perp", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        c = circle.exp_perp(complex(rng.normal(), rng.normal(scale=0.3)))
        out.append(circle.circular_log(c).point().distance(c))
    return _max(out)


@check("circle", "inverse and conjugate choice", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        c = circle.exp_perp(complex(rng.normal(), rng.normal(scale=0.3)))
        e = circle.circle_mul(c, circle.circle_inv(c))
        out.append(e.distance(circle.IDENTITY) / (abs(c.x) ** 2 + abs(c.y) ** 2))
        out.append(circle.conjugate_choice(c).distance(c.inverse()))
    return _max(out)


# -- sphere ------------------------------------------------------------------


@check("sphere", "antipode involution", 1e-12)
def _(rng, n):
    pts = [sphere.random_point(rng) for _ in range(n)]
    return _max(sphere.antipode(sphere.antipode(p)).distance(p) for p in pts)


@check("sphere", "antipode has no fixed points", 1e-12)
def _(rng, n):
    # antipodal points are at chordal distance exactly 1
    pts = [sphere.random_point(rng) for _ in range(n)]
    return _max(abs(p.distance(sphere.antipode(p)) - 1.0) for p in pts)


@check("sphere", "PSU(2) commutes with antipode", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        f, p = sphere.random_map(rng), sphere.random_point(rng)
        out.append(f(sphere.antipode(p)).distance(sphere.antipode(f(p))))
    return _max(out)


@check("sphere", "composition and inverse", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        f, g, p = sphere.random_map(rng), sphere.random_map(rng), sphere.random_point(rng)
        out.append(sphere.moebius_compose(f, g)(p).distance(f(g(p))))
        out.append(sphere.moebius_compose(f, sphere.moebius_inverse(f)).distance(sphere.IDENTITY_MAP))
    return _max(out)


@check("sphere", "chart transition round trip", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        p = sphere.random_point(rng, scale=3.0)
        other = p.chart.other()
        if p.coord == 0:
            continue
        q = sphere.SpherePoint(other, p.coordinate_in(other))
        out.append(q.distance(p))
    return _max(out)


# -- tate --------------------------------------------------------------------


@check("tate", "eq-sigma involutivity", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        t = _twistor(rng)
        out.append((tate.sigma_section(tate.sigma_section(t)) - t).norm())
    return _max(out)


@check("tate", "eq-sigma matches total-space lift", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        t, p = _twistor(rng), sphere.random_point(rng)
        lhs = tate.sigma_total(tate.evaluate(t, p))
        rhs = tate.evaluate(tate.sigma_section(t), sphere.antipode(p))
        out.append(lhs.distance(rhs) / max(1.0, t.norm()))
    return _max(out)


@check("tate", "total-space involution", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        x = tate.FiberVector(sphere.random_point(rng), _cpx(rng))
        out.append(tate.sigma_total(tate.sigma_total(x)).distance(x))
    return _max(out)


@check("tate", "fixed locus is psi(a, alpha)", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        s = _section(rng)
        t = tate.embed_invariant(s)
        out.append(tate.invariance_defect(t))
        out.append(tate.extract_invariant(t).distance(s))
        # averaging any section lands in the fixed locus
        u = _twistor(rng)
        avg = (u + tate.sigma_section(u)).scale(0.5)
        out.append(tate.invariance_defect(avg))
    return _max(out)


@check("tate", "gauge generator coordinates (1, -p)", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        p = _cpx(rng)
        w, r = tate.coords_at(tate.GAUGE_GENERATOR, p)
        out.append(max(abs(w - 1.0), abs(r + p)))
    return _max(out)


@check("tate", "coordinates round trip", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        s, p = _section(rng), _cpx(rng)
        w, r = tate.coords_at(s, p)
        scale = max(1.0, abs(p) ** 2)
        out.append(tate.from_coords(w, r, p).distance(s) / scale)
    return _max(out)


@check("tate", "nu vanishes with expansion factor -1", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        p = sphere.random_point(rng)
        v = tate.nu(p)
        t = tate.embed_invariant(v)
        out.append(abs(tate.expansion_factor(t, p) + 1.0))
        out.append(abs(tate.evaluate(t, sphere.antipode(p)).value))
        out.append(abs(tate.inner(v, v) - 1.0))
        out.append(tate.sphere_from_unit(v).distance(p))
    return _max(out)


@check("tate", "PSU(2) equivariance of nu", 1e-9)
def _(rng, n):
    out = []
    for _ in range(n):
        f, p = sphere.random_map(rng), sphere.random_point(rng)
        out.append(tate.pushforward_invariant(f, tate.nu(p)).distance(tate.nu(f(p))))
        s, t = _section(rng), _section(rng)
        fs, ft = tate.pushforward_invariant(f, s), tate.pushforward_invariant(f, t)
        out.append(abs(tate.inner(fs, ft) - tate.inner(s, t)) / max(1.0, abs(tate.inner(s, t))))
    return _max(out)


@check("tate", "pushforward is a group action", 1e-9)
def _(rng, n):
    out = []
    for _ in range(n):
        f, g, t = sphere.random_map(rng), sphere.random_map(rng), _twistor(rng)
        lhs = tate.pushforward(sphere.moebius_compose(f, g), t)
        rhs = tate.pushforward(f, tate.pushforward(g, t))
        out.append((lhs - rhs).norm() / max(1.0, t.norm()))
    return _max(out)


# -- moduli ------------------------------------------------------------------


@check("moduli", "C, D, N are commuting involutions", 1e-10)
def _(rng, n):
    ops = (moduli.inv_C, moduli.inv_D, moduli.inv_N)
    out = []
    for _ in range(n):
        x = _hod(rng)
        for f in ops:
            out.append(moduli.point_distance(f(f(x)), x))
            for g in ops:
                out.append(moduli.point_distance(f(g(x)), g(f(x))))
    return _max(out)


@check("moduli", "sigma = C D N, involutive, covers antipode", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        x = _hod(rng)
        s = moduli.inv_sigma(x)
        out.append(moduli.point_distance(s, moduli.inv_C(moduli.inv_D(moduli.inv_N(x)))))
        out.append(moduli.point_distance(moduli.inv_sigma(s), x))
        out.append(s.base().distance(sphere.antipode(x.base())))
    return _max(out)


@check("moduli", "gluing round trip", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        x = _hod(rng)
        y = moduli.deligne_glue(moduli.deligne_glue(x))
        out.append(max(abs(y.lam - x.lam), abs(y.alpha - x.alpha)) / max(1.0, abs(x.alpha)))
    return _max(out)


@check("moduli", "glue after gauge(k) = gauge(-k) after glue", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        x, k = _hod(rng), int(rng.integers(-5, 6))
        lhs = moduli.deligne_glue(moduli.canonical_gauge(x, k))
        rhs = moduli.canonical_gauge(moduli.deligne_glue(x), -k)
        out.append(moduli.point_distance(lhs, rhs))
        lhs = moduli.deligne_glue(moduli.gauge(x, k))
        rhs = moduli.gauge(moduli.deligne_glue(x), k)
        out.append(moduli.point_distance(lhs, rhs))
    return _max(out)


@check("moduli", "monodromy is gauge invariant", 1e-9)
def _(rng, n):
    out = []
    for _ in range(n):
        x, k = _hod(rng), int(rng.integers(-5, 6))
        x = moduli.HodPoint(x.chart, x.lam, x.lam * complex(rng.normal(), rng.normal(scale=0.2)))
        out.append(moduli.monodromy(moduli.gauge(x, k)).distance(moduli.monodromy(x)))
    return _max(out)


@check("moduli", "section graphs are sigma-equivariant", 1e-10)
def _(rng, n):
    out = []
    for _ in range(n):
        g = moduli.SectionGraph(_section(rng))
        p = sphere.random_point(rng)
        out.append(moduli.point_distance(moduli.inv_sigma(g.at(p)), g.at(sphere.antipode(p))))
    return _max(out)


# -- lattice -----------------------------------------------------------------


def _snf_defect(m: list[list[int]]) -> float:
    r, c = len(m), len(m[0])
    f = lattice.smith_normal_form(m)
    u, v = np.array(f.left, dtype=object), np.array(f.right, dtype=object)
    ok = (u.dot(np.array(m, dtype=object)).dot(v) == np.array(f.diagonal_matrix(), dtype=object)).all()
    ok &= lattice.is_smith_diagonal(f.diagonal)
    ok &= abs(lattice._bareiss_det(f.left)) == 1 and abs(lattice._bareiss_det(f.right)) == 1
    g = 0
    for row in m:
        for x in row:
            g = math.gcd(g, x)
    ok &= f.diagonal[0] == g
    if r == c:
        prod = 1
        for d in f.diagonal:
            prod *= d
        ok &= prod == abs(lattice._bareiss_det(m))
    return 0.0 if ok else 1.0


@check("lattice", "Smith form invariants", 0.0)
def _(rng, n):
    out = []
    for _ in range(min(n, 2000)):
        r, c = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        m = rng.integers(-9, 10, size=(r, c)).tolist()
        out.append(_snf_defect(m))
    return _max(out)


@check("lattice", "built-in sequences exact", 0.0)
def _(rng, n):
    out = []
    names = list(lattice.BUILTINS) + [f"curve-g{g}-k{k}" for g in range(3) for k in range(1, 4)]
    for name in names:
        rep = lattice.analyze_descriptor(lattice.builtin(name))
        out.append(0.0 if rep.ok else 1.0)
    return _max(out)


@check("lattice", "b = k - 1 for punctured curves", 0.0)
def _(rng, n):
    out = []
    for _ in range(min(n, 50)):
        g, k = int(rng.integers(0, 6)), int(rng.integers(1, 8))
        d = lattice.punctured_curve(g, k)
        r = lattice.grw2(d)
        out.append(float(abs(r.b - (k - 1)) + abs(r.h1U.rank - (2 * g + k - 1))))
    return _max(out)


@check("lattice", "saturation is idempotent with finite index", 0.0)
def _(rng, n):
    out = []
    for _ in range(min(n, 200)):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        gens = rng.integers(-6, 7, size=(rows, cols)).tolist()
        lat = lattice.Sublattice(lattice._dm(gens))
        sat = lat.saturation()
        sat2 = sat.saturation()
        bad = sat.rank != lat.rank or sat2.rank != sat.rank
        bad |= not all(sat.contains(v) for v in lat.basis)
        bad |= not all(sat.contains(v) for v in sat2.basis) or not all(sat2.contains(v) for v in sat.basis)
        q = lattice.subquotient(sat, lat).group
        bad |= q.rank != 0
        out.append(1.0 if bad else 0.0)
    return _max(out)


# -- harmonic ----------------------------------------------------------------


@check("harmonic", "dictionary round trip", 1e-12)
def _(rng, n):
    out = []
    for _ in range(n):
        h = harmonic.HarmonicDatum(tuple(_section(rng) for _ in range(3)))
        p = _cpx(rng)
        back = harmonic.invert_from_point(harmonic.evaluate_at(h, p), p)
        out.append(back.distance(h) / max(1.0, abs(p) ** 2))
    return _max(out)


@check("harmonic", "chamber invariant and gauge equivariance", 0.0)
def _(rng, n):
    out = []
    for _ in range(max(1, n // 20)):
        h = harmonic.HarmonicDatum((_section(rng), _section(rng)))
        path = harmonic.auto_refine(h, harmonic.circle_path(8, radius=abs(rng.normal()) + 0.1))
        c0 = rng.normal(size=2)
        tr = harmonic.track_chambers(h, path, c0)
        g = [int(x) for x in rng.integers(-3, 4, size=2)]
        tr2 = harmonic.track_chambers(h.gauge_shift(g), path, c0)
        bad = not all(s.invariant_holds() for s in tr.states)
        bad |= any(not s2.invariant_holds() or any(o2 != o - gi for o, o2, gi in zip(s.offsets, s2.offsets, g))
                   for s, s2 in zip(tr.states, tr2.states))
        out.append(1.0 if bad else 0.0)
    return _max(out)


@check("harmonic", "refinement leaves offsets unchanged", 0.0)
def _(rng, n):
    out = []
    for _ in range(max(1, n // 20)):
        h = harmonic.HarmonicDatum((_section(rng),))
        p, q = _cpx(rng), _cpx(rng)
        path = harmonic.auto_refine(h, [p, q])
        c0 = float(rng.normal())
        a = harmonic.track_chambers(h, path, c0).final_offsets
        b = harmonic.track_chambers(h, harmonic.refine_path(path, 10), c0).final_offsets
        out.append(0.0 if a == b else 1.0)
    return _max(out)


@check("harmonic", "closed loops have zero net offset", 0.0)
def _(rng, n):
    out = []
    for _ in range(max(1, n // 20)):
        h = harmonic.HarmonicDatum((_section(rng),))
        loop = harmonic.auto_refine(h, harmonic.circle_path(6, radius=2 * abs(rng.normal()), center=_cpx(rng)))
        out.append(float(abs(harmonic.monodromy_of_weights(h, loop, float(rng.normal()))[0])))
    return _max(out)


def run(suites=SUITES, samples: int = 1000, seed: int = 0, tol: float | None = None) -> list[IdentityResult]:
    results = []
    for suite in suites:
        for name, default_tol, fn in CHECKS[suite]:
            rng = _rng(seed, suite, name)
            error = None
            try:
                defect = float(fn(rng, samples))
            except Exception as e:  # a crash inside a check counts as a failure of that identity
                defect, error = math.inf, f"{type(e).__name__}: {e}"
            results.append(IdentityResult(suite, name, defect, default_tol if tol is None else tol,
                                          samples, seed, error))
    return results
