import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from dhtwistor import harmonic, lattice, tate
from dhtwistor.circle import exp_perp
from dhtwistor.harmonic import HarmonicDatum
from dhtwistor.tate import InvariantSection

from conftest import cpx, real

sections = st.builds(InvariantSection, st.floats(-3, 3), st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)))


def brute_crossings(weights, c):
    """Signed count of walls c + m crossed upward, sample by sample."""
    up = down = 0
    for w0, w1 in zip(weights, weights[1:]):
        for m in range(math.floor(min(w0, w1) - c) - 1, math.ceil(max(w0, w1) - c) + 2):
            wall = c + m
            if w0 < wall <= w1:
                up += 1
            elif w1 < wall <= w0:
                down += 1
    return up, down


def test_preferred_sections_values():
    h = HarmonicDatum.from_pairs([(0, 0), (0.3, 1 - 2j), (1, 0)])
    vals = harmonic.evaluate_at(h, 0)
    assert vals[0] == (0, 0) and vals[1] == (0.3, 1 - 2j)
    assert harmonic.evaluate_at(h, 1)[2] == (1, -1)
    for p in (0.5, 2j, -3):
        assert harmonic.evaluate_at(h, p)[0] == (0, 0)


@given(st.lists(sections, min_size=1, max_size=4), cpx)
def test_invert_from_point_round_trip(secs, p):
    h = HarmonicDatum(tuple(secs))
    back = harmonic.invert_from_point(harmonic.evaluate_at(h, p), p)
    assert back.distance(h) < 1e-12 * max(1, abs(p) ** 2) * 10


def test_invert_gauge_generator():
    p = 0.3 - 0.8j
    h = harmonic.invert_from_point([(1, -p)], p)
    assert h.sections[0].distance(tate.GAUGE_GENERATOR) < 1e-15


def test_c1_check_on_p1():
    d = lattice.builtin("p1-two-points")
    for b in (0.25, 1.0, -3.5):
        p = 0.4 + 0.1j
        ok = harmonic.invert_from_point([(b, 0.1), (-b, 0.2j)], p, d, [0])
        assert ok.k == 2
        with pytest.raises(harmonic.C1ObstructionError) as e:
            harmonic.invert_from_point([(b, 0.1), (b, 0.2j)], p, d, [0])
        assert np.allclose(e.value.defect, [2 * b])


def test_descriptor_length_checked():
    with pytest.raises(lattice.ShapeMismatchError):
        HarmonicDatum((InvariantSection(0, 0),), descriptor=lattice.builtin("p1-two-points"))


def test_uniqueness_from_point_data():
    mono = (exp_perp(0.2),)
    h1 = HarmonicDatum((InvariantSection(0.5, 1j),), monodromy=mono)
    p = 0.7 + 0.2j
    h2 = harmonic.invert_from_point(harmonic.evaluate_at(h1, p), p, monodromy=mono)
    assert harmonic.same_by_point_data(h1, h2, p) and h1.distance(h2) < 1e-12
    h3 = HarmonicDatum((InvariantSection(0.5, 1j + 1e-3),), monodromy=mono)
    assert not harmonic.same_by_point_data(h1, h3, p)
    h4 = HarmonicDatum(h1.sections, monodromy=(exp_perp(0.3),))
    assert not harmonic.same_by_point_data(h1, h4, p)


def test_constant_path():
    h = HarmonicDatum.from_pairs([(0.3, 0.1)])
    tr = harmonic.track_chambers(h, [0.2] * 5, 0.0)
    assert all(s.offsets == (0,) for s in tr.states)
    assert harmonic.monodromy_of_weights(h, [0.2] * 5) == (0,)


def test_real_axis_example():
    h = HarmonicDatum.from_pairs([(0.5, 1)])
    for n in (8, 80, 800):
        tr = harmonic.track_chambers(h, harmonic.segment_path(0, 1, n), 0.0)
        assert tr.final_offsets == (-2,)
        assert tr.net_offsets == (-2,)
        assert all(s.invariant_holds() for s in tr.states)
    # walls at p = 1/4 and 3/4 are hit exactly by the 8-step path and flagged
    tr = harmonic.track_chambers(h, harmonic.segment_path(0, 1, 8), 0.0)
    assert tr.wall_hits == [(2, 0), (6, 0)]
    w = [s.weights[0] for s in harmonic.track_chambers(h, harmonic.segment_path(0, 1, 1000), 0.0).states]
    assert brute_crossings(w, 0.0) == (2, 0)


def test_unit_circle_example():
    h = HarmonicDatum.from_pairs([(0, 0.5)])
    for n in (16, 160):
        loop = harmonic.circle_path(n)
        tr = harmonic.track_chambers(h, loop, -0.5)
        assert tr.net_offsets == (0,)
        assert all(abs(s.weights[0]) <= 1 + 1e-12 for s in tr.states)
        up, down = brute_crossings([s.weights[0] for s in tr.states], -0.5)
        assert up == down == 2
        assert harmonic.monodromy_of_weights(h, loop, -0.5) == (0,)


@given(sections, st.floats(-2, 2), st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)), st.floats(0.1, 3))
def test_closed_loops_have_zero_net_offset(s, c, center, r):
    # the weight is a single-valued function of p, so a loop crosses each wall equally often both ways
    h = HarmonicDatum((s,))
    loop = harmonic.auto_refine(h, harmonic.circle_path(12, r, center))
    assert harmonic.monodromy_of_weights(h, loop, c) == (0,)


@given(sections, cpx, cpx, st.floats(-2, 2))
def test_refinement_invariance(s, p, q, c):
    h = HarmonicDatum((s,))
    # the exact-comparison oracle disagrees with wall snapping right at a wall
    for z in (p, q):
        frac = (h.weights(z)[0] - c) % 1.0
        assume(1e-9 < frac < 1 - 1e-9)
    path = harmonic.auto_refine(h, [p, q])
    a = harmonic.track_chambers(h, path, c)
    b = harmonic.track_chambers(h, harmonic.refine_path(path, 10), c)
    assert a.final_offsets == b.final_offsets
    up, down = brute_crossings([st_.weights[0] for st_ in b.states], c)
    assert a.net_offsets == (-(up - down),)


@given(st.lists(sections, min_size=1, max_size=3), st.integers(-3, 3), st.floats(-1, 1))
def test_gauge_equivariance(secs, n, c):
    h = HarmonicDatum(tuple(secs))
    path = harmonic.auto_refine(h, harmonic.circle_path(8, 1.3))
    g = [n] * h.k
    # right at the edge of the snapping band rounding in w + n decides the chamber
    for p in path:
        for w in h.weights(p):
            d = abs((w - c) - round(w - c))
            assume(d < 1e-14 or d > 1e-10)
    a = harmonic.track_chambers(h, path, c)
    b = harmonic.track_chambers(h.gauge_shift(g), path, c)
    for s1, s2 in zip(a.states, b.states):
        assert all(abs(w2 - w1 - n) < 1e-12 for w1, w2 in zip(s1.weights, s2.weights))
        assert all(o2 == o1 - n for o1, o2 in zip(s1.offsets, s2.offsets))
        assert s2.invariant_holds()


def test_coarse_path_raises():
    h = HarmonicDatum.from_pairs([(0, 5)])
    with pytest.raises(harmonic.RefinePathError, match="refine path"):
        harmonic.track_chambers(h, [0, 1], 0.0)
    with pytest.raises(harmonic.RefinePathError):
        harmonic.auto_refine(h, [0, 1e6], max_depth=3)


def test_open_path_is_not_a_loop():
    with pytest.raises(ValueError):
        harmonic.monodromy_of_weights(HarmonicDatum.from_pairs([(0, 0)]), [0, 1])


def test_per_divisor_bases():
    h = HarmonicDatum.from_pairs([(0.5, 0), (0.5, 0)])
    tr = harmonic.track_chambers(h, [0], [0.0, 0.75])
    assert tr.final_offsets == (0, 1)
    with pytest.raises(lattice.ShapeMismatchError):
        harmonic.track_chambers(h, [0], [0.0, 1.0, 2.0])


def test_csv_export():
    h = HarmonicDatum.from_pairs([(0.5, 1)])
    text = harmonic.track_chambers(h, harmonic.segment_path(0, 1, 8), 0.0).to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "sample,p_re,p_im,divisor,weight,offset"
    assert lines[-1] == "8,1,0,0,2.5,-2"
    assert len(lines) == 10
