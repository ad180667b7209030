import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dhtwistor import lattice as L
from dhtwistor.lattice import FgAbGroup, GeometryDescriptor, LatticeMap, free

entries = st.integers(-12, 12)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [draw(st.lists(entries, min_size=c, max_size=c)) for _ in range(r)]


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def test_snf_examples():
    assert L.smith_normal_form([[1, 0], [0, 1]]).diagonal == (1, 1)
    assert L.smith_normal_form([[2, 4], [6, 8]]).diagonal == (2, 4)
    assert L.smith_normal_form([[0, 0, 0], [0, 0, 0]]).diagonal == (0, 0)
    assert L.smith_normal_form(np.array([[6]])).diagonal == (6,)


@given(matrices())
def test_snf_against_determinantal_divisors(m):
    f = L.smith_normal_form(m)
    assert matmul(matmul(f.left, m), f.right) == f.diagonal_matrix()
    assert abs(L._bareiss_det(f.left)) == 1 and abs(L._bareiss_det(f.right)) == 1
    assert L.is_smith_diagonal(f.diagonal)
    dd = L.determinantal_divisors(m)
    prod = 1
    for k, d in enumerate(f.diagonal):
        prod *= d
        assert prod == dd[k]


@given(matrices())
def test_snf_idempotent(m):
    d = L.smith_normal_form(m).diagonal_matrix()
    assert L.smith_normal_form(d).diagonal_matrix() == d


def test_bareiss_against_numpy():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        m = rng.integers(-9, 10, size=(n, n))
        assert L._bareiss_det(m.tolist()) == round(np.linalg.det(m))


def test_group_normal_form():
    assert FgAbGroup.from_orders(0, [2, 3]) == FgAbGroup(0, (6,))
    assert FgAbGroup.from_orders(1, [4, 6, 0, 1]) == FgAbGroup(2, (2, 12))
    assert FgAbGroup.parse("Z^2 + Z/2 + Z/3") == FgAbGroup(2, (6,))
    assert str(FgAbGroup(1, (2, 4))) == "Z + Z/2 + Z/4"
    assert str(L.TRIVIAL) == "0"
    with pytest.raises(ValueError):
        FgAbGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FgAbGroup(0, (1,))


def test_map_well_definedness():
    z2, z4, z = FgAbGroup(0, (2,)), FgAbGroup(0, (4,)), free(1)
    LatticeMap(z2, z4, [[2]])
    with pytest.raises(L.IllDefinedMapError):
        LatticeMap(z2, z4, [[1]])
    with pytest.raises(L.IllDefinedMapError):
        LatticeMap(z2, z, [[1]])
    with pytest.raises(L.ShapeMismatchError):
        LatticeMap(z, z, [[1, 2]])


def test_check_exact_examples():
    z, z2, o = free(1), FgAbGroup(0, (2,)), L.TRIVIAL
    v = L.check_exact([o, z, z, o], [L.zero_map(o, z), LatticeMap(z, z, [[1]]), L.zero_map(z, o)])
    assert all(x.exact for x in v)
    v = L.check_exact([o, z, z, z2, o], [L.zero_map(o, z), LatticeMap(z, z, [[2]]), LatticeMap(z, z2, [[1]]), L.zero_map(z2, o)])
    assert [x.exact for x in v] == [True, True, True]


def test_check_exact_reports_homology():
    z, o = free(1), L.TRIVIAL
    v = L.check_exact([z, z, o], [LatticeMap(z, z, [[2]]), L.zero_map(z, o)])
    assert not v[0].exact and v[0].homology == FgAbGroup(0, (2,))
    v = L.check_exact([o, free(2), z], [L.zero_map(o, free(2)), LatticeMap(free(2), z, [[1, 1]])])
    assert v[0].homology == free(1)


def test_check_exact_not_a_complex():
    z = free(1)
    v = L.check_exact([z, z, z], [LatticeMap(z, z, [[1]]), LatticeMap(z, z, [[1]])])
    assert not v[0].is_complex and "NOT A COMPLEX" in v[0].describe()


def test_check_exact_shape_mismatch():
    z = free(1)
    with pytest.raises(L.ShapeMismatchError):
        L.check_exact([z, free(2), z], [LatticeMap(z, z, [[1]]), LatticeMap(z, z, [[1]])])
    with pytest.raises(L.ShapeMismatchError):
        L.check_exact([z, z], [])


def _index_brute_force(basis, n, box=6):
    """Count residues of the cube [0, box)^n modulo a full-rank lattice, box a multiple of the index."""
    lat = L.Sublattice.from_columns(basis, n)
    reps = set()
    for x in itertools.product(range(box), repeat=n):
        # canonical representative: coordinates modulo the SNF diagonal
        y = lat._u * L._from_columns([list(x)], n)
        y = tuple(int(r[0]) % d for r, d in zip(y.to_list(), lat.diag))
        reps.add(y)
    return len(reps)


def test_subquotient_order_matches_determinant():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m = rng.integers(-4, 5, size=(2, 2))
        det = abs(round(np.linalg.det(m)))
        if det == 0:
            continue
        outer = L.Sublattice.from_columns([[1, 0], [0, 1]], 2)
        inner = L.Sublattice.from_columns(m.T.tolist(), 2)
        q = L.subquotient(outer, inner).group
        assert q.order == det
        assert _index_brute_force(m.T.tolist(), 2, box=det) == det


@given(matrices(3))
def test_saturation_properties(m):
    lat = L.Sublattice(L._dm(m))
    sat = lat.saturation()
    assert sat.rank == lat.rank
    assert all(sat.contains(v) for v in lat.basis)
    assert L.subquotient(sat, lat).group.rank == 0
    again = sat.saturation()
    assert all(again.contains(v) for v in sat.basis) and all(sat.contains(v) for v in again.basis)


@given(matrices(3))
def test_kernel_is_kernel(m):
    dm = L._dm(m)
    ker = L.integer_kernel(dm)
    rank = np.linalg.matrix_rank(np.array(m, dtype=float))
    assert len(ker) == len(m[0]) - rank
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_saturation_examples():
    ns, sat, inc, _ = L.saturation(L.builtin("p1-two-points"))
    assert ns == free(1) and sat == free(1)
    d = L.builtin("torsion-demo")
    ns, sat, inc, to_h2 = L.saturation(d)
    assert ns == free(1) and sat == free(1) and inc.matrix == ((2,),)
    d = L.builtin("torsion-h2")
    ns, sat, _, _ = L.saturation(d)
    assert sat == FgAbGroup(1, (2,))


def test_ns_u_tors_examples():
    assert L.ns_u_tors(L.builtin("p1-two-points")).is_trivial
    assert L.ns_u_tors(L.builtin("torsion-demo")) == FgAbGroup(0, (2,))
    assert L.ns_u_tors(L.builtin("p1xp1-both-rulings")).is_trivial
    # (Z + Z/2) / <(2, 1)> is cyclic of order 4
    assert L.ns_u_tors(L.builtin("torsion-h2")) == FgAbGroup(0, (4,))


def test_b_rank_examples():
    assert L.b_rank(L.builtin("p1-two-points")) == 1
    for g in range(4):
        for k in range(1, 6):
            assert L.b_rank(L.punctured_curve(g, k)) == k - 1
    assert L.b_rank(L.builtin("p1xp1-both-rulings")) == 0
    assert L.b_rank(L.punctured_curve(1, 0)) == 0


def test_grw2_examples():
    r = L.grw2(L.builtin("p1-two-points"))
    assert (r.b, r.ns_sat, r.ns_u_tors) == (1, free(1), L.TRIVIAL)
    r = L.grw2(L.builtin("genus1-k1"))
    assert (r.b, r.ns_sat, r.ns_u_tors) == (0, free(1), L.TRIVIAL)
    r = L.grw2(L.builtin("torsion-demo"))
    assert (r.b, r.ns_sat, r.ns_u_tors) == (0, free(1), FgAbGroup(0, (2,)))
    assert r.continuous_real_dimension == 0
    assert any("subgroup of Z/2" in line for line in r.lines())


@pytest.mark.parametrize("g,k,rank", [(0, 2, 1), (1, 1, 2), (2, 3, 6)])
def test_rank_h1u(g, k, rank):
    d = L.punctured_curve(g, k)
    rep = L.analyze_descriptor(d)
    assert rep.grw2.h1U.rank == rank
    assert rep.ok


def test_all_builtins_exact():
    for name in L.BUILTINS:
        rep = L.analyze_descriptor(L.builtin(name))
        assert rep.ok, name
        for seq, verdicts in rep.sequences:
            assert all(v.exact for v in verdicts), (name, seq.name)


def test_random_descriptors_give_exact_sequences():
    rng = np.random.default_rng(9)
    for _ in range(40):
        r2 = int(rng.integers(0, 3))
        tors = [(), (2,), (3,), (2, 4)][int(rng.integers(0, 4))]
        h2 = FgAbGroup(r2, tors)
        k = int(rng.integers(0, 4))
        rows = rng.integers(-3, 4, size=(h2.ngens, k)).tolist()
        d = GeometryDescriptor(k, free(2 * int(rng.integers(0, 3))), h2, rows)
        rep = L.analyze_descriptor(d)
        assert rep.ok, d


def test_descriptor_shape_errors():
    with pytest.raises(L.DescriptorError):
        GeometryDescriptor(2, free(0), free(1), ((1,),))
    with pytest.raises(L.DescriptorError):
        GeometryDescriptor(1, free(0), free(2), ((1,),))


def test_inconsistent_descriptor_is_named():
    d = GeometryDescriptor(1, FgAbGroup(1, (2,)), free(1), ((1,),))
    rep = L.analyze_descriptor(d)
    assert not rep.ok
    assert any(i.startswith("h1X-torsion") for i in rep.issues)
    assert any(i.startswith("odd-b1") for i in rep.issues)


def test_c1_defect():
    d = L.builtin("p1-two-points")
    assert np.allclose(L.c1_defect(d, [0], [0.5, -0.5]), 0)
    assert np.allclose(L.c1_defect(d, [1], [0.5, 0.5], lam=-1), 0)
    assert not np.allclose(L.c1_defect(d, [0], [1, 1]), 0)
    with pytest.raises(L.ShapeMismatchError):
        L.c1_defect(d, [0], [1])


def test_builtin_lookup():
    assert L.builtin("@curve-g3-k2").h1X == free(6)
    with pytest.raises(KeyError):
        L.builtin("nope")


def test_big_integers_stay_exact():
    m = [[10**30, 0], [0, 3 * 10**30]]
    assert L.smith_normal_form(m).diagonal == (10**30, 3 * 10**30)
