"""Integer linear algebra for the rank-one exact sequences over a pair (X, D).

Finitely generated abelian groups are kept in canonical form
``Z^rank + Z/d1 + ... + Z/dm`` with ``d1 | d2 | ... | dm`` and ``d1 > 1``.  Their
standard presentation has ``rank + m`` generators (free ones first) and the
diagonal relation matrix.  All arithmetic is exact Python integers; the Smith
normal form is computed by sympy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

IntMatrix = list[list[int]]


class ShapeMismatchError(ValueError):
    pass


class IllDefinedMapError(ValueError):
    pass


class DescriptorError(ValueError):
    pass


# -- matrix helpers ----------------------------------------------------------


def _dm(rows: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> DomainMatrix:
    rows = [[int(x) for x in r] for r in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise ShapeMismatchError(f"matrix rows do not match shape {shape}")
    if shape[0] == 0 or shape[1] == 0:
        return DomainMatrix.zeros(shape, ZZ).to_dense()
    return DomainMatrix(rows, shape, ZZ)


def _rows(m: DomainMatrix) -> IntMatrix:
    r, c = m.shape
    if r == 0 or c == 0:
        return [[] for _ in range(r)]
    return [[int(x) for x in row] for row in m.to_list()]


def _hstack(n: int, *blocks: DomainMatrix) -> DomainMatrix:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return DomainMatrix.zeros((n, 0), ZZ).to_dense()
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b)
    return out


def _columns(m: DomainMatrix) -> list[list[int]]:
    rows = _rows(m)
    return [[rows[i][j] for i in range(m.shape[0])] for j in range(m.shape[1])]


def _from_columns(cols: Sequence[Sequence[int]], n: int) -> DomainMatrix:
    return _dm([[int(c[i]) for c in cols] for i in range(n)], (n, len(cols)))


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right == diag(diagonal)`` (padded to m's shape)."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def diagonal_matrix(self) -> IntMatrix:
        r, c = self.shape
        out = [[0] * c for _ in range(r)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def _snf_dm(m: DomainMatrix) -> tuple[list[int], DomainMatrix, DomainMatrix]:
    r, c = m.shape
    if r == 0 or c == 0:
        return [], DomainMatrix.eye(r, ZZ).to_dense(), DomainMatrix.eye(c, ZZ).to_dense()
    s, u, v = smith_normal_decomp(m)
    rows = s.to_list()
    diag = [int(rows[i][i]) for i in range(min(r, c))]
    if any(d < 0 for d in diag):
        urows = _rows(u)
        for i, d in enumerate(diag):
            if d < 0:
                urows[i] = [-x for x in urows[i]]
                diag[i] = -d
        u = _dm(urows, (r, r))
    return diag, u.to_dense(), v.to_dense()


def smith_normal_form(m, shape: tuple[int, int] | None = None) -> SmithForm:
    """Smith normal form with unimodular transforms.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    (2, 4)
    """
    if isinstance(m, np.ndarray):
        shape = shape or m.shape
        m = m.tolist()
    dm = _dm(m, shape)
    diag, u, v = _snf_dm(dm)
    return SmithForm(tuple(diag), _rows(u), _rows(v), dm.shape)


def is_smith_diagonal(diag: Sequence[int]) -> bool:
    """Nonnegative, zeros last, each entry divides the next."""
    seen_zero = False
    for i, d in enumerate(diag):
        if d < 0:
            return False
        if d == 0:
            seen_zero = True
        elif seen_zero:
            return False
        if i + 1 < len(diag) and d != 0 and diag[i + 1] % d != 0:
            return False
    return True


# -- groups ------------------------------------------------------------------


@dataclass(frozen=True)
class FgAbGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if any(t <= 1 for t in tors):
            raise ValueError(f"torsion orders must exceed 1, got {tors}")
        if any(tors[i + 1] % tors[i] for i in range(len(tors) - 1)):
            raise ValueError(f"torsion orders must form a divisibility chain, got {tors}")
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_orders(cls, rank: int, orders: Sequence[int]) -> "FgAbGroup":
        """Normalize any list of cyclic orders (0 meaning Z) to invariant factors."""
        orders = [abs(int(o)) for o in orders]
        rank += sum(1 for o in orders if o == 0)
        finite = [o for o in orders if o > 1]
        if not finite:
            return cls(rank)
        n = len(finite)
        diag = smith_normal_form([[finite[i] if i == j else 0 for j in range(n)] for i in range(n)]).diagonal
        return cls(rank, tuple(d for d in diag if d > 1))

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Order of a finite group, None if infinite."""
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def relations(self) -> DomainMatrix:
        n = self.ngens
        cols = []
        for j, t in enumerate(self.torsion):
            col = [0] * n
            col[self.rank + j] = t
            cols.append(col)
        return _from_columns(cols, n)

    def is_zero(self, x: Sequence[int]) -> bool:
        x = list(x)
        if any(x[i] for i in range(self.rank)):
            return False
        return all(x[self.rank + j] % t == 0 for j, t in enumerate(self.torsion))

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        x = list(x)
        for j, t in enumerate(self.torsion):
            x[self.rank + j] %= t
        return tuple(x)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        text = text.strip()
        if text == "0":
            return cls(0)
        rank, orders = 0, []
        for part in text.split("+"):
            part = part.strip()
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                rank += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z/(\d+)", part)
            if not m:
                raise ValueError(f"cannot parse group term {part!r}")
            orders.append(int(m.group(1)))
        return cls.from_orders(rank, orders)


TRIVIAL = FgAbGroup(0)


def free(n: int) -> FgAbGroup:
    return FgAbGroup(n)


@dataclass(frozen=True)
class LatticeMap:
    """A homomorphism between canonical groups, as an integer matrix of shape
    (target.ngens, source.ngens) acting on generator coordinates."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix=None):
        if matrix is None:
            matrix = [[0] * source.ngens for _ in range(target.ngens)]
        if isinstance(matrix, np.ndarray):
            matrix = matrix.tolist()
        rows = tuple(tuple(int(x) for x in r) for r in matrix)
        if len(rows) != target.ngens or any(len(r) != source.ngens for r in rows):
            raise ShapeMismatchError(
                f"matrix shape ({len(rows)}, {len(rows[0]) if rows else '?'}) does not match "
                f"({target.ngens}, {source.ngens}) for {source} -> {target}"
            )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", rows)
        for j, t in enumerate(source.torsion):
            col = self.column(source.rank + j)
            if not target.is_zero([t * x for x in col]):
                raise IllDefinedMapError(
                    f"generator of order {t} is sent to an element whose {t}-multiple is nonzero"
                )

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.matrix]

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce([sum(a * b for a, b in zip(r, x)) for r in self.matrix])

    def dm(self) -> DomainMatrix:
        return _dm(self.matrix, (self.target.ngens, self.source.ngens))

    def compose(self, inner: "LatticeMap") -> "LatticeMap":
        """``self o inner``."""
        if inner.target != self.source:
            raise ShapeMismatchError(f"cannot compose {inner.source}->{inner.target} with {self.source}->{self.target}")
        prod = self.dm() * inner.dm()
        return LatticeMap(inner.source, self.target, _rows(prod))

    def is_zero(self) -> bool:
        return all(self.target.is_zero(self.column(j)) for j in range(self.source.ngens))


def zero_map(source: FgAbGroup, target: FgAbGroup) -> LatticeMap:
    return LatticeMap(source, target)


def identity_map(g: FgAbGroup) -> LatticeMap:
    n = g.ngens
    return LatticeMap(g, g, [[int(i == j) for j in range(n)] for i in range(n)])


# -- sublattices of Z^n ------------------------------------------------------


class NotInLatticeError(ValueError):
    pass


class Sublattice:
    """The column span of an integer matrix inside Z^n."""

    def __init__(self, gens: DomainMatrix):
        self.n = gens.shape[0]
        self.gens = gens
        diag, u, _ = _snf_dm(gens)
        self.diag = [d for d in diag if d != 0]
        self.rank = len(self.diag)
        self._u = u
        self._u_inv = u.inv_den()[0] if self.n else u
        if self.n:
            num, den = u.inv_den()
            # u is unimodular, so the denominator is +-1
            self._u_inv = num if den == 1 else -num
        cols = _columns(self._u_inv) if self.n else []
        self.saturated_basis = cols[: self.rank]
        self.basis = [[d * x for x in cols[i]] for i, d in enumerate(self.diag)]

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], n: int) -> "Sublattice":
        return cls(_from_columns(cols, n))

    def coords(self, x: Sequence[int]) -> list[int]:
        """Integer coordinates of x in ``basis``; raises if x is not in the lattice."""
        if self.n == 0:
            return []
        y = self._u * _from_columns([list(x)], self.n)
        y = [int(v) for v in (r[0] for r in y.to_list())]
        if any(y[self.rank:]):
            raise NotInLatticeError("vector is not in the rational span")
        out = []
        for yi, d in zip(y, self.diag):
            if yi % d:
                raise NotInLatticeError("vector is in the rational span but not in the lattice")
            out.append(yi // d)
        return out

    def contains(self, x: Sequence[int]) -> bool:
        try:
            self.coords(x)
        except NotInLatticeError:
            return False
        return True

    def saturation(self) -> "Sublattice":
        return Sublattice.from_columns(self.saturated_basis, self.n)

    def basis_matrix(self) -> DomainMatrix:
        return _from_columns(self.basis, self.n)


def integer_kernel(m: DomainMatrix) -> list[list[int]]:
    """A Z-basis of {x : m x = 0} as a list of column vectors."""
    r, c = m.shape
    if c == 0:
        return []
    if r == 0:
        return [[int(i == j) for i in range(c)] for j in range(c)]
    diag, _, v = _snf_dm(m)
    rank = sum(1 for d in diag if d != 0)
    return _columns(v)[rank:]


@dataclass
class Subquotient:
    """L / R for sublattices R <= L of Z^n, in canonical form.

    ``lifts`` are vectors of Z^n representing the canonical generators;
    ``project`` sends a vector of L to canonical coordinates.
    """

    group: FgAbGroup
    lifts: list[list[int]]
    _outer: Sublattice = field(repr=False)
    _u: DomainMatrix = field(repr=False)
    _kept: list[int] = field(repr=False)

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        c = self._outer.coords(x)
        if not c:
            return tuple(0 for _ in self._kept)
        y = self._u * _from_columns([c], len(c))
        y = [int(r[0]) for r in y.to_list()]
        return self.group.reduce([y[i] for i in self._kept])

    def projection_matrix(self, vectors: Sequence[Sequence[int]]) -> IntMatrix:
        cols = [self.project(v) for v in vectors]
        g = self.group.ngens
        return [[c[i] for c in cols] for i in range(g)]


def subquotient(outer: Sublattice, inner: Sublattice) -> Subquotient:
    if inner.n != outer.n:
        raise ShapeMismatchError("lattices live in different ambient spaces")
    coords = [outer.coords(v) for v in _columns(inner.gens)]
    rl = outer.rank
    c = _from_columns(coords, rl) if rl else DomainMatrix.zeros((0, len(coords)), ZZ).to_dense()
    diag, u, _ = _snf_dm(c)
    rc = sum(1 for d in diag if d != 0)
    free_idx = list(range(rc, rl))
    tors_idx = [i for i in range(rc) if diag[i] > 1]
    kept = free_idx + tors_idx
    group = FgAbGroup(len(free_idx), tuple(diag[i] for i in tors_idx))
    if rl:
        num, den = u.inv_den()
        u_inv = num if den == 1 else -num
        u_cols = _columns(u_inv)
        basis = outer.basis
        lifts = [[sum(basis[a][t] * u_cols[i][a] for a in range(rl)) for t in range(outer.n)] for i in kept]
    else:
        lifts = []
    return Subquotient(group, lifts, outer, u, kept)


def _group_lattice(g: FgAbGroup) -> Sublattice:
    return Sublattice(g.relations())


# -- exactness ---------------------------------------------------------------


@dataclass(frozen=True)
class JointVerdict:
    position: int
    label: str
    is_complex: bool
    homology: FgAbGroup | None

    @property
    def exact(self) -> bool:
        return self.is_complex and self.homology is not None and self.homology.is_trivial

    def describe(self) -> str:
        if not self.is_complex:
            return f"{self.label}: NOT A COMPLEX (composite map is nonzero)"
        if self.exact:
            return f"{self.label}: exact"
        return f"{self.label}: NOT EXACT, homology {self.homology}"


def kernel_lattice(f: LatticeMap) -> Sublattice:
    """Preimage of the relations of the target, as a lattice in Z^{source.ngens}."""
    a = f.source.ngens
    block = _hstack(f.target.ngens, f.dm(), -f.target.relations())
    ker = integer_kernel(block)
    cols = [v[:a] for v in ker] + _columns(f.source.relations())
    return Sublattice.from_columns(cols, a)


def image_lattice(f: LatticeMap) -> Sublattice:
    cols = [f.column(j) for j in range(f.source.ngens)] + _columns(f.target.relations())
    return Sublattice.from_columns(cols, f.target.ngens)


def kernel(f: LatticeMap) -> FgAbGroup:
    return subquotient(kernel_lattice(f), _group_lattice(f.source)).group


def image(f: LatticeMap) -> FgAbGroup:
    return subquotient(image_lattice(f), _group_lattice(f.target)).group


def cokernel(f: LatticeMap) -> FgAbGroup:
    full = Sublattice.from_columns([[int(i == j) for i in range(f.target.ngens)] for j in range(f.target.ngens)], f.target.ngens)
    return subquotient(full, image_lattice(f)).group


def check_exact(groups: Sequence[FgAbGroup], maps: Sequence[LatticeMap], labels: Sequence[str] | None = None) -> list[JointVerdict]:
    """Verify image == kernel at every interior group of ``G0 -> G1 -> ... -> Gn``."""
    if len(maps) != len(groups) - 1:
        raise ShapeMismatchError(f"{len(groups)} groups need {len(groups) - 1} maps, got {len(maps)}")
    for i, f in enumerate(maps):
        if f.source != groups[i] or f.target != groups[i + 1]:
            raise ShapeMismatchError(
                f"map {i} goes {f.source} -> {f.target}, expected {groups[i]} -> {groups[i + 1]}"
            )
    labels = list(labels) if labels is not None else [str(g) for g in groups]
    out = []
    for i in range(1, len(groups) - 1):
        f_in, f_out = maps[i - 1], maps[i]
        composite = f_out.compose(f_in)
        if not composite.is_zero():
            out.append(JointVerdict(i, labels[i], False, None))
            continue
        im = image_lattice(f_in)
        ker = kernel_lattice(f_out)
        out.append(JointVerdict(i, labels[i], True, subquotient(ker, im).group))
    return out


@dataclass(frozen=True)
class ExactSequence:
    name: str
    labels: tuple[str, ...]
    groups: tuple[FgAbGroup, ...]
    maps: tuple[LatticeMap, ...]

    def check(self) -> list[JointVerdict]:
        return check_exact(self.groups, self.maps, self.labels)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * g.rank for i, g in enumerate(self.groups))

    def __str__(self) -> str:
        return " -> ".join(f"{lab} [{g}]" for lab, g in zip(self.labels, self.groups))


# -- geometry descriptors ----------------------------------------------------


@dataclass(frozen=True)
class GeometryDescriptor:
    """Lattice data of a pair (X, D): H^1(X), H^2(X) and the classes [D_i].

    ``divisor_classes`` has one row per generator of ``h2X`` and k columns.
    """

    k: int
    h1X: FgAbGroup
    h2X: FgAbGroup
    divisor_classes: tuple[tuple[int, ...], ...]
    name: str = "descriptor"

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.divisor_classes)
        object.__setattr__(self, "divisor_classes", rows)
        if self.k < 0:
            raise DescriptorError("k must be nonnegative")
        if len(rows) != self.h2X.ngens:
            raise DescriptorError(
                f"divisor_classes has {len(rows)} rows but h2X = {self.h2X} has {self.h2X.ngens} generators"
            )
        for i, r in enumerate(rows):
            if len(r) != self.k:
                raise DescriptorError(f"divisor_classes row {i} has {len(r)} entries, expected k = {self.k}")

    def class_map(self) -> LatticeMap:
        return LatticeMap(free(self.k), self.h2X, self.divisor_classes)

    def free_block(self) -> np.ndarray:
        """The rows of the divisor-class matrix on the free part of H^2, as floats."""
        r = self.h2X.rank
        return np.array(self.divisor_classes[:r], dtype=float).reshape(r, self.k)


def descriptor_issues(d: GeometryDescriptor) -> list[str]:
    """Named internal inconsistencies of a descriptor (empty when consistent)."""
    issues = []
    if d.h1X.torsion:
        issues.append(f"h1X-torsion: H^1 of a compact manifold is torsion-free, got {d.h1X}")
    if d.h1X.rank % 2:
        issues.append(f"odd-b1: rank H^1(X) = {d.h1X.rank} must be even for a smooth projective variety")
    return issues


def _identity_columns(n: int) -> list[list[int]]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


@dataclass
class LatticeAnalysis:
    descriptor: GeometryDescriptor
    ns: Subquotient
    ns_sat: Subquotient
    ns_u_tors: Subquotient
    coker_sat: Subquotient
    coker_ns: Subquotient
    gauge_kernel: list[list[int]]
    b: int

    @property
    def h1U(self) -> FgAbGroup:
        # 0 -> H^1(X) -> H^1(U) -> ker(Z^k -> H^2 X) -> 0 splits: the kernel is free
        return FgAbGroup(self.descriptor.h1X.rank + self.b, self.descriptor.h1X.torsion)


def analyze(d: GeometryDescriptor) -> LatticeAnalysis:
    n = d.h2X.ngens
    rel = _group_lattice(d.h2X)
    dc = [list(c) for c in zip(*d.divisor_classes)] if n else [[] for _ in range(d.k)]
    rel_cols = _columns(d.h2X.relations())
    l_ns = Sublattice.from_columns(dc + rel_cols, n)
    l_sat = l_ns.saturation()
    l_sat = Sublattice.from_columns(l_sat.basis + rel_cols, n)
    whole = Sublattice.from_columns(_identity_columns(n), n)

    ns = subquotient(l_ns, rel)
    sat = subquotient(l_sat, rel)
    tors = subquotient(l_sat, l_ns)
    coker_sat = subquotient(whole, l_sat)
    coker_ns = subquotient(whole, l_ns)

    gk = integer_kernel(_hstack(n, d.class_map().dm(), -d.h2X.relations()))
    gauge_kernel = [v[: d.k] for v in gk]
    gl = Sublattice.from_columns(gauge_kernel, d.k) if d.k else None
    gauge_basis = gl.basis if gl is not None else []
    b = d.k - int(np.linalg.matrix_rank(d.free_block())) if d.k and d.h2X.rank else d.k
    if len(gauge_basis) != b:
        raise AssertionError(f"kernel rank {len(gauge_basis)} disagrees with k - rank = {b}")
    return LatticeAnalysis(d, ns, sat, tors, coker_sat, coker_ns, gauge_basis, b)


def saturation(d: GeometryDescriptor) -> tuple[FgAbGroup, FgAbGroup, LatticeMap, LatticeMap]:
    """``(NS(X,D), NS(X,D)^sat, NS -> sat, sat -> H^2 X)``."""
    a = analyze(d)
    ns_to_sat = LatticeMap(a.ns.group, a.ns_sat.group, a.ns_sat.projection_matrix(a.ns.lifts))
    sat_to_h2 = LatticeMap(a.ns_sat.group, d.h2X, _lifts_matrix(a.ns_sat.lifts, d.h2X.ngens))
    return a.ns.group, a.ns_sat.group, ns_to_sat, sat_to_h2


def ns_u_tors(d: GeometryDescriptor) -> FgAbGroup:
    return analyze(d).ns_u_tors.group


def b_rank(d: GeometryDescriptor) -> int:
    """k minus the rational rank of the divisor classes."""
    if d.k == 0:
        return 0
    if d.h2X.rank == 0:
        return d.k
    return d.k - int(np.linalg.matrix_rank(d.free_block()))


def _lifts_matrix(lifts: Sequence[Sequence[int]], n: int) -> IntMatrix:
    return [[v[i] for v in lifts] for i in range(n)]


@dataclass(frozen=True)
class Grw2Report:
    b: int
    ns: FgAbGroup
    ns_sat: FgAbGroup
    ns_u_tors: FgAbGroup
    h1U: FgAbGroup

    @property
    def continuous_real_dimension(self) -> int:
        """Real dimension of the sigma-invariant sections of T(1,log)^b."""
        return 3 * self.b

    def lines(self) -> list[str]:
        return [
            f"0 -> T(1,log)^{self.b} -> Gr^W_2 M_DH(X,log D) -> NS(X,D)^sat = {self.ns_sat} -> 0",
            f"0 -> Gm(1)^{self.b} -> Gr^W_2 M_DH(U) -> NS(U)^tors = {self.ns_u_tors} -> 0",
            f"0 -> Z^{self.b} -> Z^k -> NS(X,D) = {self.ns} -> 0",
            f"component group K of invariant sections: a subgroup of {self.ns_u_tors} (not determined by the descriptor)",
        ]


def grw2(d: GeometryDescriptor) -> Grw2Report:
    a = analyze(d)
    return Grw2Report(a.b, a.ns.group, a.ns_sat.group, a.ns_u_tors.group, a.h1U)


def descriptor_to_sequences(d: GeometryDescriptor) -> list[ExactSequence]:
    a = analyze(d)
    n = d.h2X.ngens
    zk = free(d.k)
    h1X, h1U, h2X = d.h1X, a.h1U, d.h2X
    r1, b = h1X.rank, a.b

    # H^1(X) -> H^1(U): free and torsion generators go to their namesakes
    inc = [[0] * h1X.ngens for _ in range(h1U.ngens)]
    for i in range(r1):
        inc[i][i] = 1
    for j in range(len(h1X.torsion)):
        inc[r1 + b + j][r1 + j] = 1
    # H^1(U) -> Z^k: the extra free generators map onto the gauge kernel
    res = [[0] * h1U.ngens for _ in range(d.k)]
    for j, v in enumerate(a.gauge_kernel):
        for i in range(d.k):
            res[i][r1 + j] = v[i]
    coker = a.coker_ns.group
    proj = a.coker_ns.projection_matrix(_identity_columns(n))

    long_seq = ExactSequence(
        "cohomology of (X, U)",
        ("0", "H1(X)", "H1(U)", "Z^k", "H2(X)", "H2(X)/NS(X,D)", "0"),
        (TRIVIAL, h1X, h1U, zk, h2X, coker, TRIVIAL),
        (
            zero_map(TRIVIAL, h1X),
            LatticeMap(h1X, h1U, inc),
            LatticeMap(h1U, zk, res),
            d.class_map(),
            LatticeMap(h2X, coker, proj),
            zero_map(coker, TRIVIAL),
        ),
    )

    zb = free(b)
    ns = a.ns.group
    gauge_seq = ExactSequence(
        "gauge group modulo its trivially acting part",
        ("0", "Z^b", "Z^k", "NS(X,D)", "0"),
        (TRIVIAL, zb, zk, ns, TRIVIAL),
        (
            zero_map(TRIVIAL, zb),
            LatticeMap(zb, zk, _lifts_matrix(a.gauge_kernel, d.k) if d.k else []),
            LatticeMap(zk, ns, a.ns.projection_matrix([list(c) for c in zip(*d.divisor_classes)] if n else [[]] * d.k) if d.k else [[] for _ in range(ns.ngens)]),
            zero_map(ns, TRIVIAL),
        ),
    )

    sat, tors = a.ns_sat.group, a.ns_u_tors.group
    sat_seq = ExactSequence(
        "saturation",
        ("0", "NS(X,D)", "NS(X,D)^sat", "NS(U)^tors", "0"),
        (TRIVIAL, ns, sat, tors, TRIVIAL),
        (
            zero_map(TRIVIAL, ns),
            LatticeMap(ns, sat, a.ns_sat.projection_matrix(a.ns.lifts)),
            LatticeMap(sat, tors, a.ns_u_tors.projection_matrix(a.ns_sat.lifts)),
            zero_map(tors, TRIVIAL),
        ),
    )

    csat = a.coker_sat.group
    sat_h2_seq = ExactSequence(
        "saturation inside H2(X)",
        ("0", "NS(X,D)^sat", "H2(X)", "H2(X)/NS(X,D)^sat", "0"),
        (TRIVIAL, sat, h2X, csat, TRIVIAL),
        (
            zero_map(TRIVIAL, sat),
            LatticeMap(sat, h2X, _lifts_matrix(a.ns_sat.lifts, n)),
            LatticeMap(h2X, csat, a.coker_sat.projection_matrix(_identity_columns(n))),
            zero_map(csat, TRIVIAL),
        ),
    )
    return [long_seq, gauge_seq, sat_seq, sat_h2_seq]


@dataclass
class DescriptorReport:
    descriptor: GeometryDescriptor
    issues: list[str]
    grw2: Grw2Report | None
    sequences: list[tuple[ExactSequence, list[JointVerdict]]]
    rank_checks: list[tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return (
            not self.issues
            and all(v.exact for _, vs in self.sequences for v in vs)
            and all(ok for _, ok in self.rank_checks)
        )


def analyze_descriptor(d: GeometryDescriptor) -> DescriptorReport:
    issues = descriptor_issues(d)
    report = grw2(d)
    seqs = [(s, s.check()) for s in descriptor_to_sequences(d)]
    checks = [
        (
            f"rank H1(U) = rank H1(X) + b: {report.h1U.rank} = {d.h1X.rank} + {report.b}",
            report.h1U.rank == d.h1X.rank + report.b,
        ),
        (
            f"H2(X)/NS(X,D)^sat is torsion-free: {analyze(d).coker_sat.group}",
            not analyze(d).coker_sat.group.torsion,
        ),
        (
            f"b = k - rank_Q(classes): {report.b} = {d.k} - {d.k - b_rank(d)}",
            report.b == b_rank(d),
        ),
    ]
    for s, _ in seqs:
        if s.groups[0].is_trivial and s.groups[-1].is_trivial:
            chi = s.euler_characteristic()
            checks.append((f"Euler characteristic of '{s.name}' vanishes: {chi}", chi == 0))
    return DescriptorReport(d, issues, report, seqs, checks)


def c1_defect(d: GeometryDescriptor, zeta: Sequence[float], residues: Sequence[complex], lam: complex = 1.0) -> np.ndarray:
    """``lam * zeta + sum_i r_i [D_i]`` on the free part of H^2 (zero when compatible)."""
    r = d.h2X.rank
    z = np.asarray(list(zeta)[:r], dtype=complex)
    res = np.asarray(list(residues), dtype=complex)
    if res.shape != (d.k,):
        raise ShapeMismatchError(f"expected {d.k} residues, got {res.shape}")
    return lam * z + d.free_block() @ res


# -- built-in descriptors ----------------------------------------------------


def punctured_curve(genus: int, k: int) -> GeometryDescriptor:
    """A genus-g curve minus k points: H^1 = Z^2g, H^2 = Z, every point has degree 1."""
    return GeometryDescriptor(k, free(2 * genus), free(1), ((1,) * k,), name=f"curve-g{genus}-k{k}")


def _builtins() -> dict[str, GeometryDescriptor]:
    out = {
        "p1-two-points": punctured_curve(0, 2),
        "genus1-k1": punctured_curve(1, 1),
        "genus2-k3": punctured_curve(2, 3),
        "torsion-demo": GeometryDescriptor(1, free(0), free(1), ((2,),), name="torsion-demo"),
        "torsion-h2": GeometryDescriptor(1, free(0), FgAbGroup(1, (2,)), ((2,), (1,)), name="torsion-h2"),
        "p1xp1-two-fibers": GeometryDescriptor(2, free(0), free(2), ((1, 1), (0, 0)), name="p1xp1-two-fibers"),
        "p1xp1-both-rulings": GeometryDescriptor(2, free(0), free(2), ((1, 0), (0, 1)), name="p1xp1-both-rulings"),
    }
    for name, d in list(out.items()):
        object.__setattr__(d, "name", name)
    return out


BUILTINS = _builtins()


def builtin(name: str) -> GeometryDescriptor:
    """Look up ``name`` (without the leading ``@``); ``curve-g<G>-k<K>`` is parametric."""
    name = name.lstrip("@")
    if name in BUILTINS:
        return BUILTINS[name]
    m = re.fullmatch(r"curve-g(\d+)-k(\d+)", name)
    if m:
        return punctured_curve(int(m.group(1)), int(m.group(2)))
    raise KeyError(f"unknown built-in descriptor {name!r}; known: {', '.join(sorted(BUILTINS))}, curve-g<G>-k<K>")


def determinantal_divisors(m: Sequence[Sequence[int]]) -> list[int]:
    """gcd of all i x i minors, i = 1..min(shape); brute force over minors."""
    from itertools import combinations

    rows = [list(map(int, r)) for r in m]
    r = len(rows)
    c = len(rows[0]) if rows else 0
    out = []
    for size in range(1, min(r, c) + 1):
        g = 0
        for ri in combinations(range(r), size):
            for ci in combinations(range(c), size):
                g = gcd(g, _bareiss_det([[rows[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def _bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant."""
    a = [row[:] for row in a]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
