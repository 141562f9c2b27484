"""Exact moment polytopes of toric bending actions and their classification.

Polytopes are tiny (dimension at most 3), so vertices are enumerated by
solving every dim-sized subsystem of halfspace boundaries with exact rational
Gaussian elimination; no convex-hull dependency.  Conjugacy of toric actions
is decided by matching polytopes up to unimodular integer transformations and
translations, completely in dimensions one and two and by invariant screening
in dimension three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations

from .bending import (
    BendingSet,
    canonical_member_key,
    is_full,
    maximal_elements,
    member_split,
    torus_dimension,
)
from .errors import (
    BendixError,
    DimensionMismatch,
    DimensionTooLarge,
    EquivalenceUndecided,
    NotFull,
    NotToric,
    PreconditionViolated,
)
from .model import LengthFunction, bits, format_rational
from .search import toric_bending_sets

Vector = tuple[Fraction, ...]
Halfspace = tuple[tuple[int, ...], Fraction]  # <normal, x> <= offset


def _solve_square(rows: list[tuple[int, ...]], rhs: list[Fraction]) -> Vector | None:
    """Solve a small square rational system; None when singular."""
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [v / factor for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                scale = aug[r][col]
                aug[r] = [v - scale * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[i][n] for i in range(n))


def _rank(rows: list[tuple]) -> int:
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        factor = mat[rank][col]
        mat[rank] = [v / factor for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                scale = mat[r][col]
                mat[r] = [v - scale * w for v, w in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _det(rows: list[tuple[int, ...]]) -> Fraction:
    n = len(rows)
    mat = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(col + 1, n):
            if mat[r][col] != 0:
                scale = mat[r][col]
                mat[r] = [v - scale * w for v, w in zip(mat[r], mat[col])]
    return det


def _primitive(diff: Vector) -> tuple[int, ...]:
    """Primitive integer vector pointing the same way as a rational one."""
    scale = math.lcm(*(f.denominator for f in diff))
    ints = [int(f * scale) for f in diff]
    g = math.gcd(*ints)
    if g == 0:
        raise PreconditionViolated("zero vector has no direction")
    return tuple(v // g for v in ints)


def _lattice_length(diff: Vector) -> Fraction:
    """Rational multiple of the primitive direction a difference vector is."""
    scale = math.lcm(*(f.denominator for f in diff))
    g = math.gcd(*(int(f * scale) for f in diff))
    return Fraction(g, scale)


@dataclass(frozen=True)
class LatticePolytope:
    """Bounded full-dimensional rational polytope with both representations.

    Vertices are exactly the extreme points, sorted lexicographically; every
    stored halfspace is facet-defining (tight at >= dim vertices).  Coordinate
    labels name the bending-set members indexing each coordinate, when the
    polytope came from a moment map.
    """

    dim: int
    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[Vector, ...]
    labels: tuple[tuple[str, ...], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": [list(label) for label in self.labels],
            "halfspaces": [
                {"normal": list(normal), "offset": format_rational(offset)}
                for normal, offset in self.halfspaces
            ],
            "vertices": [
                [format_rational(c) for c in vertex] for vertex in self.vertices
            ],
        }


def _canonical_halfspaces(
    raw: list[tuple[list[Fraction], Fraction]]
) -> tuple[list[Halfspace], list[Fraction]]:
    """Normalize to primitive integer normals; returns (halfspaces, constants).

    Inequalities with a zero normal reduce to constant feasibility checks and
    are returned separately.
    """
    seen: dict[tuple[int, ...], Fraction] = {}
    constants: list[Fraction] = []
    for coeffs, const in raw:
        if all(c == 0 for c in coeffs):
            constants.append(const)
            continue
        scale = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        g = math.gcd(*ints)
        normal = tuple(v // g for v in ints)
        offset = const * scale / g
        if normal not in seen or offset < seen[normal]:
            seen[normal] = offset
    ordered = sorted(seen.items())
    return [(n, c) for n, c in ordered], constants


def from_halfspaces(
    dim: int,
    raw: list[tuple[list[Fraction], Fraction]],
    labels: tuple[tuple[str, ...], ...] = (),
) -> LatticePolytope:
    """Build a polytope from raw rational inequalities ``coeffs . x <= const``."""
    halfspaces, constants = _canonical_halfspaces(raw)
    if any(c < 0 for c in constants):
        raise BendixError("inconsistent constant constraints; polytope is empty")
    if dim == 0:
        return LatticePolytope(0, (), ((),), labels)
    candidates: set[Vector] = set()
    for combo in combinations(range(len(halfspaces)), dim):
        rows = [halfspaces[i][0] for i in combo]
        rhs = [halfspaces[i][1] for i in combo]
        point = _solve_square(rows, rhs)
        if point is None:
            continue
        if all(
            sum(n * x for n, x in zip(normal, point)) <= offset
            for normal, offset in halfspaces
        ):
            candidates.add(point)
    vertices = sorted(candidates)
    if not vertices:
        raise BendixError("halfspace intersection has no vertices")
    diffs = [tuple(a - b for a, b in zip(v, vertices[0])) for v in vertices[1:]]
    if _rank(diffs) != dim:
        raise BendixError(
            "polytope is not full-dimensional; degenerate input lengths?",
            rank=_rank(diffs),
            dim=dim,
        )
    facets = []
    for normal, offset in halfspaces:
        tight = sum(
            1
            for v in vertices
            if sum(n * x for n, x in zip(normal, v)) == offset
        )
        if tight >= dim:
            facets.append((normal, offset))
    return LatticePolytope(dim, tuple(facets), tuple(vertices), labels)


def from_vertices(points: list[Vector]) -> LatticePolytope:
    """Polytope of a point set (dimension 1 or 2 only)."""
    pts = sorted({tuple(Fraction(c) for c in p) for p in points})
    if not pts:
        raise PreconditionViolated("need at least one point")
    dim = len(pts[0])
    if dim == 1:
        lo, hi = pts[0][0], pts[-1][0]
        if lo == hi:
            raise BendixError("polytope is not full-dimensional")
        return from_halfspaces(1, [([Fraction(1)], hi), ([Fraction(-1)], -lo)])
    if dim != 2:
        raise DimensionTooLarge("from_vertices supports dimensions 1 and 2 only")
    raw: list[tuple[list[Fraction], Fraction]] = []
    for p, q in combinations(pts, 2):
        diff = tuple(b - a for a, b in zip(p, q))
        if all(c == 0 for c in diff):
            continue
        dx, dy = _primitive(diff)
        for normal in ((-dy, dx), (dy, -dx)):
            offset = normal[0] * p[0] + normal[1] * p[1]
            if all(normal[0] * x + normal[1] * y <= offset for x, y in pts):
                raw.append(([Fraction(normal[0]), Fraction(normal[1])], Fraction(offset)))
    return from_halfspaces(2, raw)


def _tight_sets(p: LatticePolytope) -> list[frozenset[int]]:
    out = []
    for v in p.vertices:
        out.append(
            frozenset(
                i
                for i, (normal, offset) in enumerate(p.halfspaces)
                if sum(n * x for n, x in zip(normal, v)) == offset
            )
        )
    return out


def edges(p: LatticePolytope) -> list[tuple[int, int]]:
    """Vertex index pairs joined by a one-dimensional face."""
    if p.dim == 0:
        return []
    tight = _tight_sets(p)
    found = []
    for i, j in combinations(range(len(p.vertices)), 2):
        common = tight[i] & tight[j]
        normals = [p.halfspaces[k][0] for k in common]
        rank = _rank(normals) if normals else 0
        if rank == p.dim - 1:
            found.append((i, j))
    return found


def _vertex_directions(p: LatticePolytope) -> dict[int, list[tuple[int, ...]]]:
    dirs: dict[int, list[tuple[int, ...]]] = {i: [] for i in range(len(p.vertices))}
    for i, j in edges(p):
        diff = tuple(b - a for a, b in zip(p.vertices[i], p.vertices[j]))
        dirs[i].append(_primitive(diff))
        dirs[j].append(_primitive(tuple(-d for d in diff)))
    return dirs


def is_delzant(p: LatticePolytope) -> bool:
    """Primitive edge directions at every vertex form a basis of the lattice."""
    if p.dim == 0:
        return True
    if p.dim > 3:
        raise DimensionTooLarge("Delzant check implemented for dimension <= 3")
    for dirs in _vertex_directions(p).values():
        if len(dirs) != p.dim or abs(_det(dirs)) != 1:
            return False
    return True


def _cyclic_indices(points: list[tuple[Fraction, Fraction]]) -> list[int]:
    """Indices of planar points in counterclockwise order around their centroid."""
    k = len(points)
    cx = sum(p[0] for p in points) / k
    cy = sum(p[1] for p in points) / k
    rel = [(p[0] - cx, p[1] - cy) for p in points]

    def half(p):
        return 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1

    def compare(i, j):
        hi, hj = half(rel[i]), half(rel[j])
        if hi != hj:
            return -1 if hi < hj else 1
        cross = rel[i][0] * rel[j][1] - rel[j][0] * rel[i][1]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(range(k), key=cmp_to_key(compare))


def _cross3(a: Vector, b: Vector) -> Vector:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _facet_cycle(p: LatticePolytope, facet: int) -> list[Vector]:
    """Vertices of a 3-d facet in cyclic order (via a planar linear chart)."""
    normal, offset = p.halfspaces[facet]
    verts = [
        v
        for v in p.vertices
        if sum(n * x for n, x in zip(normal, v)) == offset
    ]
    k = len(verts)
    centroid = tuple(sum(v[i] for v in verts) / k for i in range(3))
    u = tuple(a - b for a, b in zip(verts[0], centroid))
    w = _cross3(tuple(Fraction(x) for x in normal), u)
    planar = [
        (
            sum((a - b) * c for a, b, c in zip(v, centroid, u)),
            sum((a - b) * c for a, b, c in zip(v, centroid, w)),
        )
        for v in verts
    ]
    return [verts[i] for i in _cyclic_indices(planar)]


def volume(p: LatticePolytope) -> Fraction:
    """Exact Euclidean volume (length / area for dimensions 1 / 2)."""
    if p.dim == 0:
        return Fraction(1)
    if p.dim == 1:
        return p.vertices[-1][0] - p.vertices[0][0]
    if p.dim == 2:
        order = _cyclic_indices([(v[0], v[1]) for v in p.vertices])
        cycle = [p.vertices[i] for i in order]
        twice = sum(
            cycle[i][0] * cycle[(i + 1) % len(cycle)][1]
            - cycle[(i + 1) % len(cycle)][0] * cycle[i][1]
            for i in range(len(cycle))
        )
        return abs(twice) / 2
    if p.dim == 3:
        apex = p.vertices[0]
        total = Fraction(0)
        for facet in range(len(p.halfspaces)):
            cycle = _facet_cycle(p, facet)
            if apex in cycle:
                continue
            base = cycle[0]
            signed = Fraction(0)
            for i in range(1, len(cycle) - 1):
                a = tuple(x - y for x, y in zip(cycle[i], base))
                b = tuple(x - y for x, y in zip(cycle[i + 1], base))
                c = tuple(x - y for x, y in zip(apex, base))
                signed += _det([a, b, c])
            total += abs(signed)
        return total / 6
    raise DimensionTooLarge("volume implemented for dimension <= 3")


def fingerprint(p: LatticePolytope) -> tuple:
    """Lattice-equivalence invariants used for screening."""
    lengths = sorted(
        _lattice_length(
            tuple(b - a for a, b in zip(p.vertices[i], p.vertices[j]))
        )
        for i, j in edges(p)
    )
    normals = [n for n, _ in p.halfspaces]
    parallel = sum(
        1
        for a, b in combinations(normals, 2)
        if all(x == -y for x, y in zip(a, b))
    )
    return (
        p.dim,
        len(p.vertices),
        len(p.halfspaces),
        volume(p),
        tuple(lengths),
        parallel,
    )


Matrix = tuple[tuple[int, ...], ...]


def _apply(matrix: Matrix, translation: Vector, point: Vector) -> Vector:
    return tuple(
        sum(m * x for m, x in zip(row, point)) + t
        for row, t in zip(matrix, translation)
    )


def _matches(p: LatticePolytope, q: LatticePolytope, matrix: Matrix, translation: Vector) -> bool:
    image = {_apply(matrix, translation, v) for v in p.vertices}
    return image == set(q.vertices)


def lattice_equivalent(
    p: LatticePolytope, q: LatticePolytope
) -> tuple[Matrix, Vector] | None:
    """A unimodular integer map and translation carrying p onto q, if any.

    Complete in dimensions 0 to 2 by matching the ordered primitive edge
    directions at one vertex of p against every vertex of q.  In dimension 3
    only invariants are compared: unequal invariants prove inequivalence,
    equal ones raise EquivalenceUndecided.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(
            "polytopes live in different dimensions", p=p.dim, q=q.dim
        )
    if p.dim == 0:
        return (), ()
    if fingerprint(p) != fingerprint(q):
        return None
    if p.dim == 3:
        raise EquivalenceUndecided(
            "dimension-3 equivalence is screened by invariants only; "
            "the invariants of these polytopes agree"
        )
    if p.dim > 3:
        raise DimensionTooLarge("equivalence implemented for dimension <= 3")
    if p.dim == 1:
        for sign in (1, -1):
            matrix = ((sign,),)
            for qv in q.vertices:
                translation = (qv[0] - sign * p.vertices[0][0],)
                if _matches(p, q, matrix, translation):
                    return matrix, translation
        return None
    p_dirs = _vertex_directions(p)
    q_dirs = _vertex_directions(q)
    base = 0  # lexicographically least vertex of p
    d1, d2 = p_dirs[base]
    det_d = d1[0] * d2[1] - d1[1] * d2[0]
    for qi in range(len(q.vertices)):
        for f1, f2 in ((q_dirs[qi][0], q_dirs[qi][1]), (q_dirs[qi][1], q_dirs[qi][0])):
            # psi maps d1 to f1 and d2 to f2: psi = F D^-1, exact rational
            adj = ((d2[1], -d2[0]), (-d1[1], d1[0]))
            cols = [
                (
                    Fraction(f1[r] * adj[0][0] + f2[r] * adj[1][0], det_d),
                    Fraction(f1[r] * adj[0][1] + f2[r] * adj[1][1], det_d),
                )
                for r in range(2)
            ]
            if any(c.denominator != 1 for row in cols for c in row):
                continue
            matrix = tuple(tuple(int(c) for c in row) for row in cols)
            det_m = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
            if abs(det_m) != 1:
                continue
            moved = _apply(matrix, (Fraction(0), Fraction(0)), p.vertices[base])
            translation = tuple(a - b for a, b in zip(q.vertices[qi], moved))
            if _matches(p, q, matrix, translation):
                return matrix, translation
    return None


def _affine_zero(d: int) -> tuple[list[Fraction], Fraction]:
    return [Fraction(0)] * d, Fraction(0)


def moment_polytope(lam: LengthFunction, family: BendingSet) -> LatticePolytope:
    """Exact moment polytope of a toric bending action.

    Coordinates are the essential non-singleton members (complement pairs
    identified, constant ones dropped) sorted by lowest edge then size.  Each
    member contributes the triangle inequalities tying its value to the values
    of its two halves; the maximal blocks contribute the closure constraints
    (triangle inequalities for three blocks, nothing extra for two, whose
    values are already identified).  Redundant halfspaces are pruned.
    """
    if not is_full(family):
        raise NotFull("moment polytopes are computed for full bending sets")
    blocks = maximal_elements(family)
    dim = torus_dimension(lam, family)
    if dim != lam.n - 3 or len(blocks) > 3:
        raise NotToric(
            "bending set is not toric: torus dimension is below |E| - 3",
            dimension=dim,
            blocks=len(blocks),
        )
    if dim > 3:
        raise DimensionTooLarge(
            "vertex enumeration implemented for dimension <= 3", dimension=dim
        )
    full = lam.full_mask
    members = family.members

    def class_rep(mask: int) -> int:
        comp = full ^ mask
        if comp in members and canonical_member_key(comp) < canonical_member_key(mask):
            return comp
        return mask

    coords = sorted(
        {
            class_rep(m)
            for m in members
            if m.bit_count() > 1 and (full ^ m).bit_count() > 1
        },
        key=canonical_member_key,
    )
    index = {m: i for i, m in enumerate(coords)}
    assert len(coords) == dim

    def expr(mask: int) -> tuple[list[Fraction], Fraction]:
        coeffs, const = _affine_zero(dim)
        if mask.bit_count() == 1:
            return coeffs, lam.lengths[next(bits(mask))]
        comp = full ^ mask
        if comp.bit_count() == 1:
            return coeffs, lam.lengths[next(bits(comp))]
        coeffs[index[class_rep(mask)]] = Fraction(1)
        return coeffs, const

    raw: list[tuple[list[Fraction], Fraction]] = []

    def add_le(lhs, rhs):
        raw.append(
            ([a - b for a, b in zip(lhs[0], rhs[0])], rhs[1] - lhs[1])
        )

    for m in sorted((m for m in members if m.bit_count() > 1), key=canonical_member_key):
        half_a, half_b = member_split(family, m)
        ea, eb, em = expr(half_a), expr(half_b), expr(m)
        add_le(em, ([x + y for x, y in zip(ea[0], eb[0])], ea[1] + eb[1]))
        add_le(([x - y for x, y in zip(ea[0], eb[0])], ea[1] - eb[1]), em)
        add_le(([y - x for x, y in zip(ea[0], eb[0])], eb[1] - ea[1]), em)
    if len(blocks) == 3:
        exprs = [expr(b) for b in blocks]
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            add_le(
                exprs[i],
                (
                    [x + y for x, y in zip(exprs[j][0], exprs[k][0])],
                    exprs[j][1] + exprs[k][1],
                ),
            )
    for b in blocks:
        add_le(_affine_zero(dim), expr(b))
    labels = tuple(lam.label_of(m) for m in coords)
    return from_halfspaces(dim, raw, labels)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: LatticePolytope
    members: tuple[BendingSet, ...]


@dataclass(frozen=True)
class EquivalenceClassReport:
    classes: tuple[ConjugacyClass, ...]
    complete: bool

    def to_json(self, lam: LengthFunction) -> dict:
        return {
            "complete": self.complete,
            "count": len(self.classes),
            "classes": [
                {
                    "representative": cl.representative.to_json(),
                    "members": [m.to_json(lam) for m in cl.members],
                }
                for cl in self.classes
            ],
        }


def conjugacy_classes(
    lam: LengthFunction, *, max_edges: int = 10, force: bool = False
) -> EquivalenceClassReport:
    """Group all toric bending actions by lattice equivalence of their polytopes.

    Complete for moment polytopes of dimension <= 2; dimension 3 groups by
    invariants only and is flagged as partial.
    """
    torics = toric_bending_sets(lam, max_edges=max_edges, force=force)
    entries = [(f, moment_polytope(lam, f)) for f in torics]
    dim = lam.n - 3
    complete = dim <= 2
    groups: list[dict] = []
    for fam, poly in entries:
        placed = False
        for group in groups:
            if complete:
                same = lattice_equivalent(poly, group["rep"]) is not None
            else:
                same = fingerprint(poly) == fingerprint(group["rep"])
            if same:
                group["members"].append(fam)
                group["polys"].append(poly)
                placed = True
                break
        if not placed:
            groups.append({"rep": poly, "members": [fam], "polys": [poly]})
    classes = []
    for group in groups:
        best = min(group["polys"], key=lambda p: p.vertices)
        classes.append(ConjugacyClass(best, tuple(group["members"])))
    classes.sort(key=lambda cl: cl.representative.vertices)
    return EquivalenceClassReport(tuple(classes), complete)


@dataclass(frozen=True)
class NonbendingReport:
    """Outcome of the one-short-edge pattern (1, a, c, c, c) with c > a + 1 > 2."""

    a: Fraction
    c: Fraction
    strong: bool  # whether the stricter bound a + 1 > 3 holds
    bending_class_count: int
    classes: EquivalenceClassReport
    hamiltonian_class_count: int | None
    nonbending_tori_exist: bool | None

    def to_json(self, lam: LengthFunction) -> dict:
        return {
            "a": format_rational(self.a),
            "c": format_rational(self.c),
            "strong": self.strong,
            "bending_class_count": self.bending_class_count,
            "hamiltonian_class_count": self.hamiltonian_class_count,
            "nonbending_tori_exist": self.nonbending_tori_exist,
            "classes": self.classes.to_json(lam),
        }


def nonbending_report(lam: LengthFunction) -> NonbendingReport | None:
    """Compare bending conjugacy classes against the Hamiltonian ceiling count.

    Applies to pentagons shaped like (1, a, c, c, c) up to permutation with
    c > a + 1 > 2.  When additionally a + 1 > 3, the ceiling of a bounds the
    number of maximal Hamiltonian torus classes from below by more than the
    two bending classes, so non-bending maximal tori must exist.
    """
    if lam.n != 5:
        return None
    counts: dict[Fraction, int] = {}
    for length in lam.lengths:
        counts[length] = counts.get(length, 0) + 1
    triple = [v for v, k in counts.items() if k >= 3]
    if len(triple) != 1:
        return None
    c = triple[0]
    rest = sorted(lam.lengths, key=lambda v: (v != c, v))[3:]  # drop three copies of c
    if Fraction(1) not in rest:
        return None
    a = rest[1] if rest[0] == 1 else rest[0]
    if not (c > a + 1 > 2):
        return None
    strong = a + 1 > 3
    classes = conjugacy_classes(lam)
    return NonbendingReport(
        a=a,
        c=c,
        strong=strong,
        bending_class_count=len(classes.classes),
        classes=classes,
        hamiltonian_class_count=math.ceil(a) if strong else None,
        nonbending_tori_exist=True if strong else None,
    )
