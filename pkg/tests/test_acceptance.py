"""Acceptance suite: one test per published criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  All arithmetic is exact, so every comparison is equality.
"""

import random
import time
from fractions import Fraction

from bendix.bending import (
    Interval,
    critical_values,
    fill,
    is_full,
    maximal_elements,
    moment_image,
    torus_dimension,
    validate_bending_set,
)
from bendix.cases import build_case
from bendix.model import LengthFunction, is_generic
from bendix.polytope import (
    conjugacy_classes,
    is_delzant,
    lattice_equivalent,
    moment_polytope,
    nonbending_report,
    volume,
)
from bendix.search import (
    TheoremBStatus,
    common_point,
    enumerate_maximal_tori,
    is_maximal_bending,
    max_bending_dim,
    min_lopsided_partition,
    theorem_b_status,
    two_long_edge_pairs,
    two_long_edge_partition,
)
from oracles import (
    brute_min_lopsided,
    oracle_in_image,
    random_bending_set,
    random_full_bending_set,
    random_generic_lambda,
    random_unimodular,
)


def family(lam, *groups):
    return fill(lam, validate_bending_set(lam, [lam.mask_of(g) for g in groups]))


def done(n, text):
    print(f"[acceptance] criterion {n}: PASS ({text})")


def test_criterion_1_almost_regular_pentagon():
    lam = LengthFunction.from_lengths([1, 1, 1, 1, "3/2"])
    assert min_lopsided_partition(lam)[0] == 4
    assert max_bending_dim(lam) == 1
    circle = lam.mask_of(["e4", "e5"])
    image = moment_image(lam, circle)
    a = Fraction(3, 2)
    assert (image.lo, image.hi) == (a - 1, a + 1) == (Fraction(1, 2), Fraction(5, 2))
    assert critical_values(lam, circle) == (Fraction(1, 2), Fraction(1), Fraction(5, 2))
    reports = enumerate_maximal_tori(lam)
    assert reports and all(r.dimension == 1 for r in reports)
    assert all(
        theorem_b_status(lam, r.bending_set) is TheoremBStatus.MAXIMAL_HAMILTONIAN
        for r in reports
    )
    done(1, "N=4, image [1/2,5/2], criticals {1/2,1,5/2}, all tori 1-dim maximal")


def test_criterion_2_heptagon():
    lam = LengthFunction.from_lengths([1, 1, 2, 2, 3, 3, 3])
    assert is_generic(lam)
    reports = enumerate_maximal_tori(lam)
    assert sorted({r.dimension for r in reports}) == [2, 3, 4]
    families = {
        2: family(lam, ("e3", "e1"), ("e4", "e2")),
        3: family(lam, ("e3", "e1"), ("e5", "e2"), ("e6", "e4")),
        4: family(lam, ("e5", "e1", "e2"), ("e6", "e3"), ("e7", "e4")),
    }
    for dim, fam in families.items():
        assert is_full(fam)
        assert torus_dimension(lam, fam) == dim
        assert is_maximal_bending(lam, fam)[0]
    pair = lam.mask_of(["e6", "e4"])
    pair_dims = {r.dimension for r in reports if pair in r.bending_set.members}
    assert pair_dims == {3, 4}
    done(2, "spectrum {2,3,4}, quoted families check out, pair in dims 3 and 4")


def test_criterion_3_ninegon():
    lam = LengthFunction.from_lengths([1, 1, 2, 2, 3, 3, 3, "1/2", "1/4"])
    m = 2
    families = {
        m + 2: family(lam, ("e3", "e1"), ("e4", "e2"), ("e5", "e8", "e9")),
        m + 3: family(
            lam, ("e3", "e1"), ("e5", "e2"), ("e6", "e4"), ("e7", "e8", "e9")
        ),
        m + 4: family(
            lam, ("e5", "e1", "e2"), ("e6", "e3"), ("e7", "e4", "e8", "e9")
        ),
    }
    for dim, fam in families.items():
        assert is_full(fam)
        assert torus_dimension(lam, fam) == dim
        assert is_maximal_bending(lam, fam)[0]
    start = time.monotonic()
    reports = enumerate_maximal_tori(lam, limit=None)  # |E| = 9 passes the guard
    elapsed = time.monotonic() - start
    assert elapsed < 60
    assert {4, 5, 6} <= {r.dimension for r in reports}
    done(3, f"families have dims 4/5/6, enumeration in {elapsed:.1f}s")


def test_criterion_4_pentagon_mixed_dimensions():
    lam = LengthFunction.from_lengths([1, 1, 1, "3/2", "3/4"])
    circle = family(lam, ("e4", "e5"))
    assert torus_dimension(lam, circle) == 1
    assert is_maximal_bending(lam, circle) == (True, Fraction(1))
    reports = enumerate_maximal_tori(lam)
    dims = sorted({r.dimension for r in reports})
    assert dims == [1, 2]
    assert 2 == lam.n - 3  # the dimension-2 tori are toric
    done(4, "circle maximal with witness 1; toric torus exists; dims {1,2}")


def test_criterion_5_conjugacy_classification():
    lam = LengthFunction.from_lengths([1, 2, 4, 4, 4])
    a = Fraction(2)
    rect_fam = family(lam, ("e3", "e1"), ("e4", "e2"))
    rect = moment_polytope(lam, rect_fam)
    assert set(rect.vertices) == {
        (Fraction(3), Fraction(2)),
        (Fraction(3), Fraction(6)),
        (Fraction(5), Fraction(2)),
        (Fraction(5), Fraction(6)),
    }
    xs = sorted({v[0] for v in rect.vertices})
    ys = sorted({v[1] for v in rect.vertices})
    assert xs[1] - xs[0] == 2 and ys[1] - ys[0] == 2 * a

    trap_fam = family(lam, ("e2", "e1"), ("e3", "e2", "e1"))
    trap = moment_polytope(lam, trap_fam)
    assert set(trap.vertices) == {
        (Fraction(1), Fraction(3)),
        (Fraction(1), Fraction(5)),
        (Fraction(3), Fraction(1)),
        (Fraction(3), Fraction(7)),
    }
    sides = sorted(
        max(v[1] for v in trap.vertices if v[0] == x)
        - min(v[1] for v in trap.vertices if v[0] == x)
        for x in {v[0] for v in trap.vertices}
    )
    assert sides == [2 * a - 2, 2 * a + 2]

    assert is_delzant(rect) and is_delzant(trap)
    assert lattice_equivalent(rect, trap) is None
    assert len(conjugacy_classes(lam).classes) == 2

    printed_fam = family(lam, ("e3", "e1"), ("e3", "e2", "e1"))
    printed = moment_polytope(lam, printed_fam)
    assert lattice_equivalent(printed, rect) is not None
    golden = build_case("conjugacy-1a444")
    assert golden["figure_discrepancy"] is True
    assert golden["printed_pair_family"]["equivalent_to_rectangle"] is True
    done(5, "rectangle vs trapezoid inequivalent, 2 classes, discrepancy recorded")


def test_criterion_6_nonbending_tori():
    lam = LengthFunction.from_lengths([1, "5/2", 4, 4, 4])
    report = nonbending_report(lam)
    assert report is not None
    assert report.hamiltonian_class_count == 3  # ceil(5/2)
    assert report.bending_class_count == 2
    assert report.nonbending_tori_exist is True
    done(6, "3 Hamiltonian classes > 2 bending classes")


def test_criterion_7_two_long_edges():
    lam = LengthFunction.from_lengths([1, 1, 1, 1, 3, 3])
    assert min_lopsided_partition(lam)[0] == 2
    partition = two_long_edge_partition(lam)
    assert partition is not None
    fam = family(lam, *(lam.ids_of(m) for m in partition))
    assert torus_dimension(lam, fam) == lam.n - 3 == 3
    poly = moment_polytope(lam, fam)
    assert poly.dim == 3

    probe = LengthFunction.from_lengths([1, 1, 1, 2, 2])
    assert two_long_edge_pairs(probe) == [("e4", "e5")]
    assert two_long_edge_partition(probe) is None
    assert min_lopsided_partition(probe)[0] == 3
    golden = build_case("two-long-edge-probe")
    assert golden["lopsided_2_partition_exists"] is False
    assert golden["min_lopsided"]["N"] == 3
    done(7, "N=2 with a 3-dim toric torus; probe records no 2-partition, N=3")


def test_criterion_8i_full_dimension_formula_and_partition_dp():
    rng = random.Random(81001)
    for _ in range(40):
        lam = random_generic_lambda(rng, rng.randint(4, 7))
        assert min_lopsided_partition(lam)[0] == brute_min_lopsided(lam)
        for _ in range(3):
            fam = random_full_bending_set(rng, lam)
            assert is_full(fam)
            expected = lam.n - max(3, len(maximal_elements(fam)))
            assert torus_dimension(lam, fam) == expected
    done("8i", "full dimension formula and partition DP agree with brute force")


def test_criterion_8ii_moment_image_grid_oracle():
    rng = random.Random(81002)
    for _ in range(30):
        lam = random_generic_lambda(rng, rng.randint(3, 7))
        mask = rng.randint(1, lam.full_mask - 1)
        image = moment_image(lam, mask)
        span = lam.total() + 1
        for k in range(64):
            t = span * k / 63
            assert (t in image) == oracle_in_image(lam, mask, t)
    done("8ii", "image endpoints match the reduce-nonemptiness oracle, 64 probes")


def test_criterion_8iii_helly_property():
    rng = random.Random(81003)
    for _ in range(10_000):
        intervals = []
        for _ in range(rng.randint(1, 5)):
            a = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
            b = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
            intervals.append(Interval(min(a, b), max(a, b)))
        pairwise = all(
            max(p.lo, q.lo) <= min(p.hi, q.hi)
            for i, p in enumerate(intervals)
            for q in intervals[i:]
        )
        point = common_point(intervals)
        assert (point is not None) == pairwise
        if point is not None:
            assert all(point in i for i in intervals)
    done("8iii", "Helly property on 10^4 random interval families")


def test_criterion_8iv_fill_contract():
    rng = random.Random(81004)
    for _ in range(1000):
        lam = random_generic_lambda(rng, rng.randint(3, 7))
        fam = random_bending_set(rng, lam)
        filled = fill(lam, fam)
        assert fam.members <= filled.members  # (1) containment
        assert is_full(filled)  # (2) fullness
        assert maximal_elements(filled) == maximal_elements(fam)  # (3) same blocks
        assert fill(lam, filled) == filled  # idempotence
    done("8iv", "fill contract and idempotence on 10^3 random bending sets")


def test_criterion_8v_lattice_equivalence_relation():
    from bendix.polytope import from_vertices

    rng = random.Random(81005)
    bases = [
        [(0, 0), (1, 0), (0, 1), (1, 1)],
        [(0, 0), (4, 0), (0, 2), (4, 2)],
        [(0, 0), (2, 0), (0, 2)],
        [(1, 3), (1, 5), (3, 1), (3, 7)],
        [(0, 0), (3, 0), (0, 1), (3, 1)],
    ]
    corpus = []
    for i in range(50):
        base = [tuple(map(Fraction, p)) for p in bases[i % len(bases)]]
        matrix = random_unimodular(rng)
        tx = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        ty = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        corpus.append(
            from_vertices(
                [
                    (
                        matrix[0][0] * x + matrix[0][1] * y + tx,
                        matrix[1][0] * x + matrix[1][1] * y + ty,
                    )
                    for x, y in base
                ]
            )
        )
    for p in corpus:
        assert is_delzant(p)
        assert lattice_equivalent(p, p) is not None
    for i in range(len(corpus)):
        p, q = corpus[i], corpus[(i + 11) % len(corpus)]
        forward = lattice_equivalent(p, q)
        backward = lattice_equivalent(q, p)
        assert (forward is None) == (backward is None)
        if forward is not None:
            assert volume(p) == volume(q)
        r = corpus[(i + 22) % len(corpus)]
        if forward is not None and lattice_equivalent(q, r) is not None:
            assert lattice_equivalent(p, r) is not None
    done("8v", "equivalence relation and volume preservation on 50 polytopes")
