import random
from fractions import Fraction

import pytest

from bendix.bending import (
    Interval,
    fill,
    is_full,
    maximal_elements,
    moment_image,
    torus_dimension,
    validate_bending_set,
)
from bendix.errors import GuardExceeded, NotFull
from bendix.model import LengthFunction, bits, is_lopsided
from bendix.search import (
    TheoremBStatus,
    common_point,
    enumerate_maximal_tori,
    is_maximal_bending,
    max_bending_dim,
    max_containing_dim,
    min_coarser_partition,
    min_lopsided_partition,
    theorem_b_status,
    toric_bending_sets,
    two_long_edge_pairs,
    two_long_edge_partition,
)
from oracles import brute_min_lopsided, random_generic_lambda

PENT = LengthFunction.from_lengths([1, 1, 1, 1, "3/2"])
HEPT = LengthFunction.from_lengths([1, 1, 2, 2, 3, 3, 3])
MIXED = LengthFunction.from_lengths([1, 1, 1, "3/2", "3/4"])


def family(lam, *groups):
    return validate_bending_set(lam, [lam.mask_of(g) for g in groups])


def check_witness(lam, count, blocks):
    assert len(blocks) == count
    covered = 0
    for b in blocks:
        assert is_lopsided(lam, b)
        assert covered & b == 0
        covered |= b
    assert covered == lam.full_mask


def test_min_lopsided_fixed_cases():
    for lam, expected in [
        (PENT, 4),
        (HEPT, 3),
        (LengthFunction.from_lengths([1, 1, 1, 1, 3, 3]), 2),
        (LengthFunction.from_lengths([1, 1, 1, 2, 2]), 3),
        (MIXED, 3),
    ]:
        count, blocks = min_lopsided_partition(lam)
        assert count == expected
        check_witness(lam, count, blocks)


def test_min_lopsided_matches_brute_force():
    rng = random.Random(8890)
    for _ in range(60):
        lam = random_generic_lambda(rng, rng.randint(3, 7))
        count, blocks = min_lopsided_partition(lam)
        assert count == brute_min_lopsided(lam)
        check_witness(lam, count, blocks)


def test_min_coarser_partition():
    singles = tuple(1 << i for i in range(PENT.n))
    assert min_coarser_partition(PENT, singles)[0] == min_lopsided_partition(PENT)[0]

    circle = family(MIXED, ("e4", "e5"))
    count, blocks = min_coarser_partition(MIXED, maximal_elements(circle))
    assert count == 4
    check_witness(MIXED, count, blocks)

    # a partition that is already all-lopsided is its own upper bound
    lop = maximal_elements(family(HEPT, ("e5", "e1", "e2"), ("e6", "e3"), ("e7", "e4")))
    count, blocks = min_coarser_partition(HEPT, lop)
    assert count <= len(lop)


def test_max_bending_dim():
    assert max_bending_dim(HEPT) == 4
    assert max_bending_dim(PENT) == 1
    assert max_bending_dim(LengthFunction.from_lengths([1, 1, 1, 1, 3, 3])) == 3


def test_max_containing_dim():
    singles = validate_bending_set(PENT, [])
    dim, witness = max_containing_dim(PENT, singles)
    assert dim == max_bending_dim(PENT)
    assert is_full(witness)
    assert torus_dimension(PENT, witness) == dim

    pair = family(HEPT, ("e6", "e4"))
    dim, witness = max_containing_dim(HEPT, pair)
    assert dim == 4
    assert pair.members <= witness.members

    circle = family(MIXED, ("e4", "e5"))
    dim, witness = max_containing_dim(MIXED, circle)
    assert dim == 1
    assert torus_dimension(MIXED, witness) == 1


def test_common_point():
    mk = lambda lo, hi: Interval(Fraction(lo), Fraction(hi))
    assert common_point([mk(0, 2), mk(1, 3), Interval(Fraction(3, 2), Fraction(4))]) == Fraction(3, 2)
    assert common_point([mk(0, 1), mk(2, 3)]) is None
    images = [moment_image(MIXED, MIXED.mask_of(["e4", "e5"]))] + [
        moment_image(MIXED, MIXED.mask_of([e])) for e in ("e1", "e2", "e3")
    ]
    assert common_point(images) == Fraction(1)


def test_common_point_helly_property():
    rng = random.Random(60589)
    for _ in range(2000):
        intervals = []
        for _ in range(rng.randint(1, 6)):
            a = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
            b = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
            intervals.append(Interval(min(a, b), max(a, b)))
        pairwise = all(
            max(p.lo, q.lo) <= min(p.hi, q.hi)
            for i, p in enumerate(intervals)
            for q in intervals[i:]
        )
        point = common_point(intervals)
        if pairwise:
            assert point is not None
            assert all(point in i for i in intervals)
        else:
            assert point is None


def test_is_maximal_bending_fixed_cases():
    circle = fill(MIXED, family(MIXED, ("e4", "e5")))
    assert is_maximal_bending(MIXED, circle) == (True, Fraction(1))

    pent_circle = fill(PENT, family(PENT, ("e4", "e5")))
    assert is_maximal_bending(PENT, pent_circle) == (True, Fraction(1))

    lam = LengthFunction.from_lengths([1, 2, 4, 4, 4])
    toric = family(lam, ("e3", "e1"), ("e4", "e2"))
    assert is_maximal_bending(lam, toric) == (True, None)

    with pytest.raises(NotFull):
        lam7 = LengthFunction.from_lengths([1, 1, 1, 1, "7/2"])
        is_maximal_bending(lam7, family(lam7, ("e3", "e4", "e5")))


def test_is_maximal_bending_matches_union_oracle():
    # a full torus below top dimension is maximal iff no union of two or more
    # of its maximal blocks is lopsided
    rng = random.Random(777)
    from oracles import random_full_bending_set

    checked = 0
    while checked < 120:
        lam = random_generic_lambda(rng, rng.randint(4, 7))
        fam = random_full_bending_set(rng, lam)
        if torus_dimension(lam, fam) >= lam.n - 3:
            continue
        checked += 1
        blocks = maximal_elements(fam)
        union_lopsided = False
        for pick in range(1, 1 << len(blocks)):
            if pick.bit_count() < 2:
                continue
            union = 0
            for i in bits(pick):
                union |= blocks[i]
            if is_lopsided(lam, union):
                union_lopsided = True
                break
        maximal, witness = is_maximal_bending(lam, fam)
        assert maximal == (not union_lopsided)
        if maximal:
            assert witness is not None
            assert all(witness in moment_image(lam, b) for b in blocks)


def test_maximal_sets_admit_no_compatible_additions():
    # exhaustive superset search: below top dimension, a maximal full set has
    # no lopsided non-member that stays laminar against every member
    rng = random.Random(90210)
    from oracles import random_full_bending_set

    checked = 0
    while checked < 60:
        lam = random_generic_lambda(rng, rng.randint(4, 7))
        fam = random_full_bending_set(rng, lam)
        if torus_dimension(lam, fam) >= lam.n - 3:
            continue
        maximal, _ = is_maximal_bending(lam, fam)
        if not maximal:
            continue
        checked += 1
        for mask in range(1, lam.full_mask):
            if mask in fam.members or not is_lopsided(lam, mask):
                continue
            compatible = all(
                not (mask & m) or (mask | m) in (mask, m) for m in fam.members
            )
            assert not compatible


def test_theorem_b_status():
    circle = fill(MIXED, family(MIXED, ("e4", "e5")))
    assert theorem_b_status(MIXED, circle) is TheoremBStatus.MAXIMAL_HAMILTONIAN

    pent_circle = fill(PENT, family(PENT, ("e4", "e5")))
    assert theorem_b_status(PENT, pent_circle) is TheoremBStatus.MAXIMAL_HAMILTONIAN

    singles = validate_bending_set(PENT, [])
    assert theorem_b_status(PENT, singles) is TheoremBStatus.NOT_APPLICABLE


def test_enumerate_heptagon_spectrum():
    reports = enumerate_maximal_tori(HEPT)
    assert sorted({r.dimension for r in reports}) == [2, 3, 4]
    assert all(r.dimension <= HEPT.n - 3 for r in reports)
    assert max(r.dimension for r in reports) == max_bending_dim(HEPT)
    for report in reports:
        assert is_full(report.bending_set)
        assert report.is_maximal_bending
        present = report.common_value is not None
        assert present == (report.dimension < HEPT.n - 3)


def test_enumerate_pentagons():
    assert {r.dimension for r in enumerate_maximal_tori(PENT)} == {1}
    assert sorted({r.dimension for r in enumerate_maximal_tori(MIXED)}) == [1, 2]


def test_enumerate_deterministic_and_limited():
    first = enumerate_maximal_tori(HEPT)
    second = enumerate_maximal_tori(HEPT)
    assert [r.bending_set for r in first] == [r.bending_set for r in second]
    assert enumerate_maximal_tori(HEPT, limit=2) == first[:2]


def test_enumerate_quotient_by_length_preserving_permutations():
    reports = enumerate_maximal_tori(HEPT, quotient_permutations=True)
    # orbit types: one for dim 2, two block-shapes for dim 3, one for dim 4
    assert [r.dimension for r in reports] == [2, 3, 3, 4]


def test_max_containing_dim_bounds_fill_dimension():
    rng = random.Random(3125)
    from oracles import random_bending_set

    for _ in range(60):
        lam = random_generic_lambda(rng, rng.randint(3, 7))
        fam = random_bending_set(rng, lam)
        dim, _ = max_containing_dim(lam, fam)
        filled_dim = torus_dimension(lam, fill(lam, fam))
        assert dim >= filled_dim
        blocks = maximal_elements(fam)
        count, _ = min_coarser_partition(lam, blocks)
        assert (dim == filled_dim) == (max(3, count) == max(3, len(blocks)))


def test_enumerate_guard():
    lam = LengthFunction.from_lengths([1] * 11)
    with pytest.raises(GuardExceeded):
        enumerate_maximal_tori(lam)
    reports = enumerate_maximal_tori(lam, force=True)
    assert len(reports) == 1 and reports[0].dimension == 0


def test_toric_bending_sets():
    lam = LengthFunction.from_lengths([1, 2, 4, 4, 4])
    torics = toric_bending_sets(lam)
    assert len(torics) == 15
    assert all(torus_dimension(lam, f) == 2 for f in torics)
    assert toric_bending_sets(PENT) == []


def test_two_long_edge():
    lam = LengthFunction.from_lengths([1, 1, 1, 1, 3, 3])
    assert two_long_edge_pairs(lam) == [("e5", "e6")]
    part = two_long_edge_partition(lam)
    assert part is not None
    a, b = part
    assert a | b == lam.full_mask and a & b == 0
    assert is_lopsided(lam, a) and is_lopsided(lam, b)

    assert two_long_edge_pairs(LengthFunction.from_lengths([1, 1, 1, 1, 1])) == []
    assert two_long_edge_partition(LengthFunction.from_lengths([1, 1, 1, 1, 1])) is None

    probe = LengthFunction.from_lengths([1, 1, 1, 2, 2])
    assert two_long_edge_pairs(probe) == [("e4", "e5")]
    assert two_long_edge_partition(probe) is None
