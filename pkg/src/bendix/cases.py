"""Registered worked examples with checked-in golden outputs.

Each case builds one deterministic JSON report over a fixed pentagon,
heptagon, or (7+m)-gon; the CLI ``examples`` command replays them and
compares against the golden files shipped with the package.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Callable

from . import bending as B
from . import polytope as P
from . import search as S
from .errors import SchemaError
from .model import LengthFunction, format_rational, is_generic, is_nonempty, subset_to_json


def _lam(*values) -> LengthFunction:
    return LengthFunction.from_lengths(values)


def _family(lam: LengthFunction, *id_groups: tuple[str, ...]) -> B.BendingSet:
    return B.fill(
        lam, B.validate_bending_set(lam, [lam.mask_of(g) for g in id_groups])
    )


def _torus_summary(lam: LengthFunction, family: B.BendingSet) -> dict:
    maximal, witness = S.is_maximal_bending(lam, family)
    return {
        "members": family.to_json(lam)["members"],
        "dimension": B.torus_dimension(lam, family),
        "is_maximal_bending": maximal,
        "common_value": None if witness is None else format_rational(witness),
        "theorem_b": S.theorem_b_status(lam, family).value,
    }


def _spectrum(reports: list[S.TorusReport]) -> dict:
    dims = sorted({r.dimension for r in reports})
    return {
        "count": len(reports),
        "dimensions": dims,
        "dimension_counts": {
            str(d): sum(1 for r in reports if r.dimension == d) for d in dims
        },
    }


def _partition_json(lam: LengthFunction, blocks: tuple[int, ...]) -> list[list[str]]:
    return [subset_to_json(lam, b) for b in blocks]


def case_pentagon_critical() -> dict:
    lam = _lam(1, 1, 1, 1, "3/2")
    circle = lam.mask_of(["e4", "e5"])
    count, witness = S.min_lopsided_partition(lam)
    reports = S.enumerate_maximal_tori(lam)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "nonempty": is_nonempty(lam),
        "min_lopsided": {"N": count, "witness": _partition_json(lam, witness)},
        "max_bending_dim": S.max_bending_dim(lam),
        "bending_circle": {
            "subset": subset_to_json(lam, circle),
            "image": B.moment_image(lam, circle).to_json(),
            "critical_values": [
                format_rational(v) for v in B.critical_values(lam, circle)
            ],
        },
        "maximal_tori": _spectrum(reports),
        "all_maximal_hamiltonian": all(
            r.theorem_b is S.TheoremBStatus.MAXIMAL_HAMILTONIAN for r in reports
        ),
    }


def case_pentagon_mixed_dims() -> dict:
    lam = _lam(1, 1, 1, "3/2", "3/4")
    circle = _family(lam, ("e4", "e5"))
    count, _ = S.min_coarser_partition(lam, B.maximal_elements(circle))
    containing_dim, _ = S.max_containing_dim(lam, circle)
    reports = S.enumerate_maximal_tori(lam)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "min_lopsided_N": S.min_lopsided_partition(lam)[0],
        "max_bending_dim": S.max_bending_dim(lam),
        "bending_circle": _torus_summary(lam, circle),
        "coarser_N_above_circle": count,
        "max_dim_containing_circle": containing_dim,
        "maximal_tori": _spectrum(reports),
        "toric_class_count": len(P.conjugacy_classes(lam).classes),
    }


def case_two_long_edge() -> dict:
    lam = _lam(1, 1, 1, 1, 3, 3)
    partition = S.two_long_edge_partition(lam)
    assert partition is not None
    family = _family(lam, *(lam.ids_of(m) for m in partition))
    poly = P.moment_polytope(lam, family)
    count, witness = S.min_lopsided_partition(lam)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "nonempty": is_nonempty(lam),
        "long_pairs": [list(p) for p in S.two_long_edge_pairs(lam)],
        "partition": _partition_json(lam, partition),
        "min_lopsided": {"N": count, "witness": _partition_json(lam, witness)},
        "max_bending_dim": S.max_bending_dim(lam),
        "toric_torus": _torus_summary(lam, family),
        "polytope": poly.to_json(),
        "is_delzant": P.is_delzant(poly),
        "volume": format_rational(P.volume(poly)),
    }


def case_two_long_edge_probe() -> dict:
    lam = _lam(1, 1, 1, 2, 2)
    partition = S.two_long_edge_partition(lam)
    count, witness = S.min_lopsided_partition(lam)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "long_pairs": [list(p) for p in S.two_long_edge_pairs(lam)],
        "partition": None if partition is None else _partition_json(lam, partition),
        "lopsided_2_partition_exists": partition is not None,
        "min_lopsided": {"N": count, "witness": _partition_json(lam, witness)},
    }


HEPTAGON_FAMILIES: dict[str, tuple[tuple[str, ...], ...]] = {
    "two-pairs": (("e3", "e1"), ("e4", "e2")),
    "three-pairs": (("e3", "e1"), ("e5", "e2"), ("e6", "e4")),
    "triple-and-pairs": (("e5", "e1", "e2"), ("e6", "e3"), ("e7", "e4")),
}


def case_heptagon_spectrum() -> dict:
    lam = _lam(1, 1, 2, 2, 3, 3, 3)
    families = {
        name: _torus_summary(lam, _family(lam, *groups))
        for name, groups in HEPTAGON_FAMILIES.items()
    }
    reports = S.enumerate_maximal_tori(lam)
    pair = lam.mask_of(["e6", "e4"])
    pair_dims = sorted(
        {r.dimension for r in reports if pair in r.bending_set.members}
    )
    pair_family = _family(lam, ("e6", "e4"))
    containing_dim, _ = S.max_containing_dim(lam, pair_family)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "min_lopsided_N": S.min_lopsided_partition(lam)[0],
        "max_bending_dim": S.max_bending_dim(lam),
        "families": families,
        "maximal_tori": _spectrum(reports),
        "pair_subset": subset_to_json(lam, pair),
        "pair_containing_dimensions": pair_dims,
        "max_dim_containing_pair": containing_dim,
    }


NINEGON_FAMILIES: dict[str, tuple[tuple[str, ...], ...]] = {
    "two-pairs-and-tail": (("e3", "e1"), ("e4", "e2"), ("e5", "e8", "e9")),
    "three-pairs-and-tail": (
        ("e3", "e1"),
        ("e5", "e2"),
        ("e6", "e4"),
        ("e7", "e8", "e9"),
    ),
    "triple-pairs-absorbing-tail": (
        ("e5", "e1", "e2"),
        ("e6", "e3"),
        ("e7", "e4", "e8", "e9"),
    ),
}


def case_ninegon_spectrum() -> dict:
    lam = _lam(1, 1, 2, 2, 3, 3, 3, "1/2", "1/4")
    families = {
        name: _torus_summary(lam, _family(lam, *groups))
        for name, groups in NINEGON_FAMILIES.items()
    }
    reports = S.enumerate_maximal_tori(lam)
    return {
        "lambda": lam.to_json(),
        "generic": is_generic(lam),
        "min_lopsided_N": S.min_lopsided_partition(lam)[0],
        "max_bending_dim": S.max_bending_dim(lam),
        "families": families,
        "maximal_tori": _spectrum(reports),
    }


def case_conjugacy_1a444() -> dict:
    lam = _lam(1, 2, 4, 4, 4)
    rect_fam = _family(lam, ("e3", "e1"), ("e4", "e2"))
    trap_fam = _family(lam, ("e2", "e1"), ("e3", "e2", "e1"))
    printed_fam = _family(lam, ("e3", "e1"), ("e3", "e2", "e1"))
    rect = P.moment_polytope(lam, rect_fam)
    trap = P.moment_polytope(lam, trap_fam)
    printed = P.moment_polytope(lam, printed_fam)
    printed_vs_rect = P.lattice_equivalent(printed, rect)
    classes = P.conjugacy_classes(lam)

    def entry(family: B.BendingSet, poly: P.LatticePolytope) -> dict:
        return {
            "members": family.to_json(lam)["members"],
            "polytope": poly.to_json(),
            "is_delzant": P.is_delzant(poly),
            "volume": format_rational(P.volume(poly)),
        }

    return {
        "lambda": lam.to_json(),
        "rectangle_family": entry(rect_fam, rect),
        "trapezoid_family": entry(trap_fam, trap),
        "rectangle_trapezoid_equivalent": P.lattice_equivalent(rect, trap) is not None,
        "printed_pair_family": {
            **entry(printed_fam, printed),
            "equivalent_to_rectangle": printed_vs_rect is not None,
            "map": None
            if printed_vs_rect is None
            else {
                "matrix": [list(row) for row in printed_vs_rect[0]],
                "translation": [format_rational(t) for t in printed_vs_rect[1]],
            },
        },
        "figure_discrepancy": printed_vs_rect is not None,
        "note": (
            "the pair family {{c,1},{c,a,1}} produces a parallelogram that "
            "shears onto the rectangle class; the trapezoid with parallel "
            "sides 2a-2 and 2a+2 comes from {{a,1},{c,a,1}}"
        ),
        "classes": classes.to_json(lam),
    }


def case_nonbending_pentagon() -> dict:
    lam = _lam(1, "5/2", 4, 4, 4)
    report = P.nonbending_report(lam)
    assert report is not None
    return {"lambda": lam.to_json(), "report": report.to_json(lam)}


CASES: dict[str, Callable[[], dict]] = {
    "pentagon-critical": case_pentagon_critical,
    "pentagon-mixed-dims": case_pentagon_mixed_dims,
    "two-long-edge": case_two_long_edge,
    "two-long-edge-probe": case_two_long_edge_probe,
    "heptagon-spectrum": case_heptagon_spectrum,
    "ninegon-spectrum": case_ninegon_spectrum,
    "conjugacy-1a444": case_conjugacy_1a444,
    "nonbending-pentagon": case_nonbending_pentagon,
}


def build_case(case_id: str) -> dict:
    if case_id not in CASES:
        raise SchemaError(
            f"unknown example id {case_id!r}", known=sorted(CASES)
        )
    return CASES[case_id]()


def golden_dir() -> Path:
    return Path(resources.files("bendix") / "golden")


def load_golden(case_id: str) -> dict | None:
    path = golden_dir() / f"{case_id}.json"
    if not path.exists():
        return None
    return json.loads(path.read_text())


def write_golden(case_id: str, report: dict) -> Path:
    path = golden_dir() / f"{case_id}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2) + "\n")
    return path


def run_examples(case_id: str | None = None, update_golden: bool = False) -> dict:
    """Replay registered cases, comparing each against its golden file."""
    ids = [case_id] if case_id is not None else sorted(CASES)
    results = []
    for cid in ids:
        report = build_case(cid)
        if update_golden:
            write_golden(cid, report)
            results.append({"id": cid, "status": "written"})
            continue
        golden = load_golden(cid)
        if golden is None:
            results.append({"id": cid, "status": "missing-golden"})
        elif golden == report:
            results.append({"id": cid, "status": "pass"})
        else:
            results.append({"id": cid, "status": "fail"})
    return {
        "results": results,
        "all_pass": all(r["status"] in ("pass", "written") for r in results),
    }
