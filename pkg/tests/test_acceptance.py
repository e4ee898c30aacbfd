"""Acceptance suite: nine end-to-end criteria, one test each.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from generators import abelian_curve_spec, base_change_pair, surface_gerbe  # noqa: E402
from realstack import specio  # noqa: E402
from realstack.cli import golden_dir, run_document  # noqa: E402
from realstack.galois_h1 import h1  # noqa: E402
from realstack.group_core import GGroup, catalog, cyclic, inversion, involutions  # noqa: E402
from realstack.quotient_stack import enumerate_spaces, real_locus, torsor_oracle  # noqa: E402
from realstack.search_harness import Campaign, run  # noqa: E402
from realstack.split_gerbe import (  # noqa: E402
    base_change_sigma,
    component_real_h_star,
    inertia_cover,
    inertia_h_star,
    real_cover,
)
from realstack.stacky_curve import faithful_quotient, inertia_factorization_check  # noqa: E402
from realstack._unionfind import UnionFind  # noqa: E402


def golden(name):
    doc = json.loads((golden_dir() / f"{name}.json").read_text())
    out, ok = run_document(doc["command"], doc["input"], doc.get("options"))
    produced = specio.dumps({"schema": specio.SCHEMA, **out})
    return out, ok, produced == specio.dumps(doc["expected"])


def criterion_1():
    h1.cache_clear()
    t0 = time.perf_counter()
    c2, _, same_a = golden("h1_c2_trivial")
    v4, _, same_b = golden("h1_v4_swap")
    parity = all(h1(GGroup(cyclic(n), inversion(cyclic(n)))).count == (2 if n % 2 == 0 else 1)
                 for n in range(1, 13))
    elapsed = time.perf_counter() - t0
    ok = c2["class_count"] == 2 and v4["class_count"] == 1 and parity and same_a and same_b
    return ok and elapsed < 1.0, f"C2 -> {c2['class_count']}, V4/swap -> {v4['class_count']}, " \
                                 f"cyclic parity {parity}, {elapsed:.3f}s"


def criterion_2():
    t0 = time.perf_counter()
    checked = bad = 0
    for name, g in catalog(8).items():
        for s in involutions(g):
            for space in enumerate_spaces(GGroup(g, s), 6):
                checked += 1
                if real_locus(space).total != torsor_oracle(space).count:
                    bad += 1
    summary = run(Campaign("quotient", seed=0, count=1000, max_order=8, max_carrier=6))
    checked += summary.checked
    bad += len(summary.violations)
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed < 60, f"{checked} spaces, {bad} mismatches, {elapsed:.1f}s"


def criterion_3():
    summary = run(Campaign("bgamma", max_order=24))
    return not summary.violations and summary.checked > 0, \
        f"{summary.checked} (group, involution) pairs, {len(summary.violations)} violations"


def criterion_4():
    m, m_ok, m_same = golden("moduli_a1")
    k, k_ok, k_same = golden("elliptic_kummer_max")
    ok = (m["inertia"] == 8 and m["holds"] and k["inertia"] == 6 and k["real"] == 4
          and k["holds"] and m_ok and k_ok and m_same and k_same)
    return ok, f"moduli_a1 inertia {m['inertia']}; kummer {k['real']} <= {k['inertia']}"


def _brute_quotient_order(bp, k):
    # cosets of the marked kernel, found by direct multiplication
    K = bp.kernel_subgroup(k)
    G = bp.stabilizer
    return len({frozenset(G.mul(x, y) for y in K) for x in range(G.order)})


def criterion_5():
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(200):
        spec = abelian_curve_spec(rng)
        q = faithful_quotient(spec)
        orders = [_brute_quotient_order(bp, spec.kernel_order) for bp in spec.branch_points]
        if not inertia_factorization_check(spec) or orders != [bp.order for bp in q.branch_points]:
            bad += 1
    return bad == 0, f"200 specs, {bad} failures"


def criterion_6():
    e1, ok1, same1 = golden("enriques_1")
    e2, ok2, same2 = golden("enriques_2")
    gerbe = specio.parse_gerbe(json.loads((golden_dir() / "enriques_2.json").read_text())["input"])
    census = []
    for i, comp in enumerate(gerbe.components):
        sizes = [len(o) for o in real_cover(gerbe, i).orbits]
        parts = sorted(comp.real_table[s] for s in sizes)
        census.append((tuple(parts), bool(comp.loop_generators)))  # loops mark RP^2
    expected = sorted([((2, 3, 3), True)] * 3 + [((2, 2, 2, 2), False), ((3,), True), ((2,), False)])
    ok = (e1["real"], e1["inertia"], e1["holds"]) == (48, 56, True) and ok1 and same1
    ok = ok and sorted(census) == expected and e2["holds"] and ok2 and same2 and e2["real"] == 37
    ok = ok and sum(component_real_h_star(gerbe, i) for i in range(6)) == 37
    return ok, f"enriques_1 {e1['real']}/{e1['inertia']}; enriques_2 {e2['real']}/{e2['inertia']}"


def criterion_7():
    t0 = time.perf_counter()
    summary = run(Campaign("gerbe2torsion", seed=0, count=1000, max_rank=3, max_genus=4))
    elapsed = time.perf_counter() - t0
    return not summary.violations and elapsed < 60, \
        f"{summary.checked} gerbes, {len(summary.violations)} violations, {elapsed:.1f}s"


def criterion_8():
    f1, _, same1 = golden("elliptic_family_1")
    f2, _, same2 = golden("elliptic_family_2")
    nontrivial = f1["components"][1]["effective_sigma"] != [0, 1, 2, 3]
    trivial = f2["components"][1]["effective_sigma"] == [0, 1, 2, 3]
    rng = np.random.default_rng(51)
    round_trips = 0
    for _ in range(100):
        fiber, omega = base_change_pair(rng)
        sigma_q = base_change_sigma(fiber, omega)
        round_trips += base_change_sigma(GGroup(fiber.group, sigma_q), omega.inverse()) == fiber.sigma
    ok = nontrivial and trivial and same1 and same2 and round_trips == 100
    return ok, f"family 1 nontrivial {nontrivial}, family 2 trivial {trivial}, round trips {round_trips}/100"


def lifted_betti_total(gerbe, orbit):
    """h* of the cover over one inertia orbit, from the lifted one-vertex CW structure.

    Cells upstairs: one vertex, 2g edges and one face per sheet.  Sheets are the
    conjugacy classes in the orbit; edge j goes from sheet c to sheet a_j(c).
    """
    g = gerbe.base.genus
    classes = gerbe.fiber.group.conjugacy_classes
    index = {c[0]: i for i, c in enumerate(classes)}
    class_of = {x: index[c[0]] for c in classes for x in c}
    sheets = list(orbit)
    uf = UnionFind(len(classes))
    for a in gerbe.global_generators:
        for c in sheets:
            uf.union(c, class_of[a(classes[c][0])])
    b0 = len({uf.find(c) for c in sheets})
    chi = len(sheets) - 2 * g * len(sheets) + len(sheets)
    # closed orientable surface: b2 = b0 and b1 = 2 b0 - chi
    return b0 + (2 * b0 - chi) + b0


def criterion_9():
    rng = np.random.default_rng(99)
    bad = checked = 0
    for i in range(200):
        genus = i % 4
        gerbe = surface_gerbe(rng, genus)
        orbits = inertia_cover(gerbe).orbits
        per = [lifted_betti_total(gerbe, o) for o in orbits]
        ok = inertia_h_star(gerbe) == sum(per)
        if genus == 1:
            ok = ok and inertia_h_star(gerbe) == 4 * len(orbits)
        if genus == 0:
            ok = ok and all(h == 2 for o, h in zip(orbits, per) if len(o) == 1)
        checked += 1
        bad += not ok
    return bad == 0, f"{checked} surface gerbes, {bad} mismatches"


CRITERIA = [
    (1, "cohomology golden values", criterion_1),
    (2, "oracle equivalence", criterion_2),
    (3, "H1 at most the class count", criterion_3),
    (4, "stacky-curve goldens", criterion_4),
    (5, "inertia factorization", criterion_5),
    (6, "gerbe goldens", criterion_6),
    (7, "2-torsion gerbe fuzz", criterion_7),
    (8, "base change", criterion_8),
    (9, "Riemann-Hurwitz consistency", criterion_9),
]


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, record_property):
    ok, detail = check()
    record_property("detail", detail)
    assert ok, detail


def main() -> int:
    failures = 0
    for number, title, check in CRITERIA:
        try:
            ok, detail = check()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failures += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
