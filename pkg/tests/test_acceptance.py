"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or as a plain script.
"""

import sys
import time
from itertools import combinations

import pytest

from commuting_su2 import closed_form as cf
from commuting_su2.restriction import all_index_data, expected_rank, restriction_matrix
from commuting_su2.linalg import mod2_rank
from commuting_su2.ring import BlowupRing, YnRing, additive_structure, equivariant_kt_ring
from commuting_su2.verify import (
    blowup_relation_failures,
    chern_bijection_failures,
    chern_multiplicativity,
    choose_a_failures,
    oracle_groups,
    oracle_z2_dims,
    structural_failures,
    yn_relation_failures,
)


def report(capsys, number: int, title: str, ok: bool, note: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({note})" if note else "")
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def criterion_1():
    start = time.perf_counter()
    bad = [
        (n, i)
        for n in range(1, 6)
        for i, g in enumerate(oracle_groups("blowup", n))
        if g != cf.blowup_cohomology(n, i)
    ]
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 60, f"n=1..5, {elapsed:.1f}s, mismatches {bad}"


def criterion_2():
    bad = [(n, i) for n in range(1, 6) for i, g in enumerate(oracle_groups("yn", n)) if g != cf.yn_cohomology(n, i)]
    spot = str(oracle_groups("yn", 3)[3]) == "Z^3 + Z2" and str(oracle_groups("yn", 4)[3]) == "Z^4 + Z2^5"
    return not bad and spot, f"n=1..5, mismatches {bad}"


def criterion_3():
    bad = []
    for n in range(1, 9):
        for ring, closed in ((BlowupRing(n), cf.blowup_ktheory), (YnRing(n), cf.yn_ktheory)):
            for p in cf.PARITIES:
                if additive_structure(ring, p) != closed(n, p):
                    bad.append((ring.name, n, p))
    return not bad, f"n=1..8, mismatches {bad}"


def criterion_4():
    failures = []
    for n in range(1, 5):
        failures += blowup_relation_failures(n) + yn_relation_failures(n)
        failures += structural_failures(BlowupRing(n)) + structural_failures(YnRing(n))
    return not failures, f"n<=4, {len(failures)} failures" + (f": {failures[:3]}" if failures else "")


def criterion_5():
    failures, checked = [], 0
    for n in range(1, 7):
        for R in (BlowupRing(n), YnRing(n)):
            failures += chern_bijection_failures(R)
            if n <= 4:
                bad, c, _ = chern_multiplicativity(R)
                failures += bad
                checked += c
    return not failures, f"bijection n<=6, multiplicative on {checked} determined pairs n<=4"


def criterion_6():
    failures = [n for n in range(1, 13) if mod2_rank(restriction_matrix(n)) != expected_rank(n)]
    cases = 0
    for n in range(1, 6):
        data = list(all_index_data(n))
        cases += len(data)
        failures += choose_a_failures(n, data)
    return not failures, f"rank n=1..12, full (I,J) sweep n<=5 ({cases} cases)"


def criterion_7():
    oracle = [oracle_z2_dims("yn", n)[3] for n in range(1, 6)]
    formula = [2**n - 1 - cf.binom(n, 2) + cf.binom(n + 1, 3) for n in range(1, 6)]
    seq = [cf.yn_mod2_betti(n, 3) for n in range(1, 13)]
    rejects = not any(cf.polynomial_growth_test(seq, d) for d in range(10))
    free = [cf.yn_cohomology(n, 3).free_rank for n in range(1, 13)]
    linear = cf.polynomial_growth_test(free, 1) and free == list(range(1, 13))
    return oracle == formula and rejects and linear, f"oracle b3 {oracle}"


def criterion_8():
    E = equivariant_kt_ring()
    vanish = E.relations_vanish_after_restriction()
    return all(vanish.values()) and E.kernel_rank() == 0, f"kernel rank {E.kernel_rank()}"


CRITERIA = [
    (1, "oracle vs closed form, blowup cohomology", criterion_1),
    (2, "oracle vs closed form, Y_n cohomology", criterion_2),
    (3, "K-group additive counts", criterion_3),
    (4, "ring relation property suite", criterion_4),
    (5, "Chern character bijection and multiplicativity", criterion_5),
    (6, "restriction independence and sign-vector choice", criterion_6),
    (7, "FI-growth of mod-2 Betti numbers", criterion_7),
    (8, "equivariant K-ring restriction", criterion_8),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, note = fn()
    report(capsys, number, title, ok, note)


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, note = fn()
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({note})")
        failed += not ok
    sys.exit(1 if failed else 0)
