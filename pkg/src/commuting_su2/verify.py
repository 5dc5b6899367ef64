"""Cross-checks shared by the CLI ``verify`` command and the test-suite."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from . import closed_form as cf
from .cw import blowup_complex, check_guard, collapse_to_yn
from .linalg import AbelianGroup, ChainComplex, cohomology_with_coefficients, mod2_rank, z2_dimension
from .restriction import (
    IndexData,
    all_index_data,
    choose_a,
    exhaustive_choose_a,
    expected_rank,
    is_odd_witness,
    restriction_matrix,
)
from .ring import BlowupRing, CohomologyRing, PresentedRing, YnRing, additive_structure, chern_character
from .ring import equivariant_kt_ring

log = logging.getLogger(__name__)

CHECKS = ("cohomology", "uct", "k-groups", "ring", "chern", "restriction", "equivariant", "fi-growth")
ORACLE_CHECKS = frozenset({"cohomology", "uct"})


@dataclass
class CheckResult:
    name: str
    n: int | None
    passed: bool
    detail: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"check": self.name, "n": self.n, "passed": self.passed, "detail": self.detail}


def oracle_complex(space: str, n: int, max_n: int | None = None) -> ChainComplex:
    check_guard(n, max_n)
    return blowup_complex(n, max_n) if space == "blowup" else collapse_to_yn(n, max_n)


def oracle_groups(space: str, n: int, max_n: int | None = None) -> list[AbelianGroup]:
    groups = cohomology_with_coefficients(oracle_complex(space, n, max_n), "Z")
    out = []
    for k in range(cf.dimension(n) + 1):
        out.append(groups[k] if k < len(groups) else AbelianGroup())
        log.info("oracle %s n=%d H^%d = %s", space, n, k, out[-1])
    return out


def oracle_z2_dims(space: str, n: int, max_n: int | None = None) -> list[int]:
    C = oracle_complex(space, n, max_n)
    dims = [z2_dimension(g) for g in cohomology_with_coefficients(C, "Z2")]
    return dims + [0] * (cf.dimension(n) + 1 - len(dims))


def _closed(space: str):
    return cf.blowup_cohomology if space == "blowup" else cf.yn_cohomology


def check_cohomology(n: int, max_n: int | None = None) -> CheckResult:
    detail = []
    for space in cf.SPACES:
        got = oracle_groups(space, n, max_n)
        for k, g in enumerate(got):
            want = _closed(space)(n, k)
            if g != want:
                detail.append(f"{space} H^{k}: oracle {g}, closed form {want}")
    return CheckResult("cohomology", n, not detail, detail)


def check_uct(n: int, max_n: int | None = None) -> CheckResult:
    detail = []
    for space in cf.SPACES:
        dims = oracle_z2_dims(space, n, max_n)
        integral = oracle_groups(space, n, max_n) + [AbelianGroup()]
        for k, d in enumerate(dims):
            via_uct = integral[k].free_rank + integral[k].two_torsion_count + integral[k + 1].two_torsion_count
            closed = cf.cohomology_z2(space, n, k)
            if not d == via_uct == closed:
                detail.append(f"{space} H^{k}(Z2): mod-2 ranks {d}, UCT {via_uct}, closed form {closed}")
    dims = oracle_z2_dims("yn", n, max_n)
    if len(dims) > 3 and dims[3] != cf.yn_mod2_betti(n, 3):
        detail.append(f"b3(Y_{n}; Z2) = {dims[3]}, formula {cf.yn_mod2_betti(n, 3)}")
    return CheckResult("uct", n, not detail, detail or [f"b3(Y_{n}; Z2) = {dims[3]} confirmed"])


def check_k_groups(n: int) -> CheckResult:
    detail = []
    for ring, closed in ((BlowupRing(n), cf.blowup_ktheory), (YnRing(n), cf.yn_ktheory)):
        for parity in cf.PARITIES:
            got, want = additive_structure(ring, parity), closed(n, parity)
            if got != want:
                detail.append(f"{ring.name} {parity}: basis gives {got}, closed form {want}")
    return CheckResult("k-groups", n, not detail, detail)


def _expect(detail: list[str], label: str, got, want):
    if got != want:
        detail.append(f"{label}: got {got}, expected {want}")


def _sign(perm) -> int:
    inv = sum(1 for a, b in combinations(range(len(perm)), 2) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def blowup_relation_failures(n: int) -> list[str]:
    """Every stated relation of the blowup ring, checked exhaustively over indices."""
    B = BlowupRing(n)
    g = B.gen
    idx = range(1, n + 1)
    bad: list[str] = []
    zero = B.zero()
    u = g("u")
    for i, j in product(idx, repeat=2):
        _expect(bad, f"x{i}{j} + x{j}{i}", g("x", i, j) + g("x", j, i), zero)
    for quad in combinations(idx, 4):
        base = g("x", quad[0], quad[1]) * g("x", quad[2], quad[3])
        for p in permutations(range(4)):
            q = [quad[k] for k in p]
            _expect(bad, f"sign relation x{q[0]}{q[1]}x{q[2]}{q[3]}", g("x", q[0], q[1]) * g("x", q[2], q[3]), base * _sign(p))
    for tri in combinations(idx, 3):
        base = g("w", tri[0]) * g("x", tri[1], tri[2])
        for p in permutations(range(3)):
            q = [tri[k] for k in p]
            _expect(bad, f"sign relation w{q[0]}x{q[1]}{q[2]}", g("w", q[0]) * g("x", q[1], q[2]), base * _sign(p))
    for i, j in product(idx, repeat=2):
        _expect(bad, f"w{i}w{j}", g("w", i) * g("w", j), zero)
        _expect(bad, f"v{i}v{j}", g("v", i) * g("v", j), zero)
        _expect(bad, f"v{i}w{j}", g("v", i) * g("w", j), zero)
    for i in idx:
        _expect(bad, f"2v{i}", g("v", i) * 2, zero)
        _expect(bad, f"uv{i}", u * g("v", i), zero)
        _expect(bad, f"uw{i}", u * g("w", i), zero)
    _expect(bad, "2u", u * 2, zero)
    _expect(bad, "u^2", u * u, zero)
    for i, j in combinations(idx, 2):
        x = g("x", i, j)
        _expect(bad, f"x{i}{j}^2", x * x, u * x)
        _expect(bad, f"u x{i}{j}^2", u * x * x, zero)
        for k in idx:
            _expect(bad, f"v{k} x{i}{j}^2", g("v", k) * x * x, zero)
    for i, j, k in permutations(idx, 3):
        p = g("x", i, j) * g("x", j, k)
        _expect(bad, f"u x{i}{j} x{j}{k}", u * p, zero)
        _expect(bad, f"2 x{i}{j} x{j}{k}", p * 2, zero)
        for ell in idx:
            if ell not in (j, k):
                _expect(bad, f"v{i} x{j}{k} x{k}{ell}", g("v", i) * g("x", j, k) * g("x", k, ell), zero)
    return bad


def yn_relation_failures(n: int) -> list[str]:
    Y = YnRing(n)
    h = Y.gen
    bad: list[str] = []
    zero = Y.zero()
    idx = range(1, n + 1)
    for quad in combinations(idx, 4):
        d = h("d", *quad)
        for p in permutations(range(4)):
            q = [quad[k] for k in p]
            if q[0] < q[1] and q[2] < q[3]:
                _expect(bad, f"a{q[0]}{q[1]} a{q[2]}{q[3]}", h("a", q[0], q[1]) * h("a", q[2], q[3]), d * (4 * _sign(p)))
    for i, j in combinations(idx, 2):
        _expect(bad, f"a{i}{j}^2", h("a", i, j) * h("a", i, j), zero)
    b_s = [m for m in Y.basis() if m.kind == "b"]
    c_s = [m for m in Y.basis() if m.kind == "c"]
    for mb, mc in product(b_s, c_s):
        _expect(bad, f"{mb} {mc}", Y.element(mb) * Y.element(mc), zero)
    for f in (m for m in Y.basis() if m.kind == "f"):
        F = Y.element(f)
        _expect(bad, f"2{f}", F * 2, zero)
        _expect(bad, f"1 {f}", Y.one() * F, F)
        for m in Y.basis():
            if m != Y.unit:
                _expect(bad, f"{f} {m}", F * Y.element(m), zero)
                _expect(bad, f"{m} {f}", Y.element(m) * F, zero)
    return bad


def structural_failures(R: PresentedRing, elements=None) -> list[str]:
    """Associativity and graded commutativity on basis monomials (or given elements)."""
    els = elements if elements is not None else [R.element(m) for m in R.basis()]
    bad = []
    for a, b in product(els, repeat=2):
        s = -1 if a.parity == b.parity == "odd" else 1
        if a * b != (b * a) * s:
            bad.append(f"commutativity fails for {a}, {b}")
    for a, b, c in product(els, repeat=3):
        if (a * b) * c != a * (b * c):
            bad.append(f"associativity fails for {a}, {b}, {c}")
    return bad


def check_ring(n: int) -> CheckResult:
    detail = blowup_relation_failures(n) + yn_relation_failures(n)
    if n <= 4:
        detail += structural_failures(BlowupRing(n)) + structural_failures(YnRing(n))
    return CheckResult("ring", n, not detail, detail)


def chern_bijection_failures(R: PresentedRing) -> list[str]:
    H = CohomologyRing(R)
    closed = _closed(R.name)
    bad = []
    for d, grp in H.groups().items():
        if grp != closed(R.n, d):
            bad.append(f"{R.name} degree {d}: ch-image {grp}, closed form {closed(R.n, d)}")
    images = [chern_character(R.element(m)) for m in R.basis()]
    if len(set(images)) != len(images):
        bad.append(f"{R.name}: ch is not injective on the basis")
    return bad


def chern_multiplicativity(R: PresentedRing) -> tuple[list[str], int, int]:
    """(failures, determined pairs checked, undetermined pairs skipped)."""
    bad, checked, skipped = [], 0, 0
    els = [R.element(m) for m in R.basis()]
    for a, b in product(els, repeat=2):
        p = a * b
        if not p.is_determined():
            skipped += 1
            continue
        checked += 1
        if chern_character(p) != chern_character(a) * chern_character(b):
            bad.append(f"ch({a} * {b}) differs from ch({a}) ch({b})")
    return bad, checked, skipped


def check_chern(n: int) -> CheckResult:
    failures, info = [], []
    for R in (BlowupRing(n), YnRing(n)):
        failures += chern_bijection_failures(R)
        if n <= 4:
            bad, checked, skipped = chern_multiplicativity(R)
            failures += bad
            info.append(f"{R.name}: multiplicative on {checked} determined pairs, {skipped} undetermined skipped")
    return CheckResult("chern", n, not failures, failures or info)


def restriction_sample(n: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    out = []
    while len(out) < count:
        data = IndexData(
            [i for i in range(1, n + 1) if rng.random() < 0.5],
            [p for p in pairs if rng.random() < 0.5],
        )
        if not data.is_empty():
            out.append(data)
    return out


def choose_a_failures(n: int, cases) -> list[str]:
    bad = []
    for data in cases:
        a = choose_a(data, n)
        if not is_odd_witness(data, a):
            bad.append(f"choose_a gave even parity for I={sorted(data.I)} J={sorted(data.J)}")
        if n <= 20:
            w = exhaustive_choose_a(data, n)
            if w is None:
                bad.append(f"no witness for I={sorted(data.I)} J={sorted(data.J)}")
        if is_odd_witness(data, (1,) * n):
            bad.append(f"all-+1 vector has odd parity for I={sorted(data.I)} J={sorted(data.J)}")
    return bad


def check_restriction(n: int) -> CheckResult:
    r = mod2_rank(restriction_matrix(n))
    detail = [] if r == expected_rank(n) else [f"mod-2 rank {r}, expected {expected_rank(n)}"]
    cases = all_index_data(n) if n <= 5 else restriction_sample(n, 200)
    detail += choose_a_failures(n, cases)
    passed = not detail
    if passed:
        detail.append(f"rank {r} = 1 + {n} + C({n},2)")
    return CheckResult("restriction", n, passed, detail)


def check_equivariant() -> CheckResult:
    E = equivariant_kt_ring()
    detail = [f"relation {k} survives restriction" for k, ok in E.relations_vanish_after_restriction().items() if not ok]
    for name, (a, b) in E.relations().items():
        if not (a * b).is_zero():
            detail.append(f"relation {name} does not reduce to 0 in the ring")
    for (na, a), (nb, b) in product(E.basis(), repeat=2):
        if E.restrict(a * b) != E.restrict(a) * E.restrict(b):
            detail.append(f"restriction not multiplicative on {na}*{nb}")
    if E.kernel_rank():
        detail.append(f"restriction kernel has rank {E.kernel_rank()}")
    return CheckResult("equivariant", None, not detail, detail)


def check_fi_growth(n_max: int = 12, max_degree: int = 9) -> CheckResult:
    seq = [cf.yn_mod2_betti(n, 3) for n in range(1, n_max + 1)]
    detail = []
    for d in range(0, max_degree + 1):
        if cf.polynomial_growth_test(seq, d):
            detail.append(f"b3 sequence passes the degree-{d} test")
    free = [cf.yn_cohomology(n, 3).free_rank for n in range(1, n_max + 1)]
    if not cf.polynomial_growth_test(free, 1):
        detail.append("free rank of H^3 is not linear")
    return CheckResult("fi-growth", None, not detail, detail or [f"b3 = {seq} is not polynomial up to degree {max_degree}"])


def run_checks(checks, ns, max_n: int | None = None) -> list[CheckResult]:
    per_n = {
        "cohomology": lambda n: check_cohomology(n, max_n),
        "uct": lambda n: check_uct(n, max_n),
        "k-groups": check_k_groups,
        "ring": check_ring,
        "chern": check_chern,
        "restriction": check_restriction,
    }
    out = []
    for name in checks:
        if name == "equivariant":
            out.append(check_equivariant())
        elif name == "fi-growth":
            out.append(check_fi_growth())
        else:
            out.extend(per_n[name](n) for n in ns)
    return out
