"""Presented K-rings of the blowup and of Y_n, their cohomology images, and K^0_Gamma(T).

Elements live on the canonical additive bases:

blowup, even   1 = X_{}, X_S, u X_S, v_i X_S (i < min S)
blowup, odd    w_i X_S (i < min S)
Y_n,  even     1, a_{ij} = r(2 x_ij), d_S = r(X_S) (|S| >= 4), b_S = r(u X_S), c_{i,S} = r(v_i X_S)
Y_n,  odd      e_{i,S} = r(w_i X_S), f_1..f_m

where X_S = x_{s1 s2} x_{s3 s4} ... for a sorted set S of even size.

Multiplication concatenates raw factors (u, v's, w's, x-edges) and reduces.
The x-edge reduction uses the permutation-sign relation in the form of a
"re-pairing" move {a,b},{c,d} -> {a,c},{b,d} on vertex-disjoint edges, which
leaves every vertex degree unchanged.  A product is forced to u X_V once a
doubled edge x_ab x_ab is reachable, because x_ab^2 = u x_ab.  When no stated
relation decides a product it is returned as an undetermined atom.  Atoms are
2-torsion and are keyed by the smallest configuration in their re-pairing
class, so the result depends only on the multiset of raw factors and
multiplication stays associative.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .closed_form import binom, yn_torsion_in_degree3
from .linalg import AbelianGroup, IntMatrix, smith_normal_form

TORSION_KINDS = frozenset({"uX", "vX", "b", "c", "f"})
ODD_KINDS = frozenset({"wX", "e", "f"})


class RingMismatch(ValueError):
    """Operands belong to different rings."""


class UndeterminedInput(ValueError):
    """The element has a component that no known relation determines."""


class NotInImage(ValueError):
    """A blowup class that is not of the form r_*(...) was projected to Y_n."""


def _idx(*ints: int) -> str:
    if all(0 <= k < 10 for k in ints):
        return "".join(map(str, ints))
    return "(" + ",".join(map(str, ints)) + ")"


def _pairs(S: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    return tuple((S[k], S[k + 1]) for k in range(0, len(S), 2))


def _perm_sign(seq: Iterable[int]) -> int:
    seq = list(seq)
    inv = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def even_subsets(items: Iterable[int], min_size: int = 0) -> list[tuple[int, ...]]:
    items = sorted(items)
    out = []
    for k in range(min_size + (min_size % 2), len(items) + 1, 2):
        out.extend(combinations(items, k))
    return out


@dataclass(frozen=True, order=True)
class Monomial:
    """A canonical basis element.

    ``kind`` is one of X, uX, vX, wX (blowup) or 1, a, d, b, c, e, f (Y_n);
    ``i`` is the v/w/c/e index or the f number, ``S`` the sorted x-index set.
    """

    kind: str
    S: tuple[int, ...] = ()
    i: int = 0

    @property
    def order(self) -> int:
        """0 for infinite order, 2 for 2-torsion."""
        return 2 if self.kind in TORSION_KINDS else 0

    @property
    def parity(self) -> str:
        return "odd" if self.kind in ODD_KINDS else "even"

    def __str__(self):
        k, S, i = self.kind, self.S, self.i
        xs = [f"x{_idx(a, b)}" for a, b in _pairs(S)]
        if k == "X":
            return "*".join(xs) or "1"
        if k == "uX":
            return "*".join(["u"] + xs)
        if k == "vX":
            return "*".join([f"v{_idx(i)}"] + xs)
        if k == "wX":
            return "*".join([f"w{_idx(i)}"] + xs)
        if k == "1":
            return "1"
        if k in ("a", "d", "b"):
            return f"{k}{_idx(*S)}"
        if k in ("c", "e"):
            return f"{k}{_idx(i, *S)}"
        if k == "f":
            return f"f{_idx(i)}"
        raise ValueError(k)


@dataclass(frozen=True, order=True)
class Atom:
    """An unresolved 2-torsion product: a pure x-product, or v_i times a matching."""

    kind: str  # "x" or "v"
    edges: tuple[tuple[int, int], ...]
    i: int = 0

    def __str__(self):
        body = ".".join(f"x{_idx(a, b)}" for a, b in self.edges)
        if self.kind == "v":
            body = f"v{_idx(self.i)}." + body
        return f"tau[{body}]"


@dataclass(frozen=True)
class _Raw:
    nu: int
    vs: tuple[int, ...]
    ws: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __add__(self, other: "_Raw") -> "_Raw":
        return _Raw(self.nu + other.nu, self.vs + other.vs, self.ws + other.ws, self.edges + other.edges)


_ZERO_RESULT: tuple = ((), ())


@lru_cache(maxsize=None)
def _repairing_class(edges: tuple[tuple[int, int], ...]) -> tuple[bool, tuple[tuple[int, int], ...]]:
    """(a doubled edge is reachable, smallest configuration) for an x-edge multiset."""
    start = tuple(sorted(edges))
    seen = {start}
    queue = deque([start])
    doubled = False
    while queue:
        cur = queue.popleft()
        if len(set(cur)) < len(cur):
            doubled = True
        for p, q in combinations(range(len(cur)), 2):
            (a, b), (c, d) = cur[p], cur[q]
            if len({a, b, c, d}) < 4:
                continue
            rest = cur[:p] + cur[p + 1 : q] + cur[q + 1 :]
            for e1, e2 in (((a, c), (b, d)), ((a, d), (b, c))):
                nxt = tuple(sorted(rest + (tuple(sorted(e1)), tuple(sorted(e2)))))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return doubled, min(seen)


@lru_cache(maxsize=None)
def _reduce(raw: _Raw) -> tuple[tuple[tuple[Monomial, int], ...], tuple[Atom, ...]]:
    """Reduce a raw factor product to canonical terms (sign included) and atoms."""
    if any(a == b for a, b in raw.edges):
        return _ZERO_RESULT
    nt = raw.nu + len(raw.vs)
    if len(raw.ws) >= 2 or nt >= 2 or (raw.ws and nt):
        return _ZERO_RESULT
    deg = Counter(v for e in raw.edges for v in e)
    flat = [v for e in raw.edges for v in e]
    if raw.ws:
        seq = [raw.ws[0]] + flat
        if len(set(seq)) != len(seq):
            return _ZERO_RESULT
        srt = sorted(seq)
        return ((Monomial("wX", tuple(srt[1:]), srt[0]), _perm_sign(seq)),), ()
    matching = all(d <= 1 for d in deg.values())
    S = tuple(sorted(deg))
    if nt:
        if not matching:
            return _ZERO_RESULT
        if raw.nu:
            return ((Monomial("uX", S), 1),), ()
        i = raw.vs[0]
        if i not in deg and (not S or i < S[0]):
            return ((Monomial("vX", S, i), 1),), ()
        return (), (Atom("v", _pairs(S), i),)
    if matching:
        return ((Monomial("X", S), _perm_sign(flat)),), ()
    undirected = tuple(tuple(sorted(e)) for e in raw.edges)
    doubled, rep = _repairing_class(undirected)
    if doubled:
        high = [d for d in deg.values() if d >= 2]
        if high == [2, 2]:
            return ((Monomial("uX", S), 1),), ()
        return _ZERO_RESULT
    return (), (Atom("x", rep),)


class RingElement:
    """Z-linear combination of basis monomials plus a set of undetermined atoms."""

    __slots__ = ("ring", "coeffs", "undetermined")

    def __init__(self, ring: "PresentedRing", coeffs: Mapping[Monomial, int] | None = None, undetermined=()):
        self.ring = ring
        clean = {}
        for m, c in (coeffs or {}).items():
            if m.order == 2:
                c %= 2
            if c:
                clean[m] = c
        self.coeffs = clean
        self.undetermined = frozenset(undetermined)

    # construction helpers
    def _same(self, other: "RingElement"):
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise RingMismatch(f"cannot combine elements of {self.ring} and {getattr(other, 'ring', other)}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        self._same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return RingElement(self.ring, out, self.undetermined ^ other.undetermined)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {m: -c for m, c in self.coeffs.items()}, self.undetermined)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            atoms = self.undetermined if other % 2 else frozenset()
            return RingElement(self.ring, {m: c * other for m, c in self.coeffs.items()}, atoms)
        self._same(other)
        return self.ring.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs and self.undetermined == other.undetermined

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items()), self.undetermined))

    def is_zero(self) -> bool:
        return not self.coeffs and not self.undetermined

    def is_determined(self) -> bool:
        return not self.undetermined

    @property
    def parity(self) -> str | None:
        ps = {m.parity for m in self.coeffs} | ({"even"} if self.undetermined else set())
        if len(ps) > 1:
            return "mixed"
        return ps.pop() if ps else None

    def terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.coeffs.items(), key=lambda t: self.ring.sort_key(t[0]))

    def __str__(self):
        parts = []
        for m, c in self.terms():
            s = str(m)
            if c == 1:
                parts.append(s)
            elif c == -1:
                parts.append(f"-{s}")
            else:
                parts.append(f"{c}*{s}" if s != "1" else str(c))
        parts += [str(a) for a in sorted(self.undetermined)]
        return " + ".join(parts).replace("+ -", "- ") or "0"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {
            "terms": [[str(m), c] for m, c in self.terms()],
            "undetermined": [str(a) for a in sorted(self.undetermined)],
            "text": str(self),
        }


class PresentedRing:
    """Shared machinery; subclasses supply the basis and monomial products."""

    name = "ring"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self._basis: list[Monomial] | None = None

    def __eq__(self, other):
        return type(self) is type(other) and self.n == other.n

    def __hash__(self):
        return hash((type(self).__name__, self.n))

    def __repr__(self):
        return f"{type(self).__name__}({self.n})"

    def element(self, m: Monomial, c: int = 1) -> RingElement:
        return RingElement(self, {m: c})

    def zero(self) -> RingElement:
        return RingElement(self)

    def one(self) -> RingElement:
        return self.element(self.unit)

    def basis(self) -> list[Monomial]:
        if self._basis is None:
            self._basis = sorted(self._enumerate_basis(), key=self.sort_key)
        return self._basis

    def sort_key(self, m: Monomial):
        return (self.kinds.index(m.kind), len(m.S), m.S, m.i)

    def additive_structure(self, parity: str) -> AbelianGroup:
        ms = [m for m in self.basis() if m.parity == parity]
        return AbelianGroup.elementary(sum(m.order == 0 for m in ms), sum(m.order == 2 for m in ms))

    def multiply(self, a: RingElement, b: RingElement) -> RingElement:
        coeffs: dict[Monomial, int] = {}
        atoms: set[Atom] = set()
        for m1, c1 in a.coeffs.items():
            for m2, c2 in b.coeffs.items():
                p = self.multiply_monomials(m1, m2)
                for m, c in p.coeffs.items():
                    coeffs[m] = coeffs.get(m, 0) + c * c1 * c2
                if (c1 * c2) % 2:
                    atoms ^= set(p.undetermined)
        for atom_side, other in ((a, b), (b, a)):
            for atom in atom_side.undetermined:
                for m, c in other.coeffs.items():
                    if c % 2:
                        p = self.multiply_atom(atom, m)
                        for mm, cc in p.coeffs.items():
                            coeffs[mm] = coeffs.get(mm, 0) + cc
                        atoms ^= set(p.undetermined)
        for t1 in a.undetermined:
            for t2 in b.undetermined:
                p = self.multiply_atoms(t1, t2)
                for mm, cc in p.coeffs.items():
                    coeffs[mm] = coeffs.get(mm, 0) + cc
                atoms ^= set(p.undetermined)
        return RingElement(self, coeffs, atoms)

    def generators(self) -> list[tuple[str, RingElement]]:
        raise NotImplementedError

    def multiplication_table(self) -> dict:
        gens = self.generators()
        rows = {}
        for n1, g1 in gens:
            rows[n1] = {}
            for n2, g2 in gens:
                p = g1 * g2
                rows[n1][n2] = str(p) if p.is_determined() else f"undetermined: {p}"
        return {"ring": self.name, "n": self.n, "generators": [g for g, _ in gens], "products": rows}

    def multiplication_table_json(self) -> str:
        return json.dumps(self.multiplication_table(), sort_keys=True, indent=2)

    def multiplication_table_markdown(self) -> str:
        t = self.multiplication_table()
        gens = t["generators"]
        lines = ["| * | " + " | ".join(gens) + " |", "|---" * (len(gens) + 1) + "|"]
        for g in gens:
            lines.append(f"| {g} | " + " | ".join(t["products"][g][h] for h in gens) + " |")
        return "\n".join(lines)


class BlowupRing(PresentedRing):
    """K^*(G/T x_Gamma T^n) presented on its canonical additive basis."""

    name = "blowup"
    kinds = ("X", "uX", "vX", "wX")
    unit = Monomial("X")

    def _enumerate_basis(self):
        idx = range(1, self.n + 1)
        for S in even_subsets(idx):
            yield Monomial("X", S)
            yield Monomial("uX", S)
        for i in idx:
            for S in even_subsets(range(i + 1, self.n + 1)):
                yield Monomial("vX", S, i)
                yield Monomial("wX", S, i)

    def _check(self, *ints: int):
        for k in ints:
            if not 1 <= k <= self.n:
                raise IndexError(f"index {k} outside 1..{self.n}")

    def gen(self, kind: str, *idx: int) -> RingElement:
        """Generator by name: gen('u'), gen('v', i), gen('w', i), gen('x', i, j)."""
        self._check(*idx)
        if kind == "one":
            return self.one()
        if kind == "u":
            return self.element(Monomial("uX"))
        if kind == "v":
            return self.element(Monomial("vX", (), idx[0]))
        if kind == "w":
            return self.element(Monomial("wX", (), idx[0]))
        if kind == "x":
            i, j = idx
            if i == j:
                return self.zero()
            return self.element(Monomial("X", (min(i, j), max(i, j))), 1 if i < j else -1)
        raise ValueError(f"unknown generator kind {kind!r}")

    def x_product(self, *pairs: tuple[int, int]) -> RingElement:
        out = self.one()
        for i, j in pairs:
            out = out * self.gen("x", i, j)
        return out

    def generators(self):
        n = self.n
        gens = [("u", self.gen("u"))]
        gens += [(f"v{_idx(i)}", self.gen("v", i)) for i in range(1, n + 1)]
        gens += [(f"w{_idx(i)}", self.gen("w", i)) for i in range(1, n + 1)]
        gens += [(f"x{_idx(i, j)}", self.gen("x", i, j)) for i, j in combinations(range(1, n + 1), 2)]
        return gens

    @staticmethod
    def raw_of(m: Monomial) -> _Raw:
        edges = _pairs(m.S)
        if m.kind == "X":
            return _Raw(0, (), (), edges)
        if m.kind == "uX":
            return _Raw(1, (), (), edges)
        if m.kind == "vX":
            return _Raw(0, (m.i,), (), edges)
        if m.kind == "wX":
            return _Raw(0, (), (m.i,), edges)
        raise ValueError(m.kind)

    @staticmethod
    def raw_of_atom(a: Atom) -> _Raw:
        return _Raw(0, (a.i,) if a.kind == "v" else (), (), a.edges)

    def _from_reduced(self, red, scale: int = 1) -> RingElement:
        terms, atoms = red
        return RingElement(self, {m: c * scale for m, c in terms}, atoms if scale % 2 else ())

    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> RingElement:
        return self._from_reduced(_reduce(self.raw_of(m1) + self.raw_of(m2)))

    def multiply_atom(self, atom: Atom, m: Monomial) -> RingElement:
        red = _reduce(self.raw_of_atom(atom) + self.raw_of(m))
        return self._from_reduced((tuple((mm, c % 2) for mm, c in red[0]), red[1]))

    def multiply_atoms(self, a: Atom, b: Atom) -> RingElement:
        red = _reduce(self.raw_of_atom(a) + self.raw_of_atom(b))
        return self._from_reduced((tuple((mm, c % 2) for mm, c in red[0]), red[1]))

    def degree(self, m: Monomial) -> int:
        """Cohomological degree of ch(m)."""
        return len(m.S) + {"X": 0, "uX": 2, "vX": 2, "wX": 3}[m.kind]


class YnRing(PresentedRing):
    """K^*(Y_n): products are computed by lifting through r_* to the blowup ring."""

    name = "yn"
    kinds = ("1", "a", "d", "b", "c", "e", "f")
    unit = Monomial("1")

    def __init__(self, n: int):
        super().__init__(n)
        self.blowup = BlowupRing(n)
        self.f_count = yn_torsion_in_degree3(n)

    def _enumerate_basis(self):
        n = self.n
        idx = range(1, n + 1)
        yield self.unit
        for S in even_subsets(idx, 2):
            yield Monomial("a" if len(S) == 2 else "d", S)
            yield Monomial("b", S)
        for i in idx:
            for S in even_subsets(range(i + 1, n + 1), 2):
                yield Monomial("c", S, i)
            for S in even_subsets(range(i + 1, n + 1)):
                yield Monomial("e", S, i)
        for j in range(1, self.f_count + 1):
            yield Monomial("f", (), j)

    def lift(self, m: Monomial) -> RingElement:
        B = self.blowup
        table = {"1": ("X", 1), "a": ("X", 2), "d": ("X", 1), "b": ("uX", 1), "c": ("vX", 1), "e": ("wX", 1)}
        if m.kind not in table:
            raise NotInImage(f"{m} has no lift to the blowup")
        kind, c = table[m.kind]
        return B.element(Monomial(kind, m.S, m.i), c)

    def project(self, x: RingElement) -> RingElement:
        out: dict[Monomial, int] = {}
        for m, c in x.coeffs.items():
            k, S = m.kind, m.S
            if k == "X" and not S:
                out[self.unit] = c
            elif k == "X" and len(S) == 2:
                if c % 2:
                    raise NotInImage(f"{c}*{m} is not in the image of r_*")
                out[Monomial("a", S)] = c // 2
            elif k == "X":
                out[Monomial("d", S)] = c
            elif k in ("uX", "vX") and not S:
                raise NotInImage(f"{m} is not in the image of r_*")
            else:
                out[Monomial({"uX": "b", "vX": "c", "wX": "e"}[k], S, m.i)] = c
        return RingElement(self, out, x.undetermined)

    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> RingElement:
        if m1 == self.unit:
            return self.element(m2)
        if m2 == self.unit:
            return self.element(m1)
        if "f" in (m1.kind, m2.kind):
            return self.zero()
        return self.project(self.lift(m1) * self.lift(m2))

    def multiply_atom(self, atom: Atom, m: Monomial) -> RingElement:
        if m == self.unit:
            return RingElement(self, {}, {atom})
        if m.kind == "f":
            return self.zero()
        ((base, scale),) = self.lift(m).terms()
        return self.project(self.blowup.multiply_atom(atom, base) * scale)

    def multiply_atoms(self, a: Atom, b: Atom) -> RingElement:
        return self.project(self.blowup.multiply_atoms(a, b))

    def gen(self, kind: str, *idx: int) -> RingElement:
        """a(i,j), b(S), c(i,*S), d(S), e(i,*S), f(j); indices must be increasing."""
        if kind == "one":
            return self.one()
        if kind == "f":
            (j,) = idx
            if not 1 <= j <= self.f_count:
                raise IndexError(f"f index {j} outside 1..{self.f_count}")
            return self.element(Monomial("f", (), j))
        if list(idx) != sorted(set(idx)) or not all(1 <= k <= self.n for k in idx):
            raise IndexError(f"indices {idx} must be strictly increasing within 1..{self.n}")
        if kind in ("c", "e"):
            m = Monomial(kind, tuple(idx[1:]), idx[0])
        else:
            m = Monomial(kind, tuple(idx))
        if m not in set(self.basis()):
            raise ValueError(f"{kind}{idx} is not a basis generator")
        return self.element(m)

    def generators(self):
        n = self.n
        out = []
        r = range(1, n + 1)
        out += [(f"a{_idx(*S)}", self.gen("a", *S)) for S in combinations(r, 2)]
        out += [(f"b{_idx(*S)}", self.gen("b", *S)) for k in (2, 4) for S in combinations(r, k)]
        out += [(f"c{_idx(*S)}", self.gen("c", *S)) for k in (3, 5) for S in combinations(r, k)]
        out += [(f"d{_idx(*S)}", self.gen("d", *S)) for k in (4, 6) for S in combinations(r, k)]
        out += [(f"e{_idx(*S)}", self.gen("e", *S)) for k in (1, 3) for S in combinations(r, k)]
        out += [(f"f{_idx(j)}", self.gen("f", j)) for j in range(1, self.f_count + 1)]
        return out

    def degree(self, m: Monomial) -> int:
        return len(m.S) + {"1": 0, "a": 0, "d": 0, "b": 2, "c": 2, "e": 3, "f": 3}[m.kind]


def blowup_ring(n: int) -> BlowupRing:
    return BlowupRing(n)


def yn_ring(n: int) -> YnRing:
    return YnRing(n)


def additive_structure(ring: PresentedRing, parity: str) -> AbelianGroup:
    if parity in ("K0", "even"):
        return ring.additive_structure("even")
    if parity in ("K1", "odd"):
        return ring.additive_structure("odd")
    raise ValueError(f"unknown parity {parity!r}")


# cohomology side ---------------------------------------------------------


@dataclass(frozen=True)
class CohomologyElement:
    """A cohomology class written on the ch-image basis, graded by degree."""

    ring: "CohomologyRing"
    coeffs: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            c = c % 2 if m.order == 2 else c
            if c:
                clean[m] = c
        object.__setattr__(self, "coeffs", clean)

    def __eq__(self, other):
        return isinstance(other, CohomologyElement) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    def __mul__(self, other: "CohomologyElement") -> "CohomologyElement":
        return self.ring.multiply(self, other)

    def degrees(self) -> dict[int, dict[Monomial, int]]:
        out: dict[int, dict[Monomial, int]] = {}
        for m, c in self.coeffs.items():
            out.setdefault(self.ring.k.degree(m), {})[m] = c
        return dict(sorted(out.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        parts = [f"{c}*ch({m})" if c != 1 else f"ch({m})" for m, c in sorted(self.coeffs.items(), key=lambda t: self.ring.k.sort_key(t[0]))]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class CohomologyRing:
    """H^*(space; Z) on the basis {ch(m)}; products vanish above the real dimension."""

    k: PresentedRing

    @property
    def dimension(self) -> int:
        return self.k.n + 2

    def basis_by_degree(self) -> dict[int, list[Monomial]]:
        out: dict[int, list[Monomial]] = {}
        for m in self.k.basis():
            out.setdefault(self.k.degree(m), []).append(m)
        return dict(sorted(out.items()))

    def groups(self) -> dict[int, AbelianGroup]:
        by = self.basis_by_degree()
        return {
            d: AbelianGroup.elementary(sum(m.order == 0 for m in by.get(d, [])), sum(m.order == 2 for m in by.get(d, [])))
            for d in range(self.dimension + 1)
        }

    def multiply(self, a: CohomologyElement, b: CohomologyElement) -> CohomologyElement:
        if a.ring != self or b.ring != self:
            raise RingMismatch("cohomology elements from different rings")
        out: dict[Monomial, int] = {}
        for m1, c1 in a.coeffs.items():
            for m2, c2 in b.coeffs.items():
                deg = self.k.degree(m1) + self.k.degree(m2)
                if deg > self.dimension:
                    continue
                p = self.k.multiply_monomials(m1, m2)
                if p.undetermined:
                    raise UndeterminedInput(f"ch({m1}) * ch({m2}) is not determined")
                for m, c in p.coeffs.items():
                    if self.k.degree(m) != deg:
                        raise AssertionError(f"degree of {m} differs from {deg}")
                    out[m] = out.get(m, 0) + c * c1 * c2
        return CohomologyElement(self, out)


def chern_character(e: RingElement) -> CohomologyElement:
    """Basis-level Chern character; rejects elements with undetermined parts."""
    if e.undetermined:
        raise UndeterminedInput(f"{e} has undetermined components")
    return CohomologyElement(CohomologyRing(e.ring), dict(e.coeffs))


# equivariant K-theory of the circle ------------------------------------------


@dataclass(frozen=True)
class RepPair:
    """Element of R(Gamma) + R(Gamma), each factor p + q c with c^2 = 1."""

    p1: int
    q1: int
    p2: int
    q2: int

    def __add__(self, o):
        return RepPair(self.p1 + o.p1, self.q1 + o.q1, self.p2 + o.p2, self.q2 + o.q2)

    def __mul__(self, o):
        if isinstance(o, int):
            return RepPair(self.p1 * o, self.q1 * o, self.p2 * o, self.q2 * o)
        return RepPair(
            self.p1 * o.p1 + self.q1 * o.q1,
            self.p1 * o.q1 + self.q1 * o.p1,
            self.p2 * o.p2 + self.q2 * o.q2,
            self.p2 * o.q2 + self.q2 * o.p2,
        )

    __rmul__ = __mul__

    def __str__(self):
        def one(p, q):
            return " + ".join(s for s in (str(p) if p else "", (f"{q}c" if q != 1 else "c") if q else "") if s) or "0"

        return f"({one(self.p1, self.q1)}, {one(self.p2, self.q2)})"


@dataclass(frozen=True)
class EqElement:
    """k1 + k_u u + k_v v in K^0_Gamma(T)."""

    k1: int = 0
    ku: int = 0
    kv: int = 0

    def __add__(self, o):
        if isinstance(o, int):
            o = EqElement(o)
        return EqElement(self.k1 + o.k1, self.ku + o.ku, self.kv + o.kv)

    __radd__ = __add__

    def __neg__(self):
        return EqElement(-self.k1, -self.ku, -self.kv)

    def __sub__(self, o):
        return self + (-o if isinstance(o, EqElement) else EqElement(-o))

    def __mul__(self, o):
        if isinstance(o, int):
            return EqElement(self.k1 * o, self.ku * o, self.kv * o)
        a, b = self, o
        # u^2 = -2u, uv = -2v, v^2 = -2v
        k1 = a.k1 * b.k1
        ku = a.k1 * b.ku + a.ku * b.k1 - 2 * a.ku * b.ku
        kv = a.k1 * b.kv + a.kv * b.k1 - 2 * (a.ku * b.kv + a.kv * b.ku + a.kv * b.kv)
        return EqElement(k1, ku, kv)

    __rmul__ = __mul__

    def is_zero(self):
        return self == EqElement()

    def __str__(self):
        parts = [f"{c}{s}" if c != 1 or not s else s for c, s in ((self.k1, ""), (self.ku, "u"), (self.kv, "v")) if c]
        return " + ".join(parts).replace("+ -", "- ") or "0"


class EquivariantKRing:
    """K^0_Gamma(T) = Z[u, v] / (u(u+2), v(v+2), v(u+2))."""

    one = EqElement(1)
    u = EqElement(0, 1)
    v = EqElement(0, 0, 1)
    _images = {"1": RepPair(1, 0, 1, 0), "u": RepPair(-1, 1, -1, 1), "v": RepPair(0, 0, -1, 1)}

    def basis(self):
        return [("1", self.one), ("u", self.u), ("v", self.v)]

    def relations(self) -> dict[str, tuple]:
        """Each defining relation as a pair of factors whose product is zero."""
        return {
            "u(u+2)": (self.u, self.u + 2),
            "v(v+2)": (self.v, self.v + 2),
            "v(u+2)": (self.v, self.u + 2),
        }

    def restrict(self, e: EqElement) -> RepPair:
        im = self._images
        return im["1"] * e.k1 + im["u"] * e.ku + im["v"] * e.kv

    def restriction_matrix(self) -> IntMatrix:
        """Rows 1, u, v; columns (p1, q1, p2, q2)."""
        rows = [[r.p1, r.q1, r.p2, r.q2] for r in self._images.values()]
        return IntMatrix.from_dense(rows)

    def kernel_rank(self) -> int:
        M = self.restriction_matrix()
        return M.rows - smith_normal_form(M, transforms=False).rank

    def relations_vanish_after_restriction(self) -> dict[str, bool]:
        zero = RepPair(0, 0, 0, 0)
        return {name: self.restrict(a) * self.restrict(b) == zero for name, (a, b) in self.relations().items()}


def equivariant_kt_ring() -> EquivariantKRing:
    return EquivariantKRing()
