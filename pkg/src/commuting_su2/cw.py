"""Equivariant cellular models and the brute-force cohomology oracle.

The Weyl group Gamma = {1, g} acts on S^2 antipodally and on each circle
factor by reflection.  Both are given explicit Gamma-CW structures:

* S^2 has one free orbit of cells in each degree 0, 1, 2 (the standard
  Z[Gamma]-resolution truncated at degree 2), with d1 = g - 1 and d2 = g + 1
  on orbit generators.
* S^1 has two fixed 0-cells p = 1 and q = -1 and one free orbit {e, ge} of
  1-cells, with d e = d(ge) = q - p.

Any free Gamma-model of S^2 whose quotient is RP^2 would serve equally well;
this one is just the smallest.  Products carry the diagonal action and the
Koszul sign rule, the blowup is the orbit complex of S^2 x T^n, and Y_n is
obtained by collapsing each RP^2 over a fixed point a in {+1,-1}^n to its
own vertex.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .linalg import (
    AbelianGroup,
    ChainComplex,
    CompositionNotZero,
    IntMatrix,
    homology_at,
)

DEFAULT_MAX_N = 6
MAX_N_ENV = "COMMUTING_SU2_MAX_N"


class ActionNotFree(ValueError):
    """The group action has a fixed cell, so the orbit complex is not a free quotient."""


class GuardExceeded(ValueError):
    """A requested n is above the configured size guard."""


def max_n_guard() -> int:
    raw = os.environ.get(MAX_N_ENV)
    return int(raw) if raw else DEFAULT_MAX_N


def check_guard(n: int, limit: int | None = None):
    limit = max_n_guard() if limit is None else limit
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > limit:
        raise GuardExceeded(f"n={n} exceeds the oracle guard max_n={limit}")


@dataclass(frozen=True)
class FreeOrbit:
    cell: int
    partner: int


@dataclass(frozen=True)
class Fixed:
    cell: int


class EquivariantChainComplex:
    """Cellular chain complex with an involution.

    ``cells[k]`` are hashable labels (tuples of factor labels), ``boundaries[k]``
    is d_k on the full cell basis and ``gamma[k][i] = (j, s)`` means
    g(cell i) = s * cell j.
    """

    def __init__(
        self,
        cells: Mapping[int, Sequence],
        boundaries: Mapping[int, IntMatrix],
        gamma: Mapping[int, Sequence[tuple[int, int]]],
    ):
        self.cells = {k: tuple(v) for k, v in cells.items() if len(v)}
        self._boundaries = dict(boundaries)
        self.gamma = {k: tuple(v) for k, v in gamma.items()}
        self.check()

    @property
    def top_degree(self) -> int:
        return max(self.cells, default=-1)

    def rank(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    def boundary(self, k: int) -> IntMatrix:
        d = self._boundaries.get(k)
        return d if d is not None else IntMatrix.zeros(self.rank(k - 1), self.rank(k))

    def gamma_matrix(self, k: int) -> IntMatrix:
        return IntMatrix(self.rank(k), self.rank(k), {(j, i): s for i, (j, s) in enumerate(self.gamma.get(k, ()))})

    def orbits(self, k: int) -> list[FreeOrbit | Fixed]:
        out: list[FreeOrbit | Fixed] = []
        seen = set()
        for i, (j, _) in enumerate(self.gamma.get(k, ())):
            if i in seen:
                continue
            seen.update((i, j))
            out.append(Fixed(i) if i == j else FreeOrbit(i, j))
        return out

    def is_free(self) -> bool:
        return all(isinstance(o, FreeOrbit) for k in self.cells for o in self.orbits(k))

    def check(self):
        for k in self.cells:
            act = self.gamma.get(k, ())
            if len(act) != self.rank(k):
                raise ValueError(f"gamma action in degree {k} has wrong length")
            for i, (j, s) in enumerate(act):
                if s not in (1, -1):
                    raise ValueError("gamma must be a signed permutation")
                jj, ss = act[j]
                if jj != i or ss != s:
                    raise ValueError("gamma is not an involution")
                if i == j and s != 1:
                    raise ValueError("a fixed cell must be fixed with sign +1")
        for k in range(1, self.top_degree + 1):
            d = self.boundary(k)
            if not (self.gamma_matrix(k - 1) @ d == d @ self.gamma_matrix(k)):
                raise ValueError(f"boundary d_{k} is not equivariant")
            if not (self.boundary(k) @ self.boundary(k + 1)).is_zero():
                raise CompositionNotZero(f"d_{k} d_{k + 1} != 0")

    def underlying(self) -> ChainComplex:
        """Forget the action."""
        return ChainComplex(self.cells, self._boundaries)

    def cell_counts(self) -> list[int]:
        return [self.rank(k) for k in range(self.top_degree + 1)]

    def to_json(self) -> dict:
        data = self.underlying().to_json()
        data["gamma"] = {str(k): [list(t) for t in v] for k, v in sorted(self.gamma.items()) if v}
        return data


def _single(labels: Mapping[int, Sequence[str]], bd: Mapping[int, dict], gam: Mapping[int, dict]):
    """Build a one-factor complex from per-degree labels and symbolic maps."""
    cells = {k: [(lab,) for lab in v] for k, v in labels.items()}
    index = {k: {lab: i for i, lab in enumerate(v)} for k, v in labels.items()}
    boundaries = {}
    for k, rules in bd.items():
        entries = {}
        for src, terms in rules.items():
            for tgt, coeff in terms.items():
                entries[(index[k - 1][tgt], index[k][src])] = coeff
        boundaries[k] = IntMatrix(len(labels[k - 1]), len(labels[k]), entries)
    gamma = {k: [(index[k][gam[k][lab][0]], gam[k][lab][1]) for lab in v] for k, v in labels.items()}
    return EquivariantChainComplex(cells, boundaries, gamma)


def sphere_complex() -> EquivariantChainComplex:
    """S^2 with the antipodal action: cells a_k and b_k = g a_k in degrees 0, 1, 2."""
    labels = {0: ["a0", "b0"], 1: ["a1", "b1"], 2: ["a2", "b2"]}
    bd = {
        1: {"a1": {"b0": 1, "a0": -1}, "b1": {"a0": 1, "b0": -1}},  # d a1 = (g - 1) a0
        2: {"a2": {"a1": 1, "b1": 1}, "b2": {"b1": 1, "a1": 1}},  # d a2 = (g + 1) a1
    }
    gam = {k: {v[0]: (v[1], 1), v[1]: (v[0], 1)} for k, v in labels.items()}
    return _single(labels, bd, gam)


def circle_complex() -> EquivariantChainComplex:
    """S^1 with reflection: fixed vertices p = 1, q = -1 and swapped arcs e, f = g e."""
    labels = {0: ["p", "q"], 1: ["e", "f"]}
    bd = {1: {"e": {"q": 1, "p": -1}, "f": {"q": 1, "p": -1}}}
    gam = {0: {"p": ("p", 1), "q": ("q", 1)}, 1: {"e": ("f", 1), "f": ("e", 1)}}
    return _single(labels, bd, gam)


def _tensor2(X: EquivariantChainComplex, Y: EquivariantChainComplex) -> EquivariantChainComplex:
    cells: dict[int, list] = {}
    where: dict[tuple, tuple[int, int]] = {}
    for p in sorted(X.cells):
        for q in sorted(Y.cells):
            for a in X.cells[p]:
                for b in Y.cells[q]:
                    lab = a + b
                    lst = cells.setdefault(p + q, [])
                    where[lab] = (p + q, len(lst))
                    lst.append(lab)
    # lexicographic order inside each degree pins the output
    for k in cells:
        cells[k].sort()
        for i, lab in enumerate(cells[k]):
            where[lab] = (k, i)

    xb = {p: X.boundary(p).transpose().row_dicts() for p in X.cells}  # column view
    yb = {q: Y.boundary(q).transpose().row_dicts() for q in Y.cells}
    entries: dict[int, dict] = {k: {} for k in cells}
    gamma: dict[int, list] = {k: [None] * len(v) for k, v in cells.items()}
    for p in X.cells:
        for q in Y.cells:
            k = p + q
            for ia, a in enumerate(X.cells[p]):
                ja, sa = X.gamma[p][ia]
                for ib, b in enumerate(Y.cells[q]):
                    col = where[a + b][1]
                    jb, sb = Y.gamma[q][ib]
                    gamma[k][col] = (where[X.cells[p][ja] + Y.cells[q][jb]][1], sa * sb)
                    ent = entries[k]
                    if p > 0:
                        for ra, v in xb[p][ia].items():
                            row = where[X.cells[p - 1][ra] + b][1]
                            ent[(row, col)] = ent.get((row, col), 0) + v
                    if q > 0:
                        sign = -1 if p % 2 else 1
                        for rb, v in yb[q][ib].items():
                            row = where[a + Y.cells[q - 1][rb]][1]
                            ent[(row, col)] = ent.get((row, col), 0) + sign * v
    boundaries = {
        k: IntMatrix(len(cells.get(k - 1, ())), len(cells[k]), entries[k]) for k in cells if k > 0
    }
    return EquivariantChainComplex(cells, boundaries, gamma)


def tensor(Xs: Sequence[EquivariantChainComplex]) -> EquivariantChainComplex:
    """Product cell structure with diagonal action and Koszul signs."""
    if not Xs:
        raise ValueError("tensor needs at least one factor")
    out = Xs[0]
    for Y in Xs[1:]:
        out = _tensor2(out, Y)
    return out


def quotient_by_gamma(X: EquivariantChainComplex) -> ChainComplex:
    """Orbit complex of a free action; each orbit is represented by its smallest label."""
    rep: dict[int, list[tuple[int, int]]] = {}
    cells: dict[int, list] = {}
    for k in sorted(X.cells):
        labels = X.cells[k]
        reps = []
        mapping = [None] * len(labels)
        for i, lab in enumerate(labels):
            j, s = X.gamma[k][i]
            if j == i:
                raise ActionNotFree(f"cell {lab} in degree {k} is fixed by gamma")
            if lab < labels[j]:
                mapping[i] = (len(reps), 1)
                # g(rep) = s * cell j, so [cell j] = s [rep]
                mapping[j] = (len(reps), s)
                reps.append(lab)
        cells[k] = reps
        rep[k] = mapping
    boundaries = {}
    for k in cells:
        if k == 0:
            continue
        d = X.boundary(k)
        entries: dict[tuple[int, int], int] = {}
        # each orbit contributes the boundary of its representative
        rep_cols = {}
        for i, (o, s) in enumerate(rep[k]):
            if s == 1 and X.cells[k][i] == cells[k][o]:
                rep_cols[i] = o
        for (r, c), v in d.items():
            o = rep_cols.get(c)
            if o is None:
                continue
            ro, rs = rep[k - 1][r]
            key = (ro, o)
            entries[key] = entries.get(key, 0) + rs * v
        boundaries[k] = IntMatrix(len(cells[k - 1]), len(cells[k]), entries)
    C = ChainComplex(cells, boundaries)
    C.check()
    return C


def sign_vectors(n: int) -> list[tuple[int, ...]]:
    """All a in {+1,-1}^n in lexicographic order with +1 before -1."""
    return [tuple(v) for v in product((1, -1), repeat=n)]


_SIGN_OF_VERTEX = {"p": 1, "q": -1}


def blowup_complex(n: int, max_n: int | None = None) -> ChainComplex:
    """Cellular chain complex of S^2 x_Gamma T^n (3 * 4^n cells)."""
    check_guard(n, max_n)
    return quotient_by_gamma(tensor([sphere_complex()] + [circle_complex()] * n))


def rp2_copy_of(label: tuple) -> tuple[int, ...] | None:
    """The fixed point a whose RP^2 contains this blowup cell, or None."""
    torus = label[1:]
    if all(t in _SIGN_OF_VERTEX for t in torus):
        return tuple(_SIGN_OF_VERTEX[t] for t in torus)
    return None


def collapse_to_yn(n: int, max_n: int | None = None, blowup: ChainComplex | None = None) -> ChainComplex:
    """Collapse each RP^2 over a in A to its own vertex, giving a cell structure on Y_n."""
    B = blowup if blowup is not None else blowup_complex(n, max_n)
    keep = {
        k: [i for i, lab in enumerate(B.cells[k]) if rp2_copy_of(lab) is None] for k in B.cells if k > 0
    }
    vertex_of = {}
    points = sign_vectors(n)
    point_index = {a: i for i, a in enumerate(points)}
    for i, lab in enumerate(B.cells[0]):
        a = rp2_copy_of(lab)
        if a is None:
            raise AssertionError("every blowup vertex lies in some RP^2 copy")
        vertex_of[i] = point_index[a]
    cells = {0: [("pt",) + a for a in points]}
    cells.update({k: [B.cells[k][i] for i in idx] for k, idx in keep.items()})
    boundaries = {}
    for k, idx in keep.items():
        d = B.boundary(k)
        col = {c: j for j, c in enumerate(idx)}
        if k == 1:
            row = vertex_of
        else:
            row = {r: j for j, r in enumerate(keep[k - 1])}
        entries: dict[tuple[int, int], int] = {}
        for (r, c), v in d.items():
            if c in col and r in row:
                key = (row[r], col[c])
                entries[key] = entries.get(key, 0) + v
        boundaries[k] = IntMatrix(len(cells[k - 1]), len(idx), entries)
    C = ChainComplex(cells, boundaries)
    C.check()
    return C


def local_coefficient_cohomology(X: EquivariantChainComplex, action: IntMatrix) -> list[AbelianGroup]:
    """H^*(X/Gamma; M) for a free Gamma-complex X and a Z[Gamma]-module M = Z^r.

    ``action`` is the r x r integer matrix by which g acts on M.  Cochains are
    Hom_{Z[Gamma]}(C(X), M), one copy of M per orbit.
    """
    r = action.rows
    if action.shape != (r, r) or not (action @ action == IntMatrix.identity(r)):
        raise ValueError("coefficient action must be an involution")
    if not X.is_free():
        raise ActionNotFree("local coefficients need a free action")
    reps: dict[int, list[int]] = {}
    coord: dict[int, dict[int, tuple[int, bool, int]]] = {}
    for k in sorted(X.cells):
        reps[k] = []
        coord[k] = {}
        for o in X.orbits(k):
            idx = len(reps[k])
            reps[k].append(o.cell)
            coord[k][o.cell] = (idx, False, 1)
            _, s = X.gamma[k][o.cell]
            coord[k][o.partner] = (idx, True, s)  # partner = s * g(rep)
    gmat = action.to_dense()
    ident = IntMatrix.identity(r).to_dense()

    def delta(k: int) -> IntMatrix:
        # delta^k: C^k -> C^{k+1}, (delta f)(rep) = f(d rep)
        src, dst = len(reps.get(k, ())), len(reps.get(k + 1, ()))
        entries: dict[tuple[int, int], int] = {}
        if dst and src:
            cols = X.boundary(k + 1).transpose().row_dicts()
            for bi, cell in enumerate(reps[k + 1]):
                for tgt, v in cols[cell].items():
                    ai, is_g, s = coord[k][tgt]
                    block = gmat if is_g else ident
                    for i in range(r):
                        for j in range(r):
                            if block[i][j]:
                                key = (bi * r + i, ai * r + j)
                                entries[key] = entries.get(key, 0) + v * s * block[i][j]
        return IntMatrix(dst * r, src * r, entries)

    top = X.top_degree
    return [homology_at(delta(k), delta(k - 1)) for k in range(top + 1)]


def twisted_rp2_cohomology(twisted: bool) -> tuple[AbelianGroup, AbelianGroup, AbelianGroup]:
    """H^0, H^1, H^2 of RP^2 with coefficients Z, trivial or sign-twisted."""
    action = IntMatrix.from_dense([[-1 if twisted else 1]])
    return tuple(local_coefficient_cohomology(sphere_complex(), action))  # type: ignore[return-value]
