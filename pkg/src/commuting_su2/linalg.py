"""Exact integer and mod-2 linear algebra.

Sparse integer matrices, Smith normal form, homology of chain complexes and
ranks over Z/2.  Everything works with Python integers, so there is no
overflow no matter how large intermediate entries grow.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence


class CompositionNotZero(ValueError):
    """Raised when two consecutive boundary maps do not compose to zero."""


class IntMatrix:
    """Sparse matrix over Z.

    ``entries`` maps ``(row, col)`` to a nonzero integer.  Instances are
    treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], int] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry {(r, c)} outside {rows}x{cols}")
            if v:
                clean[(r, c)] = int(v)
        self._entries = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        return cls(rows, cols, {(i, i): v for i, v in enumerate(values) if v})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(key)
        return self._entries.get((r, c), 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    T = property(transpose)

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            rows[r][c] = v
        return rows

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self._entries.items():
            for c, w in right[k].items():
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        return IntMatrix(self.rows, other.cols, acc)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = acc.get(k, 0) + v
        return IntMatrix(self.rows, self.cols, acc)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def is_zero(self) -> bool:
        return not self._entries

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        sub = {}
        for (r, c), v in self._entries.items():
            if r in rmap and c in cmap:
                sub[(rmap[r], cmap[c])] = v
        return IntMatrix(len(rows), len(cols), sub)

    def __repr__(self):
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix(<{self.rows}x{self.cols}, nnz={self.nnz()}>)"


def _chain_form(orders: Iterable[int]) -> tuple[int, ...]:
    """Rewrite a list of cyclic orders as an invariant-factor chain d1 | d2 | ..."""
    vals = [abs(d) for d in orders if abs(d) != 1]
    if any(v == 0 for v in vals):
        raise ValueError("cyclic orders must be nonzero")
    vals.sort()
    # repeated (gcd, lcm) passes on neighbours until the chain divides
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a:
                    g = gcd(a, b)
                    vals[i], vals[j] = g, a * b // g
                    changed = True
        vals = sorted(v for v in vals if v != 1)
    return tuple(vals)


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... ."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        tors = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in tors):
            raise ValueError(f"torsion divisors must be >= 2, got {tors}")
        if list(tors) != sorted(tors) or any(tors[i + 1] % tors[i] for i in range(len(tors) - 1)):
            raise ValueError(f"torsion {tors} is not a divisor chain")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> "AbelianGroup":
        """Build from arbitrary cyclic orders (units dropped, chain restored)."""
        return cls(free_rank, _chain_form(orders))

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank)

    @classmethod
    def elementary(cls, free_rank: int, twos: int) -> "AbelianGroup":
        """Z^free_rank + (Z/2)^twos, the shape of every group in this project."""
        return cls(free_rank, (2,) * twos)

    @property
    def order_of_torsion(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def primary_counts(self) -> dict[int, int]:
        """Primary decomposition: prime power -> number of cyclic summands."""
        counts: dict[int, int] = {}
        for d in self.torsion:
            for q in _prime_power_factors(d):
                counts[q] = counts.get(q, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def two_torsion_count(self) -> int:
        """Number of Z/2 summands in the primary decomposition."""
        return self.primary_counts().get(2, 0)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_orders(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: Mapping) -> "AbelianGroup":
        return cls(int(data["free_rank"]), tuple(int(t) for t in data["torsion"]))

    def __str__(self):
        if self.is_trivial():
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for d, k in _runs(self.torsion):
            parts.append(f"Z{d}" if k == 1 else f"Z{d}^{k}")
        return " + ".join(parts)


def _runs(values: Sequence[int]):
    out: list[tuple[int, int]] = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def _prime_power_factors(d: int) -> list[int]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    if d > 1:
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SmithForm:
    """Result of :func:`smith_normal_form`.  ``U @ M @ V == S`` when transforms are kept."""

    S: IntMatrix
    U: IntMatrix | None
    V: IntMatrix | None
    diagonal: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.diagonal


class _Eliminator:
    """In-place sparse elimination state shared by the SNF entry points."""

    def __init__(self, M: IntMatrix, transforms: bool):
        self.m, self.n = M.shape
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (r, c), v in M.items():
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, set()).add(r)
        self.transforms = transforms
        if transforms:
            # U stored by rows (row ops act on rows), V by columns
            self.U = {i: {i: 1} for i in range(self.m)}
            self.V = {j: {j: 1} for j in range(self.n)}
        self.pivots: list[tuple[int, int, int]] = []

    # elementary operations -------------------------------------------------

    def _set(self, r: int, c: int, v: int):
        row = self.rows.setdefault(r, {})
        if v:
            row[c] = v
            self.cols.setdefault(c, set()).add(r)
        else:
            if c in row:
                del row[c]
                self.cols[c].discard(r)

    def add_row(self, dst: int, src: int, q: int):
        """row[dst] += q * row[src]"""
        if not q:
            return
        drow = self.rows.setdefault(dst, {})
        for c, v in list(self.rows.get(src, {}).items()):
            self._set(dst, c, drow.get(c, 0) + q * v)
        if self.transforms:
            _axpy(self.U[dst], self.U[src], q)

    def add_col(self, dst: int, src: int, q: int):
        """col[dst] += q * col[src]"""
        if not q:
            return
        for r in list(self.cols.get(src, ())):
            row = self.rows[r]
            self._set(r, dst, row.get(dst, 0) + q * row[src])
        if self.transforms:
            _axpy(self.V[dst], self.V[src], q)

    def negate_row(self, r: int):
        row = self.rows.get(r, {})
        for c in row:
            row[c] = -row[c]
        if self.transforms:
            urow = self.U[r]
            for k in urow:
                urow[k] = -urow[k]

    def add_row_into(self, dst: int, src: int):
        self.add_row(dst, src, 1)

    # pivot handling ----------------------------------------------------------

    def clear_cross(self, r: int, c: int) -> bool:
        """Clear column c and row r using pivot (r, c).

        Returns False if a non-divisible entry was reduced instead; the caller
        must then pick a new pivot.
        """
        p = self.rows[r][c]
        for j in list(self.cols.get(c, ())):
            if j == r:
                continue
            a = self.rows[j][c]
            q, rem = divmod(a, p)
            if rem:
                self.add_row(j, r, -q)
                return False
            self.add_row(j, r, -q)
        for k in list(self.rows[r]):
            if k == c:
                continue
            a = self.rows[r][k]
            q, rem = divmod(a, p)
            if rem:
                self.add_col(k, c, -q)
                return False
            self.add_col(k, c, -q)
        return True

    def retire(self, r: int, c: int):
        p = self.rows[r][c]
        if p < 0:
            self.negate_row(r)
            p = -p
        self.pivots.append((r, c, p))
        del self.rows[r]
        self.cols[c].discard(r)
        del self.cols[c]

    def eliminate_units(self):
        """Greedily pivot on +-1 entries, sparsest column first."""
        while True:
            progress = False
            heap = [(len(rs), c) for c, rs in self.cols.items() if rs]
            heapq.heapify(heap)
            while heap:
                size, c = heapq.heappop(heap)
                rs = self.cols.get(c)
                if not rs:
                    continue
                if len(rs) != size:
                    heapq.heappush(heap, (len(rs), c))
                    continue
                best = None
                for r in rs:
                    v = self.rows[r][c]
                    if v == 1 or v == -1:
                        key = len(self.rows[r])
                        if best is None or key < best[0]:
                            best = (key, r)
                if best is None:
                    continue
                r = best[1]
                self.clear_cross(r, c)
                self.retire(r, c)
                progress = True
            if not progress:
                return

    def remaining_entries(self):
        for r, row in self.rows.items():
            for c, v in row.items():
                yield r, c, v

    def eliminate_general(self):
        """Classical SNF on whatever survives unit elimination."""
        while True:
            best = None
            for r, c, v in self.remaining_entries():
                key = (abs(v), len(self.rows[r]) * len(self.cols[c]))
                if best is None or key < best[0]:
                    best = (key, r, c)
            if best is None:
                return
            _, r, c = best
            if not self.clear_cross(r, c):
                continue
            p = abs(self.rows[r][c])
            bad = None
            if p != 1:
                for i, k, v in self.remaining_entries():
                    if i != r and v % p:
                        bad = i
                        break
            if bad is not None:
                self.add_row_into(r, bad)
                continue
            self.retire(r, c)


def _axpy(dst: dict[int, int], src: dict[int, int], q: int):
    for k, v in src.items():
        nv = dst.get(k, 0) + q * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def _sorted_pivots(pivots: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    # unit pivots come first; stable sort keeps the divisor chain order
    return sorted(pivots, key=lambda t: t[2])


def invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form, as a divisor chain."""
    el = _Eliminator(M, transforms=False)
    el.eliminate_units()
    el.eliminate_general()
    diag = [p for _, _, p in el.pivots]
    return _normalize_chain(diag)


def _normalize_chain(diag: list[int]) -> tuple[int, ...]:
    ones = sum(1 for d in diag if d == 1)
    rest = _chain_form(d for d in diag if d != 1)
    return (1,) * ones + rest


def smith_normal_form(M: IntMatrix, transforms: bool = True) -> SmithForm:
    """Smith normal form ``S = U M V`` with U, V unimodular.

    With ``transforms=False`` only S is produced, which is all homology needs
    and keeps memory proportional to the input.
    """
    el = _Eliminator(M, transforms=transforms)
    el.eliminate_units()
    el.eliminate_general()
    pivots = _sorted_pivots(el.pivots)
    diag_vals = [p for _, _, p in pivots]
    chain = _normalize_chain(diag_vals)
    if tuple(diag_vals) != chain:
        # the general phase already yields a chain; this only triggers if
        # unit pivots were interleaved, which sorting handles
        raise AssertionError(f"pivot sequence {diag_vals} is not a divisor chain")
    S = IntMatrix.diagonal(list(chain), M.rows, M.cols)
    if not transforms:
        return SmithForm(S, None, None, chain)

    m, n = M.shape
    row_order = [r for r, _, _ in pivots]
    used = set(row_order)
    row_order += [r for r in range(m) if r not in used]
    col_order = [c for _, c, _ in pivots]
    used = set(col_order)
    col_order += [c for c in range(n) if c not in used]
    U = IntMatrix(m, m, {(i, k): v for i, r in enumerate(row_order) for k, v in el.U[r].items()})
    V = IntMatrix(n, n, {(k, j): v for j, c in enumerate(col_order) for k, v in el.V[c].items()})
    assert U @ M @ V == S, "SNF postcondition U M V = S violated"
    return SmithForm(S, U, V, chain)


def rank(M: IntMatrix) -> int:
    return len(invariant_factors(M))


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def homology_at(boundary_out: IntMatrix, boundary_in: IntMatrix) -> AbelianGroup:
    """ker(boundary_out) / im(boundary_in).

    ``boundary_out: C_k -> C_{k-1}`` and ``boundary_in: C_{k+1} -> C_k``.
    Empty matrices stand for zero maps.
    """
    if boundary_out.cols != boundary_in.rows:
        raise ValueError(
            f"boundary shapes do not chain: {boundary_out.shape} after {boundary_in.shape}"
        )
    if not (boundary_out @ boundary_in).is_zero():
        raise CompositionNotZero("boundary maps do not compose to zero")
    dim = boundary_out.cols
    out_rank = rank(boundary_out)
    in_factors = invariant_factors(boundary_in)
    free = dim - out_rank - len(in_factors)
    return AbelianGroup.from_orders(free, [d for d in in_factors if d > 1])


def mod2_rank(M: IntMatrix) -> int:
    """Rank of M reduced mod 2 (Gaussian elimination on bit rows)."""
    rows: dict[int, int] = {}
    for (r, c), v in M.items():
        if v & 1:
            rows[r] = rows.get(r, 0) ^ (1 << c)
    return _gf2_rank(rows.values())


def _gf2_rank(bitrows: Iterable[int]) -> int:
    basis: dict[int, int] = {}  # leading bit -> reduced row
    for row in bitrows:
        while row:
            lead = row.bit_length() - 1
            if lead in basis:
                row ^= basis[lead]
            else:
                basis[lead] = row
                break
    return len(basis)


def gf2_rank_of_bitrows(bitrows: Iterable[int]) -> int:
    """Rank of a Z/2 matrix whose rows are given as integer bitmasks."""
    return _gf2_rank(bitrows)


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------

COEFFICIENTS = ("Z", "Z2")


class ChainComplex:
    """Finitely generated free chain complex over Z.

    ``cells[k]`` labels the basis of C_k; ``boundaries[k]`` is the matrix of
    d_k: C_k -> C_{k-1} with rows indexed by ``cells[k-1]``.  Degrees absent
    from ``cells`` have rank zero.
    """

    def __init__(self, cells: Mapping[int, Sequence], boundaries: Mapping[int, IntMatrix]):
        self.cells = {k: tuple(v) for k, v in cells.items() if len(v)}
        self._boundaries = dict(boundaries)
        for k, d in self._boundaries.items():
            if d.shape != (self.rank(k - 1), self.rank(k)):
                raise ValueError(f"boundary d_{k} has shape {d.shape}, expected {(self.rank(k - 1), self.rank(k))}")

    @property
    def top_degree(self) -> int:
        return max(self.cells, default=-1)

    def degrees(self) -> range:
        return range(0, self.top_degree + 1)

    def rank(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    def cell_counts(self) -> list[int]:
        return [self.rank(k) for k in self.degrees()]

    def total_cells(self) -> int:
        return sum(self.cell_counts())

    def boundary(self, k: int) -> IntMatrix:
        d = self._boundaries.get(k)
        if d is None:
            return IntMatrix.zeros(self.rank(k - 1), self.rank(k))
        return d

    def check(self):
        """Raise CompositionNotZero unless d_{k} d_{k+1} = 0 for every k."""
        for k in range(1, self.top_degree + 1):
            if not (self.boundary(k) @ self.boundary(k + 1)).is_zero():
                raise CompositionNotZero(f"d_{k} d_{k + 1} != 0")

    def homology(self, k: int) -> AbelianGroup:
        return homology_at(self.boundary(k), self.boundary(k + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.rank(k) for k in self.degrees())

    def to_json(self) -> dict:
        return {
            "cells": {str(k): [_label_json(c) for c in v] for k, v in sorted(self.cells.items())},
            "boundaries": {
                str(k): sorted([r, c, v] for (r, c), v in d.items())
                for k, d in sorted(self._boundaries.items())
                if d.nnz()
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ChainComplex":
        cells = {int(k): [_label_from_json(c) for c in v] for k, v in data["cells"].items()}
        sizes = {k: len(v) for k, v in cells.items()}
        bds = {}
        for k, triples in data.get("boundaries", {}).items():
            k = int(k)
            bds[k] = IntMatrix(sizes.get(k - 1, 0), sizes.get(k, 0), {(r, c): v for r, c, v in triples})
        return cls(cells, bds)


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def _label_from_json(label):
    return tuple(label) if isinstance(label, list) else label


def cohomology_with_coefficients(C: ChainComplex, coeff: str = "Z") -> list[AbelianGroup]:
    """H^k(C; coeff) for k = 0..top degree.

    Over Z the cochain differentials are the transposed boundaries.  Over Z/2
    the answer is elementary abelian and is computed from mod-2 ranks alone,
    independently of any Smith form.
    """
    if coeff not in COEFFICIENTS:
        raise ValueError(f"coefficients must be one of {COEFFICIENTS}")
    C.check()
    out = []
    for k in C.degrees():
        if coeff == "Z":
            delta_out = C.boundary(k + 1).transpose()  # C^k -> C^{k+1}
            delta_in = C.boundary(k).transpose()  # C^{k-1} -> C^k
            out.append(homology_at(delta_out, delta_in))
        else:
            dim = C.rank(k) - mod2_rank(C.boundary(k + 1)) - mod2_rank(C.boundary(k))
            out.append(AbelianGroup.elementary(0, dim))
    return out


def z2_dimension(group: AbelianGroup) -> int:
    """Dimension of a group reported by ``cohomology_with_coefficients(.., 'Z2')``."""
    if group.free_rank or any(d != 2 for d in group.torsion):
        raise ValueError(f"{group} is not an elementary abelian 2-group")
    return len(group.torsion)
