"""Restriction of K^0 generators to the projective planes over the fixed points.

Each fixed point a in {+1,-1}^n carries a copy of RP^2, and the reduced K^0 of
RP^2 is Z/2 generated by u.  The classes u, v_i and x_ij restrict to 0 or u.
Independence of these images over Z/2 reduces to a parity statement about
sign vectors, which is checked here both through an explicit case split
(``choose_a``) and by brute force (``exhaustive_choose_a``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable

from .closed_form import binom
from .cw import sign_vectors
from .linalg import IntMatrix, mod2_rank

EXHAUSTIVE_MAX_N = 20


class UnsupportedGenerator(ValueError):
    """Odd classes (w_i, f_i) have no image in K^0 of RP^2."""


class EmptyInput(ValueError):
    """I and J are both empty, so no odd-parity witness exists."""


ZERO, U = "0", "u"


def restrict_generator(kind: str, idx: tuple[int, ...], a: tuple[int, ...]) -> str:
    """Image of u, v_i or x_ij at the fixed point a, as '0' or 'u'."""
    n = len(a)
    if any(s not in (1, -1) for s in a):
        raise ValueError(f"{a} is not a sign vector")
    if any(not 1 <= k <= n for k in idx):
        raise IndexError(f"indices {idx} outside 1..{n}")
    if kind == "u":
        return U
    if kind == "v":
        (i,) = idx
        return U if a[i - 1] == -1 else ZERO
    if kind == "x":
        i, j = idx
        return U if a[i - 1] == -1 or a[j - 1] == -1 else ZERO
    if kind in ("w", "f"):
        raise UnsupportedGenerator(f"{kind} is an odd class")
    raise ValueError(f"unknown generator kind {kind!r}")


def restriction_rows(n: int) -> list[tuple[str, tuple[int, ...]]]:
    rows = [("u", ())]
    rows += [("v", (i,)) for i in range(1, n + 1)]
    rows += [("x", p) for p in combinations(range(1, n + 1), 2)]
    return rows


def restriction_matrix(n: int) -> IntMatrix:
    """Z/2 matrix with rows u, v_1..v_n, x_ij and one column per sign vector."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cols = sign_vectors(n)
    entries = {}
    for r, (kind, idx) in enumerate(restriction_rows(n)):
        for c, a in enumerate(cols):
            if restrict_generator(kind, idx, a) == U:
                entries[(r, c)] = 1
    return IntMatrix(len(restriction_rows(n)), len(cols), entries)


def expected_rank(n: int) -> int:
    return 1 + n + binom(n, 2)


def independence_check(n: int) -> bool:
    return mod2_rank(restriction_matrix(n)) == expected_rank(n)


@dataclass(frozen=True)
class IndexData:
    I: frozenset[int]
    J: frozenset[tuple[int, int]]

    def __init__(self, I: Iterable[int] = (), J: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "I", frozenset(I))
        object.__setattr__(self, "J", frozenset(tuple(p) for p in J))
        for i, j in self.J:
            if not i < j:
                raise ValueError(f"pair {(i, j)} must satisfy i < j")

    def validate(self, n: int):
        for k in self.I | {v for p in self.J for v in p}:
            if not 1 <= k <= n:
                raise ValueError(f"index {k} outside 1..{n}")

    def is_empty(self) -> bool:
        return not self.I and not self.J

    def m(self, k: int) -> int:
        return 1 + sum(1 for p in self.J if k in p)


def parity_count(data: IndexData, a: tuple[int, ...]) -> int:
    """|{i in I : a_i = -1}| + |{(i,j) in J : a_i = -1 or a_j = -1}|."""
    neg = {i + 1 for i, s in enumerate(a) if s == -1}
    return len(data.I & neg) + sum(1 for i, j in data.J if i in neg or j in neg)


def is_odd_witness(data: IndexData, a: tuple[int, ...]) -> bool:
    return parity_count(data, a) % 2 == 1


def _vector(n: int, negatives: Iterable[int]) -> tuple[int, ...]:
    neg = set(negatives)
    return tuple(-1 if i in neg else 1 for i in range(1, n + 1))


def exhaustive_choose_a(data: IndexData, n: int) -> tuple[int, ...] | None:
    """Lexicographically first a (with +1 before -1) of odd parity, or None."""
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}")
    data.validate(n)
    for a in product((1, -1), repeat=n):
        if is_odd_witness(data, a):
            return a
    return None


def choose_a(data: IndexData, n: int) -> tuple[int, ...]:
    """Odd-parity sign vector from the case analysis on m_k = 1 + deg_J(k)."""
    data.validate(n)
    if data.is_empty():
        raise EmptyInput("I and J are both empty")
    a = _choose(data, n)
    if __debug__:
        assert is_odd_witness(data, a), (data, a)
        if n <= EXHAUSTIVE_MAX_N:
            assert exhaustive_choose_a(data, n) is not None
    return a


def _choose(data: IndexData, n: int) -> tuple[int, ...]:
    I = sorted(data.I)
    for k in I:
        if data.m(k) % 2:
            return _vector(n, [k])
    for k1, k2 in sorted(data.J):
        if k1 in data.I and k2 in data.I:
            return _vector(n, [k1, k2])
    if not I:
        if n <= EXHAUSTIVE_MAX_N:
            a = exhaustive_choose_a(data, n)
            assert a is not None, "J nonempty always has an odd witness"
            return a
        # too large to search: an odd-degree vertex, else both ends of one edge
        odd = [k for k in range(1, n + 1) if (data.m(k) - 1) % 2]
        return _vector(n, odd[:1] or min(data.J))
    k1 = I[0]
    # m_{k1} is even, so k1 has an odd number of J-neighbours, none of them in I
    ell = min(j if i == k1 else i for i, j in data.J if k1 in (i, j))
    if (data.m(ell) - 1) % 2:
        return _vector(n, [ell])
    return _vector(n, [ell, k1])


def all_index_data(n: int) -> Iterable[IndexData]:
    """Every (I, J) with I and J not both empty."""
    pairs = list(combinations(range(1, n + 1), 2))
    for imask in range(1 << n):
        I = [i + 1 for i in range(n) if imask >> i & 1]
        for jmask in range(1 << len(pairs)):
            if imask or jmask:
                yield IndexData(I, [pairs[k] for k in range(len(pairs)) if jmask >> k & 1])
