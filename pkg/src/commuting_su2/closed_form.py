"""Closed-form groups for the blowup and for Y_n, plus the polynomial growth test."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .linalg import AbelianGroup

SPACES = ("blowup", "yn")
THEORIES = ("cohomology-z", "cohomology-z2", "k")
PARITIES = ("K0", "K1")

PROVENANCE = {
    ("blowup", "cohomology-z"): "Serre spectral sequence of the fibration T^n -> blowup -> RP^2",
    ("blowup", "cohomology-z2"): "universal coefficients applied to the integral blowup groups",
    ("blowup", "k"): "additive basis of the blowup K-ring (x-, u-, v- and w-monomials)",
    ("yn", "cohomology-z"): "Chern character image of the Y_n K-ring basis",
    ("yn", "cohomology-z2"): "universal coefficients applied to the integral Y_n groups",
    ("yn", "k"): "Mayer-Vietoris for the collapse of the 2^n projective planes",
}


class InsufficientData(ValueError):
    """Too few terms to decide the requested growth degree."""


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def dimension(n: int) -> int:
    return n + 2


def blowup_cohomology(n: int, i: int) -> AbelianGroup:
    _check_n(n)
    if i < 0 or i > dimension(n):
        return AbelianGroup()
    if i == 0:
        return AbelianGroup.free(1)
    if i == 1:
        return AbelianGroup()
    if i % 2:
        return AbelianGroup.free(binom(n, i - 2))
    return AbelianGroup.elementary(binom(n, i), binom(n + 1, i - 1))


def yn_torsion_in_degree3(n: int) -> int:
    """Number of f-classes: 2^n - 1 - n - C(n,2)."""
    return 2**n - 1 - n - binom(n, 2)


def yn_cohomology(n: int, i: int) -> AbelianGroup:
    _check_n(n)
    if i == 2:
        return AbelianGroup.free(binom(n, 2))
    if i == 3:
        return AbelianGroup.elementary(n, yn_torsion_in_degree3(n))
    return blowup_cohomology(n, i)


def blowup_ktheory(n: int, parity: str) -> AbelianGroup:
    _check_n(n)
    half = 2 ** (n - 1)
    if parity == "K0":
        return AbelianGroup.elementary(half, 2**n)
    if parity == "K1":
        return AbelianGroup.free(half)
    raise ValueError(f"parity must be one of {PARITIES}")


def yn_ktheory(n: int, parity: str) -> AbelianGroup:
    _check_n(n)
    half = 2 ** (n - 1)
    if parity == "K0":
        return AbelianGroup.elementary(half, 2**n - 1 - n)
    if parity == "K1":
        return AbelianGroup.elementary(half, yn_torsion_in_degree3(n))
    raise ValueError(f"parity must be one of {PARITIES}")


def _uct(groups: Sequence[AbelianGroup], i: int) -> int:
    def twos(k):
        return groups[k].two_torsion_count if 0 <= k < len(groups) else 0

    return groups[i].free_rank + twos(i) + twos(i + 1)


def cohomology_z2(space: str, n: int, i: int) -> int:
    """dim H^i(space; Z/2) by universal coefficients (all torsion is 2-torsion)."""
    f = blowup_cohomology if space == "blowup" else yn_cohomology
    if i < 0 or i > dimension(n):
        return 0
    groups = [f(n, k) for k in range(dimension(n) + 2)]
    return _uct(groups, i)


def yn_mod2_betti(n: int, i: int) -> int:
    _check_n(n)
    return cohomology_z2("yn", n, i)


def finite_differences(values: Sequence[int], order: int) -> list[int]:
    seq = list(values)
    for _ in range(order):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


def polynomial_growth_test(values: Sequence[int], max_degree: int, tail: int | None = None) -> bool:
    """True iff the sequence agrees with a polynomial of degree <= max_degree.

    With ``tail`` set only the last ``tail`` terms are examined, which is how
    "eventually polynomial" is tested on a finite window.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    seq = list(values)[-tail:] if tail else list(values)
    if len(seq) < max_degree + 2:
        raise InsufficientData(f"need at least {max_degree + 2} terms, got {len(seq)}")
    return all(d == 0 for d in finite_differences(seq, max_degree + 1))


@dataclass
class GroupTable:
    """Groups of one space and theory at a fixed n, keyed by degree or parity."""

    space: str
    theory: str
    n: int
    groups: dict = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}")
        if self.theory not in THEORIES:
            raise ValueError(f"theory must be one of {THEORIES}")
        for key in self.groups:
            if self.theory == "k":
                if key not in PARITIES:
                    raise ValueError(f"K-theory tables are keyed by parity, got {key!r}")
            elif not (isinstance(key, int) and 0 <= key <= dimension(self.n)):
                raise ValueError(f"degree {key!r} outside 0..{dimension(self.n)}")

    def keys(self) -> list:
        return list(PARITIES) if self.theory == "k" else list(range(dimension(self.n) + 1))

    def rows(self) -> list[tuple[str, AbelianGroup]]:
        return [(_key_name(self.theory, k), self.groups[k]) for k in self.keys() if k in self.groups]

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "theory": self.theory,
            "n": self.n,
            "provenance": self.provenance,
            "groups": {name: g.to_json() | {"text": str(g)} for name, g in self.rows()},
        }

    def to_markdown(self) -> str:
        lines = [f"| {'parity' if self.theory == 'k' else 'degree'} | group |", "|---|---|"]
        lines += [f"| {name} | {g} |" for name, g in self.rows()]
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["space", "theory", "n", "key", "free_rank", "torsion", "text"])
        for name, g in self.rows():
            w.writerow([self.space, self.theory, self.n, name, g.free_rank, " ".join(map(str, g.torsion)), str(g)])
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _key_name(theory: str, key) -> str:
    return key if theory == "k" else f"H{key}"


def closed_form_table(space: str, theory: str, n: int) -> GroupTable:
    _check_n(n)
    if theory == "k":
        f = blowup_ktheory if space == "blowup" else yn_ktheory
        groups = {p: f(n, p) for p in PARITIES}
    elif theory == "cohomology-z":
        f = blowup_cohomology if space == "blowup" else yn_cohomology
        groups = {i: f(n, i) for i in range(dimension(n) + 1)}
    else:
        groups = {i: AbelianGroup.elementary(0, cohomology_z2(space, n, i)) for i in range(dimension(n) + 1)}
    return GroupTable(space, theory, n, groups, PROVENANCE[(space, theory)])
