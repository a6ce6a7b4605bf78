"""Integer partitions, Maya diagrams and interlacing.

Half-integer sites are represented by :class:`fractions.Fraction` values
with denominator 2. A Maya diagram is stored as its finite set of
deviations from the charge-0 vacuum, where every site ``k < 0`` carries a
black marble and every site ``k > 0`` a white one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

HALF = Fraction(1, 2)
BLACK = True
WHITE = False


def half(twice: int) -> Fraction:
    """Return the half-integer ``twice / 2`` (``twice`` must be odd)."""
    if twice % 2 == 0:
        raise ValueError(f"{twice}/2 is not a half-integer")
    return Fraction(twice, 2)


def as_half_integer(k) -> Fraction:
    k = Fraction(k)
    if k.denominator != 2:
        raise ValueError(f"{k} is not in Z+1/2")
    return k


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (trailing zeros dropped)."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts not weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part in {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """``λ_i`` with 1-based index, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


EMPTY = Partition()


class ChargedPartition(NamedTuple):
    partition: Partition
    charge: int

    @property
    def size(self) -> int:
        return self.partition.size

    def to_json(self) -> dict:
        return {"parts": list(self.partition), "charge": self.charge}

    @classmethod
    def from_json(cls, obj: dict) -> "ChargedPartition":
        return cls(Partition(obj["parts"]), int(obj["charge"]))


VACUUM = ChargedPartition(EMPTY, 0)


@dataclass(frozen=True)
class MayaDiagram:
    """Finite deviation set from the charge-0 vacuum.

    ``blacks`` holds the positive sites carrying a black marble and
    ``whites`` the negative sites carrying a white one.
    """

    blacks: frozenset = frozenset()
    whites: frozenset = frozenset()

    def __post_init__(self):
        for k in self.blacks:
            if as_half_integer(k) < 0:
                raise ValueError(f"black deviation at negative site {k}")
        for k in self.whites:
            if as_half_integer(k) > 0:
                raise ValueError(f"white deviation at positive site {k}")

    @classmethod
    def from_colors(cls, colors: dict) -> "MayaDiagram":
        """Build from an explicit ``{site: is_black}`` map; other sites are vacuum."""
        blacks, whites = set(), set()
        for k, c in colors.items():
            k = as_half_integer(k)
            if k > 0 and c == BLACK:
                blacks.add(k)
            elif k < 0 and c == WHITE:
                whites.add(k)
        return cls(frozenset(blacks), frozenset(whites))

    @property
    def deviations(self) -> frozenset:
        return frozenset({(k, BLACK) for k in self.blacks} | {(k, WHITE) for k in self.whites})

    def color(self, k) -> bool:
        k = as_half_integer(k)
        if k > 0:
            return k in self.blacks
        return k not in self.whites

    def flip(self, k) -> "MayaDiagram":
        k = as_half_integer(k)
        if k > 0:
            return MayaDiagram(self.blacks ^ {k}, self.whites)
        return MayaDiagram(self.blacks, self.whites ^ {k})

    @property
    def charge(self) -> int:
        return len(self.blacks) - len(self.whites)

    def blacks_above(self, k) -> int:
        """Number of black marbles at sites strictly greater than ``k``."""
        k = as_half_integer(k)
        vacuum = int(-k - HALF) if k < 0 else 0
        return (vacuum
                - sum(1 for j in self.whites if j > k)
                + sum(1 for j in self.blacks if j > k))

    def is_vacuum(self) -> bool:
        return not self.blacks and not self.whites

    def support_bound(self) -> Fraction:
        """Smallest ``h`` with all deviations inside ``[-h, h]``."""
        sites = [abs(k) for k in self.blacks | self.whites]
        return max(sites, default=Fraction(0))


VACUUM_MAYA = MayaDiagram()


def conjugate(lam: Partition) -> Partition:
    lam = Partition(lam)
    if not lam:
        return EMPTY
    return Partition(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def _interlaces_h(lam: Partition, mu: Partition) -> bool:
    n = max(len(lam), len(mu)) + 1
    for i in range(1, n + 1):
        if not (lam.part(i) >= mu.part(i) >= lam.part(i + 1)):
            return False
    return True


def interlaces(lam, mu, kind: str = "horizontal") -> bool:
    """True iff ``lam ≻ mu`` (horizontal) or ``lam' ≻ mu'`` (vertical)."""
    lam, mu = Partition(lam), Partition(mu)
    if kind == "horizontal":
        return _interlaces_h(lam, mu)
    if kind == "vertical":
        return _interlaces_h(conjugate(lam), conjugate(mu))
    raise ValueError(f"unknown interlacing kind {kind!r}")


def maya_from_charged(cp: ChargedPartition) -> MayaDiagram:
    lam, c = Partition(cp[0]), int(cp[1])
    colors = {}
    # black sites k_i = λ_i + c - i + 1/2; beyond the last part and past the
    # vacuum boundary they agree with the vacuum, so a finite range suffices
    n = len(lam) + abs(c) + 1
    blacks = {lam.part(i) + c - i + HALF for i in range(1, n + 1)}
    lo = min(blacks)
    hi = max(max(blacks), Fraction(abs(c)) + HALF)
    k = lo
    while k <= hi:
        colors[k] = k in blacks
        k += 1
    # sites below lo are black in both the diagram and the vacuum
    return MayaDiagram.from_colors(colors)


def charged_from_maya(m: MayaDiagram) -> ChargedPartition:
    c = m.charge
    sites = m.blacks | m.whites
    top = max([k for k in sites] + [Fraction(abs(c)) + HALF, HALF])
    parts = []
    i = 1
    k = top
    # walk black marbles from the top down; λ_i = k_i - c + i - 1/2
    while True:
        while not m.color(k):
            k -= 1
        p = k - c + i - HALF
        if p == 0:
            break
        parts.append(int(p))
        i += 1
        k -= 1
    return ChargedPartition(Partition(parts), c)


def omega(cp: ChargedPartition) -> ChargedPartition:
    return ChargedPartition(conjugate(cp[0]), -cp[1])


def _shrink_h(lam: Partition, max_delta: int | None) -> Iterator[Partition]:
    """All ``mu ≺ lam`` with ``|lam| - |mu| <= max_delta``."""
    n = len(lam)
    ranges = [range(lam.part(i + 1), lam.part(i) + 1) for i in range(1, n + 1)]
    total = lam.size
    for parts in itertools.product(*ranges):
        if max_delta is None or total - sum(parts) <= max_delta:
            yield Partition(parts)


def _grow_h(lam: Partition, max_delta: int) -> Iterator[Partition]:
    """All ``mu ≻ lam`` with ``|mu| - |lam| <= max_delta``."""
    n = len(lam)
    out = []

    def rec(i, acc, budget):
        # position i (1-based) of mu; mu_1 unbounded above, mu_i <= lam_{i-1}
        if i > n + 1:
            out.append(Partition(acc))
            return
        low = lam.part(i)
        high = low + budget if i == 1 else min(lam.part(i - 1), low + budget)
        for v in range(low, high + 1):
            acc.append(v)
            rec(i + 1, acc, budget - (v - low))
            acc.pop()

    rec(1, [], max_delta)
    return iter(out)


def enumerate_interlacing(lam, kind: str, direction: str, max_size_delta: int) -> list:
    """Partitions interlacing with ``lam`` within a size window.

    ``direction="shrink"`` lists ``mu ≺ lam`` (``mu' ≺ lam'`` when vertical),
    ``direction="grow"`` lists ``mu ≻ lam``; only ``| |mu|-|lam| | <=
    max_size_delta`` are returned, sorted canonically.
    """
    if max_size_delta < 0:
        raise ValueError("max_size_delta must be nonnegative")
    lam = Partition(lam)
    base = lam if kind == "horizontal" else conjugate(lam)
    if kind not in ("horizontal", "vertical"):
        raise ValueError(f"unknown interlacing kind {kind!r}")
    if direction == "shrink":
        found = _shrink_h(base, max_size_delta)
    elif direction == "grow":
        found = _grow_h(base, max_size_delta)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if kind == "vertical":
        found = (conjugate(m) for m in found)
    return sorted(found, key=lambda p: (p.size, tuple(p)))


def partitions_of(n: int) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order."""
    def rec(rem, maxp):
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, maxp), 0, -1):
            for rest in rec(rem - p, p):
                yield (p,) + rest
    for parts in rec(n, n):
        yield Partition(parts)


def partitions_up_to(n: int) -> Iterator[Partition]:
    for k in range(n + 1):
        yield from partitions_of(k)
