"""
Finite discrete spaces and group actions by permutations.

In a finite discrete space every subset is clopen and "dense" means
"everything", so topological freeness is plain pointwise freeness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .errors import AxiomViolation, SpaceMismatch
from .groups import Group


@dataclass(frozen=True)
class FiniteSpace:
    size: int
    labels: tuple[Any, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a space needs at least one point")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.size)))
        elif len(self.labels) != self.size:
            raise ValueError("need %d point labels" % self.size)

    @property
    def points(self) -> range:
        return range(self.size)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1


@dataclass(frozen=True)
class ClopenSet:
    """A subset of a finite space, stored as a bitmask over point indices."""

    space: FiniteSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.size:
            raise ValueError("membership mask does not fit the space")

    @classmethod
    def of(cls, space: FiniteSpace, points: Iterable[int]) -> ClopenSet:
        m = 0
        for x in points:
            if not 0 <= x < space.size:
                raise IndexError(x)
            m |= 1 << x
        return cls(space, m)

    @classmethod
    def full(cls, space: FiniteSpace) -> ClopenSet:
        return cls(space, space.full_mask)

    @classmethod
    def empty(cls, space: FiniteSpace) -> ClopenSet:
        return cls(space, 0)

    @property
    def membership(self) -> tuple[bool, ...]:
        return tuple(bool(self.mask >> x & 1) for x in range(self.space.size))

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __iter__(self) -> Iterator[int]:
        return (x for x in range(self.space.size) if self.mask >> x & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def _same(self, other: ClopenSet) -> None:
        if other.space != self.space:
            raise SpaceMismatch("clopen sets live in different spaces")

    def __and__(self, other: ClopenSet) -> ClopenSet:
        self._same(other)
        return ClopenSet(self.space, self.mask & other.mask)

    def __or__(self, other: ClopenSet) -> ClopenSet:
        self._same(other)
        return ClopenSet(self.space, self.mask | other.mask)

    def complement(self) -> ClopenSet:
        return ClopenSet(self.space, self.space.full_mask & ~self.mask)

    def __repr__(self) -> str:
        return "ClopenSet{%s}" % ",".join(str(self.space.labels[x]) for x in self)


@dataclass(frozen=True)
class Action:
    group: Group
    space: FiniteSpace
    act: tuple[tuple[int, ...], ...]      # act[g][x]

    def __call__(self, g: int, x: int) -> int:
        return self.act[g][x]

    def translate(self, g: int, s: ClopenSet) -> ClopenSet:
        """g.S = {g x : x in S}."""
        return ClopenSet(self.space, self.translate_mask(g, s.mask))

    def translate_mask(self, g: int, mask: int) -> int:
        row = self.act[g]
        out = 0
        x = 0
        while mask:
            if mask & 1:
                out |= 1 << row[x]
            mask >>= 1
            x += 1
        return out

    def stabilizer(self, x: int) -> list[int]:
        return [g for g in self.group.elements if self.act[g][x] == x]


def build_action(group: Group, space: FiniteSpace, table: Sequence[Sequence[int]]) -> Action:
    """Validate a table with one permutation of the points per group element."""
    n, N = group.order, space.size
    if len(table) != n:
        raise AxiomViolation("table", None, "need %d permutations, got %d" % (n, len(table)))
    act = tuple(tuple(int(v) for v in row) for row in table)
    for g, row in enumerate(act):
        if sorted(row) != list(range(N)):
            raise AxiomViolation("permutation", (g,), "act(%d, .) is not a permutation of the points" % g)
    e = group.identity
    for x in range(N):
        if act[e][x] != x:
            raise AxiomViolation("identity", (e, e, x), "identity moves point %d" % x)
    for g in range(n):
        for h in range(n):
            gh = group.mul[g][h]
            for x in range(N):
                if act[g][act[h][x]] != act[gh][x]:
                    raise AxiomViolation("compatibility", (g, h, x),
                                         "act(%d, act(%d, %d)) != act(%d, %d)" % (g, h, x, gh, x))
    return Action(group, space, act)


def regular_action(group: Group) -> Action:
    """Left translation of a group on itself (points labelled by elements)."""
    space = FiniteSpace(group.order, tuple(group.label(a) for a in group.elements))
    return Action(group, space, tuple(tuple(group.mul[g][x] for x in group.elements)
                                      for g in group.elements))


def check_topologically_free(action: Action) -> tuple[bool, tuple[int, int] | None]:
    """True iff every point has trivial stabilizer; otherwise a witness (g, x), g != e, gx = x."""
    e = action.group.identity
    for x in action.space.points:
        for g in action.group.elements:
            if g != e and action.act[g][x] == x:
                return False, (g, x)
    return True, None


def orbits(action: Action) -> list[ClopenSet]:
    """Orbit decomposition, ordered by smallest point."""
    seen = 0
    out = []
    for x in action.space.points:
        if seen >> x & 1:
            continue
        m = 0
        for g in action.group.elements:
            m |= 1 << action.act[g][x]
        seen |= m
        out.append(ClopenSet(action.space, m))
    return out
