"""
Finite groups stored as explicit multiplication tables.

Element order is fixed at construction and is part of the group's
identity: every basis ordering downstream is derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product as cartesian
from typing import Any, Sequence

from .errors import AxiomViolation
from .verification import Check, Verification, check


@dataclass(frozen=True)
class Group:
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int
    labels: tuple[Any, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(len(self.mul))

    def __len__(self) -> int:
        return len(self.mul)

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def prod(self, elems: Sequence[int]) -> int:
        out = self.identity
        for a in elems:
            out = self.mul[out][a]
        return out

    def label(self, a: int) -> str:
        lab = self.labels[a]
        if isinstance(lab, tuple):
            return "(" + ",".join(str(x) for x in lab) + ")"
        return str(lab)

    def index(self, label) -> int:
        for i, lab in enumerate(self.labels):
            if lab == label or self.label(i) == str(label):
                return i
        raise KeyError(label)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], labels=None, name: str = "") -> Group:
        """Wrap a table without checking it. Missing identity/inverses are stored as -1."""
        n = len(table)
        mul = tuple(tuple(int(v) for v in row) for row in table)
        ident = next((e for e in range(n)
                      if all(mul[e][a] == a and mul[a][e] == a for a in range(n))), -1)
        inv = tuple(next((b for b in range(n) if ident >= 0 and mul[a][b] == ident), -1)
                    for a in range(n))
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        return cls(mul, inv, ident, tuple(labels), name)


def verify_group_axioms(G: Group) -> Verification:
    n = G.order
    rng = range(n)
    mul = G.mul

    def closure():
        for a in rng:
            if len(mul[a]) != n:
                yield ("row length", a)
            for b in rng:
                if not 0 <= mul[a][b] < n:
                    yield (a, b)

    closed = check("closure", closure())
    if not closed.passed:
        return Verification("group " + G.name, (closed,))

    def assoc():
        for a, b, c in cartesian(rng, repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                yield (a, b, c)

    def identity():
        e = G.identity
        if not 0 <= e < n:
            yield ("no identity element",)
            return
        for a in rng:
            if mul[e][a] != a or mul[a][e] != a:
                yield (e, a)

    def inverses():
        e = G.identity
        for a in rng:
            b = G.inv[a] if a < len(G.inv) else -1
            if not 0 <= b < n or mul[a][b] != e or mul[b][a] != e:
                yield (a,)

    def latin():
        for a in rng:
            if sorted(mul[a]) != list(rng):
                yield ("row", a)
            if sorted(mul[b][a] for b in rng) != list(rng):
                yield ("column", a)

    checks = (
        closed,
        check("associativity", assoc()),
        check("identity", identity()),
        check("inverses", inverses()),
        check("latin_square", latin()),
    )
    return Verification("group " + G.name, checks)


# -- families ---------------------------------------------------------------

def cyclic(n: int) -> Group:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    return Group(mul, inv, 0, tuple(str(a) for a in range(n)), "Z/%d" % n)


def direct_product(A: Group, B: Group) -> Group:
    nb = B.order
    els = [(a, b) for a in A.elements for b in B.elements]
    idx = {ab: i for i, ab in enumerate(els)}
    mul = tuple(tuple(idx[(A.mul[a1][a2], B.mul[b1][b2])] for (a2, b2) in els)
                for (a1, b1) in els)
    inv = tuple(idx[(A.inv[a], B.inv[b])] for (a, b) in els)
    labels = tuple((A.labels[a], B.labels[b]) for (a, b) in els)
    return Group(mul, inv, A.identity * nb + B.identity, labels,
                 "%s x %s" % (A.name, B.name))


def dihedral(n: int) -> Group:
    """Dihedral group of order 2n; element k + n*f is r^k s^f."""
    if n < 1:
        raise ValueError("dihedral group needs n >= 1")
    els = [(k, f) for f in (0, 1) for k in range(n)]
    idx = {e: i for i, e in enumerate(els)}

    def m(x, y):
        (k1, f1), (k2, f2) = x, y
        return ((k1 + (-k2 if f1 else k2)) % n, f1 ^ f2)

    mul = tuple(tuple(idx[m(x, y)] for y in els) for x in els)
    inv = tuple(next(idx[y] for y in els if m(x, y) == (0, 0)) for x in els)
    labels = tuple(("r%d" % k if k else "e") if not f else ("r%ds" % k if k else "s")
                   for (k, f) in els)
    return Group(mul, inv, 0, labels, "D%d" % n)


def symmetric(n: int) -> Group:
    """Symmetric group on n <= 4 letters, permutations in lexicographic order."""
    if not 1 <= n <= 4:
        raise ValueError("symmetric(n) is supported for 1 <= n <= 4")
    els = list(permutations(range(n)))
    idx = {p: i for i, p in enumerate(els)}
    # (p q)(i) = p(q(i))
    mul = tuple(tuple(idx[tuple(p[q[i]] for i in range(n))] for q in els) for p in els)
    inv = tuple(idx[tuple(sorted(range(n), key=lambda i: p[i]))] for p in els)
    labels = tuple("".join(str(v) for v in p) for p in els)
    return Group(mul, inv, 0, labels, "S%d" % n)


def explicit(table: Sequence[Sequence[int]], labels=None, name: str = "explicit") -> Group:
    n = len(table)
    if n < 1:
        raise AxiomViolation("closure", None, "empty multiplication table")
    for a, row in enumerate(table):
        if len(row) != n:
            raise AxiomViolation("closure", ("row", a), "row %d has length %d, expected %d" % (a, len(row), n))
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise AxiomViolation("closure", ("row", a), "entry %r in row %d is not an element" % (v, a))
    for a in range(n):
        if sorted(table[a]) != list(range(n)):
            raise AxiomViolation("latin_square", ("row", a), "row %d is not a permutation" % a)
        if sorted(table[b][a] for b in range(n)) != list(range(n)):
            raise AxiomViolation("latin_square", ("column", a), "column %d is not a permutation" % a)
    if labels is not None and len(labels) != n:
        raise ValueError("need %d labels" % n)
    G = Group.from_table(table, labels, name)
    if G.identity < 0:
        raise AxiomViolation("identity", None, "table has no two-sided identity")
    rep = verify_group_axioms(G)
    for c in rep.checks:
        if not c.passed:
            raise AxiomViolation(c.name, c.witness)
    return G


def build_group(spec) -> Group:
    """Build a group from a family descriptor.

    Descriptors are dicts (as they appear in instance files)::

        {"family": "cyclic", "n": 4}
        {"family": "product", "factors": [desc, desc, ...]}
        {"family": "dihedral", "n": 3}
        {"family": "symmetric", "n": 3}
        {"family": "explicit", "table": [[...], ...], "labels": [...]}
    """
    fam = spec.get("family")
    if fam == "cyclic":
        return cyclic(_size(spec))
    if fam == "dihedral":
        return dihedral(_size(spec))
    if fam == "symmetric":
        return symmetric(_size(spec))
    if fam == "product":
        factors = spec.get("factors")
        if not factors:
            raise ValueError("product needs a non-empty 'factors' list")
        G = build_group(factors[0])
        for f in factors[1:]:
            G = direct_product(G, build_group(f))
        return G
    if fam == "explicit":
        return explicit(spec["table"], spec.get("labels"))
    raise ValueError("unknown group family %r" % (fam,))


def _size(spec) -> int:
    n = spec.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError("group size must be a positive integer, got %r" % (n,))
    return n
