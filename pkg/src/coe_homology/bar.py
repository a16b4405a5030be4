"""
Bar-resolution chain and cochain complexes with exact boundary matrices.

Basis of C_n = C(G^n, V): index t*dim(V) + i, where t enumerates g-tuples
(g1, ..., gn) lexicographically with g1 most significant and i is the
module basis index.

Chain boundary on delta_(a1..an) (x) v:
    face 0:      delta_(a2..an) (x) a1^-1 v
    face i:      delta_(.., a_i a_{i+1}, ..) (x) v      0 < i < n
    face n:      delta_(a1..a_{n-1}) (x) v
with d_n = sum_i (-1)^i face_i.

Cochain coboundary:
    (d f)(g0..gn) = g0 f(g1..gn) + sum_{i=1}^{n} (-1)^i f(.., g_{i-1} g_i, ..)
                    + (-1)^{n+1} f(g0..g_{n-1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .config import caps
from .errors import ResourceLimit
from .groups import Group
from .linalg import RationalMatrix, rank
from .modules import GModuleRep
from .verification import Verification, check

CHAIN, COCHAIN = "chain", "cochain"


@dataclass(frozen=True, eq=False)
class ChainComplexRep:
    group: Group
    coefficients: GModuleRep
    max_degree: int
    dims: tuple[int, ...]
    boundaries: dict[int, RationalMatrix]
    orientation: str
    _ranks: dict = field(default_factory=dict, repr=False)

    def boundary(self, n: int) -> RationalMatrix:
        """Chain: d_n: C_n -> C_{n-1} (n >= 1). Cochain: d^n: C^n -> C^{n+1} (n >= 0)."""
        return self.boundaries[n]

    def rank_of(self, n: int) -> int:
        if n not in self.boundaries:
            return 0
        if n not in self._ranks:
            self._ranks[n] = rank(self.boundaries[n])
        return self._ranks[n]


def tuple_index(t, order: int) -> int:
    i = 0
    for a in t:
        i = i * order + a
    return i


def _check_caps(group: Group, V: GModuleRep, max_degree: int) -> tuple[int, ...]:
    c = caps()
    if max_degree > c.max_degree:
        raise ResourceLimit("max_degree", max_degree, c.max_degree)
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    dims = tuple(group.order ** n * V.dim for n in range(max_degree + 1))
    if dims[-1] > c.size:
        raise ResourceLimit("chain group dimension in degree %d" % max_degree, dims[-1], c.size)
    return dims


def _chain_boundary(G: Group, V: GModuleRep, n: int) -> RationalMatrix:
    d, N = V.dim, G.order
    trip = []
    inv_blocks = [V.action[G.inv[a]] for a in G.elements]
    for t in cartesian(G.elements, repeat=n):
        col0 = tuple_index(t, N) * d
        # face 0
        row0 = tuple_index(t[1:], N) * d
        for (r, c, v) in inv_blocks[t[0]].triplets():
            trip.append((row0 + r, col0 + c, v))
        for i in range(1, n + 1):
            sign = -1 if i % 2 else 1
            if i < n:
                tgt = t[:i - 1] + (G.mul[t[i - 1]][t[i]],) + t[i + 1:]
            else:
                tgt = t[:-1]
            row = tuple_index(tgt, N) * d
            for k in range(d):
                trip.append((row + k, col0 + k, sign))
    return RationalMatrix.from_triplets(N ** (n - 1) * d, N ** n * d, trip)


def _cochain_boundary(G: Group, V: GModuleRep, n: int) -> RationalMatrix:
    d, N = V.dim, G.order
    trip = []
    for t in cartesian(G.elements, repeat=n + 1):
        row0 = tuple_index(t, N) * d
        col = tuple_index(t[1:], N) * d
        for (r, c, v) in V.action[t[0]].triplets():
            trip.append((row0 + r, col + c, v))
        for i in range(1, n + 2):
            sign = -1 if i % 2 else 1
            if i <= n:
                src = t[:i - 1] + (G.mul[t[i - 1]][t[i]],) + t[i + 1:]
            else:
                src = t[:-1]
            col = tuple_index(src, N) * d
            for k in range(d):
                trip.append((row0 + k, col + k, sign))
    return RationalMatrix.from_triplets(N ** (n + 1) * d, N ** n * d, trip)


def build_chain_complex(group: Group, coefficients: GModuleRep, max_degree: int) -> ChainComplexRep:
    """C_0 .. C_max with boundaries d_1 .. d_max."""
    dims = _check_caps(group, coefficients, max_degree)
    bd = {n: _chain_boundary(group, coefficients, n) for n in range(1, max_degree + 1)}
    return ChainComplexRep(group, coefficients, max_degree, dims, bd, CHAIN)


def build_cochain_complex(group: Group, coefficients: GModuleRep, max_degree: int) -> ChainComplexRep:
    """C^0 .. C^max with coboundaries d^0 .. d^{max-1}."""
    dims = _check_caps(group, coefficients, max_degree)
    bd = {n: _cochain_boundary(group, coefficients, n) for n in range(max_degree)}
    return ChainComplexRep(group, coefficients, max_degree, dims, bd, COCHAIN)


def homology_dim(complex_: ChainComplexRep, n: int) -> int:
    """dim ker - dim im at degree n; needs n < max_degree."""
    if not 0 <= n < complex_.max_degree:
        raise ValueError("degree %d outside built range 0..%d" % (n, complex_.max_degree - 1))
    if complex_.orientation == CHAIN:
        return complex_.dims[n] - complex_.rank_of(n) - complex_.rank_of(n + 1)
    return complex_.dims[n] - complex_.rank_of(n) - complex_.rank_of(n - 1)


def verify_complex(complex_: ChainComplexRep) -> Verification:
    def composites():
        bd = complex_.boundaries
        for n in sorted(bd):
            nxt = n + 1
            if nxt in bd:
                prod = bd[n] @ bd[nxt] if complex_.orientation == CHAIN else bd[nxt] @ bd[n]
                if not prod.is_zero():
                    yield (n, nxt)
    return Verification("%s complex" % complex_.orientation, (check("boundary_squared_zero", composites()),))


# -- degree-zero oracles -------------------------------------------------------

def coinvariant_dim(V: GModuleRep) -> int:
    """dim V - rank span{g v - v}."""
    if V.dim == 0:
        return 0
    I = RationalMatrix.identity(V.dim)
    M = RationalMatrix.zeros(V.dim, 0)
    for g in V.group.elements:
        M = M.hstack(V.action[g] - I)
    return V.dim - rank(M)


def invariant_dim(V: GModuleRep) -> int:
    """Dimension of the common fixed space of all g."""
    if V.dim == 0:
        return 0
    I = RationalMatrix.identity(V.dim)
    M = RationalMatrix.zeros(0, V.dim)
    for g in V.group.elements:
        M = M.vstack(V.action[g] - I)
    return V.dim - rank(M)
