"""
Continuous orbit equivalence data between two finite actions.

A link carries the point bijections phi: X -> Y, psi: Y -> X and the orbit
cocycles c: G x X -> H, c': H x Y -> G as full tables. Continuity is
vacuous on finite discrete spaces and is not checked. Derived links are
verified like any other; verification never trusts derivation.

Level sets are always keyed by a (g, h) pair:

    X_{g,h} = {x in X : c(g^-1, x) = h^-1}
    Y_{h,g} = {y in Y : c'(h^-1, y) = g^-1}

and tuple sets by a g-tuple and an h-tuple of equal length n:

    [g; h] = X_{g0,h0} & g0 X_{g1,h1} & (g0 g1) X_{g2,h2} & ...
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Sequence

from .actions import Action, ClopenSet, check_topologically_free
from .errors import HypothesisViolation, OrbitMismatch
from .verification import Check, Verification, check

G_SIDE, H_SIDE = "G", "H"


@dataclass(frozen=True)
class CoeLink:
    actionG: Action
    actionH: Action
    phi: tuple[int, ...]
    psi: tuple[int, ...]
    c: tuple[tuple[int, ...], ...]          # c[g][x] in H
    cprime: tuple[tuple[int, ...], ...]     # cprime[h][y] in G
    name: str = ""

    @property
    def G(self):
        return self.actionG.group

    @property
    def H(self):
        return self.actionH.group

    @property
    def X(self):
        return self.actionG.space

    @property
    def Y(self):
        return self.actionH.space

    @cached_property
    def verification(self) -> Verification:
        return verify_coe(self)

    @property
    def verified(self) -> bool:
        return self.verification.passed

    def mirror(self) -> CoeLink:
        """The same link read from the H side."""
        return CoeLink(self.actionH, self.actionG, self.psi, self.phi, self.cprime, self.c,
                       self.name + "~" if self.name else "")

    # level-set masks for both sides, memoised per instance
    @cached_property
    def _level_masks(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        G, H = self.G, self.H
        lg = []
        for g in G.elements:
            row = [0] * H.order
            gi = G.inv[g]
            for x in self.X.points:
                row[H.inv[self.c[gi][x]]] |= 1 << x
            lg.append(tuple(row))
        lh = []
        for h in H.elements:
            row = [0] * G.order
            hi = H.inv[h]
            for y in self.Y.points:
                row[G.inv[self.cprime[hi][y]]] |= 1 << y
            lh.append(tuple(row))
        return tuple(lg), tuple(lh)

    def level_mask(self, side: str, g: int, h: int) -> int:
        lg, lh = self._level_masks
        return lg[g][h] if side == G_SIDE else lh[h][g]

    def tuple_mask(self, g_tuple: Sequence[int], h_tuple: Sequence[int], side: str = G_SIDE) -> int:
        if len(g_tuple) != len(h_tuple):
            raise ValueError("tuple length mismatch: %d vs %d" % (len(g_tuple), len(h_tuple)))
        if side == G_SIDE:
            act, grp, outer, inner = self.actionG, self.G, g_tuple, h_tuple
            lv = self._level_masks[0]
            space = self.X
        else:
            act, grp, outer, inner = self.actionH, self.H, h_tuple, g_tuple
            lv = self._level_masks[1]
            space = self.Y
        mask = space.full_mask
        prefix = grp.identity
        for a, b in zip(outer, inner):
            mask &= act.translate_mask(prefix, lv[a][b])
            if not mask:
                return 0
            prefix = grp.mul[prefix][a]
        return mask


def _inverse_perm(p: Sequence[int]) -> tuple[int, ...]:
    q = [-1] * len(p)
    for i, v in enumerate(p):
        q[v] = i
    return tuple(q)


def derive_coe(actionG: Action, actionH: Action, phi: Sequence[int], name: str = "") -> CoeLink:
    """Derive both cocycles from a bare point bijection.

    c(g, x) is the unique h with phi(g x) = h phi(x); uniqueness is what
    freeness of the H-action buys. c' is derived the same way from psi.
    """
    for label, a in (("G", actionG), ("H", actionH)):
        free, w = check_topologically_free(a)
        if not free:
            raise HypothesisViolation("%s-action is not topologically free: g=%d fixes x=%d" % (label, w[0], w[1]),
                                      witness=w)
    phi = tuple(int(v) for v in phi)
    if len(phi) != actionG.space.size or sorted(phi) != list(range(actionH.space.size)):
        raise ValueError("phi is not a bijection X -> Y")
    psi = _inverse_perm(phi)

    def solve(act_src: Action, act_dst: Action, f, g: int, x: int, witness_order) -> int:
        target = f[act_src.act[g][x]]
        base = f[x]
        for h in act_dst.group.elements:
            if act_dst.act[h][base] == target:
                return h
        raise OrbitMismatch(witness_order)

    c = tuple(tuple(solve(actionG, actionH, phi, g, x, (g, x)) for x in actionG.space.points)
              for g in actionG.group.elements)
    cp = tuple(tuple(solve(actionH, actionG, psi, h, y, (h, y)) for y in actionH.space.points)
               for h in actionH.group.elements)
    return CoeLink(actionG, actionH, phi, psi, c, cp, name)


def verify_coe(link: CoeLink) -> Verification:
    """Check every defining identity of a COE link exhaustively.

    Families: psi = phi^-1, both COE identities, both cocycle identities,
    both inverse relations (c'(c(g,x), phi(x)) = g and its mirror) and
    per-point bijectivity of g -> c(g, x) and h -> c'(h, y).
    """
    aG, aH = link.actionG, link.actionH
    G, H = link.G, link.H
    X, Y = link.X, link.Y
    phi, psi, c, cp = link.phi, link.psi, link.c, link.cprime

    def shapes():
        if len(phi) != X.size or len(psi) != Y.size:
            yield "phi/psi length"
        if len(c) != G.order or any(len(r) != X.size for r in c):
            yield "c table shape"
        if len(cp) != H.order or any(len(r) != Y.size for r in cp):
            yield "c' table shape"
        if any(not 0 <= v < H.order for r in c for v in r):
            yield "c value outside H"
        if any(not 0 <= v < G.order for r in cp for v in r):
            yield "c' value outside G"
        if any(not 0 <= v < Y.size for v in phi) or any(not 0 <= v < X.size for v in psi):
            yield "phi/psi value out of range"

    shape = check("table_shapes", shapes())
    if not shape.passed:
        return Verification("coe " + link.name, (shape,))

    def psi_inverse():
        for x in X.points:
            if psi[phi[x]] != x:
                yield ("x", x)
        for y in Y.points:
            if phi[psi[y]] != y:
                yield ("y", y)

    def coe_identity(act_src, act_dst, f, cyc):
        for g in act_src.group.elements:
            for x in act_src.space.points:
                if f[act_src.act[g][x]] != act_dst.act[cyc[g][x]][f[x]]:
                    yield (g, x)

    def cocycle(act, grp, tgt, cyc):
        for g1, g2 in cartesian(grp.elements, repeat=2):
            g12 = grp.mul[g1][g2]
            for x in act.space.points:
                if cyc[g12][x] != tgt.mul[cyc[g1][act.act[g2][x]]][cyc[g2][x]]:
                    yield (g1, g2, x)

    def inverse_relation(grp, space, cyc, back, f):
        for g in grp.elements:
            for x in space.points:
                if back[cyc[g][x]][f[x]] != g:
                    yield (g, x)

    def bijective(grp, space, cyc, tgt):
        for x in space.points:
            img = {cyc[g][x] for g in grp.elements}
            if len(img) != grp.order or len(img) != tgt.order:
                yield (x,)

    checks = (
        shape,
        check("psi_is_phi_inverse", psi_inverse()),
        check("coe_identity_c", coe_identity(aG, aH, phi, c)),
        check("coe_identity_cprime", coe_identity(aH, aG, psi, cp)),
        check("cocycle_c", cocycle(aG, G, H, c)),
        check("cocycle_cprime", cocycle(aH, H, G, cp)),
        check("inverse_relation_c", inverse_relation(G, X, c, cp, phi)),
        check("inverse_relation_cprime", inverse_relation(H, Y, cp, c, psi)),
        check("bijective_c", bijective(G, X, c, H)),
        check("bijective_cprime", bijective(H, Y, cp, G)),
    )
    return Verification("coe " + link.name, checks)


def require_verified(link: CoeLink) -> None:
    from .errors import UnverifiedLink
    if not link.verified:
        bad = link.verification.failures()[0]
        raise UnverifiedLink("link %r failed %s (witness %r)" % (link.name, bad.name, bad.witness),
                             witness=bad.witness)


def level_set(link: CoeLink, side: str, g: int, h: int) -> ClopenSet:
    """X_{g,h} = {x : c(g^-1, x) = h^-1} (side "G") or Y_{h,g} = {y : c'(h^-1, y) = g^-1} (side "H")."""
    space = link.X if side == G_SIDE else link.Y
    return ClopenSet(space, link.level_mask(side, g, h))


def tuple_set(link: CoeLink, g_tuple: Sequence[int], h_tuple: Sequence[int], side: str = G_SIDE) -> ClopenSet:
    """Intersection X_{g0,h0} & g0 X_{g1,h1} & ... & (g0...g_{n-2}) X_{g_{n-1},h_{n-1}}.

    The same formula serves the chain side (h-tuple fixed, g-tuple summed)
    and the cochain side (g-tuple fixed, h-tuple summed). With side "H" the
    roles swap: Y_{h0,g0} & h0 Y_{h1,g1} & ...
    """
    if len(g_tuple) != len(h_tuple):
        raise ValueError("tuple length mismatch: %d vs %d" % (len(g_tuple), len(h_tuple)))
    space = link.X if side == G_SIDE else link.Y
    return ClopenSet(space, link.tuple_mask(g_tuple, h_tuple, side))


def qi_map(link: CoeLink, basepoint: int) -> tuple[tuple[int, ...], bool]:
    """g -> c(g, basepoint), with a flag certifying it is a bijection G -> H."""
    m = tuple(link.c[g][basepoint] for g in link.G.elements)
    return m, len(set(m)) == len(m) == link.H.order


# -- partition laws -----------------------------------------------------------

def _disjoint_union(parts: Sequence[int], target: int):
    """None if the masks are pairwise disjoint with union target, else a reason."""
    acc = 0
    for p in parts:
        if acc & p:
            return "overlap"
        acc |= p
    if acc != target:
        return "union mismatch"
    return None


def verify_partition_laws(link: CoeLink, max_degree: int = 3, degree_cap: int = 3) -> Verification:
    """Exhaustively check the disjoint-union identities behind the chain-map proofs.

    (i)   X = disjoint union over h of X_{g,h}, and X_{g,h} != {} iff h in c(g, X);
    (ii)  X_{g1 g2, hs} = disjoint union over hj hl = hs of (g1 X_{g2,hl} & X_{g1,hj});
    (iii) for every prefix p, split g gbar and trailing pair (g', h'):
          p X_{g gbar, hi} & p g gbar X_{g',h'} is the disjoint union over
          h hbar = hi of p X_{g,h} & p g X_{gbar,hbar} & p g gbar X_{g',h'};
    (iv)  merging positions i-1, i of a full tuple set: the tuple set of the
          merged tuples is the disjoint union of the full tuple sets over the
          factorisations of the merged h.
    Both sides of the link are checked.
    """
    from .errors import ResourceLimit
    if max_degree > degree_cap:
        raise ResourceLimit("max_degree", max_degree, degree_cap)
    checks = []
    for side, lk in ((G_SIDE, link), (H_SIDE, link.mirror())):
        checks.extend(_partition_checks(lk, max_degree, side))
    return Verification("partition laws " + link.name, tuple(checks))


def _partition_checks(link: CoeLink, max_degree: int, side: str) -> list[Check]:
    G, H = link.G, link.H
    act = link.actionG
    full = link.X.full_mask
    lv = link._level_masks[0]
    tr = act.translate_mask

    def law_i():
        for g in G.elements:
            parts = [lv[g][h] for h in H.elements]
            why = _disjoint_union(parts, full)
            if why:
                yield (g, why)
            image = {link.c[g][x] for x in link.X.points}
            for h in H.elements:
                if bool(lv[g][h]) != (h in image):
                    yield (g, h, "nonempty iff h in c(g,X)")

    def law_ii():
        for g1, g2 in cartesian(G.elements, repeat=2):
            g12 = G.mul[g1][g2]
            for hs in H.elements:
                parts = [tr(g1, lv[g2][hl]) & lv[g1][hj]
                         for hj in H.elements for hl in H.elements if H.mul[hj][hl] == hs]
                why = _disjoint_union(parts, lv[g12][hs])
                if why:
                    yield (g1, g2, hs, why)

    def law_iii():
        for p, g, gb in cartesian(G.elements, repeat=3):
            pg = G.mul[p][g]
            pggb = G.mul[pg][gb]
            ggb = G.mul[g][gb]
            for hi in H.elements:
                left = tr(p, lv[ggb][hi])
                pairs = [(h, hb) for h in H.elements for hb in H.elements if H.mul[h][hb] == hi]
                pieces = [tr(p, lv[g][h]) & tr(pg, lv[gb][hb]) for h, hb in pairs]
                # without a trailing factor (last position of the tuple)
                why = _disjoint_union(pieces, left)
                if why:
                    yield (p, g, gb, hi, None, why)
                for gn, hn in cartesian(G.elements, H.elements):
                    tail = tr(pggb, lv[gn][hn])
                    why = _disjoint_union([q & tail for q in pieces], left & tail)
                    if why:
                        yield (p, g, gb, hi, (gn, hn), why)

    def law_iv():
        for n in range(1, max_degree):
            # full tuples have length n + 1 <= max_degree
            for gt in cartesian(G.elements, repeat=n + 1):
                for i in range(1, n + 1):
                    merged_g = gt[:i - 1] + (G.mul[gt[i - 1]][gt[i]],) + gt[i + 1:]
                    for mh in cartesian(H.elements, repeat=n):
                        hs = mh[i - 1]
                        target = link.tuple_mask(merged_g, mh)
                        parts = []
                        for a in H.elements:
                            for b in H.elements:
                                if H.mul[a][b] == hs:
                                    full_h = mh[:i - 1] + (a, b) + mh[i:]
                                    parts.append(link.tuple_mask(gt, full_h))
                        why = _disjoint_union(parts, target)
                        if why:
                            yield (gt, i, mh, why)

    return [
        check("%s:level_partition" % side, law_i()),
        check("%s:product_split" % side, law_ii()),
        check("%s:prefix_split" % side, law_iii()),
        check("%s:tuple_refinement" % side, law_iv()),
    ]
