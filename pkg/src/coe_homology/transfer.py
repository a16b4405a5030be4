"""
Transfer matrices induced by a verified COE link.

pi: C(Y, l1(H)) -> C(X, l1(G)),   (pi xi)_x(g) = xi_{phi(x)}(c(g, g^-1 x))
L:  C(X, l1(G)) -> C(Y, l1(H)),   (L eta)_y(h) = eta_{psi(y)}(c'(h, h^-1 y))

Pi and Lam are pi and L read in N0 coordinates. Dual pairings become
transposes, and restriction to a clopen set A becomes the diagonal
projector P_A, so the blocks of the degree-n maps are

    S_n (homology, G -> H)     block(h-tuple, g-tuple) = (P_[g;h] Pi)^T
    T_n (homology, H -> G)     block(g-tuple, h-tuple) = (Q_[h;g] Lam)^T
    S^n (cohomology, H -> G)   block(g-tuple, h-tuple) = P_[g;h] Pi
    T^n (cohomology, G -> H)   block(h-tuple, g-tuple) = Q_[h;g] Lam

with [g;h] the G-side tuple set and [h;g] its H-side mirror. Cohomology
uses the canonical identification N0** = N0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as cartesian

from .actions import ClopenSet, orbits
from .bar import build_chain_complex, build_cochain_complex, homology_dim, tuple_index
from .coe import G_SIDE, H_SIDE, CoeLink, require_verified
from .config import caps
from .errors import ModuleKindError, ResourceLimit
from .linalg import RationalMatrix, kernel_basis, rank, same_column_space
from .modules import (GModuleRep, build_full_module, build_N0, build_W0, dualize,
                      restriction_projector, sup_l1_norm)
from .verification import Check, Verification, check

TUPLE_MAJOR, MODULE_MAJOR = "tuple-major", "module-major"

FINITE_GROUP_NOTE = ("finite groups have vanishing rational (co)homology in positive degrees; "
                     "the discriminating content is the exact matrix identities")
BIDUAL_NOTE = "N0** is identified with N0 (finite dimension); cohomology transfer uses that identification"


def _gate(link: CoeLink, unchecked: bool) -> None:
    if not unchecked:
        require_verified(link)


# -- pi and L -------------------------------------------------------------------

def _pi_like(link: CoeLink) -> RationalMatrix:
    G, H = link.G, link.H
    X = link.X
    nG, nH = G.order, H.order
    actG = link.actionG.act
    trip = []
    for x in X.points:
        y = link.phi[x]
        for g in G.elements:
            k = link.c[g][actG[G.inv[g]][x]]
            trip.append((x * nG + g, y * nH + k, 1))
    return RationalMatrix.from_triplets(X.size * nG, link.Y.size * nH, trip)


def build_pi(link: CoeLink, unchecked: bool = False) -> RationalMatrix:
    """Matrix of pi on the full modules (columns indexed by (y, h), rows by (x, g))."""
    _gate(link, unchecked)
    return _pi_like(link)


def build_L(link: CoeLink, unchecked: bool = False) -> RationalMatrix:
    """Matrix of L = pi^-1, built from psi and c' by the mirrored formula."""
    _gate(link, unchecked)
    return _pi_like(link.mirror())


@dataclass(frozen=True, eq=False)
class LinkModules:
    """Coefficient modules on both sides of a link."""
    link: CoeLink

    @cached_property
    def fullG(self) -> GModuleRep:
        return build_full_module(self.link.G, self.link.actionG)

    @cached_property
    def fullH(self) -> GModuleRep:
        return build_full_module(self.link.H, self.link.actionH)

    @cached_property
    def N0G(self) -> GModuleRep:
        return build_N0(self.link.G, self.link.actionG)[0]

    @cached_property
    def N0H(self) -> GModuleRep:
        return build_N0(self.link.H, self.link.actionH)[0]

    @cached_property
    def W0G(self) -> GModuleRep:
        return build_W0(self.link.G, self.link.actionG)

    @cached_property
    def W0H(self) -> GModuleRep:
        return build_W0(self.link.H, self.link.actionH)


def _selector(n0: GModuleRep) -> RationalMatrix:
    nG, e = n0.group.order, n0.group.identity
    rows = [x * nG + g for x in n0.space.points for g in n0.group.elements if g != e]
    return RationalMatrix.from_triplets(len(rows), n0.ambient.dim, ((i, r, 1) for i, r in enumerate(rows)))


def restricted_pi(link: CoeLink, unchecked: bool = False) -> RationalMatrix:
    """Pi: N0(H, Y) -> N0(G, X) in N0 coordinates."""
    mods = LinkModules(link)
    return _selector(mods.N0G) @ build_pi(link, unchecked) @ mods.N0H.embedding


def restricted_L(link: CoeLink, unchecked: bool = False) -> RationalMatrix:
    """Lam: N0(G, X) -> N0(H, Y) in N0 coordinates."""
    mods = LinkModules(link)
    return _selector(mods.N0H) @ build_L(link, unchecked) @ mods.N0G.embedding


def _random_vector(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]


def pi_certificates(link: CoeLink, seed: int = 0, samples: int = 100, unchecked: bool = False) -> Verification:
    """Permutation structure, two-sided inverse, subspace images and isometry of pi."""
    pi, L = build_pi(link, unchecked), build_L(link, unchecked)
    mods = LinkModules(link)

    def permutation():
        if pi.permutation() is None:
            yield "pi is not a coordinate permutation"

    def inverse(a, b):
        if a.shape[1] != b.shape[0] or not (a @ b).is_identity():
            yield "product is not the identity"

    def image(src: GModuleRep, dst: GModuleRep):
        if not same_column_space(pi @ src.embedding, dst.embedding):
            yield (src.kind,)

    def constant_line():
        wG = mods.W0G.embedding.select_columns([mods.W0G.dim - 1])
        wH = mods.W0H.embedding.select_columns([mods.W0H.dim - 1])
        if not same_column_space(pi @ wH, wG):
            yield "R summand not preserved"

    def isometry():
        from .modules import ModuleElement
        H_full, G_full = mods.fullH, mods.fullG
        rng = random.Random(seed)
        vecs = [("basis", j, [1 if i == j else 0 for i in range(pi.shape[1])]) for j in range(pi.shape[1])]
        vecs += [("random", k, _random_vector(rng, pi.shape[1])) for k in range(samples)]
        for kind, k, v in vecs:
            a = sup_l1_norm(ModuleElement(H_full, tuple(v)))
            b = sup_l1_norm(ModuleElement(G_full, tuple(pi @ v)))
            if a != b:
                yield (kind, k)

    def transpose_inverse():
        if pi.permutation() is not None and L != pi.T:
            yield "L differs from pi^T"

    checks = (
        check("pi_permutation", permutation()),
        check("pi_L_identity", inverse(pi, L)),
        check("L_pi_identity", inverse(L, pi)),
        check("pi_N0_image", image(mods.N0H, mods.N0G)),
        check("pi_W0_image", image(mods.W0H, mods.W0G)),
        check("pi_R_image", constant_line()),
        check("L_is_pi_transpose", transpose_inverse()),
        check("pi_isometry", isometry(), detail="seed=%d samples=%d" % (seed, samples)),
    )
    return Verification("pi " + link.name, checks)


# -- restriction identities------------------------------------------------------------

def _clopen_family(link: CoeLink, side: str, full_cap: int = 6) -> list[int]:
    """All subsets for small spaces, else the sets generated by orbits and level sets."""
    space = link.X if side == G_SIDE else link.Y
    if space.size <= full_cap:
        return list(range(1 << space.size))
    action = link.actionG if side == G_SIDE else link.actionH
    fam = {0, space.full_mask}
    fam.update(o.mask for o in orbits(action))
    fam.update(1 << x for x in space.points)
    for g in link.G.elements:
        for h in link.H.elements:
            fam.add(link.level_mask(side, g, h))
    return sorted(fam)


def verify_local_equivariance(link: CoeLink, unchecked: bool = False) -> Verification:
    """Restriction identities, checked exhaustively on N0 basis vectors.

    Equivariance on level sets: for X0 inside X_{g,h},
        (pi(h xi))|_X0 = (g pi(xi))|_X0 = g (pi(xi)|_{g^-1 X0}).
    Restriction through pi and L: for clopen X0, Y0,
        pi(L(eta)|_Y0)|_X0 = eta|_{X0 & psi(Y0)},  L(pi(xi)|_X0)|_Y0 = xi|_{Y0 & phi(X0)}.
    """
    mods = LinkModules(link)
    N0G, N0H = mods.N0G, mods.N0H
    Pi, Lam = restricted_pi(link, unchecked), restricted_L(link, unchecked)
    X, Y = link.X, link.Y
    projG: dict[int, RationalMatrix] = {}
    projH: dict[int, RationalMatrix] = {}

    def PG(mask):
        if mask not in projG:
            projG[mask] = restriction_projector(N0G, ClopenSet(X, mask))
        return projG[mask]

    def PH(mask):
        if mask not in projH:
            projH[mask] = restriction_projector(N0H, ClopenSet(Y, mask))
        return projH[mask]

    def image_mask(perm, mask):
        out = 0
        for p in range(len(perm)):
            if mask >> p & 1:
                out |= 1 << perm[p]
        return out

    def level_set_equivariance():
        tr = link.actionG.translate_mask
        for g in link.G.elements:
            for h in link.H.elements:
                lv = link.level_mask(G_SIDE, g, h)
                if not lv:
                    continue
                subs = [lv] + [1 << x for x in X.points if lv >> x & 1]
                for X0 in subs:
                    P0 = PG(X0)
                    Pback = PG(tr(link.G.inv[g], X0))
                    for j in range(N0H.dim):
                        xi = [1 if i == j else 0 for i in range(N0H.dim)]
                        left = P0 @ (Pi @ (N0H.action[h] @ xi))
                        mid = P0 @ (N0G.action[g] @ (Pi @ xi))
                        right = N0G.action[g] @ (Pback @ (Pi @ xi))
                        if left != mid or mid != right:
                            yield (g, h, N0H.labels[j])

    def restriction_through(side: str):
        if side == G_SIDE:
            famA, famB = _clopen_family(link, G_SIDE), _clopen_family(link, H_SIDE)
            outer, inner, PA, PB, back, dim = Pi, Lam, PG, PH, link.psi, N0G.dim
        else:
            famA, famB = _clopen_family(link, H_SIDE), _clopen_family(link, G_SIDE)
            outer, inner, PA, PB, back, dim = Lam, Pi, PH, PG, link.phi, N0H.dim
        basis = [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
        for B0 in famB:
            moved = image_mask(back, B0)
            M = outer @ PB(B0) @ inner
            for A0 in famA:
                lhs = PA(A0) @ M
                rhs = PA(A0 & moved)
                if lhs != rhs:
                    for j, v in enumerate(basis):
                        if lhs @ v != rhs @ v:
                            yield (A0, B0, j)
                            break
                    else:
                        yield (A0, B0)

    checks = (
        check("local_equivariance", level_set_equivariance()),
        check("restriction_through_L", restriction_through(G_SIDE)),
        check("restriction_through_pi", restriction_through(H_SIDE)),
    )
    return Verification("restriction identities " + link.name, checks)


# -- degree-n transfer ------------------------------------------------------------

def _check_degree(n: int, size: int) -> None:
    c = caps()
    if n > c.max_degree:
        raise ResourceLimit("degree", n, c.max_degree)
    if size > c.size:
        raise ResourceLimit("transfer matrix dimension in degree %d" % n, size, c.size)


def _module_major(index: int, n_tuples: int, d: int) -> int:
    t, i = divmod(index, d)
    return i * n_tuples + t


def _blocks(link: CoeLink, n: int, base: RationalMatrix, rows_are_G: bool, restrict_input: bool,
            tuple_side: str, basis_order: str = TUPLE_MAJOR) -> RationalMatrix:
    """Assemble the block matrix whose (row tuple, column tuple) block is base restricted to a tuple set.

    rows_are_G: row tuples enumerate G^n (else H^n). restrict_input: the
    projector acts before base (columns) rather than after it (rows).
    tuple_side picks which space the tuple set lives in, and hence whose
    N0 coordinates the projector reads.
    """
    G, H = link.G, link.H
    r_out, r_in = base.shape
    rowgrp, colgrp = (G, H) if rows_are_G else (H, G)
    nr, nc = rowgrp.order ** n, colgrp.order ** n
    _check_degree(n, max(nr * r_out, nc * r_in))
    space = link.X if tuple_side == G_SIDE else link.Y
    grp = G if tuple_side == G_SIDE else H
    per_point = grp.order - 1
    # point carrying each N0 coordinate of the restricted side
    point_of = [i // per_point for i in range((r_in if restrict_input else r_out))]
    if restrict_input:
        entries_by = {}
        for i, j, v in base.triplets():
            entries_by.setdefault(j, []).append((i, v))
    else:
        entries_by = {}
        for i, j, v in base.triplets():
            entries_by.setdefault(i, []).append((j, v))
    trip = []
    for rt in cartesian(rowgrp.elements, repeat=n):
        roff = tuple_index(rt, rowgrp.order) * r_out
        for ct in cartesian(colgrp.elements, repeat=n):
            gt, ht = (rt, ct) if rows_are_G else (ct, rt)
            mask = link.tuple_mask(gt, ht, tuple_side)
            if not mask:
                continue
            coff = tuple_index(ct, colgrp.order) * r_in
            for k, lst in entries_by.items():
                if not mask >> point_of[k] & 1:
                    continue
                if restrict_input:
                    for i, v in lst:
                        trip.append((roff + i, coff + k, v))
                else:
                    for j, v in lst:
                        trip.append((roff + k, coff + j, v))
    if basis_order == MODULE_MAJOR:
        trip = [(_module_major(i, nr, r_out), j, v) for i, j, v in trip]
    elif basis_order != TUPLE_MAJOR:
        raise ValueError("unknown basis order %r" % basis_order)
    return RationalMatrix.from_triplets(nr * r_out, nc * r_in, trip)


def _refuse(coefficients: str) -> None:
    if coefficients != "N0":
        raise ModuleKindError("transfer maps are defined for N0 coefficients only; %s is not "
                              "restriction-invariant" % coefficients)


def build_S_homology(link: CoeLink, n: int, basis_order: str = TUPLE_MAJOR,
                     coefficients: str = "N0", unchecked: bool = False) -> RationalMatrix:
    """S_n: C_n(G, N0(G,X)*) -> C_n(H, N0(H,Y)*).

    basis_order="module-major" emits the rows in the wrong (module index
    major) order; it exists only as a negative control.
    """
    _refuse(coefficients)
    Pi = restricted_pi(link, unchecked)
    return _blocks(link, n, Pi.T, rows_are_G=False, restrict_input=True, tuple_side=G_SIDE,
                   basis_order=basis_order)


def build_T_homology(link: CoeLink, n: int, coefficients: str = "N0", unchecked: bool = False) -> RationalMatrix:
    """T_n: C_n(H, N0(H,Y)*) -> C_n(G, N0(G,X)*)."""
    _refuse(coefficients)
    Lam = restricted_L(link, unchecked)
    return _blocks(link, n, Lam.T, rows_are_G=True, restrict_input=True, tuple_side=H_SIDE)


def build_S_cohomology(link: CoeLink, n: int, coefficients: str = "N0", unchecked: bool = False) -> RationalMatrix:
    """S^n: C^n(H, N0(H,Y)) -> C^n(G, N0(G,X)), with N0** identified with N0."""
    _refuse(coefficients)
    Pi = restricted_pi(link, unchecked)
    return _blocks(link, n, Pi, rows_are_G=True, restrict_input=False, tuple_side=G_SIDE)


def build_T_cohomology(link: CoeLink, n: int, coefficients: str = "N0", unchecked: bool = False) -> RationalMatrix:
    """T^n: C^n(G, N0(G,X)) -> C^n(H, N0(H,Y))."""
    _refuse(coefficients)
    Lam = restricted_L(link, unchecked)
    return _blocks(link, n, Lam, rows_are_G=False, restrict_input=False, tuple_side=H_SIDE)


# -- the full suite ------------------------------------------------------------------

@dataclass
class TransferRep:
    link: CoeLink
    max_degree: int
    pi: RationalMatrix
    L: RationalMatrix
    S_hom: dict[int, RationalMatrix]
    T_hom: dict[int, RationalMatrix]
    S_coh: dict[int, RationalMatrix]
    T_coh: dict[int, RationalMatrix]


def build_transfer(link: CoeLink, max_degree: int, basis_order: str = TUPLE_MAJOR,
                   unchecked: bool = False) -> TransferRep:
    degs = range(max_degree + 1)
    return TransferRep(
        link, max_degree, build_pi(link, unchecked), build_L(link, unchecked),
        {n: build_S_homology(link, n, basis_order, unchecked=unchecked) for n in degs},
        {n: build_T_homology(link, n, unchecked=unchecked) for n in degs},
        {n: build_S_cohomology(link, n, unchecked=unchecked) for n in degs},
        {n: build_T_cohomology(link, n, unchecked=unchecked) for n in degs},
    )


def _eq_shape(a: RationalMatrix, b: RationalMatrix) -> bool:
    return a.shape == b.shape and a == b


def _kernel_matrix(m: RationalMatrix) -> RationalMatrix:
    vecs = kernel_basis(m)
    return RationalMatrix.from_columns(m.shape[1], vecs)


def verify_transfer(link: CoeLink, max_degree: int = 3, seed: int = 0, basis_order: str = TUPLE_MAJOR,
                    unchecked: bool = False, samples: int = 100) -> Verification:
    """Chain-map identities, invertibility, isometry, induced dimensions and the H0^uf split.

    Homology maps are checked in degrees 0..max_degree; cohomology maps in
    degrees 0..max_degree with coboundaries up to degree max_degree - 1.
    """
    _gate(link, unchecked)
    if max_degree > caps().max_degree:
        raise ResourceLimit("max_degree", max_degree, caps().max_degree)
    mods = LinkModules(link)
    G, H = link.G, link.H
    tr = build_transfer(link, max_degree, basis_order, unchecked)
    chG = build_chain_complex(G, dualize(mods.N0G), max_degree)
    chH = build_chain_complex(H, dualize(mods.N0H), max_degree)
    coG = build_cochain_complex(G, mods.N0G, max_degree)
    coH = build_cochain_complex(H, mods.N0H, max_degree)
    checks: list[Check] = list(pi_certificates(link, seed, samples, unchecked).checks)

    def chain_map(n):
        if not _eq_shape(chH.boundary(n) @ tr.S_hom[n], tr.S_hom[n - 1] @ chG.boundary(n)):
            yield (n,)

    def cochain_map(n):
        if not _eq_shape(coG.boundary(n) @ tr.S_coh[n], tr.S_coh[n + 1] @ coH.boundary(n)):
            yield (n,)

    def identity(a, b, n):
        if a.shape[1] != b.shape[0] or not (a @ b).is_identity():
            yield (n,)

    for n in range(1, max_degree + 1):
        checks.append(check("homology_chain_map_d%d" % n, chain_map(n)))
    for n in range(max_degree):
        checks.append(check("cohomology_cochain_map_d%d" % n, cochain_map(n)))
    for n in range(max_degree + 1):
        checks.append(check("homology_TS_identity_%d" % n, identity(tr.T_hom[n], tr.S_hom[n], n)))
        checks.append(check("homology_ST_identity_%d" % n, identity(tr.S_hom[n], tr.T_hom[n], n)))
        checks.append(check("cohomology_TS_identity_%d" % n, identity(tr.T_coh[n], tr.S_coh[n], n)))
        checks.append(check("cohomology_ST_identity_%d" % n, identity(tr.S_coh[n], tr.T_coh[n], n)))

    # induced maps on (co)homology
    def images(S, bd_src, bd_dst):
        if bd_src is None:
            return
        mapped = S @ bd_src
        if rank(bd_dst.hstack(mapped)) != rank(bd_dst):
            yield "image not carried into image"

    def kernels(S, bd_src, bd_dst):
        if bd_src is None:
            return
        K = _kernel_matrix(bd_src)
        if not (bd_dst @ (S @ K)).is_zero():
            yield "kernel not carried into kernel"

    for n in range(max_degree):
        dG, dH = homology_dim(chG, n), homology_dim(chH, n)
        checks.append(Check("homology_dim_%d" % n, dG == dH, None if dG == dH else (dG, dH),
                            "G:%d H:%d" % (dG, dH)))
        checks.append(check("homology_images_%d" % n,
                            images(tr.S_hom[n], chG.boundary(n + 1), chH.boundary(n + 1))))
        if n >= 1:
            checks.append(check("homology_kernels_%d" % n,
                                kernels(tr.S_hom[n], chG.boundary(n), chH.boundary(n))))
        cG, cH = homology_dim(coG, n), homology_dim(coH, n)
        checks.append(Check("cohomology_dim_%d" % n, cG == cH, None if cG == cH else (cG, cH),
                            "G:%d H:%d" % (cG, cH)))
        checks.append(check("cohomology_kernels_%d" % n,
                            kernels(tr.S_coh[n], coH.boundary(n), coG.boundary(n))))
        if n >= 1:
            checks.append(check("cohomology_images_%d" % n,
                                images(tr.S_coh[n], coH.boundary(n - 1), coG.boundary(n - 1))))

    for side, grp, w0, n0 in ((G_SIDE, G, mods.W0G, mods.N0G), (H_SIDE, H, mods.W0H, mods.N0H)):
        a = h0uf_dim(grp, w0)
        b = h0uf_dim(grp, n0)
        checks.append(Check("%s:H0uf_decomposition" % side, a == 1 + b, None if a == 1 + b else (a, b),
                            "dim H0(W0*)=%d, 1+dim H0(N0*)=%d" % (a, 1 + b)))
    notes = (FINITE_GROUP_NOTE, BIDUAL_NOTE, "seed=%d" % seed)
    return Verification("transfer " + link.name, tuple(checks), notes)


def h0uf_dim(group, primal: GModuleRep) -> int:
    """dim H0(G, M*) from the chain complex truncated at degree 1."""
    return homology_dim(build_chain_complex(group, dualize(primal), 1), 0)
