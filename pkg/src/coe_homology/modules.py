"""
Coefficient modules over a finite action: C(X, l1(G)), N0, W0 and their duals.

Full-module basis: delta_x (x) delta_g in lexicographic (x, g) order, index
x*|G| + g. The action is (g xi)_x(h) = xi_{g^-1 x}(g^-1 h), i.e. the basis
vector (y, k) goes to (g y, g k).

N0 basis: delta_x (x) (delta_g - delta_e) for g != e, ordered by (x, g).
W0 basis: the N0 basis followed by w = sum_x delta_x (x) delta_e, the
constant delta_e-valued function. Note g w - w lies in N0, so the w line is
fixed only modulo N0.

Dual modules use the dual basis and the action g -> A(g^-1)^T. Dualizing a
dual returns the original module (finite-dimensional bidual identification).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .actions import Action, ClopenSet, FiniteSpace
from .config import caps
from .errors import ModuleKindError, ResourceLimit, SpaceMismatch
from .groups import Group
from .linalg import RationalMatrix, rank, solve_lp
from .verification import Verification, check

FULL, N0, W0, ABSTRACT = "full", "N0", "W0", "abstract"


@dataclass(frozen=True, eq=False)
class GModuleRep:
    group: Group
    dim: int
    labels: tuple[str, ...]
    action: tuple[RationalMatrix, ...]
    kind: str
    geometry: Action | None = None
    embedding: RationalMatrix | None = None     # columns = basis vectors inside the full module
    ambient: GModuleRep | None = None           # the full module, for N0/W0
    source: GModuleRep | None = None            # for duals

    @property
    def is_dual(self) -> bool:
        return self.source is not None

    @property
    def base_kind(self) -> str:
        """Kind of the underlying primal module."""
        return self.source.kind if self.is_dual else self.kind

    @property
    def space(self) -> FiniteSpace | None:
        m = self.source if self.is_dual else self
        return m.geometry.space if m.geometry is not None else None

    def element(self, coords: Sequence) -> ModuleElement:
        return ModuleElement(self, tuple(coords))

    def basis_vector(self, i: int) -> ModuleElement:
        v = [0] * self.dim
        v[i] = 1
        return ModuleElement(self, tuple(v))

    def act(self, g: int, elem: ModuleElement) -> ModuleElement:
        return ModuleElement(self, tuple(self.action[g] @ list(elem.coords)))

    def __repr__(self) -> str:
        return "GModuleRep(%s, dim=%d, group=%s)" % (self.kind, self.dim, self.group.name)


@dataclass(frozen=True)
class ModuleElement:
    module: GModuleRep
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.module.dim:
            raise ValueError("need %d coordinates, got %d" % (self.module.dim, len(self.coords)))

    def __add__(self, other: ModuleElement) -> ModuleElement:
        if other.module is not self.module:
            raise ModuleKindError("elements of different modules")
        return ModuleElement(self.module, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, s) -> ModuleElement:
        return ModuleElement(self.module, tuple(s * a for a in self.coords))

    def __call__(self, other: ModuleElement):
        """Pair a dual element with an element of its source module."""
        if self.module.source is not other.module:
            raise ModuleKindError("functional and vector live over different modules")
        return sum((a * b for a, b in zip(self.coords, other.coords)), 0)

    def as_labels(self) -> dict[str, str]:
        from .linalg import fstr
        return {self.module.labels[i]: fstr(v) for i, v in enumerate(self.coords) if v}


# -- construction --------------------------------------------------------------

def _full_index(nG: int, x: int, g: int) -> int:
    return x * nG + g


def _check_action(group: Group, action: Action) -> None:
    if action.group != group:
        raise ModuleKindError("action is over a different group")


def build_full_module(group: Group, action: Action) -> GModuleRep:
    """C(X, l1(G)) with the diagonal action; dimension |X| |G|."""
    _check_action(group, action)
    nG, X = group.order, action.space
    dim = X.size * nG
    mats = []
    for g in group.elements:
        row, mul = action.act[g], group.mul[g]
        mats.append(RationalMatrix.from_triplets(
            dim, dim, ((_full_index(nG, row[y], mul[k]), _full_index(nG, y, k), 1)
                       for y in X.points for k in group.elements)))
    labels = tuple("%s|%s" % (X.labels[x], group.label(g)) for x in X.points for g in group.elements)
    return GModuleRep(group, dim, labels, tuple(mats), FULL, geometry=action)


def _n0_columns(group: Group, space: FiniteSpace) -> list[tuple[int, int]]:
    e = group.identity
    return [(x, g) for x in space.points for g in group.elements if g != e]


def _restricted_action(full: GModuleRep, emb: RationalMatrix, coord: RationalMatrix) -> tuple[RationalMatrix, ...]:
    return tuple(coord @ (a @ emb) for a in full.action)


def build_N0(group: Group, action: Action) -> tuple[GModuleRep, RationalMatrix]:
    """N0(G, X) = ker sigma with basis delta_x (x) (delta_g - delta_e), g != e.

    Returns the module and its embedding matrix into the full module.
    """
    full = build_full_module(group, action)
    nG, e = group.order, group.identity
    cols = _n0_columns(group, action.space)
    emb = RationalMatrix.from_triplets(full.dim, len(cols), (
        t for j, (x, g) in enumerate(cols)
        for t in ((_full_index(nG, x, g), j, 1), (_full_index(nG, x, e), j, -1))))
    coord = RationalMatrix.from_triplets(len(cols), full.dim,
                                         ((j, _full_index(nG, x, g), 1) for j, (x, g) in enumerate(cols)))
    labels = tuple("%s|%s-e" % (action.space.labels[x], group.label(g)) for x, g in cols)
    mod = GModuleRep(group, len(cols), labels, _restricted_action(full, emb, coord), N0,
                     geometry=action, embedding=emb, ambient=full)
    return mod, emb


def build_W0(group: Group, action: Action) -> GModuleRep:
    """W0(G, X) = N0(G, X) + R w, w the constant delta_e-valued function."""
    n0, emb = build_N0(group, action)
    full = n0.ambient
    nG, e = group.order, group.identity
    X = action.space
    k = n0.dim
    w_col = RationalMatrix.from_triplets(full.dim, 1, ((_full_index(nG, x, e), 0, 1) for x in X.points))
    emb_w = emb.hstack(w_col)
    # w-coordinate of v in W0 is sigma(v) at any point; N0 coordinates are unchanged
    coord = RationalMatrix.from_triplets(k + 1, full.dim, [
        *((j, _full_index(nG, x, g), 1) for j, (x, g) in enumerate(_n0_columns(group, X))),
        *((k, _full_index(nG, 0, g), 1) for g in group.elements)])
    labels = n0.labels + ("w",)
    return GModuleRep(group, k + 1, labels, _restricted_action(full, emb_w, coord), W0,
                      geometry=action, embedding=emb_w, ambient=full)


def dualize(module: GModuleRep) -> GModuleRep:
    """Dual module with action g -> A(g^-1)^T; the dual of a dual is the source itself."""
    if module.is_dual:
        return module.source
    G = module.group
    mats = tuple(module.action[G.inv[g]].T for g in G.elements)
    labels = tuple(lab + "*" for lab in module.labels)
    return GModuleRep(G, module.dim, labels, mats, "dual-of-" + module.kind, source=module)


def trivial_module(group: Group, dim: int = 1) -> GModuleRep:
    mats = tuple(RationalMatrix.identity(dim) for _ in group.elements)
    return GModuleRep(group, dim, tuple("v%d" % i for i in range(dim)), mats, ABSTRACT)


def abstract_module(group: Group, matrices: Sequence[RationalMatrix], labels=None) -> GModuleRep:
    dim = matrices[0].shape[0] if matrices else 0
    labels = tuple(labels) if labels else tuple("v%d" % i for i in range(dim))
    return GModuleRep(group, dim, labels, tuple(matrices), ABSTRACT)


# -- verification ----------------------------------------------------------------

def sigma_matrix(full: GModuleRep) -> RationalMatrix:
    """Matrix of sigma: C(X, l1(G)) -> C(X), (sigma xi)(x) = sum_g xi_x(g)."""
    if full.kind != FULL:
        raise ModuleKindError("sigma is defined on the full module, got %s" % full.kind)
    nG, X = full.group.order, full.space
    return RationalMatrix.from_triplets(X.size, full.dim, ((x, _full_index(nG, x, g), 1)
                                                           for x in X.points for g in full.group.elements))


def point_action_matrix(action: Action, g: int) -> RationalMatrix:
    """Induced action on C(X): (g f)(x) = f(g^-1 x)."""
    n = action.space.size
    return RationalMatrix.from_triplets(n, n, ((action.act[g][x], x, 1) for x in action.space.points))


def verify_module(module: GModuleRep) -> Verification:
    """Representation law always; for geometric kinds also invariance, sigma-equivariance and ker sigma."""
    G = module.group
    A = module.action

    def identity():
        if not A[G.identity].is_identity():
            yield (G.identity,)

    def rep_law():
        for g in G.elements:
            for h in G.elements:
                if A[g] @ A[h] != A[G.mul[g][h]]:
                    yield (g, h)

    checks = [check("identity_acts_trivially", identity()), check("representation_law", rep_law())]
    if module.kind in (N0, W0):
        full, emb = module.ambient, module.embedding

        def invariance():
            for g in G.elements:
                if full.action[g] @ emb != emb @ A[g]:
                    yield (g,)
        checks.append(check("subspace_invariance", invariance()))
    if module.kind == N0:
        def kernel():
            S = sigma_matrix(module.ambient)
            if not (S @ module.embedding).is_zero():
                yield "embedded basis not in ker sigma"
            if rank(S) + module.dim != module.ambient.dim:
                yield "dim N0 != dim ker sigma"
        checks.append(check("N0_is_ker_sigma", kernel()))
    if module.kind == FULL:
        def equivariance():
            S = sigma_matrix(module)
            for g in G.elements:
                if S @ A[g] != point_action_matrix(module.geometry, g) @ S:
                    yield (g,)
        checks.append(check("sigma_equivariant", equivariance()))
    return Verification("module " + module.kind, tuple(checks))


# -- operations on elements --------------------------------------------------------

def to_full(elem: ModuleElement) -> ModuleElement:
    m = elem.module
    if m.kind == FULL:
        return elem
    if m.kind in (N0, W0):
        return ModuleElement(m.ambient, tuple(m.embedding @ list(elem.coords)))
    raise ModuleKindError("no full-module image for kind %s" % m.kind)


def sigma(elem: ModuleElement) -> tuple:
    """(sigma xi)(x) = sum_g xi_x(g), as a tuple indexed by points."""
    full = to_full(elem)
    return tuple(sigma_matrix(full.module) @ list(full.coords))


def _same_space(module: GModuleRep, s: ClopenSet) -> None:
    if module.space != s.space:
        raise SpaceMismatch("clopen set lives in a different space")


def _keep_mask(module: GModuleRep, s: ClopenSet) -> list[bool]:
    """Per-coordinate flag: is the coordinate's point inside s (N0 and full only)."""
    nG = module.group.order
    if module.kind == FULL:
        return [bool(s.mask >> (i // nG) & 1) for i in range(module.dim)]
    cols = _n0_columns(module.group, module.space)
    return [bool(s.mask >> x & 1) for x, _ in cols]


def restrict_element(elem: ModuleElement, s: ClopenSet) -> ModuleElement:
    """Zero all coordinates outside s.

    N0 is restriction-invariant, so an N0 element stays in N0. W0 is not:
    a W0 element is restricted in the full module and returned there.
    """
    m = elem.module
    if m.is_dual or m.kind not in (FULL, N0, W0):
        raise ModuleKindError("restrict_element needs a full, N0 or W0 element, got %s" % m.kind)
    _same_space(m, s)
    if m.kind == W0:
        elem = to_full(elem)
        m = elem.module
    keep = _keep_mask(m, s)
    return ModuleElement(m, tuple(v if k else 0 for v, k in zip(elem.coords, keep)))


def restriction_projector(module: GModuleRep, s: ClopenSet) -> RationalMatrix:
    """Diagonal 0/1 matrix of xi -> xi|_s on a full or N0 module."""
    if module.kind not in (FULL, N0):
        raise ModuleKindError("restriction is only linear-coordinate on full and N0 modules")
    _same_space(module, s)
    keep = _keep_mask(module, s)
    return RationalMatrix.from_triplets(module.dim, module.dim, ((i, i, 1) for i, k in enumerate(keep) if k))


def restrict_functional(tau: ModuleElement, s: ClopenSet) -> ModuleElement:
    """tau|_s (xi) = tau(xi|_s). Refused for W0 duals, since W0 is not restriction-invariant."""
    m = tau.module
    if not m.is_dual or m.source.kind not in (FULL, N0):
        raise ModuleKindError("restrict_functional needs a dual of a full or N0 module, got %s" % m.kind)
    _same_space(m.source, s)
    keep = _keep_mask(m.source, s)
    return ModuleElement(m, tuple(v if k else 0 for v, k in zip(tau.coords, keep)))


def sup_l1_norm(elem: ModuleElement) -> Fraction:
    """max over x of sum_g |xi_x(g)|."""
    full = to_full(elem)
    nG = full.module.group.order
    c = full.coords
    best = Fraction(0)
    for start in range(0, len(c), nG):
        best = max(best, Fraction(sum(abs(v) for v in c[start:start + nG])))
    return best


def dual_norm(tau: ModuleElement, dim_cap: int | None = None) -> Fraction:
    """Operator norm of tau against the sup-l1 unit ball, by exact LP.

    Variables xi+ and xi- >= 0 in full coordinates; per point the l1 mass is
    at most 1, and for N0 duals the per-point sum vanishes. The objective is
    tau read through the N0 coordinates (value at (x, g != e)).
    """
    m = tau.module
    if not m.is_dual or m.source.kind not in (FULL, N0):
        raise ModuleKindError("dual_norm needs a dual of a full or N0 module, got %s" % m.kind)
    cap = caps().lp_dim if dim_cap is None else dim_cap
    if m.dim > cap:
        raise ResourceLimit("LP dimension", m.dim, cap)
    src = m.source
    G, X = src.group, src.space
    nG, n = G.order, X.size * G.order
    if src.kind == FULL:
        obj = [Fraction(v) for v in tau.coords]
    else:
        obj = [Fraction(0)] * n
        for (x, g), v in zip(_n0_columns(G, X), tau.coords):
            obj[_full_index(nG, x, g)] = Fraction(v)
    if not any(obj):
        return Fraction(0)
    objective = obj + [-v for v in obj]
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for x in X.points:
        block = [1 if i // nG == x else 0 for i in range(n)]
        A_ub.append(block + block)
        b_ub.append(1)
        if src.kind == N0:
            A_eq.append(block + [-v for v in block])
            b_eq.append(0)
    res = solve_lp(objective, A_ub, b_ub, A_eq, b_eq)
    if res.status != "optimal":
        raise ArithmeticError("dual-norm LP ended with status %s" % res.status)
    return res.value


def dual_norm_closed_form(tau: ModuleElement) -> Fraction:
    """Sum over points of half the spread (N0 duals) or of the max |value| (full duals)."""
    m = tau.module
    src = m.source
    G, X = src.group, src.space
    nG = G.order
    total = Fraction(0)
    if src.kind == FULL:
        for x in X.points:
            total += max(abs(Fraction(v)) for v in tau.coords[x * nG:(x + 1) * nG])
        return total
    per_point: dict[int, list] = {x: [Fraction(0)] for x in X.points}
    for (x, _), v in zip(_n0_columns(G, X), tau.coords):
        per_point[x].append(Fraction(v))
    for vals in per_point.values():
        total += (max(vals) - min(vals)) / 2
    return total
