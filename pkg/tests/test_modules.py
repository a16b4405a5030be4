from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coe_homology.actions import ClopenSet, FiniteSpace, build_action, orbits, regular_action
from coe_homology.errors import ModuleKindError, ResourceLimit, SpaceMismatch
from coe_homology.groups import cyclic, direct_product, symmetric
from coe_homology.linalg import RationalMatrix, rank
from coe_homology.modules import (build_full_module, build_N0, build_W0, dual_norm,
                                  dual_norm_closed_form, dualize, restrict_element,
                                  restrict_functional, sigma, sup_l1_norm, trivial_module,
                                  verify_module)

Z1, Z2, Z4 = cyclic(1), cyclic(2), cyclic(4)
PT = FiniteSpace(1)


def point(G):
    return build_action(G, PT, [[0]] * G.order)


ACTIONS = [regular_action(Z2), regular_action(Z4), regular_action(direct_product(Z2, Z2)),
           regular_action(symmetric(3)), build_action(Z2, FiniteSpace(4), [[0, 1, 2, 3], [1, 0, 3, 2]]),
           point(Z2)]


def test_full_module_examples():
    m = build_full_module(Z1, point(Z1))
    assert m.dim == 1 and m.action[0].is_identity()
    m = build_full_module(Z2, point(Z2))
    assert m.dim == 2 and m.action[1].to_dense() == [[0, 1], [1, 0]]
    m = build_full_module(Z2, regular_action(Z2))
    # basis (x, h) at index 2x + h; (x, h) -> (x + 1, h + 1)
    for x in range(2):
        for h in range(2):
            assert m.action[1][2 * ((x + 1) % 2) + (h + 1) % 2, 2 * x + h] == 1


def test_n0_examples():
    n0, emb = build_N0(Z2, point(Z2))
    assert n0.dim == 1 and n0.action[1].to_dense() == [[-1]]
    assert emb.to_dense() == [[-1], [1]]
    assert build_N0(Z4, regular_action(Z4))[0].dim == 12
    assert build_N0(Z1, build_action(Z1, FiniteSpace(3), [[0, 1, 2]]))[0].dim == 0


def test_w0_examples():
    assert build_W0(Z1, point(Z1)).dim == 1
    w = build_W0(Z2, point(Z2))
    # W0 of a point is all of l1(G)
    assert w.dim == 2 and rank(w.embedding) == 2
    assert build_W0(Z4, regular_action(Z4)).dim == 13


def test_w0_constant_is_fixed_modulo_n0():
    a = regular_action(Z4)
    w0 = build_W0(Z4, a)
    n0, _ = build_N0(Z4, a)
    w = w0.basis_vector(w0.dim - 1)
    for g in Z4.elements:
        moved = w0.act(g, w)
        assert moved.coords[-1] == 1
        assert sigma(moved) == (1,) * 4


@pytest.mark.parametrize("a", ACTIONS, ids=lambda a: "%s/%d" % (a.group.name, a.space.size))
def test_representation_and_structure(a):
    G = a.group
    n0, _ = build_N0(G, a)
    mods = [build_full_module(G, a), n0, build_W0(G, a)]
    for m in mods + [dualize(m) for m in mods]:
        assert verify_module(m).passed, (m, verify_module(m).failures())


def test_dualize_examples():
    t = trivial_module(Z2, 3)
    assert dualize(t).action == t.action
    n0, _ = build_N0(Z2, point(Z2))
    assert dualize(n0).action[1].to_dense() == [[-1]]
    assert dualize(dualize(n0)) is n0
    d = dualize(build_full_module(Z4, regular_action(Z4)))
    for g in Z4.elements:
        for h in Z4.elements:
            assert d.action[g] @ d.action[h] == d.action[Z4.mul[g][h]]


def test_sigma_examples():
    a = regular_action(Z2)
    full = build_full_module(Z2, a)
    n0, _ = build_N0(Z2, a)
    w0 = build_W0(Z2, a)
    assert sigma(full.basis_vector(3)) == (0, 1)       # delta_1 (x) delta_1
    assert sigma(n0.basis_vector(0)) == (0, 0)
    assert sigma(w0.basis_vector(w0.dim - 1)) == (1, 1)
    with pytest.raises(ModuleKindError):
        sigma(dualize(full).basis_vector(0))


def test_n0_is_kernel_of_sigma():
    for a in ACTIONS:
        n0, _ = build_N0(a.group, a)
        assert verify_module(n0)["N0_is_ker_sigma"].passed


def test_restriction_examples():
    a = regular_action(Z4)
    n0, _ = build_N0(Z4, a)
    X = a.space
    xi = n0.element([Fraction(i, 3) for i in range(n0.dim)])
    assert restrict_element(xi, ClopenSet.full(X)) == xi
    assert restrict_element(xi, ClopenSet.empty(X)).coords == (0,) * n0.dim
    e = n0.basis_vector(0)             # delta_0 (x) (delta_1 - delta_e)
    assert not any(restrict_element(e, ClopenSet.of(X, [1])).coords)
    with pytest.raises(SpaceMismatch):
        restrict_element(xi, ClopenSet.full(FiniteSpace(4, ("a", "b", "c", "d"))))


def test_w0_restriction_leaves_w0():
    a = regular_action(Z2)
    w0 = build_W0(Z2, a)
    w = w0.basis_vector(w0.dim - 1)
    r = restrict_element(w, ClopenSet.of(a.space, [0]))
    assert r.module.kind == "full"
    assert sigma(r) == (1, 0)          # not constant, so not in W0
    with pytest.raises(ModuleKindError):
        restrict_functional(dualize(w0).basis_vector(0), ClopenSet.full(a.space))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=12, max_size=12), st.integers(0, 15))
def test_restriction_invariance_and_duality(coords, mask):
    a = regular_action(Z4)
    n0, _ = build_N0(Z4, a)
    s = ClopenSet(a.space, mask)
    xi = n0.element(coords)
    r = restrict_element(xi, s)
    assert r.module is n0 and sigma(r) == (0,) * 4
    tau = dualize(n0).element(list(reversed(coords)))
    assert restrict_functional(tau, s)(xi) == tau(restrict_element(xi, s))
    parts = [ClopenSet.of(a.space, [x]) for x in a.space.points]
    assert sum(restrict_functional(tau, p)(xi) for p in parts) == tau(xi)


def test_sup_l1_examples():
    a = regular_action(Z2)
    full = build_full_module(Z2, a)
    n0, _ = build_N0(Z2, a)
    assert sup_l1_norm(full.element([0] * 4)) == 0
    assert sup_l1_norm(n0.basis_vector(0)) == 2
    assert sup_l1_norm(full.element([1, 0, 0, 1])) == 1
    assert sup_l1_norm(full.element([1, Fraction(-1, 2), 0, 1])) == Fraction(3, 2)


def test_dual_norm_examples():
    n0, _ = build_N0(Z2, point(Z2))
    d = dualize(n0)
    assert dual_norm(d.element([0])) == 0
    assert dual_norm(d.element([1])) == Fraction(1, 2)
    full = build_full_module(Z2, point(Z2))
    assert dual_norm(dualize(full).element([1, 0])) == 1


def test_dual_norm_cap():
    a = regular_action(symmetric(3))
    n0, _ = build_N0(a.group, a)      # dimension 30
    with pytest.raises(ResourceLimit):
        dual_norm(dualize(n0).basis_vector(0))
    assert dual_norm(dualize(n0).basis_vector(0), dim_cap=30) == Fraction(1, 2)


rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=12, max_size=12))
def test_dual_norm_matches_closed_form(coords):
    a = regular_action(Z4)
    n0, _ = build_N0(Z4, a)
    tau = dualize(n0).element(coords)
    assert dual_norm(tau) == dual_norm_closed_form(tau)
    full = build_full_module(Z2, regular_action(Z2))
    t2 = dualize(full).element(coords[:4])
    assert dual_norm(t2) == dual_norm_closed_form(t2)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=4, max_size=4), st.lists(rationals, min_size=4, max_size=4),
       rationals)
def test_dual_norm_is_a_norm(u, v, s):
    a = build_action(Z2, FiniteSpace(4), [[0, 1, 2, 3], [1, 0, 3, 2]])
    d = dualize(build_N0(Z2, a)[0])
    tu, tv = d.element(u), d.element(v)
    assert dual_norm(tu.scale(s)) == abs(s) * dual_norm(tu)
    assert dual_norm(tu + tv) <= dual_norm(tu) + dual_norm(tv)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=12, max_size=12))
def test_partition_bound(coords):
    a = regular_action(Z4)
    d = dualize(build_N0(Z4, a)[0])
    tau = d.element(coords)
    total = dual_norm(tau)
    for parts in ([o.mask for o in orbits(a)], [1 << x for x in range(4)], [0b0011, 0b1100]):
        assert sum(dual_norm(restrict_functional(tau, ClopenSet(a.space, m))) for m in parts) <= total
