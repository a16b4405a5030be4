from itertools import product

import pytest
from hypothesis import given, strategies as st

from coe_homology.errors import AxiomViolation
from coe_homology.groups import (Group, build_group, cyclic, dihedral, direct_product, explicit,
                                 symmetric, verify_group_axioms)

FAMILIES = [cyclic(1), cyclic(2), cyclic(5), dihedral(3), dihedral(4), symmetric(3), symmetric(4),
            direct_product(cyclic(2), cyclic(2)), direct_product(cyclic(2), cyclic(3))]


@pytest.mark.parametrize("G", FAMILIES, ids=lambda G: G.name)
def test_families_satisfy_axioms(G):
    assert verify_group_axioms(G).passed


def test_orders():
    assert [G.order for G in FAMILIES] == [1, 2, 5, 6, 8, 6, 24, 4, 6]


def test_symmetric_composition():
    S3 = symmetric(3)
    p, q = S3.index("102"), S3.index("021")
    # (p q)(i) = p(q(i)): q = (1 2), p = (0 1): 0 -> 0 -> 1, 1 -> 2 -> 2, 2 -> 1 -> 0
    assert S3.labels[S3.mul[p][q]] == "120"
    assert S3.mul[p][q] != S3.mul[q][p]


def test_dihedral_relations():
    D = dihedral(4)
    r, s = D.index("r1"), D.index("s")
    assert D.prod([r] * 4) == D.identity
    assert D.mul[s][s] == D.identity
    assert D.prod([s, r, s]) == D.inv[r]


def test_klein_is_not_cyclic():
    K = direct_product(cyclic(2), cyclic(2))
    assert all(K.mul[a][a] == K.identity for a in K.elements)
    assert K.label(1) == "(0,1)"


def test_non_group_table_fails_inverses():
    # identity 0, but 1*1 = 1 has no inverse
    rep = verify_group_axioms(Group.from_table([[0, 1], [1, 1]]))
    assert not rep.passed
    assert not rep["inverses"].passed and rep["inverses"].witness == (1,)
    assert rep["associativity"].passed and rep["identity"].passed


def test_explicit_rejects_with_named_axiom():
    with pytest.raises(AxiomViolation) as e:
        explicit([[0, 1], [1, 1]])
    assert e.value.axiom == "latin_square"
    with pytest.raises(AxiomViolation) as e:
        explicit([[0, 1], [1, 2]])
    assert e.value.axiom == "closure"
    # a latin square that is not associative (a quasigroup loop of order 5)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(AxiomViolation) as e:
        explicit(loop)
    assert e.value.axiom == "associativity"


def test_build_group_descriptors():
    K = build_group({"family": "product", "factors": [{"family": "cyclic", "n": 2}] * 2})
    assert K.order == 4 and verify_group_axioms(K).passed
    assert build_group({"family": "explicit", "table": [[0, 1], [1, 0]]}).order == 2
    with pytest.raises(ValueError):
        build_group({"family": "cyclic", "n": 0})
    with pytest.raises(ValueError):
        build_group({"family": "free"})


@given(st.sampled_from(FAMILIES), st.data())
def test_inverse_and_prod(G, data):
    a = data.draw(st.sampled_from(list(G.elements)))
    b = data.draw(st.sampled_from(list(G.elements)))
    assert G.mul[a][G.inv[a]] == G.identity
    assert G.inv[G.mul[a][b]] == G.mul[G.inv[b]][G.inv[a]]
    assert G.prod([a, b, G.inv[b]]) == a


@given(st.permutations(range(4)))
def test_relabelled_cyclic_is_still_a_group(perm):
    # conjugating Z/4 by a bijection of labels preserves the axioms
    Z = cyclic(4)
    inv = [perm.index(i) for i in range(4)]
    table = [[perm[Z.mul[inv[a]][inv[b]]] for b in range(4)] for a in range(4)]
    assert explicit(table).order == 4
