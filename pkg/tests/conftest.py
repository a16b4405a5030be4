import pytest

from coe_homology.actions import FiniteSpace, build_action, regular_action
from coe_homology.coe import CoeLink, derive_coe
from coe_homology.groups import cyclic, direct_product, symmetric
from coe_homology.instance import bundled_corpus

Z2, Z4 = cyclic(2), cyclic(4)
KLEIN = direct_product(cyclic(2), cyclic(2))


def z4_vs_klein():
    return derive_coe(regular_action(Z4), regular_action(KLEIN), [0, 1, 2, 3], "z4_vs_klein")


def identity_link(G, name="id"):
    a = regular_action(G)
    return derive_coe(a, a, list(range(G.order)), name)


def blockswap():
    a = build_action(Z2, FiniteSpace(4), [[0, 1, 2, 3], [1, 0, 3, 2]])
    return derive_coe(a, a, [2, 3, 0, 1], "blockswap")


def two_orbit_z4_vs_klein():
    """Z/4 and the Klein group each acting freely on two copies of themselves, with the copies swapped."""
    def doubled(G):
        n = G.order
        table = [[G.mul[g][x % n] + (x // n) * n for x in range(2 * n)] for g in G.elements]
        return build_action(G, FiniteSpace(2 * n), table)
    return derive_coe(doubled(Z4), doubled(KLEIN), [4, 5, 6, 7, 0, 1, 2, 3], "z4_vs_klein_2orbits")


def s3_vs_z6():
    return derive_coe(regular_action(symmetric(3)), regular_action(cyclic(6)), list(range(6)), "s3_vs_z6")


def corrupted(link: CoeLink, g=1, x=0) -> CoeLink:
    c = [list(r) for r in link.c]
    c[g][x] = (c[g][x] + 1) % link.H.order
    return CoeLink(link.actionG, link.actionH, link.phi, link.psi,
                   tuple(tuple(r) for r in c), link.cprime, link.name + "_corrupt")


@pytest.fixture(scope="session")
def corpus():
    return bundled_corpus()


@pytest.fixture(scope="session")
def good_links(corpus):
    return {n: corpus.link(n) for n, s in corpus.links.items() if s.expect == "pass"}


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, title = ACCEPTANCE[n]
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, verdict, title))
