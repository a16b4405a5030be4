"""One test per acceptance criterion; each records a PASS/FAIL line in the terminal summary."""

import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from coe_homology.actions import ClopenSet
from coe_homology.bar import (build_chain_complex, build_cochain_complex, coinvariant_dim,
                              homology_dim, invariant_dim, verify_complex)
from coe_homology.coe import derive_coe, verify_coe, verify_partition_laws
from coe_homology.errors import HypothesisViolation
from coe_homology.instance import bundled_corpus
from coe_homology.modules import (build_full_module, build_N0, build_W0, dual_norm, dualize,
                                  restrict_functional)
from coe_homology.report import partition_families, random_functional
from coe_homology.transfer import (MODULE_MAJOR, FINITE_GROUP_NOTE, pi_certificates,
                                   verify_local_equivariance, verify_transfer)

import conftest

TRANSFER_LINKS = ("id_z2", "id_z4", "z4_vs_klein", "blockswap")


@contextmanager
def criterion(n, title):
    try:
        yield
    except BaseException:
        conftest.ACCEPTANCE[n] = ("FAIL", title)
        print("criterion %d: FAIL  %s" % (n, title))
        raise
    conftest.ACCEPTANCE[n] = ("PASS", title)
    print("criterion %d: PASS  %s" % (n, title))


@pytest.fixture(scope="module")
def instances():
    return [bundled_corpus("corpus"), bundled_corpus("z4_vs_klein")]


@pytest.fixture(scope="module")
def links(instances):
    out = {}
    for inst in instances:
        for name, spec in inst.links.items():
            if spec.expect == "pass":
                out[name] = inst.link(name)
    return out


def all_actions(instances):
    seen = {}
    for inst in instances:
        for name, a in inst.actions.items():
            seen.setdefault((a.group.name, a.act), (inst.name + ":" + name, a))
    return list(seen.values())


def test_c01_complex_soundness(instances):
    with criterion(1, "d d = 0 exactly, both orientations, degrees <= 3, under 10 s"):
        t0 = time.perf_counter()
        for label, a in all_actions(instances):
            G = a.group
            n0 = build_N0(G, a)[0]
            for V in (n0, build_W0(G, a), build_full_module(G, a)):
                for W in (V, dualize(V)):
                    assert verify_complex(build_chain_complex(G, W, 3)).passed, (label, W.kind)
                    assert verify_complex(build_cochain_complex(G, W, 3)).passed, (label, W.kind)
        elapsed = time.perf_counter() - t0
        assert elapsed < 10, elapsed


def test_c02_inverse_relations(links):
    with criterion(2, "c'(c(g,x),phi(x)) = g and c(c'(h,y),psi(y)) = h on every verified link"):
        failures = 0
        for link in links.values():
            assert link.verified
            failures += sum(link.cprime[link.c[g][x]][link.phi[x]] != g
                            for g in link.G.elements for x in link.X.points)
            failures += sum(link.c[link.cprime[h][y]][link.psi[y]] != h
                            for h in link.H.elements for y in link.Y.points)
        assert failures == 0


def test_c03_pi_structure(links):
    with criterion(3, "pi is a permutation, pi L = L pi = id, N0/W0/R images, sup-l1 isometry"):
        for name, link in links.items():
            rep = pi_certificates(link, seed=0, samples=100)
            assert rep.passed, (name, rep.failures())


def test_c04_restriction_identities(links):
    with criterion(4, "restriction identities on every N0 basis vector and clopen pair"):
        for name, link in links.items():
            rep = verify_local_equivariance(link)
            assert rep.passed, (name, rep.failures())


def test_c05_partition_laws(links):
    with criterion(5, "disjoint-union identities for all tuples, degrees <= 3"):
        for name, link in links.items():
            rep = verify_partition_laws(link, 3)
            assert rep.passed, (name, rep.failures())


def _transfer(links, name):
    return verify_transfer(links[name], 3, seed=0)


def test_c06_homology_transfer(links):
    with criterion(6, "d S_n = S_{n-1} d, T_n S_n = S_n T_n = id (n <= 3), equal dim H_n (n <= 2)"):
        for name in TRANSFER_LINKS:
            rep = _transfer(links, name)
            for n in range(1, 4):
                assert rep["homology_chain_map_d%d" % n].passed, (name, n)
            for n in range(4):
                assert rep["homology_TS_identity_%d" % n].passed and rep["homology_ST_identity_%d" % n].passed
            for n in range(3):
                assert rep["homology_dim_%d" % n].passed, (name, n)
            assert FINITE_GROUP_NOTE in rep.notes


def test_c07_cohomology_transfer(links):
    with criterion(7, "d^n S^n = S^{n+1} d^n, T^n S^n = S^n T^n = id (n <= 2), equal dim H^0"):
        for name in TRANSFER_LINKS:
            rep = _transfer(links, name)
            for n in range(3):
                assert rep["cohomology_cochain_map_d%d" % n].passed, (name, n)
                assert rep["cohomology_TS_identity_%d" % n].passed
                assert rep["cohomology_ST_identity_%d" % n].passed
            assert rep["cohomology_dim_0"].passed


def test_c08_dual_norm_partition_bound(links):
    with criterion(8, "sum of dual norms over a partition <= dual norm, 50 functionals, exact LP"):
        for name, link in links.items():
            for side, lk in (("G", link), ("H", link.mirror())):
                d = dualize(build_N0(lk.G, lk.actionG)[0])
                assert d.dim <= 24
                rng = random.Random("acceptance:%s:%s" % (name, side))
                fams = partition_families(lk)
                assert set(fams) == {"level_sets", "orbits", "singletons"}
                for _ in range(50):
                    tau = d.element(random_functional(rng, d.dim))
                    total = dual_norm(tau)
                    assert isinstance(total, Fraction)
                    for fam, parts in fams.items():
                        pieces = sum(dual_norm(restrict_functional(tau, ClopenSet(lk.X, m))) for m in parts)
                        assert pieces <= total, (name, side, fam)


def test_c09_uniformly_finite_decomposition(instances):
    with criterion(9, "dim H0(G, W0*) = 1 + dim H0(G, N0*) on every instance"):
        for label, a in all_actions(instances):
            G = a.group
            w = homology_dim(build_chain_complex(G, dualize(build_W0(G, a)), 1), 0)
            n = homology_dim(build_chain_complex(G, dualize(build_N0(G, a)[0]), 1), 0)
            assert w == 1 + n, label


def test_c10_oracle_cross_checks(instances):
    with criterion(10, "H0 / H^0 match coinvariant / invariant oracles; Z/2 examples give 1 and 0"):
        corpus = instances[0]
        # oracle values first, from the action matrices alone
        reg, pt = corpus.actions["Z2reg"], corpus.actions["Z2pt"]
        assert coinvariant_dim(dualize(build_N0(reg.group, reg)[0])) == 1
        assert coinvariant_dim(dualize(build_N0(pt.group, pt)[0])) == 0
        for label, a in all_actions(instances):
            G = a.group
            n0 = build_N0(G, a)[0]
            for V in (n0, build_W0(G, a), build_full_module(G, a)):
                dual = dualize(V)
                assert homology_dim(build_chain_complex(G, dual, 1), 0) == coinvariant_dim(dual), (label, V.kind)
                assert homology_dim(build_cochain_complex(G, V, 1), 0) == invariant_dim(V), (label, V.kind)
        assert homology_dim(build_chain_complex(reg.group, dualize(build_N0(reg.group, reg)[0]), 2), 0) == 1
        assert homology_dim(build_chain_complex(pt.group, dualize(build_N0(pt.group, pt)[0]), 2), 0) == 0


def test_c11_negative_controls(instances, links):
    with criterion(11, "corrupted cocycle fails (2), basis-order flip fails (6), non-free rejected"):
        corpus = instances[0]
        bad = corpus.link("corrupted_cocycle")
        rep = verify_coe(bad)
        assert not rep["inverse_relation_c"].passed
        flip = verify_transfer(links["z4_vs_klein"], 3, basis_order=MODULE_MAJOR)
        assert not flip["homology_chain_map_d1"].passed
        a = corpus.actions["Z2pt"]
        with pytest.raises(HypothesisViolation):
            derive_coe(a, a, [0])


def test_c12_end_to_end_report():
    with criterion(12, "report on the full corpus under 60 s, byte-identical across two runs"):
        outs = []
        t0 = time.perf_counter()
        for _ in range(2):
            proc = subprocess.run([sys.executable, "-m", "coe_homology", "report", "--format", "json"],
                                  capture_output=True, timeout=120)
            assert proc.returncode == 0, proc.stderr.decode()
            outs.append(proc.stdout)
        assert (time.perf_counter() - t0) / 2 < 60
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["status"] == "pass"
