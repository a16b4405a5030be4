"""
Command dispatch and report serialization.

A report is a flat list of verdict rows plus a dimensions table. Rows that
belong to negative fixtures are kept for inspection but marked, and only
their expectation row counts toward the overall status.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .actions import ClopenSet, check_topologically_free, orbits
from .bar import (build_chain_complex, build_cochain_complex, coinvariant_dim, homology_dim,
                  invariant_dim, verify_complex)
from .coe import G_SIDE, H_SIDE, CoeLink, verify_partition_laws
from .config import caps
from .errors import CoeHomologyError, HypothesisViolation, ResourceLimit, UnresolvedReference
from .groups import verify_group_axioms
from .instance import Instance
from .linalg import fstr
from .modules import (build_N0, build_W0, dual_norm, dual_norm_closed_form, dualize,
                      restrict_functional)
from .transfer import BIDUAL_NOTE, FINITE_GROUP_NOTE, verify_local_equivariance, verify_transfer
from .verification import Verification, _jsonable

SCHEMA = "coe-homology-report/1"
COMMANDS = ("verify", "homology", "cohomology", "transfer", "report")


@dataclass
class Report:
    command: str
    instance: str = ""
    content_hash: str = ""
    params: dict = field(default_factory=dict)
    verdicts: list[dict] = field(default_factory=list)
    dimensions: list[dict] = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    exploratory: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v["verdict"] == "pass" for v in self.verdicts if not v.get("negative_fixture"))

    def add(self, ver: Verification, negative: bool = False) -> None:
        for c in ver.checks:
            row: dict[str, Any] = {"subject": ver.subject, "check": c.name,
                                   "verdict": "pass" if c.passed else "fail"}
            if not c.passed:
                row["witness"] = _jsonable(c.witness)
            if c.detail:
                row["detail"] = c.detail
            if negative:
                row["negative_fixture"] = True
            self.verdicts.append(row)
        for n in ver.notes:
            if n not in self.notes:
                self.notes.append(n)

    def verdict(self, subject: str, name: str, passed: bool, witness=None, detail: str = "",
                negative: bool = False) -> None:
        row: dict[str, Any] = {"subject": subject, "check": name, "verdict": "pass" if passed else "fail"}
        if not passed:
            row["witness"] = _jsonable(witness)
        if detail:
            row["detail"] = detail
        if negative:
            row["negative_fixture"] = True
        self.verdicts.append(row)

    def to_json(self, with_timings: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "tool": {"name": "coe-homology", "version": __version__},
            "command": self.command,
            "instance": {"name": self.instance, "sha256": self.content_hash},
            "params": self.params,
            "status": "pass" if self.ok else "fail",
            "verdicts": self.verdicts,
            "dimensions": self.dimensions,
            "facts": self.facts,
            "exploratory": self.exploratory,
            "notes": self.notes,
        }
        if with_timings:
            out["timings"] = self.timings
        return out


# -- sections -----------------------------------------------------------------------

def _selected_links(inst: Instance, link: str | None) -> list[str]:
    if link is None:
        return list(inst.links)
    if link not in inst.links:
        raise UnresolvedReference("no link named %r (have: %s)" % (link, ", ".join(inst.links) or "none"))
    return [link]


def _selected_actions(inst: Instance, link: str | None) -> list[str]:
    if link is None:
        return list(inst.actions)
    spec = inst.links[link]
    return [a for a in inst.actions if a in (spec.G, spec.H)]


def _resolve(inst: Instance, name: str, rep: Report) -> CoeLink | None:
    """Resolve and verify a link, recording the expectation outcome. None if unusable."""
    spec = inst.links[name]
    negative = spec.expect != "pass"
    subject = "link " + name
    try:
        link = inst.link(name)
    except CoeHomologyError as exc:
        witness = getattr(exc, "witness", None)
        rep.verdict(subject, "derive", False, witness, "%s: %s" % (type(exc).__name__, exc), negative=negative)
        met = spec.expect == "reject" and isinstance(exc, HypothesisViolation)
        rep.verdict(subject, "expectation_%s" % spec.expect, met, type(exc).__name__)
        return None
    except ValueError as exc:
        rep.verdict(subject, "derive", False, None, str(exc), negative=negative)
        rep.verdict(subject, "expectation_%s" % spec.expect, False, "ValueError")
        return None
    return link


def section_verify(inst: Instance, rep: Report, link_sel: str | None, max_degree: int) -> dict[str, CoeLink]:
    for gname, G in inst.groups.items():
        rep.add(_rename(verify_group_axioms(G), "group " + gname))
    actions = {}
    for aname in _selected_actions(inst, link_sel):
        a = inst.actions[aname]
        free, w = check_topologically_free(a)
        actions[aname] = {"group": inst.action_groups[aname], "points": a.space.size,
                          "topologically_free": free, "orbits": len(orbits(a))}
        if not free:
            actions[aname]["stabilizer_witness"] = list(w)
    rep.facts["actions"] = actions
    good = {}
    for name in _selected_links(inst, link_sel):
        spec = inst.links[name]
        negative = spec.expect != "pass"
        link = _resolve(inst, name, rep)
        if link is None:
            continue
        ver = link.verification
        rep.add(_rename(ver, "link " + name), negative=negative)
        if ver.passed:
            rep.add(_rename(verify_partition_laws(link, max_degree), "link " + name), negative=negative)
        if spec.expect == "pass":
            if ver.passed:
                good[name] = link
        elif spec.expect in ("fail", "reject"):
            met = (not ver.passed) if spec.expect == "fail" else False
            rep.verdict("link " + name, "expectation_%s" % spec.expect, met,
                        None if met else "link verified unexpectedly" if ver.passed else "not rejected")
    return good


def _rename(ver: Verification, subject: str) -> Verification:
    return Verification(subject, ver.checks, ver.notes)


def section_dimensions(inst: Instance, rep: Report, link_sel: str | None, max_degree: int, orientation: str) -> None:
    for aname in _selected_actions(inst, link_sel):
        a = inst.actions[aname]
        G = a.group
        n0, _ = build_N0(G, a)
        w0 = build_W0(G, a)
        subject = "action " + aname
        dims = {}
        if orientation == "homology":
            kinds = (("N0*", dualize(n0)), ("W0*", dualize(w0)))
            for label, V in kinds:
                C = build_chain_complex(G, V, max_degree)
                rep.add(Verification(subject).merged(verify_complex(C), label + ":"))
                for n in range(max_degree):
                    d = homology_dim(C, n)
                    dims[(label, n)] = d
                    rep.dimensions.append({"subject": aname, "group": G.name, "coefficients": label,
                                           "orientation": "homology", "degree": n, "dim": d})
                oracle = coinvariant_dim(V)
                rep.verdict(subject, label + ":H0_coinvariant_oracle", oracle == dims[(label, 0)],
                            (dims[(label, 0)], oracle), "oracle=%d" % oracle)
            a_, b_ = dims[("W0*", 0)], dims[("N0*", 0)]
            rep.verdict(subject, "H0uf_decomposition", a_ == 1 + b_, (a_, b_),
                        "dim H0(W0*)=%d, 1+dim H0(N0*)=%d" % (a_, 1 + b_))
        else:
            kinds = (("N0**", n0), ("W0**", w0))
            for label, V in kinds:
                C = build_cochain_complex(G, V, max_degree)
                rep.add(Verification(subject).merged(verify_complex(C), label + ":"))
                for n in range(max_degree):
                    d = homology_dim(C, n)
                    dims[(label, n)] = d
                    rep.dimensions.append({"subject": aname, "group": G.name, "coefficients": label,
                                           "orientation": "cohomology", "degree": n, "dim": d})
                oracle = invariant_dim(V)
                rep.verdict(subject, label + ":H0_invariant_oracle", oracle == dims[(label, 0)],
                            (dims[(label, 0)], oracle), "oracle=%d" % oracle)


def section_transfer(rep: Report, links: dict[str, CoeLink], max_degree: int, seed: int, samples: int) -> None:
    for name, link in links.items():
        rep.add(_rename(verify_local_equivariance(link), "link " + name))
        rep.add(_rename(verify_transfer(link, max_degree, seed, samples=samples), "link " + name))


def random_functional(rng: random.Random, dim: int) -> list[Fraction]:
    return [Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(dim)]


def partition_families(link: CoeLink) -> dict[str, list[int]]:
    """Level sets of the first non-identity g, the orbit partition, and singletons (G side)."""
    G = link.G
    g = next((a for a in G.elements if a != G.identity), G.identity)
    return {
        "level_sets": [m for m in (link.level_mask(G_SIDE, g, h) for h in link.H.elements) if m],
        "orbits": [o.mask for o in orbits(link.actionG)],
        "singletons": [1 << x for x in link.X.points],
    }


def section_norms(rep: Report, links: dict[str, CoeLink], seed: int, functionals: int) -> None:
    """Partition bound for dual norms, with an exact-rational comparison per functional."""
    cap = caps().lp_dim
    explo: dict[str, Any] = {}
    for name, link in links.items():
        for side, lk in ((G_SIDE, link), (H_SIDE, link.mirror())):
            n0, _ = build_N0(lk.G, lk.actionG)
            subject = "link %s" % name
            key = "%s:%s" % (name, side)
            if n0.dim > cap:
                rep.notes.append("%s: dual-norm checks skipped, N0 dimension %d exceeds LP cap %d" % (key, n0.dim, cap))
                continue
            dual = dualize(n0)
            rng = random.Random("%d:%s:%s" % (seed, name, side))
            fams = partition_families(lk)
            bad = {f: None for f in fams}
            tight = {f: 0 for f in fams}
            oracle_bad = None
            for k in range(functionals):
                tau = dual.element(random_functional(rng, dual.dim))
                total = dual_norm(tau)
                if total != dual_norm_closed_form(tau) and oracle_bad is None:
                    oracle_bad = (k,)
                for fam, parts in fams.items():
                    pieces = sum((dual_norm(restrict_functional(tau, ClopenSet(lk.X, m))) for m in parts),
                                 Fraction(0))
                    if pieces > total and bad[fam] is None:
                        bad[fam] = (k, fstr(pieces), fstr(total))
                    tight[fam] += pieces == total
            for fam in fams:
                rep.verdict(subject, "%s:dual_norm_partition_bound_%s" % (side, fam), bad[fam] is None, bad[fam],
                            "functionals=%d" % functionals)
            rep.verdict(subject, "%s:dual_norm_lp_matches_closed_form" % side, oracle_bad is None, oracle_bad)
            explo[key] = {"functionals": functionals,
                          "equality_counts": {f: tight[f] for f in fams}}
    if explo:
        rep.exploratory["dual_norm_partition_tightness"] = explo


# -- dispatch ------------------------------------------------------------------------

def run_command(command: str, inst: Instance, link: str | None = None, max_degree: int | None = None,
                seed: int | None = None) -> Report:
    if command not in COMMANDS:
        raise ValueError("unknown command %r" % command)
    md = inst.params.max_degree if max_degree is None else max_degree
    sd = inst.params.seed if seed is None else seed
    if md > caps().max_degree:
        raise ResourceLimit("max_degree", md, caps().max_degree)
    rep = Report(command, inst.name, inst.content_hash,
                 {"max_degree": md, "seed": sd, "samples": inst.params.samples,
                  "functionals": inst.params.functionals, "link": link})
    _selected_links(inst, link)
    t0 = time.perf_counter()

    def lap(key):
        rep.timings[key] = round(time.perf_counter() - t0, 3)

    good = section_verify(inst, rep, link, md)
    lap("verify")
    if command in ("homology", "report"):
        section_dimensions(inst, rep, link, md, "homology")
        lap("homology")
    if command in ("cohomology", "report"):
        section_dimensions(inst, rep, link, md, "cohomology")
        lap("cohomology")
    if command in ("transfer", "report"):
        section_transfer(rep, good, md, sd, inst.params.samples)
        lap("transfer")
    if command == "report":
        section_norms(rep, good, sd, inst.params.functionals)
        lap("norms")
    if command != "verify" and good:
        for n in (FINITE_GROUP_NOTE, BIDUAL_NOTE):
            if n not in rep.notes:
                rep.notes.append(n)
    return rep


def emit_report(rep: Report, fmt: str = "text", with_timings: bool = False) -> str:
    if fmt == "json":
        return json.dumps(rep.to_json(with_timings), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ("subject", "group", "coefficients", "orientation", "degree", "dim")
        w.writerow(cols)
        for row in rep.dimensions:
            w.writerow([row[c] for c in cols])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError("unknown format %r" % fmt)
    out = ["coe-homology %s  %s  (%s)" % (__version__, rep.command, SCHEMA),
           "instance %s  sha256 %s" % (rep.instance, rep.content_hash),
           "params " + " ".join("%s=%s" % (k, rep.params[k]) for k in sorted(rep.params))]
    if rep.verdicts:
        out.append("")
        out.append("verdicts")
        for v in rep.verdicts:
            tag = v["verdict"].upper()
            if v.get("negative_fixture"):
                tag += " (negative fixture)"
            line = "  %-4s %s: %s" % (tag, v["subject"], v["check"])
            if v["verdict"] != "pass" and "witness" in v:
                line += "  witness=%s" % json.dumps(v["witness"])
            if v.get("detail"):
                line += "  [%s]" % v["detail"]
            out.append(line)
    if rep.dimensions:
        out.append("")
        out.append("dimensions")
        out.append("  %-12s %-12s %-6s %-11s %6s %4s" % ("subject", "group", "coeff", "orientation", "degree", "dim"))
        for d in rep.dimensions:
            out.append("  %-12s %-12s %-6s %-11s %6d %4d" % (d["subject"], d["group"], d["coefficients"],
                                                              d["orientation"], d["degree"], d["dim"]))
    if rep.exploratory:
        out.append("")
        out.append("exploratory")
        out.append("  " + json.dumps(rep.exploratory, sort_keys=True))
    if rep.notes:
        out.append("")
        out.append("notes")
        out.extend("  - " + n for n in rep.notes)
    if with_timings and rep.timings:
        out.append("")
        out.append("timings " + " ".join("%s=%.3fs" % kv for kv in rep.timings.items()))
    counted = [v for v in rep.verdicts if not v.get("negative_fixture")]
    failed = sum(v["verdict"] != "pass" for v in counted)
    out.append("")
    out.append("status %s  (%d checks, %d failed)" % ("PASS" if rep.ok else "FAIL", len(counted), failed))
    return "\n".join(out) + "\n"
