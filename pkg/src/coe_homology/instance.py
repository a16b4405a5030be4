"""
Instance documents: JSON with top-level keys groups, actions, links, params.

    {
      "groups":  {"Z4": {"family": "cyclic", "n": 4}},
      "actions": {"Z4reg": {"group": "Z4", "regular": true},
                  "pt":    {"group": "Z4", "points": 1, "table": [[0], [0], [0], [0]]}},
      "links":   {"id": {"G": "Z4reg", "H": "Z4reg", "derive": {"phi": [0, 1, 2, 3]}},
                  "raw": {"G": "Z4reg", "H": "Z4reg",
                          "explicit": {"phi": [...], "psi": [...], "c": [[...]], "cprime": [[...]]}}},
      "params":  {"max_degree": 3, "seed": 0}
    }

Links may carry "expect": "pass" | "fail" | "reject" for negative fixtures.
Parsing is strict: unknown or duplicate keys are errors. Links are resolved
lazily, so a link whose derivation is refused still parses.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .actions import Action, FiniteSpace, build_action, regular_action
from .coe import CoeLink, derive_coe
from .config import caps
from .errors import AxiomViolation, CoeHomologyError, InstanceError, ResourceLimit, UnresolvedReference
from .groups import Group, build_group

EXPECTATIONS = ("pass", "fail", "reject")
GROUP_KEYS = {"family", "n", "factors", "table", "labels"}
ACTION_KEYS = {"group", "points", "table", "regular", "labels"}
LINK_KEYS = {"G", "H", "derive", "explicit", "expect", "description"}
PARAM_KEYS = {"max_degree", "seed", "samples", "functionals"}


@dataclass(frozen=True)
class Params:
    max_degree: int = 3
    seed: int = 0
    samples: int = 100          # random vectors for the isometry check
    functionals: int = 50       # random functionals for the dual-norm partition bound


@dataclass(frozen=True)
class LinkSpec:
    name: str
    G: str
    H: str
    mode: str                   # "derive" or "explicit"
    data: dict
    expect: str = "pass"
    description: str = ""


@dataclass(eq=False)
class Instance:
    name: str
    groups: dict[str, Group]
    actions: dict[str, Action]
    action_groups: dict[str, str]
    links: dict[str, LinkSpec]
    params: Params
    document: dict
    _resolved: dict = field(default_factory=dict, repr=False)

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(dump_instance(self).encode("utf-8")).hexdigest()

    def link(self, name: str) -> CoeLink:
        """Resolve a link, deriving cocycles if needed. Derivation errors propagate."""
        if name not in self.links:
            raise UnresolvedReference("no link named %r" % name)
        if name not in self._resolved:
            spec = self.links[name]
            aG, aH = self.actions[spec.G], self.actions[spec.H]
            try:
                if spec.mode == "derive":
                    self._resolved[name] = ("ok", derive_coe(aG, aH, spec.data["phi"], name))
                else:
                    d = spec.data
                    self._resolved[name] = ("ok", CoeLink(
                        aG, aH, _int_tuple(d["phi"]), _int_tuple(d["psi"]),
                        tuple(_int_tuple(r) for r in d["c"]),
                        tuple(_int_tuple(r) for r in d["cprime"]), name))
            except (CoeHomologyError, ValueError, IndexError) as exc:   # re-raised on every access
                self._resolved[name] = ("error", exc)
        status, val = self._resolved[name]
        if status == "error":
            raise val
        return val


def _int_tuple(xs) -> tuple[int, ...]:
    return tuple(int(v) for v in xs)


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise InstanceError("duplicate key %r" % k)
        out[k] = v
    return out


def _strict_keys(obj: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise InstanceError("%s must be an object" % where)
    extra = sorted(set(obj) - allowed)
    if extra:
        raise InstanceError("unknown key %r in %s" % (extra[0], where))
    return obj


def _check_int_table(table, where: str) -> None:
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise InstanceError("%s must be a list of lists" % where)
    for r in table:
        for v in r:
            if not isinstance(v, int) or isinstance(v, bool):
                raise InstanceError("%s has non-integer entry %r" % (where, v))


def parse_instance(text: str, name: str = "instance") -> Instance:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise InstanceError(exc.msg, exc.lineno, exc.colno) from None
    doc = _strict_keys(doc, {"groups", "actions", "links", "params"}, "instance")
    for key in ("groups", "actions", "links"):
        doc.setdefault(key, {})
        if not isinstance(doc[key], dict):
            raise InstanceError("%r must be an object" % key)

    groups: dict[str, Group] = {}
    for gname, spec in doc["groups"].items():
        _strict_keys(spec, GROUP_KEYS, "group %r" % gname)
        _validate_group_spec(spec, gname)
        try:
            groups[gname] = build_group(spec)
        except AxiomViolation as exc:
            raise InstanceError("group %r: %s axiom: %s" % (gname, exc.axiom, exc)) from None
        except (ValueError, KeyError, TypeError) as exc:
            raise InstanceError("group %r: %s" % (gname, exc)) from None

    actions: dict[str, Action] = {}
    action_groups: dict[str, str] = {}
    for aname, spec in doc["actions"].items():
        _strict_keys(spec, ACTION_KEYS, "action %r" % aname)
        gref = spec.get("group")
        if gref not in groups:
            raise UnresolvedReference("action %r references undefined group %r" % (aname, gref))
        G = groups[gref]
        action_groups[aname] = gref
        if spec.get("regular"):
            if "table" in spec or "points" in spec:
                raise InstanceError("action %r: regular actions take no table or points" % aname)
            actions[aname] = regular_action(G)
            continue
        table, npts = spec.get("table"), spec.get("points")
        if not isinstance(npts, int) or isinstance(npts, bool) or npts < 1:
            raise InstanceError("action %r needs a positive integer 'points'" % aname)
        _check_int_table(table, "action %r table" % aname)
        labels = spec.get("labels")
        try:
            space = FiniteSpace(npts, tuple(str(s) for s in labels) if labels else ())
            actions[aname] = build_action(G, space, table)
        except AxiomViolation as exc:
            raise InstanceError("action %r: %s axiom: %s" % (aname, exc.axiom, exc)) from None
        except ValueError as exc:
            raise InstanceError("action %r: %s" % (aname, exc)) from None

    links: dict[str, LinkSpec] = {}
    for lname, spec in doc["links"].items():
        _strict_keys(spec, LINK_KEYS, "link %r" % lname)
        for side in ("G", "H"):
            if spec.get(side) not in actions:
                raise UnresolvedReference("link %r references undefined action %r" % (lname, spec.get(side)))
        modes = [m for m in ("derive", "explicit") if m in spec]
        if len(modes) != 1:
            raise InstanceError("link %r needs exactly one of 'derive' or 'explicit'" % lname)
        mode = modes[0]
        data = spec[mode]
        if mode == "derive":
            _strict_keys(data, {"phi"}, "link %r derive" % lname)
            _check_int_table([data.get("phi")], "link %r phi" % lname)
        else:
            _strict_keys(data, {"phi", "psi", "c", "cprime"}, "link %r explicit" % lname)
            for k in ("phi", "psi"):
                _check_int_table([data.get(k)], "link %r %s" % (lname, k))
            for k in ("c", "cprime"):
                _check_int_table(data.get(k), "link %r %s" % (lname, k))
        expect = spec.get("expect", "pass")
        if expect not in EXPECTATIONS:
            raise InstanceError("link %r: expect must be one of %s" % (lname, ", ".join(EXPECTATIONS)))
        links[lname] = LinkSpec(lname, spec["G"], spec["H"], mode, data, expect, spec.get("description", ""))

    p = _strict_keys(doc.get("params", {}), PARAM_KEYS, "params")
    for k, v in p.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InstanceError("param %r must be a non-negative integer" % k)
    params = Params(**p)
    if params.max_degree > caps().max_degree:
        raise ResourceLimit("max_degree", params.max_degree, caps().max_degree)
    return Instance(name, groups, actions, action_groups, links, params, doc)


def _validate_group_spec(spec: dict, where: str) -> None:
    if spec.get("family") == "product":
        for i, f in enumerate(spec.get("factors") or []):
            _strict_keys(f, GROUP_KEYS, "group %r factor %d" % (where, i))
            _validate_group_spec(f, where)
    if spec.get("family") == "explicit":
        _check_int_table(spec.get("table"), "group %r table" % where)


def dump_instance(inst: Instance) -> str:
    """Canonical JSON text of the instance document (sorted keys, fixed indentation)."""
    return json.dumps(inst.document, sort_keys=True, indent=2) + "\n"


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError("cannot read %s: %s" % (path, exc.strerror)) from None
    except UnicodeDecodeError:
        raise InstanceError("%s is not UTF-8 text" % path) from None
    return parse_instance(text, os.path.splitext(os.path.basename(path))[0])


def bundled_corpus(name: str = "corpus") -> Instance:
    """The instance files shipped with the package ("corpus" or "z4_vs_klein")."""
    text = resources.files("coe_homology").joinpath("corpus", name + ".json").read_text(encoding="utf-8")
    return parse_instance(text, name)
