"""JSON documents for instances and matchings.

Canonical serialization is deterministic (sorted keys, fixed separators)
so parse -> serialize round-trips byte-identically.
"""

from __future__ import annotations

import json
from typing import Optional

from .core import Explicit, Instance, MasterListSets, MasterPoset, Matching
from .errors import ParseError, ValidationError
from .poset import Poset

VERSION = "1"


def _names_of(instance: Instance, t) -> list:
    return [instance.names[a] for a in t]


def serialize_instance(instance: Instance) -> str:
    doc: dict = {
        "version": VERSION,
        "d": instance.d,
        "agents": list(instance.names),
    }
    src = instance.source
    if isinstance(src, Explicit):
        doc["source"] = {
            "type": "explicit",
            "lists": {
                instance.names[a]: [_names_of(instance, t) for t in lst]
                for a, lst in enumerate(src.lists)
            },
        }
    elif isinstance(src, MasterListSets):
        doc["source"] = {
            "type": "master_list_sets",
            "order": [_names_of(instance, t) for t in src.order],
        }
    else:
        source: dict = {"type": "master_poset"}
        if src.poset.is_ranking:
            ranking = sorted(range(src.poset.n), key=lambda v: src.poset._rank[v])
            source["ranking"] = [instance.names[v] for v in ranking]
        else:
            source["pairs"] = [
                [instance.names[u], instance.names[v]]
                for u, v in src.poset.source_pairs
            ]
        if src.completion is None:
            source["tiebreak"] = "canonical"
        else:
            source["tiebreak"] = "explicit"
            source["completion"] = {
                instance.names[a]: [_names_of(instance, t) for t in lst]
                for a, lst in enumerate(src.completion)
            }
        doc["source"] = source
    if instance.acceptability is not None:
        doc["acceptability"] = {
            instance.names[a]: sorted(
                [_names_of(instance, t) for t in sets]
            )
            for a, sets in enumerate(instance.acceptability)
        }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported document version {doc.get('version')!r}")
    for field in ("d", "agents", "source"):
        if field not in doc:
            raise ParseError(f"missing field {field!r}")
    d = doc["d"]
    names = doc["agents"]
    if not isinstance(d, int) or not isinstance(names, list):
        raise ParseError("field types: d must be int, agents a list")
    known = set(names)

    def check_set(t) -> list:
        if not isinstance(t, list) or not set(t).issubset(known):
            raise ParseError(f"set {t!r} references undeclared agents")
        return t

    src = doc["source"]
    kind = src.get("type") if isinstance(src, dict) else None
    acceptability = doc.get("acceptability")
    acc = None
    if acceptability is not None:
        acc = {a: [check_set(t) for t in sets] for a, sets in acceptability.items()}

    if kind == "explicit":
        lists = {
            a: [check_set(t) for t in lst] for a, lst in src["lists"].items()
        }
        instance = Instance.explicit(d, names, lists)
        if acc is not None and instance.acceptability is None:
            raise ParseError("acceptability given for complete explicit lists")
        return instance
    if kind == "master_list_sets":
        return Instance.master_list(d, names, [check_set(t) for t in src["order"]])
    if kind == "master_poset":
        index = {name: i for i, name in enumerate(names)}
        if "ranking" in src:
            ranking = check_set(src["ranking"])
            poset = Poset.from_ranking([index[x] for x in ranking])
        elif "pairs" in src:
            pairs = [
                (index[u], index[v]) for u, v in (check_set(p) for p in src["pairs"])
            ]
            poset = Poset.from_pairs(pairs, len(names))
        else:
            raise ParseError("master_poset needs either 'ranking' or 'pairs'")
        tiebreak = src.get("tiebreak", "canonical")
        completion = None
        if tiebreak == "explicit":
            completion = {
                a: [check_set(t) for t in lst]
                for a, lst in src.get("completion", {}).items()
            }
        elif tiebreak != "canonical":
            raise ParseError(f"unknown tiebreak {tiebreak!r}")
        return Instance.master_poset(d, names, poset, completion, acc)
    raise ParseError(f"unknown source type {kind!r}")


def serialize_matching(instance: Instance, m: Matching) -> str:
    doc = {
        "version": VERSION,
        "groups": sorted(sorted(_names_of(instance, g)) for g in m),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse_matching(text: str, instance: Instance) -> Matching:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != VERSION:
        raise ParseError("matching document must be an object with version '1'")
    groups = doc.get("groups")
    if not isinstance(groups, list):
        raise ParseError("missing 'groups' list")
    out = []
    for g in groups:
        try:
            out.append(tuple(sorted(instance.index(x) for x in g)))
        except KeyError as exc:
            raise ParseError(f"unknown agent {exc.args[0]!r} in matching") from None
    return tuple(sorted(out))
