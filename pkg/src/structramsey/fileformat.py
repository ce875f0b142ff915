"""Text formats for structures and fragments.

Structure files are JSON documents with the keys ``signature`` (list of
``[name, arity]``), ``size`` and ``relations`` (name -> sorted list of
tuples).  The writer is deterministic: fixed key order, two-space indent,
each tuple list on one line, trailing newline.  ``dumps(loads(text)) ==
text`` for every file the writer produced.

A fragment is a directory holding ``manifest.json`` plus one structure file
per member under ``members/``.  Expanded fragments also declare their
``(pattern, class count)`` pairs and their order symbol.
"""

from __future__ import annotations

import json
from pathlib import Path

from structramsey.errors import InputError
from structramsey.expansions import ClassFragment, ClassPredicate, ExpansionSignature
from structramsey.structures import FiniteStructure, Signature

FRAGMENT_FORMAT = "structramsey-fragment/1"


def _inline(obj) -> bool:
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return True
    if isinstance(obj, list):
        return all(not isinstance(x, (dict,)) and (not isinstance(x, list) or all(not isinstance(y, (list, dict)) for y in x)) for x in obj)
    return False


def _emit(obj, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if _inline(obj):
        return json.dumps(obj, separators=(", ", ": "))
    items = [f"{pad}{_emit(v, indent + 1)}" for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"


def dump_json(obj) -> str:
    return _emit(obj, 0) + "\n"


def signature_to_obj(sig: Signature) -> list:
    return [[name, arity] for name, arity in sig.relations]


def signature_from_obj(obj) -> Signature:
    if not isinstance(obj, list) or any(not isinstance(p, list) or len(p) != 2 for p in obj):
        raise InputError("signature must be a list of [name, arity] pairs")
    return Signature(tuple((str(n), int(a)) for n, a in obj))


def structure_to_obj(S: FiniteStructure) -> dict:
    return {
        "signature": signature_to_obj(S.signature),
        "size": S.size,
        "relations": {name: [list(t) for t in sorted(r)] for name, r in zip(S.signature.names, S.relations)},
    }


def structure_from_obj(obj) -> FiniteStructure:
    if not isinstance(obj, dict) or set(obj) != {"signature", "size", "relations"}:
        raise InputError("structure must have exactly the keys signature, size, relations")
    sig = signature_from_obj(obj["signature"])
    rels = obj["relations"]
    if not isinstance(rels, dict) or set(rels) != set(sig.names):
        raise InputError("relations must list every signature symbol exactly once")
    size = obj["size"]
    if not isinstance(size, int) or isinstance(size, bool):
        raise InputError("size must be an integer")
    return FiniteStructure.build(sig, size, {name: [tuple(t) for t in rels[name]] for name in sig.names})


def dumps(S: FiniteStructure) -> str:
    return dump_json(structure_to_obj(S))


def loads(text: str) -> FiniteStructure:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"structure file is not valid JSON: {exc}") from None
    return structure_from_obj(obj)


def read_structure(path) -> FiniteStructure:
    return loads(Path(path).read_text())


def write_structure(S: FiniteStructure, path):
    Path(path).write_text(dumps(S))


def _expansion_to_obj(esig: ExpansionSignature) -> dict:
    patterns = []
    for pattern, count in esig.patterns():
        names = [p.name for p in esig.class_predicates if p.pattern == pattern]
        patterns.append({"pattern": structure_to_obj(pattern), "classes": count, "names": names})
    return {
        "base": signature_to_obj(esig.base),
        "patterns": patterns,
        "order_symbol": esig.order_symbol,
    }


def _expansion_from_obj(obj) -> ExpansionSignature:
    base = signature_from_obj(obj["base"])
    preds = []
    for entry in obj["patterns"]:
        pattern = structure_from_obj(entry["pattern"])
        names = entry["names"]
        if len(names) != entry["classes"]:
            raise InputError("class count does not match predicate names")
        preds.extend(ClassPredicate(name, pattern, i) for i, name in enumerate(names))
    return ExpansionSignature(base, tuple(preds), obj.get("order_symbol"))


def fragment_manifest(K: ClassFragment) -> dict:
    return {
        "format": FRAGMENT_FORMAT,
        "signature": signature_to_obj(K.full_signature),
        "expansion": _expansion_to_obj(K.signature) if isinstance(K.signature, ExpansionSignature) else None,
        "members": [f"members/{i:03d}.json" for i in range(len(K.members))],
    }


def write_fragment(K: ClassFragment, directory) -> Path:
    """Write ``manifest.json`` and member files; returns the manifest path."""
    directory = Path(directory)
    (directory / "members").mkdir(parents=True, exist_ok=True)
    manifest = fragment_manifest(K)
    for rel, M in zip(manifest["members"], K.members):
        (directory / rel).write_text(dumps(M))
    path = directory / "manifest.json"
    path.write_text(dump_json(manifest))
    return path


def read_fragment(path) -> ClassFragment:
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        manifest = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read fragment manifest {path}: {exc}") from None
    if manifest.get("format") != FRAGMENT_FORMAT:
        raise InputError(f"unsupported fragment format {manifest.get('format')!r}")
    full = signature_from_obj(manifest["signature"])
    if manifest.get("expansion") is not None:
        sig = _expansion_from_obj(manifest["expansion"])
        if sig.full != full:
            raise InputError("expansion block does not match the declared signature")
    else:
        sig = full
    members = [read_structure(path.parent / rel) for rel in manifest["members"]]
    return ClassFragment.from_structures(sig, members)
