"""Hierarchical knowledge base of reusable causal mechanisms.

A knowledge base is a tree of named folders; leaves are mechanisms, each
holding one equation (embedded in `.sem` line syntax), per-variable
attributes, and a free-text description.  On disk the whole KB is a
single JSON document so it stays human-diffable.  Values are immutable:
kb_put returns a new tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .core import DEFAULT_ATTRIBUTES, Equation, VariableAttributes, Manipulativity, Observability
from .dsl import parse_equation_line, serialize_equation
from .errors import KbError, KbPathError, ParseError

KbPath = tuple[str, ...]


def parse_kb_path(path: str | Iterable[str]) -> KbPath:
    """Normalize 'a/b/c' or a sequence of names into a path tuple."""
    if isinstance(path, str):
        parts = tuple(p for p in path.split("/") if p)
    else:
        parts = tuple(path)
    for part in parts:
        if not part or "/" in part:
            raise KbError(f"invalid path component {part!r}")
    return parts


def format_kb_path(path: KbPath) -> str:
    return "/".join(path)


@dataclass(frozen=True)
class Mechanism:
    """A reusable equation template; the equation id doubles as its name."""

    equation: Equation
    attributes: Mapping[str, VariableAttributes] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        extra = set(self.attributes) - set(self.equation.participants)
        if extra:
            raise KbError(
                f"mechanism {self.name}: attributes for non-participants {sorted(extra)}"
            )
        # declaring pure defaults is the same as not declaring
        trimmed = {
            name: attrs for name, attrs in self.attributes.items() if attrs != DEFAULT_ATTRIBUTES
        }
        object.__setattr__(self, "attributes", trimmed)

    @property
    def name(self) -> str:
        return self.equation.id

    @property
    def participants(self) -> tuple[str, ...]:
        return self.equation.participants


@dataclass(frozen=True)
class Folder:
    folders: Mapping[str, "Folder"] = field(default_factory=dict)
    mechanisms: Mapping[str, Mechanism] = field(default_factory=dict)


@dataclass(frozen=True)
class KnowledgeBase:
    root: Folder = field(default_factory=Folder)


def empty_kb() -> KnowledgeBase:
    return KnowledgeBase()


def _find_folder(kb: KnowledgeBase, path: KbPath) -> Folder:
    node = kb.root
    for i, part in enumerate(path):
        child = node.folders.get(part)
        if child is None:
            raise KbPathError(f"unknown folder {format_kb_path(path[: i + 1])!r}")
        node = child
    return node


def kb_list(kb: KnowledgeBase, path: str | KbPath = ()) -> tuple[list[str], list[str]]:
    """Name-sorted (sub-folders, mechanisms) of the folder at `path`."""
    folder = _find_folder(kb, parse_kb_path(path))
    return sorted(folder.folders), sorted(folder.mechanisms)


def kb_get(kb: KnowledgeBase, path: str | KbPath) -> Mechanism:
    parts = parse_kb_path(path)
    if not parts:
        raise KbError("empty mechanism path")
    folder = _find_folder(kb, parts[:-1])
    mechanism = folder.mechanisms.get(parts[-1])
    if mechanism is None:
        raise KbPathError(f"unknown mechanism {format_kb_path(parts)!r}")
    return mechanism


def kb_search_by_variable(kb: KnowledgeBase, variable: str) -> list[KbPath]:
    """Paths of every mechanism whose participants include `variable`."""
    hits: list[KbPath] = []

    def walk(folder: Folder, prefix: KbPath) -> None:
        for name in sorted(folder.mechanisms):
            if variable in folder.mechanisms[name].participants:
                hits.append(prefix + (name,))
        for name in sorted(folder.folders):
            walk(folder.folders[name], prefix + (name,))

    walk(kb.root, ())
    return sorted(hits)


def _put(folder: Folder, path: KbPath, mechanism: Mechanism) -> Folder:
    if not path:
        if mechanism.name in folder.mechanisms or mechanism.name in folder.folders:
            raise KbError(f"name collision on {mechanism.name!r}")
        mechanisms = dict(folder.mechanisms)
        mechanisms[mechanism.name] = mechanism
        return replace(folder, mechanisms=mechanisms)
    head, rest = path[0], path[1:]
    if head in folder.mechanisms:
        raise KbError(f"{head!r} is a mechanism, not a folder")
    child = folder.folders.get(head, Folder())
    folders = dict(folder.folders)
    folders[head] = _put(child, rest, mechanism)
    return replace(folder, folders=folders)


def kb_put(kb: KnowledgeBase, path: str | KbPath, mechanism: Mechanism) -> KnowledgeBase:
    """Store a mechanism under the folder at `path`, creating folders as needed."""
    return KnowledgeBase(root=_put(kb.root, parse_kb_path(path), mechanism))


_MANIPULATIVITY = {m.value: m for m in Manipulativity}
_OBSERVABILITY = {o.value: o for o in Observability}


def _attributes_to_json(attrs: VariableAttributes) -> dict:
    out: dict = {}
    if attrs.manipulativity is not Manipulativity.MANIPULATABLE:
        out["manipulativity"] = attrs.manipulativity.value
    if attrs.observability is not Observability.OBSERVABLE:
        out["observability"] = attrs.observability.value
    if attrs.manipulation_cost is not None:
        out["manipulation_cost"] = attrs.manipulation_cost
    if attrs.observation_cost is not None:
        out["observation_cost"] = attrs.observation_cost
    return out


def _attributes_from_json(data: dict, where: str) -> VariableAttributes:
    if not isinstance(data, dict):
        raise KbError(f"{where}: attribute entry must be an object")
    fields: dict = {}
    for key, value in data.items():
        if key == "manipulativity":
            if value not in _MANIPULATIVITY:
                raise KbError(f"{where}: invalid manipulativity {value!r}")
            fields[key] = _MANIPULATIVITY[value]
        elif key == "observability":
            if value not in _OBSERVABILITY:
                raise KbError(f"{where}: invalid observability {value!r}")
            fields[key] = _OBSERVABILITY[value]
        elif key in ("manipulation_cost", "observation_cost"):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise KbError(f"{where}: {key} must be a number")
            fields[key] = float(value)
        else:
            raise KbError(f"{where}: unknown attribute field {key!r}")
    return VariableAttributes(**fields)


def _mechanism_to_json(mechanism: Mechanism) -> dict:
    return {
        "name": mechanism.name,
        "equation": serialize_equation(mechanism.equation),
        "description": mechanism.description,
        "attributes": {
            name: _attributes_to_json(attrs)
            for name, attrs in sorted(mechanism.attributes.items())
            if _attributes_to_json(attrs)
        },
    }


def _mechanism_from_json(data: dict, where: str) -> Mechanism:
    if not isinstance(data, dict):
        raise KbError(f"{where}: mechanism entry must be an object")
    name = data.get("name")
    source = data.get("equation")
    if not isinstance(name, str) or not isinstance(source, str):
        raise KbError(f"{where}: mechanism needs string 'name' and 'equation'")
    try:
        equation = parse_equation_line(source)
    except ParseError as exc:
        raise KbError(f"{where}: bad equation for {name!r}: {exc}") from exc
    if equation.id != name:
        raise KbError(
            f"{where}: mechanism name {name!r} does not match equation id {equation.id!r}"
        )
    attributes = {
        var: _attributes_from_json(entry, f"{where}/{name}")
        for var, entry in (data.get("attributes") or {}).items()
    }
    description = data.get("description", "")
    if not isinstance(description, str):
        raise KbError(f"{where}: description must be a string")
    return Mechanism(equation=equation, attributes=attributes, description=description)


def _folder_to_json(folder: Folder) -> dict:
    return {
        "folders": {
            name: _folder_to_json(folder.folders[name]) for name in sorted(folder.folders)
        },
        "mechanisms": [
            _mechanism_to_json(folder.mechanisms[name]) for name in sorted(folder.mechanisms)
        ],
    }


def _folder_from_json(data: dict, where: str) -> Folder:
    if not isinstance(data, dict):
        raise KbError(f"{where}: folder must be an object")
    unknown = set(data) - {"folders", "mechanisms"}
    if unknown:
        raise KbError(f"{where}: unknown folder fields {sorted(unknown)}")
    folders_data = data.get("folders") or {}
    if not isinstance(folders_data, dict):
        raise KbError(f"{where}: 'folders' must be an object")
    mechanisms_data = data.get("mechanisms") or []
    if not isinstance(mechanisms_data, list):
        raise KbError(f"{where}: 'mechanisms' must be a list")
    folders = {
        name: _folder_from_json(sub, f"{where}/{name}") for name, sub in folders_data.items()
    }
    mechanisms: dict[str, Mechanism] = {}
    for entry in mechanisms_data:
        mechanism = _mechanism_from_json(entry, where)
        if mechanism.name in mechanisms:
            raise KbError(f"{where}: duplicate mechanism name {mechanism.name!r}")
        mechanisms[mechanism.name] = mechanism
    collisions = set(folders) & set(mechanisms)
    if collisions:
        raise KbError(f"{where}: names used for both folder and mechanism: {sorted(collisions)}")
    return Folder(folders=folders, mechanisms=mechanisms)


def kb_save(kb: KnowledgeBase) -> bytes:
    document = _folder_to_json(kb.root)
    return (json.dumps(document, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def kb_load(data: bytes | str) -> KnowledgeBase:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise KbError(f"invalid JSON: {exc}") from exc
    return KnowledgeBase(root=_folder_from_json(document, "<root>"))
