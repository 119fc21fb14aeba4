"""Loader for ``coind-lab/1`` spec files: named groups, filtrations, morphisms, actions and topologies."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from .action import (
    GroupAction,
    SCFAction,
    conjugation_action,
    trivial_action,
    validate_group_action,
    validate_scf_action,
)
from .catalog import get_group
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    BudgetExceeded,
    ResolutionError,
    SpecFileError,
    SpecParseError,
    SpecValidationError,
    ValidationError,
)
from .filtration import Filtration, constant_filtration, lower_central_series, stretched_lcs, validate_scf
from .groups import FiniteGroup, Homomorphism, Subgroup, generate_subgroup, validate_group
from .table_loader import read_cayley_csv
from .topology import (
    FiniteTopology,
    TopGroup,
    coset_topology,
    discrete,
    indiscrete,
    validate_topgroup,
    validate_topology,
)

logger = logging.getLogger(__name__)

SPEC_VERSION = "coind-lab/1"
SECTIONS = ("groups", "filtrations", "morphisms", "actions", "points", "topologies", "topgroups")

BUNDLED_SPEC = os.path.join(os.path.dirname(__file__), "data", "examples.json")


@dataclass
class ActionEntry:
    action: GroupAction
    actor_f: Optional[Filtration] = None
    target_f: Optional[Filtration] = None

    def filtered(self) -> SCFAction:
        """The filtered action; certified when the bracket condition holds."""
        if self.actor_f is None or self.target_f is None:
            raise SpecFileError("action has no filtrations attached")
        return validate_scf_action(self.action, self.actor_f, self.target_f)


@dataclass
class MorphismEntry:
    hom: Homomorphism
    source_f: Optional[Filtration] = None
    target_f: Optional[Filtration] = None


@dataclass
class SpecFile:
    path: str
    groups: Dict[str, FiniteGroup] = field(default_factory=dict)
    filtrations: Dict[str, Filtration] = field(default_factory=dict)
    morphisms: Dict[str, MorphismEntry] = field(default_factory=dict)
    actions: Dict[str, ActionEntry] = field(default_factory=dict)
    points: Dict[str, SCFAction] = field(default_factory=dict)
    topologies: Dict[str, FiniteTopology] = field(default_factory=dict)
    topgroups: Dict[str, TopGroup] = field(default_factory=dict)

    def lookup(self, section: str, name: str, owner: str = "command line") -> Any:
        table = getattr(self, section)
        if name not in table:
            raise ResolutionError(name, section, owner)
        return table[name]

    def summary(self) -> Dict[str, int]:
        return {s: len(getattr(self, s)) for s in SECTIONS}


# -----------------------------
# Entry points
# -----------------------------


def parse_spec(path: str, budget: Budget = DEFAULT_BUDGET, encoding: str = "utf-8") -> SpecFile:
    try:
        with open(path, "r", encoding=encoding) as fh:
            text = fh.read()
    except OSError as e:
        raise SpecFileError(f"{path}: cannot read spec file ({e.strerror or e})") from e
    except UnicodeDecodeError as e:
        raise SpecFileError(f"{path}: not {encoding} text") from e
    return parse_spec_text(text, base_dir=os.path.dirname(os.path.abspath(path)), path=path, budget=budget)


def parse_spec_text(text: str, base_dir: str = ".", path: str = "<string>", budget: Budget = DEFAULT_BUDGET) -> SpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"{path}: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(doc, dict):
        raise SpecParseError(f"{path}: top level must be an object", line=1, column=1)
    version = doc.get("version")
    if version != SPEC_VERSION:
        raise SpecFileError(f"{path}: unsupported version {version!r}, expected '{SPEC_VERSION}'")
    unknown = set(doc) - set(SECTIONS) - {"version", "description"}
    if unknown:
        raise SpecFileError(f"{path}: unknown sections {sorted(unknown)}")

    spec = SpecFile(path=path)
    _load_section(doc, "groups", lambda name, rec: _build_group(spec, name, rec, base_dir), spec.groups)
    _load_section(doc, "filtrations", lambda name, rec: _build_filtration(spec, name, rec), spec.filtrations)
    _load_section(doc, "morphisms", lambda name, rec: _build_morphism(spec, name, rec), spec.morphisms)
    _load_section(doc, "actions", lambda name, rec: _build_action(spec, name, rec), spec.actions)
    _load_section(doc, "points", lambda name, rec: _build_point(spec, name, rec), spec.points)
    _load_section(doc, "topologies", lambda name, rec: _build_topology(spec, name, rec, budget), spec.topologies)
    _load_section(doc, "topgroups", lambda name, rec: _build_topgroup(spec, name, rec), spec.topgroups)
    logger.info("Loaded spec %s: %s", path, spec.summary())
    return spec


def _load_section(
    doc: Mapping[str, Any], section: str, build: Callable[[str, Mapping[str, Any]], Any], out: Dict[str, Any]
) -> None:
    records = doc.get(section, {})
    if not isinstance(records, dict):
        raise SpecFileError(f"section '{section}' must be an object keyed by name")
    for name, rec in records.items():
        if not isinstance(rec, dict):
            raise SpecFileError(f"{section}.{name}: record must be an object")
        try:
            out[name] = build(name, rec)
        except (ValidationError, BudgetExceeded) as e:
            raise SpecValidationError(f"{section}.{name}", e) from e


def _field(rec: Mapping[str, Any], key: str, owner: str) -> Any:
    if key not in rec:
        raise SpecFileError(f"{owner}: missing field '{key}'")
    return rec[key]


def _ref(spec: SpecFile, section: str, rec: Mapping[str, Any], key: str, owner: str) -> Any:
    return spec.lookup(section, _name(_field(rec, key, owner), key, owner), owner)


def _optional_ref(spec: SpecFile, section: str, rec: Mapping[str, Any], key: str, owner: str) -> Any:
    if rec.get(key) is None:
        return None
    return spec.lookup(section, _name(rec[key], key, owner), owner)


def _name(value: Any, key: str, owner: str) -> str:
    if not isinstance(value, str):
        raise SpecFileError(f"{owner}: '{key}' must be a string, got {value!r}")
    return value


def _indices(value: Any, key: str, owner: str, depth: int = 1) -> Any:
    """Nested lists of element indices, ``depth`` lists deep."""
    if depth == 0:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SpecFileError(f"{owner}: '{key}' entries must be integer indices, got {value!r}")
        return value
    if not isinstance(value, list):
        raise SpecFileError(f"{owner}: '{key}' must be a list, got {value!r}")
    return [_indices(v, key, owner, depth - 1) for v in value]


def _count(rec: Mapping[str, Any], key: str, owner: str) -> int:
    value = _field(rec, key, owner)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SpecFileError(f"{owner}: '{key}' must be a positive integer, got {value!r}")
    return value


# -----------------------------
# Builders
# -----------------------------


def _build_group(spec: SpecFile, name: str, rec: Mapping[str, Any], base_dir: str) -> FiniteGroup:
    owner = f"groups.{name}"
    if "catalog" in rec:
        try:
            return get_group(str(rec["catalog"]))
        except (KeyError, ValueError) as e:
            raise SpecFileError(f"{owner}: {e}") from e
    if "csv" in rec:
        path = _name(rec["csv"], "csv", owner)
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        try:
            return read_cayley_csv(path, label=name)
        except OSError as e:
            raise SpecFileError(f"{owner}: cannot read {path} ({e.strerror or e})") from e
    names = rec.get("names")
    if names is not None and not (isinstance(names, list) and all(isinstance(n, str) for n in names)):
        raise SpecFileError(f"{owner}: 'names' must be a list of strings")
    return validate_group(
        _indices(_field(rec, "mul", owner), "mul", owner, depth=2),
        names=names,
        identity=None if rec.get("identity") is None else _indices(rec["identity"], "identity", owner, depth=0),
        order=None if rec.get("order") is None else _count(rec, "order", owner),
        label=name,
    )


def _build_filtration(spec: SpecFile, name: str, rec: Mapping[str, Any]) -> Filtration:
    owner = f"filtrations.{name}"
    G: FiniteGroup = _ref(spec, "groups", rec, "group", owner)
    if rec.get("lcs"):
        return lower_central_series(G)
    if "stretch" in rec:
        opts = rec["stretch"] or {}
        if not isinstance(opts, dict):
            raise SpecFileError(f"{owner}: 'stretch' must be an object")
        step = _indices(opts.get("step", 1), "stretch.step", owner, depth=0)
        shift = _indices(opts.get("shift", 0), "stretch.shift", owner, depth=0)
        return stretched_lcs(G, step=step, shift=shift)
    if rec.get("constant"):
        return constant_filtration(G.full)
    levels = _indices(_field(rec, "levels", owner), "levels", owner, depth=2)
    if rec.get("generate"):
        return Filtration(G, tuple(generate_subgroup(G, lv) for lv in levels))
    return Filtration.from_members(G, levels)


def _build_morphism(spec: SpecFile, name: str, rec: Mapping[str, Any]) -> MorphismEntry:
    owner = f"morphisms.{name}"
    source: FiniteGroup = _ref(spec, "groups", rec, "source", owner)
    target: FiniteGroup = _ref(spec, "groups", rec, "target", owner)
    kind = rec.get("kind", "table")
    if kind == "identity":
        if source != target:
            raise SpecFileError(f"{owner}: identity needs source = target")
        hom = Homomorphism.identity(source)
    elif kind == "trivial":
        hom = Homomorphism.trivial(source, target)
    elif kind == "table":
        table = _indices(_field(rec, "map", owner), "map", owner)
        hom = Homomorphism(source, target, np.asarray(table, dtype=np.int64))
    else:
        raise SpecFileError(f"{owner}: unknown morphism kind '{kind}'")
    return MorphismEntry(
        hom=hom,
        source_f=_optional_ref(spec, "filtrations", rec, "source_filtration", owner),
        target_f=_optional_ref(spec, "filtrations", rec, "target_filtration", owner),
    )


def _build_action(spec: SpecFile, name: str, rec: Mapping[str, Any]) -> ActionEntry:
    owner = f"actions.{name}"
    actor: FiniteGroup = _ref(spec, "groups", rec, "actor", owner)
    target: FiniteGroup = _ref(spec, "groups", rec, "target", owner)
    kind = rec.get("kind", "table")
    if kind == "table":
        table = _indices(_field(rec, "table", owner), "table", owner, depth=2)
        action = validate_group_action(table, actor, target)
    elif kind == "trivial":
        action = trivial_action(actor, target)
    elif kind == "conjugation":
        if actor != target:
            raise SpecFileError(f"{owner}: conjugation needs actor = target")
        action = conjugation_action(target)
    elif kind == "inversion":
        if actor.order != 2:
            raise SpecFileError(f"{owner}: inversion is an action of a group of order 2")
        rows = np.empty((2, target.order), dtype=np.int64)
        rows[actor.identity] = np.arange(target.order)
        rows[1 - actor.identity] = target.inv
        action = validate_group_action(rows, actor, target)
    else:
        raise SpecFileError(f"{owner}: unknown action kind '{kind}'")
    actor_f = _optional_ref(spec, "filtrations", rec, "actor_filtration", owner)
    target_f = _optional_ref(spec, "filtrations", rec, "target_filtration", owner)
    if actor_f is not None:
        validate_scf(actor_f)
    if target_f is not None:
        validate_scf(target_f)
    return ActionEntry(action=action, actor_f=actor_f, target_f=target_f)


def _build_point(spec: SpecFile, name: str, rec: Mapping[str, Any]) -> SCFAction:
    owner = f"points.{name}"
    entry: ActionEntry = _ref(spec, "actions", rec, "action", owner)
    if entry.actor_f is None or entry.target_f is None:
        raise SpecFileError(f"{owner}: a point needs an action with both filtrations")
    return entry.filtered()


def _build_topology(spec: SpecFile, name: str, rec: Mapping[str, Any], budget: Budget) -> FiniteTopology:
    owner = f"topologies.{name}"
    if "discrete" in rec:
        return discrete(_count(rec, "discrete", owner))
    if "indiscrete" in rec:
        return indiscrete(_count(rec, "indiscrete", owner))
    if "cosets_of" in rec:
        G: FiniteGroup = _ref(spec, "groups", rec, "group", owner)
        return coset_topology(G, Subgroup.from_members(G, _indices(rec["cosets_of"], "cosets_of", owner)))
    opens = _indices(_field(rec, "opens", owner), "opens", owner, depth=2)
    return validate_topology(opens, _count(rec, "size", owner), budget)


def _build_topgroup(spec: SpecFile, name: str, rec: Mapping[str, Any]) -> TopGroup:
    owner = f"topgroups.{name}"
    G: FiniteGroup = _ref(spec, "groups", rec, "group", owner)
    tau: FiniteTopology = _ref(spec, "topologies", rec, "topology", owner)
    return validate_topgroup(G, tau)


def split_entry(entry: MorphismEntry, owner: str) -> Tuple[Homomorphism, Filtration, Filtration]:
    if entry.source_f is None or entry.target_f is None:
        raise SpecFileError(f"{owner}: morphism needs source_filtration and target_filtration")
    return entry.hom, entry.source_f, entry.target_f
