"""JSON file formats: spaces, measures, congruences, direct systems, posets.

Parsing reports the JSON path of the first offending node; emission is
canonical (sorted keys and members), so emitting a parsed canonical file
reproduces it exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import FiniteStructure, NonAlgTag, OperationTable, PropertySpec, make_structure
from .canon import sort_sets
from .constructions import CongruenceSpec, DirectSystem
from .errors import FileFormatError, StructSpaceError, ValidationFailure
from .measure import AtomMeasure
from .space import StructuredSpace, validate
from .topology import FiniteSpace, generate_topology


def _expect(cond, path, detail):
    if not cond:
        raise FileFormatError(path, detail)


def _expect_list(value, path):
    _expect(isinstance(value, list), path, f"expected a list, got {type(value).__name__}")
    return value


def _expect_dict(value, path):
    _expect(isinstance(value, dict), path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_str(value, path):
    _expect(isinstance(value, str) and value != "", path, "expected a nonempty string")
    return value


def _load_doc(text, path="$"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise FileFormatError(path, f"invalid JSON: {err}") from None


def _parse_structure(obj, path, name_hint="structure") -> FiniteStructure:
    obj = _expect_dict(obj, path)
    points = _expect_list(obj.get("points"), f"{path}.points")
    carrier = [_expect_str(p, f"{path}.points[{i}]") for i, p in enumerate(points)]
    _expect(len(set(carrier)) == len(carrier), f"{path}.points", "duplicate points")

    tables = []
    for i, op in enumerate(_expect_list(obj.get("operations", []), f"{path}.operations")):
        op_path = f"{path}.operations[{i}]"
        op = _expect_dict(op, op_path)
        op_name = _expect_str(op.get("name"), f"{op_path}.name")
        entries = {}
        for j, entry in enumerate(_expect_list(op.get("entries", []), f"{op_path}.entries")):
            entry_path = f"{op_path}.entries[{j}]"
            entry = _expect_list(entry, entry_path)
            _expect(len(entry) == 3, entry_path, "entry must be [a, b, a*b]")
            a, b, c = (_expect_str(x, entry_path) for x in entry)
            for x in (a, b, c):
                _expect(x in carrier, entry_path, f"point {x!r} is not in the carrier")
            _expect((a, b) not in entries, entry_path, f"duplicate entry for ({a},{b})")
            entries[(a, b)] = c
        tables.append(OperationTable.from_mapping(op_name, carrier, entries))

    properties = []
    for i, prop in enumerate(_expect_list(obj.get("properties", []), f"{path}.properties")):
        prop_path = f"{path}.properties[{i}]"
        prop = _expect_dict(prop, prop_path)
        kind = _expect_str(prop.get("kind"), f"{prop_path}.kind")
        op_name = _expect_str(prop.get("op"), f"{prop_path}.op")
        properties.append((kind, op_name))

    tags = []
    for i, tag in enumerate(_expect_list(obj.get("nonalg", []), f"{path}.nonalg")):
        tag_path = f"{path}.nonalg[{i}]"
        tag = _expect_dict(tag, tag_path)
        label = _expect_str(tag.get("label"), f"{tag_path}.label")
        payload = tag.get("payload", "")
        _expect(isinstance(payload, str), f"{tag_path}.payload", "payload must be a string")
        tags.append(NonAlgTag(label, payload))

    try:
        return make_structure(
            carrier, tables, [PropertySpec(k, o) for k, o in properties], tags
        )
    except StructSpaceError as err:
        raise FileFormatError(path, f"{name_hint}: {err}") from None


def _structure_to_json(structure: FiniteStructure) -> dict:
    return {
        "points": sorted(structure.carrier),
        "operations": [
            {"name": t.name, "entries": [list(e) for e in t.entries]}
            for t in structure.tables
        ],
        "properties": [
            {"kind": p.kind, "op": p.op}
            for p in sorted(structure.descriptor.properties, key=lambda p: (p.op, p.kind))
        ],
        "nonalg": [
            {"label": t.label, "payload": t.payload} for t in structure.descriptor.nonalg
        ],
    }


def parse_space_text(text, validated=True):
    """Space file -> (StructuredSpace, AtomMeasure or None).

    With `validated`, a space that parses but breaks a structured-space
    invariant raises ValidationFailure carrying the full report.
    """
    doc = _expect_dict(_load_doc(text), "$")
    points = _expect_list(doc.get("points"), "$.points")
    universe = [_expect_str(p, f"$.points[{i}]") for i, p in enumerate(points)]
    _expect(len(set(universe)) == len(universe), "$.points", "duplicate points")
    _expect(universe, "$.points", "a space needs at least one point")
    universe = frozenset(universe)

    neighborhoods = {}
    for i, nb in enumerate(_expect_list(doc.get("neighborhoods"), "$.neighborhoods")):
        nb_path = f"$.neighborhoods[{i}]"
        nb = _expect_dict(nb, nb_path)
        name = _expect_str(nb.get("name"), f"{nb_path}.name")
        _expect(name not in neighborhoods, f"{nb_path}.name", f"duplicate neighborhood {name!r}")
        neighborhoods[name] = _parse_structure(nb, nb_path, name_hint=name)

    topo_spec = _expect_dict(doc.get("topology", {"mode": "generate"}), "$.topology")
    mode = topo_spec.get("mode", "generate")
    if mode == "generate":
        try:
            space = generate_topology(universe, [st.carrier for st in neighborhoods.values()])
        except StructSpaceError as err:
            raise FileFormatError("$.topology", str(err)) from None
    elif mode == "explicit":
        opens = _expect_list(topo_spec.get("opens"), "$.topology.opens")
        family = []
        for i, o in enumerate(opens):
            family.append(frozenset(
                _expect_str(p, f"$.topology.opens[{i}][{j}]")
                for j, p in enumerate(_expect_list(o, f"$.topology.opens[{i}]"))
            ))
        try:
            space = FiniteSpace(universe, frozenset(family))
        except StructSpaceError as err:
            raise FileFormatError("$.topology.opens", str(err)) from None
    else:
        raise FileFormatError("$.topology.mode", f"unknown mode {mode!r}")

    assignment = {}
    for point, name in _expect_dict(doc.get("assignment"), "$.assignment").items():
        _expect(point in universe, f"$.assignment.{point}", "point is not in the universe")
        _expect_str(name, f"$.assignment.{point}")
        assignment[point] = name

    structured = StructuredSpace(space, neighborhoods, assignment)
    if validated:
        report = validate(structured)
        if not report.ok:
            raise ValidationFailure(report)

    measure = None
    if "measure" in doc:
        weights = _expect_dict(doc["measure"], "$.measure")
        try:
            measure = AtomMeasure.from_point_weights(space, weights)
        except (StructSpaceError, ValueError) as err:
            raise FileFormatError("$.measure", str(err)) from None
    return structured, measure


def parse_space_file(path, validated=True):
    return parse_space_text(Path(path).read_text(encoding="utf-8"), validated=validated)


def space_to_json(s: StructuredSpace, measure: AtomMeasure | None = None) -> dict:
    doc = {
        "points": sorted(s.universe),
        "topology": {
            "mode": "explicit",
            "opens": [sorted(o) for o in sort_sets(s.space.opens)],
        },
        "neighborhoods": [
            {"name": name, **_structure_to_json(s.neighborhoods[name])}
            for name in s.names()
        ],
        "assignment": {p: s.assignment[p] for p in sorted(s.assignment)},
    }
    if measure is not None:
        doc["measure"] = measure.point_weights()
    return doc


def emit_space_text(s: StructuredSpace, measure: AtomMeasure | None = None) -> str:
    return json.dumps(space_to_json(s, measure), indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"


def parse_measure_text(text, space: FiniteSpace) -> AtomMeasure:
    """Measure file: an object mapping atom-representative points to 'p/q' or 'inf'."""
    doc = _expect_dict(_load_doc(text), "$")
    try:
        return AtomMeasure.from_point_weights(space, doc)
    except (StructSpaceError, ValueError) as err:
        raise FileFormatError("$", str(err)) from None


def parse_measure_file(path, space: FiniteSpace) -> AtomMeasure:
    return parse_measure_text(Path(path).read_text(encoding="utf-8"), space)


def parse_congruence_text(text) -> dict:
    """Congruence file: {neighborhood name: [block, ...]} with blocks as point lists."""
    doc = _expect_dict(_load_doc(text), "$")
    out = {}
    for name, blocks in doc.items():
        blocks = _expect_list(blocks, f"$.{name}")
        parsed = []
        for i, block in enumerate(blocks):
            block = _expect_list(block, f"$.{name}[{i}]")
            parsed.append(frozenset(
                _expect_str(p, f"$.{name}[{i}][{j}]") for j, p in enumerate(block)
            ))
        out[name] = CongruenceSpec(name, tuple(parsed))
    return out


def parse_congruence_file(path) -> dict:
    return parse_congruence_text(Path(path).read_text(encoding="utf-8"))


def parse_direct_system_text(text) -> DirectSystem:
    """Direct system file: indices, order pairs, per-index algebras, and maps
    keyed "i->j"."""
    doc = _expect_dict(_load_doc(text), "$")
    indices = [
        _expect_str(i, f"$.indices[{k}]")
        for k, i in enumerate(_expect_list(doc.get("indices"), "$.indices"))
    ]
    order = []
    for k, pair in enumerate(_expect_list(doc.get("order", []), "$.order")):
        pair = _expect_list(pair, f"$.order[{k}]")
        _expect(len(pair) == 2, f"$.order[{k}]", "order entries are [i, j] pairs")
        i, j = (_expect_str(x, f"$.order[{k}]") for x in pair)
        for x in (i, j):
            _expect(x in indices, f"$.order[{k}]", f"unknown index {x!r}")
        order.append((i, j))

    algebras = {}
    for i, obj in _expect_dict(doc.get("algebras"), "$.algebras").items():
        _expect(i in indices, f"$.algebras.{i}", f"unknown index {i!r}")
        algebras[i] = _parse_structure(obj, f"$.algebras.{i}", name_hint=i)
    for i in indices:
        _expect(i in algebras, "$.algebras", f"index {i!r} has no algebra")

    maps = {}
    for key, mapping in _expect_dict(doc.get("maps", {}), "$.maps").items():
        _expect("->" in key, f"$.maps.{key}", "map keys look like 'i->j'")
        i, j = key.split("->", 1)
        for x in (i, j):
            _expect(x in indices, f"$.maps.{key}", f"unknown index {x!r}")
        mapping = _expect_dict(mapping, f"$.maps.{key}")
        maps[(i, j)] = {
            _expect_str(a, f"$.maps.{key}"): _expect_str(b, f"$.maps.{key}.{a}")
            for a, b in mapping.items()
        }
    return DirectSystem(tuple(indices), frozenset(order), algebras, maps)


def parse_direct_system_file(path) -> DirectSystem:
    return parse_direct_system_text(Path(path).read_text(encoding="utf-8"))


def parse_poset_text(text):
    """Poset file: carrier plus covering pairs [lower, upper]."""
    doc = _expect_dict(_load_doc(text), "$")
    carrier = [
        _expect_str(p, f"$.carrier[{i}]")
        for i, p in enumerate(_expect_list(doc.get("carrier"), "$.carrier"))
    ]
    covers = []
    for i, pair in enumerate(_expect_list(doc.get("covers", []), "$.covers")):
        pair = _expect_list(pair, f"$.covers[{i}]")
        _expect(len(pair) == 2, f"$.covers[{i}]", "cover entries are [lower, upper] pairs")
        a, b = (_expect_str(x, f"$.covers[{i}]") for x in pair)
        for x in (a, b):
            _expect(x in carrier, f"$.covers[{i}]", f"unknown element {x!r}")
        covers.append((a, b))
    return carrier, covers


def parse_poset_file(path):
    return parse_poset_text(Path(path).read_text(encoding="utf-8"))

