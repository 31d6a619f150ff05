"""Command-line surface: file ingestion, dispatch, report emission.

Exit codes: 0 when every checked verdict is positive, 1 when some checked
property is false (the report carries the witness), 2 for invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import constructions, lattice as lattice_mod, measure as measure_mod
from .canon import sort_sets
from .errors import (
    DescriptorLost,
    FileFormatError,
    IllDefinedOperation,
    NotACongruence,
    NotALattice,
    QuotientTooSmall,
    StructSpaceError,
)
from .fileio import (
    emit_space_text,
    parse_congruence_file,
    parse_direct_system_file,
    parse_measure_file,
    parse_poset_file,
    parse_space_file,
    space_to_json,
)
from .report import Report, emit_report
from .space import build_from_collection, validate
from .topology import borel_atoms, connectivity_report

DEFAULT_FORMAT_ENV = "STRUCTSPACE_FORMAT"


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="structspace",
        description="Validate and analyse finite structured spaces.",
    )
    parser.add_argument(
        "--format", choices=("json", "text"), default=None,
        help=f"report format (default: ${DEFAULT_FORMAT_ENV} or text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check space files against every invariant")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("topology", help="emit the open sets of a space file")
    p.add_argument("file")

    p = sub.add_parser("connectivity", help="connected / hyperconnected / ultraconnected")
    p.add_argument("file")

    p = sub.add_parser("atoms", help="emit the Borel atoms of a space file")
    p.add_argument("file")

    p = sub.add_parser("product", help="product of two spaces")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--out", help="write the product as a space file")

    p = sub.add_parser("quotient", help="quotient a space by per-neighborhood congruences")
    p.add_argument("file")
    p.add_argument("--congruence", required=True, help="congruence file")
    p.add_argument("--out", help="write the quotient as a space file")

    p = sub.add_parser("dirlimit", help="validate a direct system and compute its limit")
    p.add_argument("file")
    p.add_argument("--out", help="write the limit as a one-neighborhood space file")

    p = sub.add_parser("measure", help="partitionability and measure partition reports")
    p.add_argument("file")
    p.add_argument("--weights", help="measure file (defaults to the space file's measure)")

    p = sub.add_parser("restrict", help="mu-union / mu-CR / mu-CDR for a subcollection")
    p.add_argument("file")
    p.add_argument("--collection", nargs="+", required=True, help="neighborhood names")
    p.add_argument("--weights", help="measure file (defaults to the space file's measure)")

    p = sub.add_parser("lattice", help="h-map, quotient poset, and lattice verdict")
    p.add_argument("file")
    p.add_argument("--dot", help="write the Hasse diagram as DOT")
    p.add_argument("--figure", help="render the Hasse diagram to an image file")

    p = sub.add_parser("converse", help="turn a lattice file into a structured space")
    p.add_argument("file")
    p.add_argument("--out", help="write the resulting space file")
    p.add_argument("--figure", help="render the input lattice to an image file")

    return parser


def _load_measure(args, space, embedded):
    if args.weights:
        return parse_measure_file(args.weights, space.space)
    if embedded is None:
        raise FileFormatError("$.measure", "no measure: give --weights or embed one")
    return embedded


def _cmd_validate(args, report):
    payload = {}
    for path in args.files:
        structured, _ = parse_space_file(path, validated=False)
        result = validate(structured)
        witness = result.problems[0] if result.problems else None
        report.add(f"valid:{path}", result.ok, witness=witness)
        payload[path] = {"problems": result.problems}
    report.payload = payload


def _cmd_topology(args, report):
    structured, _ = parse_space_file(args.file)
    report.add("is_topology", True)
    report.payload = {"opens": [sorted(o) for o in sort_sets(structured.space.opens)]}


def _cmd_connectivity(args, report):
    structured, _ = parse_space_file(args.file)
    conn = connectivity_report(structured.space)
    for name in ("connected", "hyperconnected", "ultraconnected"):
        report.add(name, getattr(conn, name), witness=conn.witnesses.get(name))
    report.payload = {"witnesses": conn.witnesses}


def _cmd_atoms(args, report):
    structured, _ = parse_space_file(args.file)
    report.add("atoms_partition_universe", True)
    report.payload = {"atoms": [sorted(a) for a in borel_atoms(structured.space)]}


def _cmd_product(args, report):
    left, _ = parse_space_file(args.left)
    right, _ = parse_space_file(args.right)
    out = constructions.product(left, right)
    report.add("validates", True)
    report.payload = {"space": space_to_json(out)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(emit_space_text(out))


def _cmd_quotient(args, report):
    structured, _ = parse_space_file(args.file)
    specs = parse_congruence_file(args.congruence)
    try:
        out = constructions.quotient(structured, specs)
    except NotACongruence as err:
        report.add("congruence", False, witness=(err.name,) + err.witness, reason=str(err))
        return
    except QuotientTooSmall as err:
        report.add("congruence", False, witness=(err.name,), reason=str(err))
        return
    except DescriptorLost as err:
        report.add("congruence", False, witness=(err.name,), reason=str(err))
        return
    report.add("congruence", True)
    report.add("validates", validate(out).ok)
    report.payload = {"space": space_to_json(out)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(emit_space_text(out))


def _cmd_dirlimit(args, report):
    system = parse_direct_system_file(args.file)
    system_report = constructions.validate_direct_system(system)
    witness = system_report.problems[0] if system_report.problems else None
    report.add("system_valid", system_report.ok, witness=witness)
    report.payload = {"problems": system_report.problems}
    if not system_report.ok:
        return
    try:
        limit, phi = constructions.direct_limit(system)
    except IllDefinedOperation as err:
        report.add("limit_well_defined", False, witness=err.witness, reason=str(err))
        return
    from .fileio import _structure_to_json

    report.add("limit_well_defined", True)
    report.payload = {
        "limit": _structure_to_json(limit),
        "carrier": sorted(limit.carrier),
        "canonical_maps": phi,
    }
    if args.out:
        wrapped = build_from_collection({"L": limit})
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(emit_space_text(wrapped))


def _cmd_measure(args, report):
    structured, embedded = parse_space_file(args.file)
    m = _load_measure(args, structured, embedded)

    part = measure_mod.is_partitionable(structured)
    report.add("partitionable", part.ok, witness=part.witness, reason=part.reason)

    witness = measure_mod.find_mu_la_partition(structured, m)
    if witness is None:
        report.add("mu_la_partitionable", False)
    else:
        report.add("mu_la_partitionable", True)
        report.payload["mu_la"] = {
            "collection": list(witness.collection),
            "remainder": sorted(witness.remainder),
        }

    union = measure_mod.is_mu_union(structured, m, structured.names())
    report.add("mu_union_of_family", union.ok, witness=union.witness, reason=union.reason)

    hom = measure_mod.homogeneity(structured, m)
    report.add("locally_mu_homogeneous", hom.locally, witness=hom.witnesses.get("locally"))
    report.add("globally_mu_homogeneous", hom.globally, witness=hom.witnesses.get("globally"))
    report.payload["weights"] = m.point_weights()


def _cmd_restrict(args, report):
    structured, embedded = parse_space_file(args.file)
    m = _load_measure(args, structured, embedded)
    result = measure_mod.classify_restriction(structured, m, args.collection)
    report.add("mu_union", result.mu_union.ok, witness=result.mu_union.witness,
               reason=result.mu_union.reason)
    report.add("mu_cr", result.mu_cr.ok, witness=result.mu_cr.witness,
               reason=result.mu_cr.reason)
    report.add("mu_cdr", result.mu_cdr.ok, witness=result.mu_cdr.witness,
               reason=result.mu_cdr.reason)
    report.payload = {"collection": sorted(args.collection)}


def _cmd_lattice(args, report):
    structured, _ = parse_space_file(args.file)
    h = lattice_mod.h_map(structured)
    surjective = lattice_mod.is_h_surjective(structured)
    report.add("h_surjective", surjective.ok, witness=surjective.witness,
               reason=surjective.reason)

    poset = lattice_mod.induced_poset(structured)
    verdict = lattice_mod.verify_lattice(poset)
    report.add("is_lattice", verdict.is_lattice, witness=verdict.counterexample)

    report.payload = {
        "h": {p: sorted(v) for p, v in h.mapping.items()},
        "classes": [
            {"label": c.label, "members": list(c.members), "hvalue": list(c.hvalue)}
            for c in poset.classes
        ],
        "order": [
            [poset.classes[i].label, poset.classes[j].label]
            for (i, j) in sorted(poset.leq)
        ],
    }
    if verdict.is_lattice:
        report.payload["join"] = {f"{a},{b}": v for (a, b), v in sorted(verdict.join.items())}
        report.payload["meet"] = {f"{a},{b}": v for (a, b), v in sorted(verdict.meet.items())}
        if verdict.join_union_ok is not None:
            report.add("join_hvalue_is_union", verdict.join_union_ok)

    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as f:
            f.write(lattice_mod.poset_to_dot(poset))
    if args.figure:
        from .viz import render_poset

        render_poset(poset, args.figure, title=os.path.basename(args.file))


def _cmd_converse(args, report):
    carrier, cover_pairs = parse_poset_file(args.file)
    try:
        result = lattice_mod.lattice_to_structured_space(carrier, cover_pairs)
    except NotALattice as err:
        report.add("input_is_lattice", False, witness=err.witness, reason=str(err))
        return
    report.add("input_is_lattice", True)
    report.add("output_validates", validate(result.space).ok)
    report.add("h_surjective", lattice_mod.is_h_surjective(result.space).ok)
    report.payload = {
        "space": space_to_json(result.space),
        "equivalence_classes": [sorted(b) for b in result.equivalence],
        "h": {p: sorted(v) for p, v in result.h.mapping.items()},
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(emit_space_text(result.space))
    if args.figure:
        from .lattice import _close_order
        from .viz import render_hasse

        ordered = sorted(set(carrier))
        leq = _close_order(ordered, cover_pairs)
        index = {x: i for i, x in enumerate(ordered)}
        render_hasse(
            ordered,
            {(index[a], index[b]) for (a, b) in leq},
            args.figure,
            title=os.path.basename(args.file),
        )


_HANDLERS = {
    "validate": _cmd_validate,
    "topology": _cmd_topology,
    "connectivity": _cmd_connectivity,
    "atoms": _cmd_atoms,
    "product": _cmd_product,
    "quotient": _cmd_quotient,
    "dirlimit": _cmd_dirlimit,
    "measure": _cmd_measure,
    "restrict": _cmd_restrict,
    "lattice": _cmd_lattice,
    "converse": _cmd_converse,
}


def run_command(argv):
    """Execute one CLI invocation; returns (report, exit code)."""
    args = make_parser().parse_args(argv)
    report = Report(command=" ".join(argv))
    try:
        _HANDLERS[args.command](args, report)
    except StructSpaceError as err:
        report.add("input", False, reason=str(err))
        report.payload.setdefault("error", str(err))
        return report, 2
    return report, (0 if report.all_ok else 1)


def resolve_format(argv_format):
    if argv_format:
        return argv_format
    env = os.environ.get(DEFAULT_FORMAT_ENV, "text")
    return env if env in ("json", "text") else "text"


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = make_parser().parse_args(argv)
    report, code = run_command(argv)
    sys.stdout.write(emit_report(report, resolve_format(args.format)))
    sys.exit(code)


if __name__ == "__main__":
    main()
