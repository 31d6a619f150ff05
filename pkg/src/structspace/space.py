"""Structured spaces: a finite space, a named family of structures on point
subsets, and a fixed assignment of one such neighborhood to every point."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import StructureDescriptor, verify_descriptor
from .errors import (
    EmptyCollection,
    EmptySubfamily,
    PointOutsideUniverse,
    TooSmall,
    UnknownNeighborhood,
    UnverifiedStructure,
)
from .topology import FiniteSpace, generate_topology, is_neighborhood


@dataclass
class StructuredSpace:
    space: FiniteSpace
    neighborhoods: dict  # name -> FiniteStructure
    assignment: dict  # point -> neighborhood name

    @property
    def universe(self):
        return self.space.universe

    def names(self):
        return sorted(self.neighborhoods)

    def carrier(self, name):
        try:
            return self.neighborhoods[name].carrier
        except KeyError:
            raise UnknownNeighborhood(name) from None


@dataclass
class ValidationReport:
    problems: list

    @property
    def ok(self) -> bool:
        return not self.problems


def _problem(check, subject, detail, witness=None):
    entry = {"check": check, "subject": subject, "detail": detail}
    if witness is not None:
        entry["witness"] = witness
    return entry


def validate(s: StructuredSpace) -> ValidationReport:
    """Itemized check of every structured-space invariant.

    Failures name the point, neighborhood, or property involved and carry a
    witness where one exists; an empty problem list means the space is valid.
    """
    problems = []
    universe = s.space.universe

    for name in s.names():
        structure = s.neighborhoods[name]
        outside = structure.carrier - universe
        if outside:
            problems.append(_problem(
                "carrier_inside_universe", name,
                f"carrier points {sorted(outside)} are outside the universe",
                witness=tuple(sorted(outside)),
            ))
        if len(structure.carrier) < 2:
            problems.append(_problem(
                "carrier_size", name,
                "carrier has a single point; one-point fixed neighborhoods make a "
                "1-generalised space, which this tool rejects",
            ))

    for p in sorted(universe):
        name = s.assignment.get(p)
        if name is None:
            problems.append(_problem("assignment_total", p, "point has no assigned neighborhood"))
            continue
        if name not in s.neighborhoods:
            problems.append(_problem(
                "assignment_resolves", p, f"assigned neighborhood {name!r} does not exist"))
            continue
        carrier = s.neighborhoods[name].carrier
        if p not in carrier:
            problems.append(_problem(
                "point_in_carrier", p, f"point is not inside its assigned carrier {name!r}"))
            continue
        if carrier <= universe and not is_neighborhood(s.space, carrier, p):
            problems.append(_problem(
                "neighborhood_condition", p,
                f"carrier {name!r} contains no open set around the point",
            ))

    for p in sorted(s.assignment):
        if p not in universe:
            problems.append(_problem(
                "assignment_domain", p, "assignment mentions a point outside the universe"))

    for name in s.names():
        report = verify_descriptor(s.neighborhoods[name])
        for spec, residual in report.failures():
            problems.append(_problem(
                "declared_property", name,
                f"{spec.kind} on {spec.op!r} fails: {residual.note}",
                witness=residual.witness,
            ))

    covered = set()
    for name in s.names():
        covered |= s.neighborhoods[name].carrier
    uncovered = universe - covered
    if uncovered:
        problems.append(_problem(
            "coverage", None,
            f"points {sorted(uncovered)} lie in no neighborhood carrier",
            witness=tuple(sorted(uncovered)),
        ))

    return ValidationReport(problems)


def structure_map(s: StructuredSpace, name) -> StructureDescriptor:
    """Descriptor of a named neighborhood."""
    try:
        return s.neighborhoods[name].descriptor
    except KeyError:
        raise UnknownNeighborhood(name) from None


def modified_structure_map(s: StructuredSpace, point) -> StructureDescriptor:
    """Descriptor seen from a point: the descriptor of its assigned neighborhood."""
    if point not in s.space.universe:
        raise PointOutsideUniverse(point)
    return structure_map(s, s.assignment[point])


@dataclass
class DescriptorCatalog:
    """Distinct descriptors in use, each with the neighborhoods carrying it."""

    entries: tuple  # of (StructureDescriptor, tuple of names)


def descriptor_catalog(s: StructuredSpace) -> DescriptorCatalog:
    groups = []
    for name in s.names():
        d = s.neighborhoods[name].descriptor
        for i, (existing, names) in enumerate(groups):
            if existing == d:
                groups[i] = (existing, names + (name,))
                break
        else:
            groups.append((d, (name,)))
    return DescriptorCatalog(tuple(groups))


def _as_named(structures) -> dict:
    if isinstance(structures, dict):
        return dict(structures)
    return {f"U{i}": st for i, st in enumerate(structures)}


def build_from_collection(structures, hints=None) -> StructuredSpace:
    """Assemble a structured space from verified structures.

    The universe is the union of the carriers, the topology is generated with
    the carriers as a subbasis (so each carrier is open, hence a neighborhood
    of each of its points), and every point is assigned the first carrier in
    name order that contains it unless a hint overrides.
    """
    named = _as_named(structures)
    if not named:
        raise EmptyCollection("no structures given")

    for name in sorted(named):
        structure = named[name]
        if len(structure.carrier) < 2:
            raise TooSmall(f"carrier of {name!r} has fewer than two points")
        report = verify_descriptor(structure)
        if not report.ok:
            spec, residual = report.failures()[0]
            raise UnverifiedStructure(name, f"{spec.kind} on {spec.op!r} ({residual.note})")

    # identical carrier + tables + descriptor entries collapse to one name
    deduped = {}
    for name in sorted(named):
        if named[name] not in deduped.values():
            deduped[name] = named[name]

    universe = frozenset().union(*(st.carrier for st in deduped.values()))
    topo = generate_topology(universe, [st.carrier for st in deduped.values()])

    hints = dict(hints or {})
    for point, name in hints.items():
        if name not in deduped:
            raise UnknownNeighborhood(name)
        if point not in deduped[name].carrier:
            raise PointOutsideUniverse(point)

    assignment = {}
    ordered = sorted(deduped)
    for p in sorted(universe):
        if p in hints:
            assignment[p] = hints[p]
        else:
            assignment[p] = next(n for n in ordered if p in deduped[n].carrier)

    return StructuredSpace(topo, deduped, assignment)


def subspace(s: StructuredSpace, subfamily) -> StructuredSpace:
    """Restriction to a subset of the neighborhood family.

    The new universe is the union of the kept carriers under the subspace
    topology; points whose assignment fell outside the subfamily are
    reassigned to the first kept carrier containing them.
    """
    names = sorted(set(subfamily))
    if not names:
        raise EmptySubfamily("empty subfamily")
    for name in names:
        if name not in s.neighborhoods:
            raise UnknownNeighborhood(name)

    kept = {name: s.neighborhoods[name] for name in names}
    universe = frozenset().union(*(st.carrier for st in kept.values()))
    opens = frozenset(o & universe for o in s.space.opens)
    topo = FiniteSpace(universe, opens)

    assignment = {}
    for p in sorted(universe):
        old = s.assignment.get(p)
        if old in kept and p in kept[old].carrier:
            assignment[p] = old
        else:
            assignment[p] = next(n for n in names if p in kept[n].carrier)

    return StructuredSpace(topo, kept, assignment)
