"""Measures on finite spaces and the partition analyses built on them.

A measure is a nonnegative weight on each Borel atom (plus a distinguished
infinity), which on a finite space is the general form of a measure on the
Borel sigma-algebra. Arithmetic is exact: fractions.Fraction everywhere,
with INF absorbing under addition. Sets that straddle an atom are genuinely
non-measurable and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import FiniteStructure, descriptors_equivalent, verify_descriptor
from .canon import fmt_set, set_key, subsets_decreasing
from .errors import (
    InconsistentWeights,
    MissingProposal,
    NoEquivalentInC,
    NotMeasurable,
    PointOutsideUniverse,
    ProposalRejected,
    SpecViolation,
    UnknownNeighborhood,
)
from .space import StructuredSpace
from .topology import FiniteSpace, borel_atoms, extension_topology
from .verdict import Verdict


class _Infinity:
    """The single infinite measure value."""

    def __repr__(self):
        return "inf"


INF = _Infinity()


def parse_weight(text):
    if isinstance(text, _Infinity):
        return INF
    if isinstance(text, (int, Fraction)):
        value = Fraction(text)
    elif isinstance(text, str):
        if text.strip() == "inf":
            return INF
        value = Fraction(text)
    else:
        raise ValueError(f"cannot read weight {text!r}")
    if value < 0:
        raise ValueError(f"negative weight {text!r}")
    return value


def format_weight(value) -> str:
    return "inf" if value is INF else str(value)


def weight_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def weight_sum(values):
    total = Fraction(0)
    for v in values:
        total = weight_add(total, v)
    return total


def weight_eq(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return a == b


def weight_is_zero(v) -> bool:
    return v is not INF and v == 0


def weight_is_positive(v) -> bool:
    return v is INF or v > 0


@dataclass
class AtomMeasure:
    space: FiniteSpace
    weights: dict  # atom frozenset -> Fraction | INF

    @classmethod
    def from_point_weights(cls, space: FiniteSpace, point_weights: dict) -> "AtomMeasure":
        """Canonicalize per-point weights onto atoms.

        Each mentioned point stands for its whole atom; two points of one atom
        with different values are rejected, unmentioned atoms weigh zero.
        """
        parsed = {}
        for point, raw in point_weights.items():
            if point not in space.universe:
                raise PointOutsideUniverse(point)
            parsed[point] = parse_weight(raw)
        weights = {}
        for atom in borel_atoms(space):
            values = {format_weight(parsed[p]) for p in atom if p in parsed}
            if len(values) > 1:
                raise InconsistentWeights(atom, sorted(values))
            chosen = next((parsed[p] for p in sorted(atom) if p in parsed), Fraction(0))
            weights[atom] = chosen
        return cls(space, weights)

    def point_weights(self) -> dict:
        """Atom-representative rendering: smallest point of each atom."""
        return {min(atom): format_weight(w) for atom, w in self.weights.items()}


def measure_of(m: AtomMeasure, subset):
    """Exact measure of a union of atoms; INF absorbs."""
    subset = frozenset(subset)
    outside = subset - m.space.universe
    if outside:
        raise PointOutsideUniverse(sorted(outside)[0])
    total = Fraction(0)
    for atom in sorted(m.weights, key=set_key):
        if atom <= subset:
            total = weight_add(total, m.weights[atom])
        elif atom & subset:
            raise NotMeasurable(subset, atom)
    return total


def is_partitionable(s: StructuredSpace) -> Verdict:
    """Are the neighborhood carriers pairwise disjoint?"""
    names = s.names()
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            shared = s.carrier(n1) & s.carrier(n2)
            if shared:
                return Verdict(False, (n1, n2, min(shared)), "carriers overlap")
    return Verdict(True)


@dataclass
class MuLAWitness:
    collection: tuple  # neighborhood names
    remainder: frozenset


def _check_mu_la(s: StructuredSpace, m: AtomMeasure, names) -> bool:
    carriers = [s.carrier(n) for n in names]
    for i, a in enumerate(carriers):
        for b in carriers[i + 1:]:
            if a & b:
                return False
    covered = frozenset().union(*carriers) if carriers else frozenset()
    remainder = s.universe - covered
    if not weight_is_zero(measure_of(m, remainder)):
        return False
    total = weight_sum(measure_of(m, c) for c in carriers)
    return weight_eq(measure_of(m, s.universe), total)


def find_mu_la_partition(s: StructuredSpace, m: AtomMeasure):
    """First subcollection (largest first, then lexicographic) that is
    pairwise disjoint, covers the space up to a null remainder, and carries
    the whole measure; None when no subcollection qualifies."""
    for names in subsets_decreasing(s.names()):
        if _check_mu_la(s, m, names):
            covered = frozenset().union(*(s.carrier(n) for n in names)) if names else frozenset()
            return MuLAWitness(tuple(names), s.universe - covered)
    return None


@dataclass
class NullAdditionSpec:
    """Fresh points plus a structure making the uncovered remainder algebraic."""

    new_points: frozenset
    structure: FiniteStructure
    weights: dict = field(default_factory=dict)  # new point -> weight, default 0
    name: str = "YZ"


def apply_null_addition(s: StructuredSpace, m: AtomMeasure, collection, spec: NullAdditionSpec):
    """Extend the space so the given mu-LA witness becomes a real partition.

    The universe grows by the fresh points under the extension topology (old
    Borel sets, and hence the old measure, survive unchanged); the kept
    neighborhoods plus the remainder structure partition the new universe.
    Returns the new space and the extended measure.
    """
    collection = tuple(sorted(collection))
    for n in collection:
        if n not in s.neighborhoods:
            raise UnknownNeighborhood(n)
    if not _check_mu_la(s, m, collection):
        raise SpecViolation("collection is not a mu-LA witness for this measure")

    new_points = frozenset(spec.new_points)
    if new_points & s.universe:
        raise SpecViolation("new points must be disjoint from the universe")

    covered = frozenset().union(*(s.carrier(n) for n in collection)) if collection else frozenset()
    leftover = s.universe - covered
    expected = leftover | new_points
    if spec.structure.carrier != expected:
        raise SpecViolation(
            f"structure carrier {fmt_set(spec.structure.carrier)} is not "
            f"remainder-plus-additions {fmt_set(expected)}"
        )
    if len(expected) < 2:
        raise SpecViolation("remainder plus additions has fewer than two points")
    if not verify_descriptor(spec.structure).ok:
        raise SpecViolation("remainder structure fails its declared properties")
    if spec.name in collection:
        raise SpecViolation(f"name {spec.name!r} already names a kept neighborhood")

    topo = extension_topology(s.space, new_points)
    neighborhoods = {n: s.neighborhoods[n] for n in collection}
    neighborhoods[spec.name] = spec.structure
    assignment = {}
    for p in sorted(s.universe | new_points):
        if p in expected:
            assignment[p] = spec.name
        else:
            old = s.assignment.get(p)
            if old in collection and p in s.carrier(old):
                assignment[p] = old
            else:
                assignment[p] = next(n for n in collection if p in s.carrier(n))
    out = StructuredSpace(topo, neighborhoods, assignment)

    weights = dict(m.weights)
    for z in sorted(new_points):
        weights[frozenset({z})] = parse_weight(spec.weights.get(z, 0))
    extended = AtomMeasure(topo, weights)

    if not is_partitionable(out).ok:
        raise SpecViolation("extended collection fails to partition the new universe")
    return out, extended


def is_mu_union(s: StructuredSpace, m: AtomMeasure, collection) -> Verdict:
    """Does the collection cover the space with null pairwise overlaps?"""
    names = sorted(collection)
    for n in names:
        if n not in s.neighborhoods:
            raise UnknownNeighborhood(n)
    covered = frozenset().union(*(s.carrier(n) for n in names)) if names else frozenset()
    if covered != s.universe:
        return Verdict(False, tuple(sorted(s.universe - covered)), "collection does not cover the space")
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            overlap = measure_of(m, s.carrier(n1) & s.carrier(n2))
            if not weight_is_zero(overlap):
                return Verdict(False, (n1, n2, format_weight(overlap)), "overlap has positive measure")
    return Verdict(True)


@dataclass
class RestrictionReport:
    mu_union: Verdict
    mu_cr: Verdict
    mu_cdr: Verdict


def classify_restriction(s: StructuredSpace, m: AtomMeasure, collection) -> RestrictionReport:
    """mu-union, then mu-CR (every structure class of the space represented in
    the collection), then mu-CDR (collection members pairwise inequivalent)."""
    names = sorted(collection)
    union_verdict = is_mu_union(s, m, collection)

    cr_verdict = Verdict(True)
    if not union_verdict.ok:
        cr_verdict = Verdict(False, reason="not a mu-union")
    else:
        for other in s.names():
            d = s.neighborhoods[other].descriptor
            if not any(descriptors_equivalent(d, s.neighborhoods[n].descriptor).ok for n in names):
                cr_verdict = Verdict(False, (other,), "structure class missing from the collection")
                break

    cdr_verdict = Verdict(True)
    if not cr_verdict.ok:
        cdr_verdict = Verdict(False, reason="not a mu-CR")
    else:
        done = False
        for i, n1 in enumerate(names):
            for n2 in names[i + 1:]:
                if descriptors_equivalent(
                    s.neighborhoods[n1].descriptor, s.neighborhoods[n2].descriptor
                ).ok:
                    cdr_verdict = Verdict(False, (n1, n2), "collection members share a structure")
                    done = True
                    break
            if done:
                break

    return RestrictionReport(union_verdict, cr_verdict, cdr_verdict)


@dataclass
class ExtensionProposal:
    added: frozenset  # null set of old points to absorb
    structure: FiniteStructure  # on partner carrier + added points


@dataclass
class EssentialPart:
    collection: dict  # name -> FiniteStructure
    entries: list  # per-point outcomes
    covers: bool
    pairwise_null: bool
    note: str


def essential_part(s: StructuredSpace, m: AtomMeasure, collection, proposals=None) -> EssentialPart:
    """Shrink the family to a mu-CDR plus null extensions of its members.

    For every point assigned outside the collection, its neighborhood's unique
    equivalent inside the collection either already contains the point or is
    extended by the caller's proposal: a null set of points around it carrying
    a verified structure with the same descriptor class. The result need not
    be a mu-union; the report says whether it happens to be one here.
    """
    proposals = dict(proposals or {})
    names = sorted(collection)
    report = classify_restriction(s, m, collection)
    if not report.mu_cdr.ok:
        raise SpecViolation("collection is not a mu-CDR")

    out = {n: s.neighborhoods[n] for n in names}
    entries = []
    outside = [n for n in s.names() if n not in names]
    for name in outside:
        d = s.neighborhoods[name].descriptor
        partners = [n for n in names if descriptors_equivalent(d, s.neighborhoods[n].descriptor).ok]
        if not partners:
            raise NoEquivalentInC(name)
        partner = partners[0]
        points = sorted(p for p, assigned in s.assignment.items() if assigned == name)
        for p in points:
            if p in s.carrier(partner):
                entries.append({"point": p, "outside": name, "partner": partner,
                                "action": "already_inside"})
                continue
            proposal = proposals.get(p)
            if proposal is None:
                raise MissingProposal(p)
            added = frozenset(proposal.added)
            if p not in added:
                raise ProposalRejected(p, "added set does not contain the point")
            if not added <= s.universe:
                raise ProposalRejected(p, "added set leaves the universe")
            if added & s.carrier(partner):
                raise ProposalRejected(p, "added set meets the partner carrier")
            try:
                if not weight_is_zero(measure_of(m, added)):
                    raise ProposalRejected(p, "added set has positive measure")
            except NotMeasurable:
                raise ProposalRejected(p, "added set is not measurable") from None
            if proposal.structure.carrier != s.carrier(partner) | added:
                raise ProposalRejected(p, "structure carrier is not partner-plus-added")
            if not verify_descriptor(proposal.structure).ok:
                raise ProposalRejected(p, "extension fails its declared properties")
            if not descriptors_equivalent(
                proposal.structure.descriptor, s.neighborhoods[partner].descriptor
            ).ok:
                raise ProposalRejected(p, "extension changes the structure class")
            ext_name = f"{partner}+{p}"
            out[ext_name] = proposal.structure
            entries.append({"point": p, "outside": name, "partner": partner,
                            "action": "extended", "extension": ext_name})

    carriers = [st.carrier for st in out.values()]
    covers = frozenset().union(*carriers) == s.universe
    pairwise_null = True
    ordered = sorted(out)
    for i, n1 in enumerate(ordered):
        for n2 in ordered[i + 1:]:
            if not weight_is_zero(measure_of(m, out[n1].carrier & out[n2].carrier)):
                pairwise_null = False
                break
        if not pairwise_null:
            break

    return EssentialPart(
        out, entries, covers, pairwise_null,
        note="the essential part need not be a mu-union of the space",
    )


@dataclass
class HomogeneityReport:
    locally: bool
    globally: bool
    witnesses: dict


def homogeneity(s: StructuredSpace, m: AtomMeasure) -> HomogeneityReport:
    """Positive-measure overlap vs. equivalent structure, pairwise.

    Locally homogeneous: overlap in positive measure implies equivalence.
    Globally homogeneous: the two coincide exactly.
    """
    names = s.names()
    witnesses = {}
    locally = True
    globally = True
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            overlap = measure_of(m, s.carrier(n1) & s.carrier(n2))
            near = weight_is_positive(overlap)
            same = descriptors_equivalent(
                s.neighborhoods[n1].descriptor, s.neighborhoods[n2].descriptor
            ).ok
            if near and not same and locally:
                locally = False
                witnesses["locally"] = (n1, n2, format_weight(overlap))
            if near != same and globally:
                globally = False
                witnesses["globally"] = (n1, n2, format_weight(overlap))
    return HomogeneityReport(locally, globally, witnesses)
