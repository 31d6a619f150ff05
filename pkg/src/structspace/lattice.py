"""From neighborhood membership to order: the h-map, its quotient poset, and
brute-force lattice verification in both directions.

The lattice verdict never trusts the forward theorem: every least upper bound
and greatest lower bound is searched for explicitly, and a missing bound is
reported with the offending class pair. (The meet direction genuinely fails
on simple spaces: two neighborhoods overlapping in one point give classes
with no common lower bound.)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import (
    ASSOCIATIVITY,
    CLOSURE,
    COMMUTATIVITY,
    OperationTable,
    PropertySpec,
    make_structure,
    verify_descriptor,
)
from .errors import InvalidStructure, NotALattice, TooSmall
from .space import StructuredSpace
from .topology import FiniteSpace
from .verdict import Verdict


@dataclass
class HAssignment:
    mapping: dict  # point -> frozenset of neighborhood names

    def value(self, point):
        return self.mapping[point]


def h_map(s: StructuredSpace) -> HAssignment:
    """Each point's set of covering neighborhoods (membership, not assignment)."""
    mapping = {}
    for p in sorted(s.universe):
        mapping[p] = frozenset(n for n in s.names() if p in s.carrier(n))
    return HAssignment(mapping)


def is_h_surjective(s: StructuredSpace) -> Verdict:
    """Is every nonempty subcollection of neighborhoods some point's h-value?

    Missing subcollections are listed smallest first, then lexicographically.
    """
    realized = set(h_map(s).mapping.values())
    names = s.names()
    missing = []
    for size in range(1, len(names) + 1):
        for combo in combinations(names, size):
            if frozenset(combo) not in realized:
                missing.append(combo)
    if missing:
        return Verdict(False, tuple(missing), "unrealized subcollections")
    return Verdict(True)


def class_label(members) -> str:
    return "[" + ",".join(sorted(members)) + "]"


@dataclass
class PosetClass:
    members: tuple  # sorted points sharing one h-value
    hvalue: tuple  # sorted neighborhood names

    @property
    def label(self) -> str:
        return class_label(self.members)


@dataclass
class QuotientPoset:
    classes: tuple  # PosetClass, canonically ordered by members
    leq: frozenset  # (i, j) index pairs, h-value inclusion
    from_surjective_h: bool = False

    def index_of(self, label) -> int:
        for i, c in enumerate(self.classes):
            if c.label == label:
                return i
        raise InvalidStructure(f"no class labelled {label!r}")


def induced_poset(s: StructuredSpace) -> QuotientPoset:
    """Quotient the points by equal h-value and order classes by inclusion."""
    h = h_map(s)
    groups = {}
    for p in sorted(s.universe):
        groups.setdefault(h.mapping[p], []).append(p)
    classes = tuple(
        PosetClass(tuple(members), tuple(sorted(hv)))
        for hv, members in sorted(groups.items(), key=lambda kv: kv[1])
    )
    leq = frozenset(
        (i, j)
        for i, a in enumerate(classes)
        for j, b in enumerate(classes)
        if set(a.hvalue) <= set(b.hvalue)
    )
    # poset laws hold by construction; keep them asserted anyway
    n = len(classes)
    assert all((i, i) in leq for i in range(n))
    assert all(i == j for (i, j) in leq if (j, i) in leq)
    assert all(
        (i, k) in leq
        for (i, j) in leq
        for (j2, k) in leq
        if j == j2
    )
    return QuotientPoset(classes, leq, from_surjective_h=is_h_surjective(s).ok)


@dataclass
class LatticeVerdict:
    is_lattice: bool
    join: dict | None = None  # (label, label) -> label, both orders
    meet: dict | None = None
    counterexample: tuple | None = None  # (label, label, which bound)
    join_union_ok: bool | None = None  # h-value of joins is the union (surjective sources)


def _least_bound(leq, candidates, below):
    """Least (or, with below=False, greatest) element among the candidates."""
    for c in candidates:
        if all(((c, x) if below else (x, c)) in leq for x in candidates):
            return c
    return None


def verify_lattice(p: QuotientPoset) -> LatticeVerdict:
    """Brute-force join and meet search over every class pair.

    The first pair lacking a bound (classes scanned in canonical order, joins
    before meets per pair) becomes the counterexample. For posets that came
    from a surjective h-map, the join class's h-value is additionally checked
    to be the union of the operands' h-values.
    """
    n = len(p.classes)
    labels = [c.label for c in p.classes]
    join, meet = {}, {}
    for i in range(n):
        for j in range(i, n):
            ubs = [k for k in range(n) if (i, k) in p.leq and (j, k) in p.leq]
            lub = _least_bound(p.leq, ubs, below=True)
            if lub is None:
                return LatticeVerdict(False, counterexample=(labels[i], labels[j], "join"))
            lbs = [k for k in range(n) if (k, i) in p.leq and (k, j) in p.leq]
            glb = _least_bound(p.leq, lbs, below=False)
            if glb is None:
                return LatticeVerdict(False, counterexample=(labels[i], labels[j], "meet"))
            join[(labels[i], labels[j])] = join[(labels[j], labels[i])] = labels[lub]
            meet[(labels[i], labels[j])] = meet[(labels[j], labels[i])] = labels[glb]

    join_union_ok = None
    if p.from_surjective_h:
        join_union_ok = True
        for i in range(n):
            for j in range(i, n):
                k = p.index_of(join[(labels[i], labels[j])])
                union = set(p.classes[i].hvalue) | set(p.classes[j].hvalue)
                if set(p.classes[k].hvalue) != union:
                    join_union_ok = False
    return LatticeVerdict(True, join, meet, None, join_union_ok)


def verify_join_semilattice(p: QuotientPoset) -> Verdict:
    """The join half on its own: every class pair must have a least upper
    bound and, when the poset came from a surjective h-map, the join's
    h-value must be the union of the operands' h-values. Meets are not
    consulted, so this passes on spaces whose full lattice verdict fails."""
    n = len(p.classes)
    for i in range(n):
        for j in range(i, n):
            ubs = [k for k in range(n) if (i, k) in p.leq and (j, k) in p.leq]
            lub = _least_bound(p.leq, ubs, below=True)
            if lub is None:
                return Verdict(False, (p.classes[i].label, p.classes[j].label),
                               "pair has no join")
            if p.from_surjective_h:
                union = set(p.classes[i].hvalue) | set(p.classes[j].hvalue)
                if set(p.classes[lub].hvalue) != union:
                    return Verdict(False, (p.classes[i].label, p.classes[j].label),
                                   "join h-value is not the union")
    return Verdict(True)


def _close_order(carrier, pairs):
    leq = {(x, x) for x in carrier} | {tuple(p) for p in pairs}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


@dataclass
class ConverseResult:
    space: StructuredSpace
    equivalence: tuple  # the trivial (point-equality) relation as singleton blocks
    h: HAssignment


def lattice_to_structured_space(carrier, pairs, name="Y") -> ConverseResult:
    """Realize a finite lattice as a one-neighborhood structured space.

    The whole carrier becomes the single fixed neighborhood under the
    indiscrete topology, carrying the join and meet tables read off the order
    (each closed, associative, and commutative). The accompanying equivalence
    is plain equality and the returned h-assignment is constantly the full
    (one-member) family, hence surjective.
    """
    carrier = sorted(set(carrier))
    if len(carrier) < 2:
        raise TooSmall("a one-point lattice cannot carry a fixed neighborhood")
    for (a, b) in pairs:
        if a not in carrier or b not in carrier:
            raise InvalidStructure(f"order pair ({a!r},{b!r}) leaves the carrier")
    leq = _close_order(carrier, pairs)
    for (a, b) in sorted(leq):
        if a != b and (b, a) in leq:
            raise NotALattice((a, b), "order is not antisymmetric")

    join_table, meet_table = {}, {}
    for a in carrier:
        for b in carrier:
            ubs = [x for x in carrier if (a, x) in leq and (b, x) in leq]
            lub = next((x for x in ubs if all((x, y) in leq for y in ubs)), None)
            if lub is None:
                raise NotALattice((a, b), "pair has no join")
            lbs = [x for x in carrier if (x, a) in leq and (x, b) in leq]
            glb = next((x for x in lbs if all((y, x) in leq for y in lbs)), None)
            if glb is None:
                raise NotALattice((a, b), "pair has no meet")
            join_table[(a, b)] = lub
            meet_table[(a, b)] = glb

    tables = [
        OperationTable.from_mapping("join", carrier, join_table),
        OperationTable.from_mapping("meet", carrier, meet_table),
    ]
    properties = [
        PropertySpec(kind, op)
        for op in ("join", "meet")
        for kind in (CLOSURE, ASSOCIATIVITY, COMMUTATIVITY)
    ]
    structure = make_structure(carrier, tables, properties)
    report = verify_descriptor(structure)
    assert report.ok, "lattice tables must satisfy their declared properties"

    universe = frozenset(carrier)
    topo = FiniteSpace(universe, frozenset({frozenset(), universe}))
    space = StructuredSpace(topo, {name: structure}, {p: name for p in carrier})
    equivalence = tuple(frozenset({p}) for p in carrier)
    h = HAssignment({p: frozenset({name}) for p in carrier})
    return ConverseResult(space, equivalence, h)


def transitive_reduction(n, leq):
    """Covering pairs (lower, upper) of an order on indices 0..n-1."""
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or (i, j) not in leq:
                continue
            if any(
                k != i and k != j and (i, k) in leq and (k, j) in leq
                for k in range(n)
            ):
                continue
            out.append((i, j))
    return out


def covers(p: QuotientPoset):
    """Transitive reduction of the class order as (lower, upper) index pairs."""
    return transitive_reduction(len(p.classes), p.leq)


def poset_to_dot(p: QuotientPoset) -> str:
    """Hasse diagram in DOT: nodes are classes labelled by their h-values."""
    lines = ["digraph quotient_poset {", "  rankdir=BT;"]
    for c in p.classes:
        hv = "{" + ",".join(c.hvalue) + "}"
        lines.append(f'  "{c.label}" [label="{c.label} {hv}"];')
    for (i, j) in covers(p):
        lines.append(f'  "{p.classes[i].label}" -> "{p.classes[j].label}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
