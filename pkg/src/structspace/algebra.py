"""Finite algebraic structures as partial binary operation tables.

Each declarable property has a residual evaluator that is identically zero
over the structure exactly when the property holds. The formal difference
underlying the residuals is an equality test (a - b = 0 iff a = b); no
arithmetic subtraction exists on carriers.

Partial-table semantics (this module's choice, the properties are standard
only for total tables):
  * Closure fails on the first pair missing from the domain.
  * Commutativity requires the domain to be symmetric and values to agree
    where defined.
  * Associativity requires (x*y)*z to be defined iff x*(y*z) is, and the
    values to agree when both are.
  * Identity candidates are judged on their defined row/column entries.
  * Invertibility needs a two-sided identity e with every x owning some y
    where x*y = y*x = e, all four lookups defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from .canon import split_pair
from .errors import (
    InvalidStructure,
    MissingIdentityPrerequisite,
    UnknownOperation,
)
from .verdict import Verdict

CLOSURE = "Closure"
COMMUTATIVITY = "Commutativity"
ASSOCIATIVITY = "Associativity"
LEFT_IDENTITY = "LeftIdentity"
RIGHT_IDENTITY = "RightIdentity"
IDENTITY = "Identity"
INVERTIBILITY = "Invertibility"

ATOMIC_KINDS = (
    CLOSURE,
    COMMUTATIVITY,
    ASSOCIATIVITY,
    LEFT_IDENTITY,
    RIGHT_IDENTITY,
    IDENTITY,
    INVERTIBILITY,
)

GROUP_KINDS = frozenset({CLOSURE, ASSOCIATIVITY, IDENTITY, INVERTIBILITY})


def is_valid_kind(kind: str) -> bool:
    """Atomic kind, or a pair `(k1|k2)` of valid kinds (product properties)."""
    if kind in ATOMIC_KINDS:
        return True
    parts = split_pair(kind)
    return parts is not None and is_valid_kind(parts[0]) and is_valid_kind(parts[1])


@dataclass(frozen=True)
class OperationTable:
    """A partial binary operation given extensionally.

    `entries` is the sorted tuple of (a, b, a*b) triples; absent pairs encode
    partiality.
    """

    name: str
    carrier: frozenset
    entries: tuple

    def __post_init__(self):
        seen = set()
        for triple in self.entries:
            a, b, c = triple
            for x in (a, b, c):
                if x not in self.carrier:
                    raise InvalidStructure(
                        f"table {self.name!r}: entry {triple} uses {x!r} outside the carrier"
                    )
            if (a, b) in seen:
                raise InvalidStructure(f"table {self.name!r}: duplicate entry for ({a},{b})")
            seen.add((a, b))
        if list(self.entries) != sorted(self.entries):
            raise InvalidStructure(f"table {self.name!r}: entries not in canonical order")

    @classmethod
    def from_mapping(cls, name, carrier, mapping):
        entries = tuple(sorted((a, b, c) for (a, b), c in mapping.items()))
        return cls(name, frozenset(carrier), entries)

    @cached_property
    def mapping(self) -> dict:
        return {(a, b): c for a, b, c in self.entries}

    @property
    def domain(self):
        return frozenset((a, b) for a, b, _ in self.entries)

    def is_total(self) -> bool:
        return len(self.entries) == len(self.carrier) ** 2


@dataclass(frozen=True)
class PropertySpec:
    kind: str
    op: str

    def __post_init__(self):
        if not is_valid_kind(self.kind):
            raise InvalidStructure(f"unknown property kind {self.kind!r}")


@dataclass(frozen=True, order=True)
class NonAlgTag:
    """Opaque marker for structure beyond the operation tables.

    Tags are compared literally; nothing semantic is verified about them.
    """

    label: str
    payload: str = ""


@dataclass(frozen=True)
class StructureDescriptor:
    """Canonical record of operations, declared properties, and tags.

    `operations` is sorted (tuples of operation names are unordered up to
    this canonicalization), `properties` is a set, and `nonalg` is a sorted
    tuple standing for a multiset. An empty `nonalg` is the distinguished
    no-extra-structure marker.
    """

    operations: tuple
    properties: frozenset
    nonalg: tuple

    def __post_init__(self):
        if tuple(sorted(self.operations)) != self.operations:
            raise InvalidStructure("descriptor operations not in canonical order")
        for spec in self.properties:
            if spec.op not in self.operations:
                raise UnknownOperation(spec.op)
        for spec in self.properties:
            if spec.kind == INVERTIBILITY and PropertySpec(IDENTITY, spec.op) not in self.properties:
                raise MissingIdentityPrerequisite(spec.op)
        if tuple(sorted(self.nonalg)) != self.nonalg:
            raise InvalidStructure("descriptor tags not in canonical order")

    def kinds_for(self, op) -> frozenset:
        return frozenset(p.kind for p in self.properties if p.op == op)


@dataclass(frozen=True)
class FiniteStructure:
    """A carrier with named operation tables and their descriptor."""

    carrier: frozenset
    tables: tuple
    descriptor: StructureDescriptor

    def __post_init__(self):
        if not self.carrier:
            raise InvalidStructure("empty carrier")
        names = [t.name for t in self.tables]
        if len(set(names)) != len(names):
            raise InvalidStructure("duplicate operation names")
        if tuple(sorted(names)) != self.descriptor.operations:
            raise InvalidStructure("descriptor operations do not match the tables")
        if names != sorted(names):
            raise InvalidStructure("tables not in canonical order")
        for t in self.tables:
            if t.carrier != self.carrier:
                raise InvalidStructure(f"table {t.name!r} lives on a different carrier")

    @cached_property
    def table_by_name(self) -> dict:
        return {t.name: t for t in self.tables}

    def table(self, name) -> OperationTable:
        try:
            return self.table_by_name[name]
        except KeyError:
            raise UnknownOperation(name) from None


def make_structure(carrier, tables, properties=(), nonalg=()) -> FiniteStructure:
    """Assemble a structure and its canonical descriptor in one step."""
    carrier = frozenset(carrier)
    tables = tuple(sorted(tables, key=lambda t: t.name))
    descriptor = StructureDescriptor(
        operations=tuple(sorted(t.name for t in tables)),
        properties=frozenset(properties),
        nonalg=tuple(sorted(nonalg)),
    )
    return FiniteStructure(carrier, tables, descriptor)


@dataclass(frozen=True)
class Residual:
    """Outcome of an encoding-function evaluation.

    `ok` means the residual was zero everywhere; otherwise `witness` holds
    the first counterexample in canonical scan order.
    """

    ok: bool
    witness: tuple | None = None
    note: str = ""

    def __bool__(self):
        return self.ok


def _zero():
    return Residual(True)


def _eval_closure(table):
    m = table.mapping
    elems = sorted(table.carrier)
    for a in elems:
        for b in elems:
            if (a, b) not in m:
                return Residual(False, (a, b), "pair missing from the domain")
    return _zero()


def _eval_commutativity(table):
    m = table.mapping
    elems = sorted(table.carrier)
    for x in elems:
        for y in elems:
            fwd, bwd = (x, y) in m, (y, x) in m
            if fwd != bwd:
                return Residual(False, (x, y), "asymmetric domain")
            if fwd and m[(x, y)] != m[(y, x)]:
                return Residual(False, (x, y), f"{x}*{y} != {y}*{x}")
    return _zero()


def _eval_associativity(table):
    m = table.mapping
    elems = sorted(table.carrier)
    for x in elems:
        for y in elems:
            xy = m.get((x, y))
            for z in elems:
                left = xy is not None and (xy, z) in m
                yz = m.get((y, z))
                right = yz is not None and (x, yz) in m
                if left != right:
                    return Residual(False, (x, y, z), "groupings not equally defined")
                if left and m[(xy, z)] != m[(x, yz)]:
                    return Residual(False, (x, y, z), f"({x}*{y})*{z} != {x}*({y}*{z})")
    return _zero()


def _left_identity_failure(m, elems, e):
    for x in elems:
        got = m.get((e, x))
        if got is not None and got != x:
            return x
    return None


def _right_identity_failure(m, elems, e):
    for x in elems:
        got = m.get((x, e))
        if got is not None and got != x:
            return x
    return None


def _eval_one_sided_identity(table, failure):
    m = table.mapping
    elems = sorted(table.carrier)
    first = None
    for e in elems:
        x = failure(m, elems, e)
        if x is None:
            return _zero()
        if first is None:
            first = (e, x)
    return Residual(False, first, "no element acts as an identity")


def _identity_elements(table):
    m = table.mapping
    elems = sorted(table.carrier)
    out = []
    for e in elems:
        if _left_identity_failure(m, elems, e) is None and _right_identity_failure(m, elems, e) is None:
            out.append(e)
    return out


def _eval_identity(table):
    if _identity_elements(table):
        return _zero()
    m = table.mapping
    elems = sorted(table.carrier)
    e = elems[0]
    x = _left_identity_failure(m, elems, e)
    if x is None:
        x = _right_identity_failure(m, elems, e)
    return Residual(False, (e, x), "no two-sided identity element")


def _eval_invertibility(table):
    identities = _identity_elements(table)
    if not identities:
        return Residual(False, (), "no two-sided identity element")
    m = table.mapping
    elems = sorted(table.carrier)
    first = None
    for e in identities:
        bad = None
        for x in elems:
            if not any(m.get((x, y)) == e and m.get((y, x)) == e for y in elems):
                bad = x
                break
        if bad is None:
            return _zero()
        if first is None:
            first = (e, bad)
    return Residual(False, first, "element has no two-sided inverse")


_EVALUATORS = {
    CLOSURE: _eval_closure,
    COMMUTATIVITY: _eval_commutativity,
    ASSOCIATIVITY: _eval_associativity,
    LEFT_IDENTITY: lambda t: _eval_one_sided_identity(t, _left_identity_failure),
    RIGHT_IDENTITY: lambda t: _eval_one_sided_identity(t, _right_identity_failure),
    IDENTITY: _eval_identity,
    INVERTIBILITY: _eval_invertibility,
}


def _project_table(table, side):
    """Recover one factor of a componentwise product table.

    Returns (factor OperationTable, None) or (None, failure Residual). The
    carrier must be a full rectangle of pair ids and the chosen component of
    every defined product must not depend on the other factor.
    """
    pairs = {}
    for p in table.carrier:
        parts = split_pair(p)
        if parts is None:
            return None, Residual(False, (p,), "carrier point is not a pair id")
        pairs[p] = parts
    lefts = sorted({v[0] for v in pairs.values()})
    rights = sorted({v[1] for v in pairs.values()})
    if len(table.carrier) != len(lefts) * len(rights):
        return None, Residual(False, (), "carrier is not a full rectangle of pairs")

    pick = 0 if side == "left" else 1
    factor_carrier = lefts if side == "left" else rights
    factor = {}
    for (p, q), value in table.mapping.items():
        vparts = split_pair(value)
        if vparts is None:
            return None, Residual(False, (p, q), "product value is not a pair id")
        key = (pairs[p][pick], pairs[q][pick])
        got = vparts[pick]
        if key in factor and factor[key] != got:
            return None, Residual(
                False, key, f"{side} component differs across representatives"
            )
        factor[key] = got
    return OperationTable.from_mapping(table.name, factor_carrier, factor), None


def _eval_pair_property(table, kind):
    left_kind, right_kind = split_pair(kind)
    for side, sub in (("left", left_kind), ("right", right_kind)):
        factor, failure = _project_table(table, side)
        if failure is not None:
            return failure
        residual = _eval_kind(factor, sub)
        if not residual.ok:
            return Residual(False, residual.witness, f"{side} factor: {residual.note}")
    return _zero()


def _eval_kind(table, kind):
    if kind in _EVALUATORS:
        return _EVALUATORS[kind](table)
    return _eval_pair_property(table, kind)


def evaluate_encoding(s: FiniteStructure, spec: PropertySpec) -> Residual:
    """Evaluate one property's residual over the whole structure."""
    table = s.table(spec.op)
    if spec.kind == INVERTIBILITY and PropertySpec(IDENTITY, spec.op) not in s.descriptor.properties:
        raise MissingIdentityPrerequisite(spec.op)
    return _eval_kind(table, spec.kind)


@dataclass(frozen=True)
class DescriptorReport:
    entries: tuple  # of (PropertySpec, Residual)

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.entries)

    def failures(self):
        return tuple((p, r) for p, r in self.entries if not r.ok)


def verify_descriptor(s: FiniteStructure) -> DescriptorReport:
    """Check every declared property; the report pairs each with its residual."""
    ordered = sorted(s.descriptor.properties, key=lambda p: (p.op, p.kind))
    return DescriptorReport(tuple((p, evaluate_encoding(s, p)) for p in ordered))


def descriptors_equivalent(d1: StructureDescriptor, d2: StructureDescriptor) -> Verdict:
    """Same operation count, same tags, and an operation bijection matching
    each operation's property-kind set exactly. The witness is the bijection."""
    if len(d1.operations) != len(d2.operations):
        return Verdict(False, reason="different operation counts")
    if d1.nonalg != d2.nonalg:
        return Verdict(False, reason="different non-algebraic tags")
    k1 = {op: d1.kinds_for(op) for op in d1.operations}
    k2 = {op: d2.kinds_for(op) for op in d2.operations}
    for perm in permutations(d2.operations):
        if all(k1[a] == k2[b] for a, b in zip(d1.operations, perm)):
            return Verdict(True, witness=tuple(zip(d1.operations, perm)))
    return Verdict(False, reason="no operation bijection matches the property sets")


def is_homomorphism(a: FiniteStructure, b: FiniteStructure, op_pairing: dict, mapping: dict) -> Verdict:
    """Does `mapping` send every defined product of `a` onto the matching
    product of `b` under the operation pairing?"""
    for op in a.descriptor.operations:
        if op not in op_pairing:
            raise UnknownOperation(op)
        b.table(op_pairing[op])
    for x in sorted(a.carrier):
        if x not in mapping:
            raise InvalidStructure(f"mapping undefined on {x!r}")
        if mapping[x] not in b.carrier:
            raise InvalidStructure(f"mapping sends {x!r} outside the target carrier")
    for op in a.descriptor.operations:
        src = a.table(op).mapping
        dst = b.table(op_pairing[op]).mapping
        for (x, y) in sorted(src):
            image = dst.get((mapping[x], mapping[y]))
            if image is None:
                return Verdict(False, (op, x, y), "image pair missing from the target domain")
            if image != mapping[src[(x, y)]]:
                return Verdict(False, (op, x, y), "operation not preserved")
    return Verdict(True)


@dataclass
class Isomorphism:
    mapping: dict
    op_pairing: dict

    def inverse(self):
        return Isomorphism(
            {v: k for k, v in self.mapping.items()},
            {v: k for k, v in self.op_pairing.items()},
        )


def find_isomorphism(a: FiniteStructure, b: FiniteStructure):
    """Exhaustive search for a carrier bijection that is a homomorphism with
    homomorphic inverse; first hit in canonical enumeration order, else None."""
    if len(a.carrier) != len(b.carrier):
        return None
    if len(a.descriptor.operations) != len(b.descriptor.operations):
        return None
    a_points = sorted(a.carrier)
    for op_perm in permutations(b.descriptor.operations):
        pairing = dict(zip(a.descriptor.operations, op_perm))
        inverse_pairing = {v: k for k, v in pairing.items()}
        for point_perm in permutations(sorted(b.carrier)):
            mapping = dict(zip(a_points, point_perm))
            if not is_homomorphism(a, b, pairing, mapping).ok:
                continue
            inverse = {v: k for k, v in mapping.items()}
            if is_homomorphism(b, a, inverse_pairing, inverse).ok:
                return Isomorphism(mapping, pairing)
    return None
