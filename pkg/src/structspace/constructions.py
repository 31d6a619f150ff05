"""Constructions that produce new structured spaces from old ones: products,
isomorphic replacement, congruence quotients, and direct limits."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    FiniteStructure,
    NonAlgTag,
    OperationTable,
    PropertySpec,
    descriptors_equivalent,
    is_homomorphism,
    make_structure,
    verify_descriptor,
)
from .canon import make_pair, split_pair, sort_sets
from .errors import (
    DescriptorLost,
    IllDefinedOperation,
    InvalidDirectSystem,
    InvalidStructure,
    NonBijectiveReplacement,
    NotACongruence,
    NotAGroup,
    NotASubgroup,
    NotNormal,
    QuotientTooSmall,
    TooSmall,
    ValidationFailure,
)
from .space import StructuredSpace, build_from_collection, validate
from .topology import product_topology


def _require_valid(s: StructuredSpace):
    report = validate(s)
    if not report.ok:
        raise ValidationFailure(report)


# -- products ----------------------------------------------------------------

def _pair_tags(left_tags, right_tags):
    # the no-structure marker pairs formally; two markers collapse back to it
    if not left_tags and not right_tags:
        return ()
    left = left_tags or (NonAlgTag("∅"),)
    right = right_tags or (NonAlgTag("∅"),)
    return tuple(sorted(
        NonAlgTag(make_pair(a.label, b.label), make_pair(a.payload, b.payload))
        for a in left for b in right
    ))


def _product_structure(u: FiniteStructure, v: FiniteStructure) -> FiniteStructure:
    tables = []
    for ta in u.tables:
        for tb in v.tables:
            entries = {}
            for (x1, x2), vx in ta.mapping.items():
                for (y1, y2), vy in tb.mapping.items():
                    entries[(make_pair(x1, y1), make_pair(x2, y2))] = make_pair(vx, vy)
            carrier = frozenset(make_pair(p, q) for p in u.carrier for q in v.carrier)
            tables.append(OperationTable.from_mapping(make_pair(ta.name, tb.name), carrier, entries))

    properties = []
    for pa in sorted(u.descriptor.properties, key=lambda p: (p.op, p.kind)):
        for pb in sorted(v.descriptor.properties, key=lambda p: (p.op, p.kind)):
            properties.append(PropertySpec(make_pair(pa.kind, pb.kind), make_pair(pa.op, pb.op)))

    carrier = frozenset(make_pair(p, q) for p in u.carrier for q in v.carrier)
    return make_structure(
        carrier, tables, properties, _pair_tags(u.descriptor.nonalg, v.descriptor.nonalg)
    )


def product(s1: StructuredSpace, s2: StructuredSpace) -> StructuredSpace:
    """Product space: pair points, product topology, and one neighborhood per
    carrier pair whose operations act componentwise. A neighborhood built from
    n and m operations gets all nm pairings, and each property pair (one from
    either factor operation) becomes a pair property of the paired operation."""
    _require_valid(s1)
    _require_valid(s2)

    neighborhoods = {}
    for n1 in sorted(s1.neighborhoods):
        for n2 in sorted(s2.neighborhoods):
            neighborhoods[make_pair(n1, n2)] = _product_structure(
                s1.neighborhoods[n1], s2.neighborhoods[n2]
            )

    assignment = {}
    for p in sorted(s1.universe):
        for q in sorted(s2.universe):
            assignment[make_pair(p, q)] = make_pair(s1.assignment[p], s2.assignment[q])

    out = StructuredSpace(
        product_topology(s1.space, s2.space), neighborhoods, assignment
    )
    _require_valid(out)
    return out


def projections(structure: FiniteStructure):
    """Carrier maps and operation pairings of a product neighborhood onto its
    factors: ((left_map, left_ops), (right_map, right_ops))."""
    left_map, right_map = {}, {}
    for p in structure.carrier:
        parts = split_pair(p)
        if parts is None:
            raise InvalidStructure(f"{p!r} is not a pair point")
        left_map[p], right_map[p] = parts
    left_ops, right_ops = {}, {}
    for op in structure.descriptor.operations:
        parts = split_pair(op)
        if parts is None:
            raise InvalidStructure(f"{op!r} is not a pair operation")
        left_ops[op], right_ops[op] = parts
    return (left_map, left_ops), (right_map, right_ops)


# -- isomorphic replacement ---------------------------------------------------

def transport_structure(structure: FiniteStructure, bijection: dict) -> FiniteStructure:
    """Relabel a structure's carrier along a bijection; tables, properties,
    and tags ride along unchanged."""
    missing = [p for p in sorted(structure.carrier) if p not in bijection]
    if missing:
        raise NonBijectiveReplacement("?", f"map undefined on {missing}")
    images = [bijection[p] for p in sorted(structure.carrier)]
    if len(set(images)) != len(images):
        raise NonBijectiveReplacement("?", "map collapses two carrier points")
    tables = [
        OperationTable.from_mapping(
            t.name,
            images,
            {(bijection[a], bijection[b]): bijection[c] for a, b, c in t.entries},
        )
        for t in structure.tables
    ]
    return make_structure(images, tables, structure.descriptor.properties, structure.descriptor.nonalg)


def replace_isomorphic(s: StructuredSpace, replacements: dict) -> StructuredSpace:
    """Swap each neighborhood for an isomorphic copy along the given carrier
    bijections (missing names keep the identity). The new carriers may overlap
    each other arbitrarily; the result is rebuilt from the transported family."""
    _require_valid(s)
    new_family = {}
    for name in s.names():
        structure = s.neighborhoods[name]
        bijection = replacements.get(name)
        if bijection is None:
            bijection = {p: p for p in structure.carrier}
        try:
            new_family[name] = transport_structure(structure, bijection)
        except NonBijectiveReplacement as err:
            raise NonBijectiveReplacement(name, str(err)) from None

    out = build_from_collection(new_family)
    for name in s.names():
        bijection = replacements.get(name) or {p: p for p in s.neighborhoods[name].carrier}
        ops = {op: op for op in s.neighborhoods[name].descriptor.operations}
        check = is_homomorphism(s.neighborhoods[name], out.neighborhoods[name], ops, bijection)
        if not check.ok:
            raise NonBijectiveReplacement(name, f"transported table is not isomorphic: {check.reason}")
    return out


# -- congruence quotients ------------------------------------------------------

@dataclass
class CongruenceSpec:
    """A partition of one neighborhood's carrier into congruence blocks."""

    neighborhood: str
    blocks: tuple

    def __post_init__(self):
        self.blocks = tuple(sort_sets(frozenset(b) for b in self.blocks))

    def block_of(self) -> dict:
        out = {}
        for b in self.blocks:
            for p in b:
                out[p] = b
        return out


def _check_partition(spec: CongruenceSpec, carrier):
    seen = set()
    for b in spec.blocks:
        if not b:
            raise InvalidStructure(f"{spec.neighborhood!r}: empty congruence block")
        if b & seen:
            raise InvalidStructure(f"{spec.neighborhood!r}: overlapping congruence blocks")
        seen |= b
    if seen != carrier:
        raise InvalidStructure(f"{spec.neighborhood!r}: blocks do not cover the carrier")


def _check_congruence(name, table, block_of):
    m = table.mapping
    elems = sorted(table.carrier)
    for a in elems:
        for a2 in sorted(block_of[a]):
            for b in elems:
                for b2 in sorted(block_of[b]):
                    d1, d2 = (a, b) in m, (a2, b2) in m
                    if d1 != d2:
                        raise NotACongruence(name, (a, a2, b, b2))
                    if d1 and block_of[m[(a, b)]] != block_of[m[(a2, b2)]]:
                        raise NotACongruence(name, (a, a2, b, b2))


def quotient(s: StructuredSpace, specs: dict) -> StructuredSpace:
    """Quotient every neighborhood by its congruence and reassemble.

    Blocks are first checked to be congruences for every operation (matched
    definedness included); the quotient tables are computed on block
    representatives, keep their declared properties (re-verified), and the
    result is rebuilt from the quotient family. Identical blocks arising in
    different neighborhoods share one class label, so carriers glue exactly
    where the original block sets coincide.
    """
    _require_valid(s)
    for name in s.names():
        if name not in specs:
            raise InvalidStructure(f"no congruence spec for neighborhood {name!r}")

    all_blocks = set()
    per_name = {}
    for name in s.names():
        spec = specs[name]
        _check_partition(spec, s.neighborhoods[name].carrier)
        block_of = spec.block_of()
        for t in s.neighborhoods[name].tables:
            _check_congruence(name, t, block_of)
        if len(spec.blocks) < 2:
            raise QuotientTooSmall(name)
        per_name[name] = spec
        all_blocks |= set(spec.blocks)

    label = {b: f"[b{i}]" for i, b in enumerate(sort_sets(all_blocks))}

    quotients = {}
    for name in s.names():
        spec = per_name[name]
        structure = s.neighborhoods[name]
        block_of = spec.block_of()
        carrier = frozenset(label[b] for b in spec.blocks)
        tables = []
        for t in structure.tables:
            entries = {}
            for ba in spec.blocks:
                for bb in spec.blocks:
                    a, b = min(ba), min(bb)
                    if (a, b) in t.mapping:
                        entries[(label[ba], label[bb])] = label[block_of[t.mapping[(a, b)]]]
            tables.append(OperationTable.from_mapping(t.name, carrier, entries))
        q = make_structure(
            carrier, tables, structure.descriptor.properties, structure.descriptor.nonalg
        )
        report = verify_descriptor(q)
        if not report.ok:
            prop, residual = report.failures()[0]
            raise DescriptorLost(name, f"{prop.kind} on {prop.op!r} ({residual.note})")
        quotients[name] = q

    return build_from_collection(quotients)


def _single_op(s: FiniteStructure, op):
    if op is not None:
        return s.table(op)
    if len(s.tables) != 1:
        raise NotAGroup("structure has several operations; name one")
    return s.tables[0]


def _group_data(table):
    from .algebra import _identity_elements

    identities = _identity_elements(table)
    if not identities:
        raise NotAGroup("no two-sided identity element")
    e = identities[0]
    m = table.mapping
    inverse = {}
    for x in sorted(table.carrier):
        ys = [y for y in sorted(table.carrier) if m.get((x, y)) == e and m.get((y, x)) == e]
        if not ys:
            raise NotAGroup(f"{x!r} has no inverse")
        inverse[x] = ys[0]
    return e, inverse


def normal_subgroup_congruence(s: FiniteStructure, subgroup, op=None, name="") -> CongruenceSpec:
    """Coset partition of a verified group by a normal subgroup."""
    from .algebra import GROUP_KINDS

    table = _single_op(s, op)
    declared = s.descriptor.kinds_for(table.name)
    if not GROUP_KINDS <= declared:
        raise NotAGroup(f"descriptor lacks the group properties on {table.name!r}")

    subgroup = frozenset(subgroup)
    if not subgroup <= s.carrier:
        raise NotASubgroup("subgroup is not a subset of the carrier")
    if not subgroup:
        raise NotASubgroup("subgroup is empty")

    m = table.mapping
    e, inverse = _group_data(table)
    if e not in subgroup:
        raise NotASubgroup("identity element missing")
    for a in sorted(subgroup):
        if inverse[a] not in subgroup:
            raise NotASubgroup(f"inverse of {a!r} missing")
        for b in sorted(subgroup):
            if m[(a, b)] not in subgroup:
                raise NotASubgroup(f"{a!r}*{b!r} escapes the subgroup")

    for g in sorted(s.carrier):
        for n in sorted(subgroup):
            conj = m[(m[(g, n)], inverse[g])]
            if conj not in subgroup:
                raise NotNormal((g, n, conj))

    cosets = {frozenset(m[(g, n)] for n in subgroup) for g in s.carrier}
    return CongruenceSpec(name, tuple(sort_sets(cosets)))


# -- direct systems and limits --------------------------------------------------

def _transitive_reflexive_closure(indices, pairs):
    closed = {(i, i) for i in indices} | {tuple(p) for p in pairs}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closed):
            for (c, d) in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    return frozenset(closed)


@dataclass
class DirectSystem:
    """Finite directed family of same-shaped structures with compatible maps.

    `leq` is stored reflexively and transitively closed; `maps` must provide
    a carrier function for every related pair i <= j (f_{i,i} may be omitted
    and defaults to the identity).
    """

    indices: tuple
    leq: frozenset
    algebras: dict
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        self.indices = tuple(sorted(self.indices))
        self.leq = _transitive_reflexive_closure(self.indices, self.leq)
        self.maps = {tuple(k): dict(v) for k, v in self.maps.items()}

    def related(self, i, j) -> bool:
        return (i, j) in self.leq

    def map_for(self, i, j) -> dict:
        if i == j and (i, i) not in self.maps:
            return {x: x for x in self.algebras[i].carrier}
        return self.maps[(i, j)]


@dataclass
class SystemReport:
    problems: list

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_direct_system(d: DirectSystem) -> SystemReport:
    """Directedness, identity and composition laws, and per-map homomorphism
    checks; each failure carries the indices (and element) that break it."""
    problems = []

    for i in d.indices:
        if i not in d.algebras:
            problems.append({"check": "algebra_present", "subject": i,
                             "detail": "index has no algebra"})
    if problems:
        return SystemReport(problems)

    for (i, j) in sorted(d.leq):
        if i != j and (j, i) in d.leq:
            problems.append({"check": "antisymmetry", "subject": (i, j),
                             "detail": "index order has a two-way pair"})

    for i in d.indices:
        for j in d.indices:
            if not any(d.related(i, k) and d.related(j, k) for k in d.indices):
                problems.append({"check": "directed", "subject": (i, j),
                                 "detail": "pair has no upper bound"})

    first = d.indices[0]
    base = d.algebras[first].descriptor
    for i in d.indices[1:]:
        other = d.algebras[i].descriptor
        if other.operations != base.operations:
            problems.append({"check": "same_operations", "subject": i,
                             "detail": "operation names differ across algebras"})
        elif not descriptors_equivalent(base, other).ok:
            problems.append({"check": "same_structure", "subject": i,
                             "detail": "descriptor differs from the first algebra"})

    for (i, j) in sorted(d.leq):
        if i == j:
            continue
        if (i, j) not in d.maps:
            problems.append({"check": "map_present", "subject": (i, j),
                             "detail": "related pair has no carrier map"})

    if problems:
        return SystemReport(problems)

    for (i, j) in sorted(d.leq):
        f = d.map_for(i, j)
        a, b = d.algebras[i], d.algebras[j]
        if i == j:
            bad = [x for x in sorted(a.carrier) if f.get(x) != x]
            if bad:
                problems.append({"check": "identity_map", "subject": (i, i),
                                 "detail": f"self map moves {bad[0]!r}", "witness": bad[0]})
            continue
        missing = [x for x in sorted(a.carrier) if x not in f]
        if missing:
            problems.append({"check": "map_total", "subject": (i, j),
                             "detail": f"map undefined on {missing[0]!r}", "witness": missing[0]})
            continue
        escapes = [x for x in sorted(a.carrier) if f[x] not in b.carrier]
        if escapes:
            problems.append({"check": "map_into_target", "subject": (i, j),
                             "detail": f"map sends {escapes[0]!r} outside the target",
                             "witness": escapes[0]})
            continue
        hom = is_homomorphism(a, b, {op: op for op in a.descriptor.operations}, f)
        if not hom.ok:
            problems.append({"check": "homomorphism", "subject": (i, j),
                             "detail": hom.reason, "witness": hom.witness})

    if problems:
        return SystemReport(problems)

    for i in d.indices:
        for j in d.indices:
            for k in d.indices:
                if not (d.related(i, j) and d.related(j, k)):
                    continue
                fij, fjk, fik = d.map_for(i, j), d.map_for(j, k), d.map_for(i, k)
                for x in sorted(d.algebras[i].carrier):
                    if fjk[fij[x]] != fik[x]:
                        problems.append({
                            "check": "composition", "subject": (i, j, k),
                            "detail": f"f[{j}->{k}] o f[{i}->{j}] disagrees with f[{i}->{k}] at {x!r}",
                            "witness": (i, j, k, x),
                        })
                        break

    return SystemReport(problems)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return list(groups.values())


def direct_limit(d: DirectSystem):
    """Quotient of the disjoint union by the pushforward identifications.

    Elements (i, x) and (j, y) share a class when some upper index maps both
    onto one element; classes become points labelled in canonical order, and
    each operation is computed through any common upper index, with every
    choice of representatives checked to land in the same class. Returns the
    limit structure and the canonical maps {index: {element: class label}}.
    """
    report = validate_direct_system(d)
    if not report.ok:
        raise InvalidDirectSystem(report.problems[0])

    nodes = [(i, x) for i in d.indices for x in sorted(d.algebras[i].carrier)]
    uf = _UnionFind(nodes)
    for (i, j) in sorted(d.leq):
        if i == j:
            continue
        f = d.map_for(i, j)
        for x in sorted(d.algebras[i].carrier):
            uf.union((i, x), (j, f[x]))

    classes = sorted(uf.classes(), key=lambda c: tuple(sorted(c)))
    label = {}
    for idx, cls in enumerate(classes):
        for node in cls:
            label[node] = f"[b{idx}]"
    carrier = frozenset(f"[b{i}]" for i in range(len(classes)))

    first = d.algebras[d.indices[0]]
    tables = []
    for op in first.descriptor.operations:
        entries = {}
        for ca in classes:
            for cb in classes:
                la, lb = label[min(ca)], label[min(cb)]
                results = set()
                for (i, x) in sorted(ca):
                    for (j, y) in sorted(cb):
                        for k in d.indices:
                            if not (d.related(i, k) and d.related(j, k)):
                                continue
                            xk = d.map_for(i, k)[x]
                            yk = d.map_for(j, k)[y]
                            value = d.algebras[k].table(op).mapping.get((xk, yk))
                            if value is not None:
                                results.add(label[(k, value)])
                if len(results) > 1:
                    raise IllDefinedOperation(op, (la, lb, tuple(sorted(results))))
                if results:
                    entries[(la, lb)] = results.pop()
        tables.append(OperationTable.from_mapping(op, carrier, entries))

    limit = make_structure(
        carrier, tables, first.descriptor.properties, first.descriptor.nonalg
    )
    check = verify_descriptor(limit)
    if not check.ok:
        prop, residual = check.failures()[0]
        raise DescriptorLost("limit", f"{prop.kind} on {prop.op!r} ({residual.note})")

    phi = {
        i: {x: label[(i, x)] for x in sorted(d.algebras[i].carrier)}
        for i in d.indices
    }
    return limit, phi


def union_of_direct_limits(systems, names=None, glue=None) -> StructuredSpace:
    """Take every system's limit and assemble the limits into one space.

    Class labels are made globally unique per system ("s0:[b0]", ...) unless
    `glue` maps (system position, class label) pairs onto shared point ids.
    """
    systems = list(systems)
    if not systems:
        raise InvalidStructure("no direct systems given")
    names = list(names) if names is not None else [f"L{i}" for i in range(len(systems))]
    glue = dict(glue or {})

    family = {}
    for pos, d in enumerate(systems):
        limit, _ = direct_limit(d)
        if len(limit.carrier) < 2:
            raise TooSmall(f"limit of system {pos} has fewer than two points")
        rename = {
            p: glue.get((pos, p), f"s{pos}:{p}")
            for p in limit.carrier
        }
        family[names[pos]] = transport_structure(limit, rename)
    return build_from_collection(family)
