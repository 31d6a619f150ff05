"""Independent oracles and shared fixtures for the test suite.

The oracles deliberately avoid the library's own code paths: the topology
oracle is a naive pairwise-closure fixpoint, the property oracles are direct
predicates over raw mapping dicts, and the bound oracle works on boolean
matrices. Expected values frozen into tests were computed with these.
"""

from __future__ import annotations

from itertools import product as cartesian

from structspace import (
    ASSOCIATIVITY,
    CLOSURE,
    COMMUTATIVITY,
    IDENTITY,
    INVERTIBILITY,
    AtomMeasure,
    OperationTable,
    PropertySpec,
    StructuredSpace,
    build_from_collection,
    make_structure,
)

GROUP_PROPS = (CLOSURE, ASSOCIATIVITY, IDENTITY, INVERTIBILITY)
ABELIAN_PROPS = GROUP_PROPS + (COMMUTATIVITY,)


# -- topology oracle ----------------------------------------------------------

def fixpoint_topology_oracle(universe, subbasis):
    """Add pairwise unions and intersections (plus {} and the universe) until
    nothing changes."""
    universe = frozenset(universe)
    family = {frozenset(s) for s in subbasis}
    family.add(frozenset())
    family.add(universe)
    changed = True
    while changed:
        changed = False
        current = list(family)
        for i, a in enumerate(current):
            for b in current[i:]:
                for candidate in (a | b, a & b):
                    if candidate not in family:
                        family.add(candidate)
                        changed = True
    return frozenset(family)


# -- direct property predicates ------------------------------------------------

def oracle_closure(elems, m):
    return all((a, b) in m for a in elems for b in elems)


def oracle_commutative(elems, m):
    return all(
        ((a, b) in m) == ((b, a) in m) and m.get((a, b)) == m.get((b, a))
        for a in elems for b in elems
    )


def oracle_associative(elems, m):
    for a in elems:
        for b in elems:
            for c in elems:
                ab = m.get((a, b))
                bc = m.get((b, c))
                left = ab is not None and (ab, c) in m
                right = bc is not None and (a, bc) in m
                if left != right:
                    return False
                if left and m[(ab, c)] != m[(a, bc)]:
                    return False
    return True


def oracle_left_identity(elems, m):
    return any(
        all(m.get((e, x), x) == x for x in elems)
        for e in elems
    )


def oracle_right_identity(elems, m):
    return any(
        all(m.get((x, e), x) == x for x in elems)
        for e in elems
    )


def _identity_elems(elems, m):
    return [
        e for e in elems
        if all(m.get((e, x), x) == x and m.get((x, e), x) == x for x in elems)
    ]


def oracle_identity(elems, m):
    return bool(_identity_elems(elems, m))


def oracle_invertible(elems, m):
    return any(
        all(any(m.get((x, y)) == e and m.get((y, x)) == e for y in elems) for x in elems)
        for e in _identity_elems(elems, m)
    )


ORACLES = {
    CLOSURE: oracle_closure,
    COMMUTATIVITY: oracle_commutative,
    ASSOCIATIVITY: oracle_associative,
    "LeftIdentity": oracle_left_identity,
    "RightIdentity": oracle_right_identity,
    IDENTITY: oracle_identity,
    INVERTIBILITY: oracle_invertible,
}


# -- bound oracle on orders ------------------------------------------------------

def bound_oracle(n, leq):
    """Joins/meets via boolean bound vectors; returns (joins, meets) with None
    entries where no least/greatest bound exists."""
    joins, meets = {}, {}
    rel = [[(i, j) in leq for j in range(n)] for i in range(n)]
    for a in range(n):
        for b in range(n):
            ubs = [x for x in range(n) if rel[a][x] and rel[b][x]]
            joins[(a, b)] = next(
                (u for u in ubs if all(rel[u][v] for v in ubs)), None
            )
            lbs = [x for x in range(n) if rel[x][a] and rel[x][b]]
            meets[(a, b)] = next(
                (u for u in lbs if all(rel[v][u] for v in lbs)), None
            )
    return joins, meets


def random_poset(rng, n, edge_prob=0.4):
    """Random partial order on range(n) via a transitively closed random DAG."""
    leq = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                leq.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def all_posets(elements):
    """Every partial order on the given elements (reflexive pairs implied)."""
    pairs = [(a, b) for a in elements for b in elements if a != b]
    for mask in cartesian((False, True), repeat=len(pairs)):
        rel = {(a, a) for a in elements}
        rel.update(p for p, keep in zip(pairs, mask) if keep)
        if any((b, a) in rel for (a, b) in rel if a != b):
            continue
        if any(
            (a, d) not in rel
            for (a, b) in rel for (c, d) in rel if b == c
        ):
            continue
        yield rel


# -- table and structure builders -------------------------------------------------

def cyclic_table(n, name="add"):
    elems = [str(i) for i in range(n)]
    mapping = {(a, b): str((int(a) + int(b)) % n) for a in elems for b in elems}
    return OperationTable.from_mapping(name, elems, mapping)


def cyclic_group(n, name="add", props=ABELIAN_PROPS):
    table = cyclic_table(n, name)
    return make_structure(table.carrier, [table],
                          [PropertySpec(k, name) for k in props])


def klein_group(name="add"):
    elems = ["e", "a", "b", "c"]
    mapping = {}
    for x in elems:
        for y in elems:
            if x == "e":
                mapping[(x, y)] = y
            elif y == "e":
                mapping[(x, y)] = x
            elif x == y:
                mapping[(x, y)] = "e"
            else:
                mapping[(x, y)] = next(z for z in "abc" if z not in (x, y))
    table = OperationTable.from_mapping(name, elems, mapping)
    return make_structure(elems, [table], [PropertySpec(k, name) for k in ABELIAN_PROPS])


def s3_group(name="mul"):
    """Symmetric group on three letters, elements named by their permutation."""
    perms = {
        "012": (0, 1, 2), "021": (0, 2, 1), "102": (1, 0, 2),
        "120": (1, 2, 0), "201": (2, 0, 1), "210": (2, 1, 0),
    }
    names = {v: k for k, v in perms.items()}
    mapping = {}
    for na, pa in perms.items():
        for nb, pb in perms.items():
            composed = tuple(pa[pb[i]] for i in range(3))
            mapping[(na, nb)] = names[composed]
    table = OperationTable.from_mapping(name, list(perms), mapping)
    return make_structure(list(perms), [table], [PropertySpec(k, name) for k in GROUP_PROPS])


def left_projection_magma(declare=(CLOSURE,)):
    elems = ["0", "1"]
    mapping = {(a, b): a for a in elems for b in elems}
    table = OperationTable.from_mapping("proj", elems, mapping)
    return make_structure(elems, [table], [PropertySpec(k, "proj") for k in declare])


def closure_magma(carrier, name="op", result=None):
    """Total constant-valued magma declaring only closure; always verifies."""
    carrier = sorted(carrier)
    target = result if result is not None else carrier[0]
    mapping = {(a, b): target for a in carrier for b in carrier}
    table = OperationTable.from_mapping(name, carrier, mapping)
    return make_structure(carrier, [table], [PropertySpec(CLOSURE, name)])


def random_total_table(rng, carrier, name="op"):
    carrier = sorted(carrier)
    mapping = {(a, b): rng.choice(carrier) for a in carrier for b in carrier}
    return OperationTable.from_mapping(name, carrier, mapping)


def random_closure_structure(rng, carrier, name="op"):
    table = random_total_table(rng, carrier, name)
    return make_structure(table.carrier, [table], [PropertySpec(CLOSURE, name)])


def f1_space() -> StructuredSpace:
    """Two overlapping two-point magmas on {1,2,3}; the running fixture."""
    return build_from_collection({
        "U_a": closure_magma(["1", "2"]),
        "U_b": closure_magma(["2", "3"]),
    })


def f1_measure(space, w1="1", w2="1", w3="0") -> AtomMeasure:
    return AtomMeasure.from_point_weights(space.space, {"1": w1, "2": w2, "3": w3})


# -- random generators for acceptance drivers ---------------------------------------

def random_subbasis(rng, universe, max_sets=4):
    universe = sorted(universe)
    count = rng.randint(0, max_sets)
    out = []
    for _ in range(count):
        size = rng.randint(0, len(universe))
        out.append(frozenset(rng.sample(universe, size)))
    return out


def random_structured_space(rng, points, max_neighborhoods=3):
    """Random space of overlapping closure-only magmas over a point pool."""
    points = sorted(points)
    k = rng.randint(1, max_neighborhoods)
    family = {}
    for i in range(k):
        size = rng.randint(2, len(points))
        carrier = sorted(rng.sample(points, size))
        family[f"N{i}"] = random_closure_structure(rng, carrier, name=f"op{i}")
    return build_from_collection(family)


def random_descriptor(rng):
    """Descriptor over a small random structure (for equivalence-law pools)."""
    n_ops = rng.randint(1, 3)
    op_names = [f"op{i}" for i in range(n_ops)]
    kind_pool = [CLOSURE, COMMUTATIVITY, ASSOCIATIVITY, IDENTITY]
    properties = []
    for op in op_names:
        for kind in rng.sample(kind_pool, rng.randint(0, len(kind_pool))):
            properties.append(PropertySpec(kind, op))
    tags = []
    if rng.random() < 0.3:
        tags.append(("metric", "d"))
    from structspace import NonAlgTag, StructureDescriptor

    return StructureDescriptor(
        tuple(sorted(op_names)),
        frozenset(properties),
        tuple(sorted(NonAlgTag(l, p) for l, p in tags)),
    )
