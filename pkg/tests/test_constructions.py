import pytest

from structspace import (
    CLOSURE,
    CongruenceSpec,
    DirectSystem,
    build_from_collection,
    direct_limit,
    find_isomorphism,
    is_homomorphism,
    normal_subgroup_congruence,
    product,
    quotient,
    replace_isomorphic,
    union_of_direct_limits,
    validate,
    validate_direct_system,
)
from structspace.canon import make_pair
from structspace.constructions import projections, transport_structure
from structspace.errors import (
    NonBijectiveReplacement,
    NotACongruence,
    NotAGroup,
    NotASubgroup,
    NotNormal,
    QuotientTooSmall,
    TooSmall,
)

from helpers import (
    closure_magma,
    cyclic_group,
    f1_space,
    klein_group,
    s3_group,
)


def doubling_chain(sizes=("2", "4", "8")):
    """Chain of cyclic groups Z_a -> Z_b -> ... linked by x -> (b/a) x."""
    algebras = {n: cyclic_group(int(n)) for n in sizes}
    leq = set()
    maps = {}
    for i, a in enumerate(sizes):
        for b in sizes[i + 1:]:
            leq.add((a, b))
            factor = int(b) // int(a)
            maps[(a, b)] = {str(x): str(x * factor) for x in range(int(a))}
    return DirectSystem(tuple(sizes), frozenset(leq), algebras, maps)


class TestProduct:
    def test_operation_count_multiplies(self):
        t1 = cyclic_group(2, name="add")
        two_ops = build_from_collection({"U": transport_structure(t1, {p: p for p in t1.carrier})})
        # left space has 1 op per neighborhood; make a 2-op right factor
        from structspace import OperationTable, PropertySpec, make_structure
        from helpers import cyclic_table

        tables = [cyclic_table(2, "add"), cyclic_table(2, "mul")]
        right_structure = make_structure(
            tables[0].carrier, tables,
            [PropertySpec(CLOSURE, "add"), PropertySpec(CLOSURE, "mul")],
        )
        right = build_from_collection({"V": right_structure})
        prod = product(two_ops, right)
        for name in prod.names():
            assert len(prod.neighborhoods[name].descriptor.operations) == 1 * 2

    def test_z2_times_z2_is_klein(self):
        z2 = build_from_collection({"G": cyclic_group(2)})
        prod = product(z2, z2)
        assert validate(prod).ok
        (name,) = prod.names()
        iso = find_isomorphism(prod.neighborhoods[name], klein_group())
        assert iso is not None

    def test_projections_are_homomorphisms(self):
        left = build_from_collection({"G": cyclic_group(2)})
        right = build_from_collection({"H": cyclic_group(3)})
        prod = product(left, right)
        (name,) = prod.names()
        structure = prod.neighborhoods[name]
        (lmap, lops), (rmap, rops) = projections(structure)
        assert is_homomorphism(structure, left.neighborhoods["G"], lops, lmap).ok
        assert is_homomorphism(structure, right.neighborhoods["H"], rops, rmap).ok

    def test_assignment_is_componentwise(self):
        prod = product(f1_space(), f1_space())
        assert prod.assignment[make_pair("1", "3")] == make_pair("U_a", "U_b")

    def test_pair_properties_attached_and_verified(self):
        z2 = build_from_collection({"G": cyclic_group(2)})
        prod = product(z2, z2)
        (name,) = prod.names()
        props = prod.neighborhoods[name].descriptor.properties
        kinds = {p.kind for p in props}
        assert "(Closure|Closure)" in kinds
        assert "(Identity|Invertibility)" in kinds
        assert len(props) == 25  # five properties paired with five


class TestReplaceIsomorphic:
    def test_relabelled_f1(self):
        space = f1_space()
        out = replace_isomorphic(space, {
            "U_a": {"1": "a", "2": "b"},
            "U_b": {"2": "b", "3": "c"},
        })
        assert sorted(out.universe) == ["a", "b", "c"]
        assert validate(out).ok
        for name in space.names():
            assert find_isomorphism(space.neighborhoods[name], out.neighborhoods[name])

    def test_identity_replacement_is_identity(self):
        space = f1_space()
        out = replace_isomorphic(space, {})
        assert out.universe == space.universe
        assert out.assignment == space.assignment

    def test_collapsing_map_rejected(self):
        with pytest.raises(NonBijectiveReplacement):
            replace_isomorphic(f1_space(), {"U_a": {"1": "x", "2": "x"}})


class TestQuotient:
    def test_z6_by_03_is_z3(self):
        z6 = cyclic_group(6)
        space = build_from_collection({"G": z6})
        spec = normal_subgroup_congruence(z6, {"0", "3"}, name="G")
        out = quotient(space, {"G": spec})
        assert validate(out).ok
        assert len(out.universe) == 3
        assert find_isomorphism(out.neighborhoods["G"], cyclic_group(3)) is not None

    def test_singleton_blocks_give_isomorphic_copy(self):
        space = f1_space()
        specs = {
            name: CongruenceSpec(name, tuple(frozenset({p}) for p in space.carrier(name)))
            for name in space.names()
        }
        out = quotient(space, specs)
        assert validate(out).ok
        for name in space.names():
            assert find_isomorphism(space.neighborhoods[name], out.neighborhoods[name])

    def test_z4_bad_blocks_rejected_with_witness(self):
        space = build_from_collection({"G": cyclic_group(4)})
        spec = CongruenceSpec("G", (frozenset({"0", "1"}), frozenset({"2", "3"})))
        with pytest.raises(NotACongruence) as err:
            quotient(space, {"G": spec})
        assert err.value.witness == ("0", "1", "0", "1")

    def test_whole_carrier_block_too_small(self):
        space = build_from_collection({"G": cyclic_group(4)})
        spec = CongruenceSpec("G", (frozenset({"0", "1", "2", "3"}),))
        with pytest.raises(QuotientTooSmall):
            quotient(space, {"G": spec})

    def test_lagrange_count(self):
        z6 = cyclic_group(6)
        space = build_from_collection({"G": z6})
        spec = normal_subgroup_congruence(z6, {"0", "2", "4"}, name="G")
        out = quotient(space, {"G": spec})
        assert len(out.carrier("G")) == 2

    def test_shared_blocks_glue_across_neighborhoods(self):
        space = f1_space()
        specs = {
            "U_a": CongruenceSpec("U_a", (frozenset({"1"}), frozenset({"2"}))),
            "U_b": CongruenceSpec("U_b", (frozenset({"2"}), frozenset({"3"}))),
        }
        out = quotient(space, specs)
        # block {2} appears in both neighborhoods and becomes one shared point
        assert len(out.universe) == 3
        assert out.carrier("U_a") & out.carrier("U_b")


class TestNormalSubgroup:
    def test_z6_cosets(self):
        spec = normal_subgroup_congruence(cyclic_group(6), {"0", "3"})
        assert [sorted(b) for b in spec.blocks] == [["0", "3"], ["1", "4"], ["2", "5"]]

    def test_trivial_subgroup_gives_singletons(self):
        spec = normal_subgroup_congruence(cyclic_group(4), {"0"})
        assert all(len(b) == 1 for b in spec.blocks)

    def test_s3_two_element_subgroup_not_normal(self):
        s3 = s3_group()
        # {identity, transposition} is a subgroup but not normal
        with pytest.raises(NotNormal) as err:
            normal_subgroup_congruence(s3, {"012", "021"})
        g, n, conj = err.value.witness
        assert n == "021" and conj not in {"012", "021"}

    def test_not_closed_subset_rejected(self):
        with pytest.raises(NotASubgroup):
            normal_subgroup_congruence(cyclic_group(6), {"0", "1"})

    def test_descriptor_must_declare_group_properties(self):
        with pytest.raises(NotAGroup):
            normal_subgroup_congruence(closure_magma(["0", "1"]), {"0"})


class TestDirectSystem:
    def test_doubling_chain_valid(self):
        assert validate_direct_system(doubling_chain()).ok

    def test_corrupted_composite_rejected_with_triple(self):
        system = doubling_chain()
        # the zero map is still a homomorphism but no longer the composite
        system.maps[("2", "8")] = {"0": "0", "1": "0"}
        report = validate_direct_system(system)
        assert not report.ok
        problem = next(p for p in report.problems if p["check"] == "composition")
        assert problem["witness"] == ("2", "4", "8", "1")

    def test_antichain_fails_directedness(self):
        system = DirectSystem(
            ("a", "b"), frozenset(),
            {"a": cyclic_group(2), "b": cyclic_group(2)},
        )
        report = validate_direct_system(system)
        assert not report.ok
        assert any(p["check"] == "directed" for p in report.problems)

    def test_non_homomorphic_map_flagged(self):
        system = doubling_chain(("2", "4"))
        system.maps[("2", "4")] = {"0": "0", "1": "1"}
        report = validate_direct_system(system)
        assert any(p["check"] == "homomorphism" for p in report.problems)


class TestDirectLimit:
    def test_chain_z2_to_z4(self):
        system = doubling_chain(("2", "4"))
        limit, phi = direct_limit(system)
        assert len(limit.carrier) == 4
        assert find_isomorphism(limit, cyclic_group(4)) is not None
        # cone maps are homomorphisms commuting with the system maps
        for i in system.indices:
            mapping = phi[i]
            assert is_homomorphism(
                system.algebras[i], limit,
                {op: op for op in limit.descriptor.operations}, mapping,
            ).ok
        f = system.maps[("2", "4")]
        assert all(phi["4"][f[x]] == phi["2"][x] for x in f)

    def test_single_algebra_limit(self):
        system = DirectSystem(("a",), frozenset(), {"a": cyclic_group(3)})
        limit, phi = direct_limit(system)
        assert find_isomorphism(limit, cyclic_group(3)) is not None
        assert len(phi["a"]) == 3

    def test_limit_in_bijection_with_maximum(self):
        system = doubling_chain(("2", "4", "8"))
        limit, _ = direct_limit(system)
        assert len(limit.carrier) == len(system.algebras["8"].carrier)

    def test_carrier_bound(self):
        system = doubling_chain(("2", "4"))
        limit, _ = direct_limit(system)
        assert len(limit.carrier) <= 2 + 4


class TestUnionOfDirectLimits:
    def test_two_disjoint_chains(self):
        space = union_of_direct_limits([doubling_chain(("2", "4")), doubling_chain(("2", "4"))])
        assert validate(space).ok
        assert space.names() == ["L0", "L1"]
        from structspace import is_partitionable

        assert is_partitionable(space).ok

    def test_single_system(self):
        space = union_of_direct_limits([doubling_chain(("2", "4"))])
        assert space.names() == ["L0"]
        assert validate(space).ok

    def test_one_point_limit_rejected(self):
        from structspace import OperationTable, PropertySpec, make_structure

        single = make_structure(
            ["p"],
            [OperationTable.from_mapping("op", ["p"], {("p", "p"): "p"})],
            [PropertySpec(CLOSURE, "op")],
        )
        system = DirectSystem(("a",), frozenset(), {"a": single})
        with pytest.raises(TooSmall):
            union_of_direct_limits([system])

    def test_gluing_map_shares_points(self):
        glue = {(0, "[b0]"): "x", (1, "[b0]"): "x"}
        space = union_of_direct_limits(
            [doubling_chain(("2", "4")), doubling_chain(("2", "4"))], glue=glue
        )
        assert "x" in space.universe
        assert space.carrier("L0") & space.carrier("L1") == frozenset({"x"})
