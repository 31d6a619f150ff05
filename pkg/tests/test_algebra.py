from itertools import product as cartesian

import pytest
from hypothesis import given, settings, strategies as st

from structspace import (
    ASSOCIATIVITY,
    ATOMIC_KINDS,
    CLOSURE,
    COMMUTATIVITY,
    IDENTITY,
    INVERTIBILITY,
    LEFT_IDENTITY,
    RIGHT_IDENTITY,
    NonAlgTag,
    OperationTable,
    PropertySpec,
    StructureDescriptor,
    descriptors_equivalent,
    evaluate_encoding,
    find_isomorphism,
    is_homomorphism,
    make_structure,
    verify_descriptor,
)
from structspace.errors import (
    InvalidStructure,
    MissingIdentityPrerequisite,
    UnknownOperation,
)

from helpers import (
    ABELIAN_PROPS,
    ORACLES,
    cyclic_group,
    cyclic_table,
    klein_group,
    left_projection_magma,
    random_descriptor,
)


def bare_structure(table, declare=(CLOSURE,)):
    return make_structure(table.carrier, [table], [PropertySpec(k, table.name) for k in declare])


def table_from_values(carrier, values, name="op"):
    """Total table from a value tuple over the canonical pair order."""
    carrier = sorted(carrier)
    pairs = [(a, b) for a in carrier for b in carrier]
    return OperationTable.from_mapping(name, carrier, dict(zip(pairs, values)))


class TestEvaluateEncoding:
    def test_z3_commutative(self):
        z3 = cyclic_group(3)
        assert evaluate_encoding(z3, PropertySpec(COMMUTATIVITY, "add")).ok

    def test_left_projection_not_commutative(self):
        magma = left_projection_magma()
        residual = evaluate_encoding(magma, PropertySpec(COMMUTATIVITY, "proj"))
        assert not residual.ok
        assert residual.witness == ("0", "1")

    def test_left_projection_has_right_identity(self):
        magma = left_projection_magma()
        assert evaluate_encoding(magma, PropertySpec(RIGHT_IDENTITY, "proj")).ok

    def test_left_projection_has_no_left_identity(self):
        magma = left_projection_magma()
        assert not evaluate_encoding(magma, PropertySpec(LEFT_IDENTITY, "proj")).ok

    def test_partial_table_closure_witness(self):
        table = OperationTable.from_mapping(
            "op", ["0", "1"], {("0", "0"): "0", ("0", "1"): "0", ("1", "0"): "1"}
        )
        residual = evaluate_encoding(bare_structure(table, declare=()), PropertySpec(CLOSURE, "op"))
        assert not residual.ok
        assert residual.witness == ("1", "1")

    def test_unknown_operation(self):
        with pytest.raises(UnknownOperation):
            evaluate_encoding(cyclic_group(3), PropertySpec(CLOSURE, "mul"))

    def test_invertibility_requires_declared_identity(self):
        z3 = cyclic_group(3, props=(CLOSURE,))
        with pytest.raises(MissingIdentityPrerequisite):
            evaluate_encoding(z3, PropertySpec(INVERTIBILITY, "add"))

    def test_invertibility_on_group(self):
        assert evaluate_encoding(cyclic_group(4), PropertySpec(INVERTIBILITY, "add")).ok

    def test_invertibility_witness_without_inverse(self):
        # multiplication mod 4 has identity 1 but 0 and 2 lack inverses
        elems = ["0", "1", "2", "3"]
        mapping = {(a, b): str(int(a) * int(b) % 4) for a in elems for b in elems}
        table = OperationTable.from_mapping("mul", elems, mapping)
        s = make_structure(elems, [table],
                           [PropertySpec(IDENTITY, "mul"), PropertySpec(INVERTIBILITY, "mul")])
        residual = evaluate_encoding(s, PropertySpec(INVERTIBILITY, "mul"))
        assert not residual.ok
        assert residual.witness == ("1", "0")

    def test_associativity_on_partial_mismatch(self):
        # (0*0)*0 = 1*0 is defined but 0*(0*0) = 0*1 is not
        table = OperationTable.from_mapping(
            "op", ["0", "1"], {("0", "0"): "1", ("1", "0"): "0"}
        )
        residual = evaluate_encoding(bare_structure(table, declare=()), PropertySpec(ASSOCIATIVITY, "op"))
        assert not residual.ok
        assert residual.witness == ("0", "0", "0")


class TestOracleAgreement:
    """The residual machinery against the direct predicates, exhaustively."""

    def test_all_total_tables_on_two_points(self):
        elems = ["0", "1"]
        for values in cartesian(elems, repeat=4):
            table = table_from_values(elems, values)
            s = make_structure(elems, [table],
                               [PropertySpec(IDENTITY, "op"), PropertySpec(INVERTIBILITY, "op")])
            for kind in ATOMIC_KINDS:
                expected = ORACLES[kind](elems, table.mapping)
                got = evaluate_encoding(s, PropertySpec(kind, "op")).ok
                assert got == expected, (kind, values)

    @settings(max_examples=150, derandomize=True)
    @given(st.lists(st.sampled_from(["0", "1", "2"]), min_size=9, max_size=9))
    def test_sampled_total_tables_on_three_points(self, values):
        elems = ["0", "1", "2"]
        table = table_from_values(elems, tuple(values))
        s = make_structure(elems, [table],
                           [PropertySpec(IDENTITY, "op"), PropertySpec(INVERTIBILITY, "op")])
        for kind in ATOMIC_KINDS:
            assert evaluate_encoding(s, PropertySpec(kind, "op")).ok == ORACLES[kind](elems, table.mapping)

    def test_closure_zero_on_every_total_table(self):
        elems = ["0", "1"]
        for values in cartesian(elems, repeat=4):
            table = table_from_values(elems, values)
            assert evaluate_encoding(bare_structure(table), PropertySpec(CLOSURE, "op")).ok


class TestVerifyDescriptor:
    def test_z3_abelian_group_passes(self):
        report = verify_descriptor(cyclic_group(3))
        assert report.ok
        assert len(report.entries) == len(ABELIAN_PROPS)

    def test_declared_commutativity_fails_with_witness(self):
        magma = left_projection_magma(declare=(CLOSURE, COMMUTATIVITY))
        report = verify_descriptor(magma)
        assert not report.ok
        (spec, residual), = report.failures()
        assert spec.kind == COMMUTATIVITY
        assert residual.witness == ("0", "1")

    def test_empty_property_set_passes_vacuously(self):
        magma = left_projection_magma(declare=())
        assert verify_descriptor(magma).ok


class TestDescriptorEquivalence:
    def test_groups_under_different_operation_names(self):
        d1 = cyclic_group(3, name="add").descriptor
        d2 = cyclic_group(4, name="mul").descriptor
        verdict = descriptors_equivalent(d1, d2)
        assert verdict.ok
        assert verdict.witness == (("add", "mul"),)

    def test_group_vs_closure_only_magma(self):
        group = cyclic_group(3).descriptor
        magma = cyclic_group(3, props=(CLOSURE,)).descriptor
        assert not descriptors_equivalent(group, magma).ok

    def test_operation_count_mismatch(self):
        join = OperationTable.from_mapping("j", ["0", "1"], {})
        meet = OperationTable.from_mapping("m", ["0", "1"], {})
        two = make_structure(["0", "1"], [join, meet]).descriptor
        one = make_structure(["0", "1"], [join]).descriptor
        verdict = descriptors_equivalent(two, one)
        assert not verdict.ok
        assert verdict.reason == "different operation counts"

    def test_nonalg_tags_must_match(self):
        plain = cyclic_group(3).descriptor
        tagged = StructureDescriptor(
            plain.operations, plain.properties, (NonAlgTag("metric", "d"),)
        )
        assert not descriptors_equivalent(plain, tagged).ok

    def test_bijection_must_match_property_sets_per_operation(self):
        t1 = cyclic_table(2, "a")
        t2 = cyclic_table(2, "b")
        d1 = make_structure(t1.carrier, [t1, t2],
                            [PropertySpec(COMMUTATIVITY, "a")]).descriptor
        d2 = make_structure(t1.carrier, [t1, t2],
                            [PropertySpec(COMMUTATIVITY, "b")]).descriptor
        verdict = descriptors_equivalent(d1, d2)
        assert verdict.ok
        assert verdict.witness == (("a", "b"), ("b", "a"))

    @settings(max_examples=80, derandomize=True)
    @given(st.randoms(use_true_random=False))
    def test_equivalence_relation_laws(self, rng):
        pool = [random_descriptor(rng) for _ in range(4)]
        for d in pool:
            assert descriptors_equivalent(d, d).ok
        for a in pool:
            for b in pool:
                assert descriptors_equivalent(a, b).ok == descriptors_equivalent(b, a).ok
        for a in pool:
            for b in pool:
                for c in pool:
                    if descriptors_equivalent(a, b).ok and descriptors_equivalent(b, c).ok:
                        assert descriptors_equivalent(a, c).ok


class TestHomomorphism:
    def test_z2_into_z4_by_doubling(self):
        z2, z4 = cyclic_group(2), cyclic_group(4)
        verdict = is_homomorphism(z2, z4, {"add": "add"}, {"0": "0", "1": "2"})
        assert verdict.ok

    def test_identity_map_is_homomorphism(self):
        z3 = cyclic_group(3)
        assert is_homomorphism(z3, z3, {"add": "add"}, {p: p for p in z3.carrier}).ok

    def test_non_homomorphism_witnessed(self):
        z2, z4 = cyclic_group(2), cyclic_group(4)
        verdict = is_homomorphism(z2, z4, {"add": "add"}, {"0": "0", "1": "1"})
        assert not verdict.ok
        assert verdict.witness == ("add", "1", "1")

    def test_partial_mapping_rejected(self):
        z2 = cyclic_group(2)
        with pytest.raises(InvalidStructure):
            is_homomorphism(z2, z2, {"add": "add"}, {"0": "0"})


class TestFindIsomorphism:
    def test_relabelled_z3(self):
        z3 = cyclic_group(3)
        relabelled = make_structure(
            ["x", "y", "z"],
            [OperationTable.from_mapping(
                "add", ["x", "y", "z"],
                {(a, b): "xyz"[(int(ka) + int(kb)) % 3]
                 for a, ka in zip("xyz", "012") for b, kb in zip("xyz", "012")},
            )],
            [PropertySpec(k, "add") for k in ABELIAN_PROPS],
        )
        iso = find_isomorphism(z3, relabelled)
        assert iso is not None
        assert is_homomorphism(z3, relabelled, iso.op_pairing, iso.mapping).ok

    def test_z4_vs_klein_not_isomorphic(self):
        assert find_isomorphism(cyclic_group(4), klein_group()) is None

    def test_size_mismatch_immediate(self):
        assert find_isomorphism(cyclic_group(2), cyclic_group(3)) is None

    def test_symmetric(self):
        a, b = cyclic_group(3), cyclic_group(3, name="mul")
        assert (find_isomorphism(a, b) is None) == (find_isomorphism(b, a) is None)


class TestStructuralInvariants:
    def test_table_entry_outside_carrier(self):
        with pytest.raises(InvalidStructure):
            OperationTable.from_mapping("op", ["0"], {("0", "0"): "1"})

    def test_descriptor_requires_identity_with_invertibility(self):
        table = cyclic_table(2)
        with pytest.raises(MissingIdentityPrerequisite):
            make_structure(table.carrier, [table], [PropertySpec(INVERTIBILITY, "add")])

    def test_property_on_unknown_operation(self):
        table = cyclic_table(2)
        with pytest.raises(UnknownOperation):
            make_structure(table.carrier, [table], [PropertySpec(CLOSURE, "mul")])

    def test_pair_kind_accepted(self):
        assert PropertySpec("(Closure|Identity)", "op").kind == "(Closure|Identity)"

    def test_invalid_kind_rejected(self):
        with pytest.raises(InvalidStructure):
            PropertySpec("Totality", "op")
