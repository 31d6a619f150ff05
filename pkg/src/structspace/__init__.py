"""Finite structured spaces: topologies whose fixed neighborhoods carry
operation-table algebraic structures, with the constructions, measure
analyses, and lattice correspondence built on top of them."""

from .algebra import (
    ASSOCIATIVITY,
    ATOMIC_KINDS,
    CLOSURE,
    COMMUTATIVITY,
    IDENTITY,
    INVERTIBILITY,
    LEFT_IDENTITY,
    RIGHT_IDENTITY,
    FiniteStructure,
    NonAlgTag,
    OperationTable,
    PropertySpec,
    Residual,
    StructureDescriptor,
    descriptors_equivalent,
    evaluate_encoding,
    find_isomorphism,
    is_homomorphism,
    make_structure,
    verify_descriptor,
)
from .constructions import (
    CongruenceSpec,
    DirectSystem,
    direct_limit,
    normal_subgroup_congruence,
    product,
    quotient,
    replace_isomorphic,
    union_of_direct_limits,
    validate_direct_system,
)
from .lattice import (
    HAssignment,
    LatticeVerdict,
    QuotientPoset,
    h_map,
    induced_poset,
    is_h_surjective,
    lattice_to_structured_space,
    poset_to_dot,
    verify_join_semilattice,
    verify_lattice,
)
from .measure import (
    INF,
    AtomMeasure,
    ExtensionProposal,
    NullAdditionSpec,
    apply_null_addition,
    classify_restriction,
    essential_part,
    find_mu_la_partition,
    homogeneity,
    is_mu_union,
    is_partitionable,
    measure_of,
)
from .space import (
    StructuredSpace,
    build_from_collection,
    descriptor_catalog,
    modified_structure_map,
    structure_map,
    subspace,
    validate,
)
from .topology import (
    FiniteSpace,
    borel_atoms,
    check_complete_openness,
    connectivity_report,
    extension_topology,
    generate_topology,
    is_neighborhood,
    is_topology,
    product_topology,
)
from .verdict import Verdict

__version__ = "0.1.0"
