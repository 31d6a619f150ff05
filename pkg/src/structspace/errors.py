"""Exception hierarchy shared by all modules."""


class StructSpaceError(Exception):
    """Base class for every error raised by this package."""


# -- topology ---------------------------------------------------------------

class MemberOutsideUniverse(StructSpaceError):
    def __init__(self, subset, point):
        self.subset = subset
        self.point = point
        super().__init__(f"point {point!r} of {sorted(subset)} is outside the universe")


class PointOutsideUniverse(StructSpaceError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"point {point!r} is outside the universe")


class OverlapWithUniverse(StructSpaceError):
    def __init__(self, points):
        self.points = points
        super().__init__(f"extension points {sorted(points)} already belong to the universe")


class NotATopology(StructSpaceError):
    """A family of sets failed a topology invariant at construction time."""


# -- algebra ----------------------------------------------------------------

class InvalidStructure(StructSpaceError):
    """An operation table or descriptor violates a structural invariant."""


class UnknownOperation(StructSpaceError):
    def __init__(self, op):
        self.op = op
        super().__init__(f"operation {op!r} is not defined on this structure")


class MissingIdentityPrerequisite(StructSpaceError):
    def __init__(self, op):
        self.op = op
        super().__init__(f"Invertibility on {op!r} requires an Identity spec on the same operation")


class ArityMismatch(StructSpaceError):
    """Reserved: only binary operations are supported."""


# -- space ------------------------------------------------------------------

class UnknownNeighborhood(StructSpaceError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"no neighborhood named {name!r}")


class UnverifiedStructure(StructSpaceError):
    def __init__(self, name, detail=""):
        self.name = name
        super().__init__(f"structure {name!r} fails its declared properties{': ' + detail if detail else ''}")


class EmptyCollection(StructSpaceError):
    pass


class EmptySubfamily(StructSpaceError):
    pass


# -- constructions ----------------------------------------------------------

class NonBijectiveReplacement(StructSpaceError):
    def __init__(self, name, detail):
        self.name = name
        super().__init__(f"replacement for {name!r} is not a bijection: {detail}")


class NotACongruence(StructSpaceError):
    def __init__(self, name, witness):
        self.name = name
        self.witness = witness
        a, a2, b, b2 = witness
        super().__init__(
            f"partition of {name!r} is not a congruence: "
            f"{a}~{a2} and {b}~{b2} but the products land in different blocks"
        )


class QuotientTooSmall(StructSpaceError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"quotient of {name!r} has fewer than two classes")


class DescriptorLost(StructSpaceError):
    def __init__(self, name, detail):
        self.name = name
        super().__init__(f"declared property lost on {name!r}: {detail}")


class NotAGroup(StructSpaceError):
    pass


class NotASubgroup(StructSpaceError):
    def __init__(self, detail):
        super().__init__(f"not a subgroup: {detail}")


class NotNormal(StructSpaceError):
    def __init__(self, witness):
        self.witness = witness
        g, n, conj = witness
        super().__init__(f"not normal: {g}*{n}*{g}^-1 = {conj} escapes the subgroup")


class InvalidDirectSystem(StructSpaceError):
    pass


class IllDefinedOperation(StructSpaceError):
    def __init__(self, op, witness):
        self.op = op
        self.witness = witness
        super().__init__(f"operation {op!r} is not well defined on limit classes: {witness}")


# -- measure ----------------------------------------------------------------

class NotMeasurable(StructSpaceError):
    def __init__(self, subset, atom):
        self.subset = subset
        self.atom = atom
        super().__init__(f"{sorted(subset)} straddles the atom {sorted(atom)}")


class InconsistentWeights(StructSpaceError):
    def __init__(self, atom, values):
        self.atom = atom
        super().__init__(f"points of atom {sorted(atom)} carry conflicting weights {values}")


class SpecViolation(StructSpaceError):
    """A null-addition spec breaks one of its stated conditions."""


class NoEquivalentInC(StructSpaceError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"no collection member carries a structure equivalent to {name!r}")


class MissingProposal(StructSpaceError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"no extension proposal for point {point!r}")


class ProposalRejected(StructSpaceError):
    def __init__(self, point, reason):
        self.point = point
        self.reason = reason
        super().__init__(f"proposal for point {point!r} rejected: {reason}")


# -- lattice ----------------------------------------------------------------

class NotALattice(StructSpaceError):
    def __init__(self, witness, detail=""):
        self.witness = witness
        super().__init__(f"order is not a lattice{': ' + detail if detail else ''} (witness {witness})")


class TooSmall(StructSpaceError):
    pass


# -- cli / files ------------------------------------------------------------

class FileFormatError(StructSpaceError):
    """Malformed input file; carries the JSON path of the offending node."""

    def __init__(self, path, detail):
        self.path = path
        super().__init__(f"{path}: {detail}")


class ValidationFailure(StructSpaceError):
    """A parsed space failed validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        first = report.problems[0]["detail"] if report.problems else "unknown"
        super().__init__(f"space fails validation: {first}")


class UnknownCommand(StructSpaceError):
    pass
