"""Store constants, shared values, and enumerations."""

from __future__ import annotations

from enum import Enum, IntEnum, unique

# numeric defaults
DEFAULT_TOL = 1e-10
MAX_STEP = 1e-2
GROUP_CAP = 400
SINGULAR_THRESHOLD = 1e-6
SPHERE_TOLERANCE = 1e-8
INDEX_THRESHOLD = 1e-8
BOUNDARY_TOLERANCE = 1e-9
JITTER = 1e-3
FLOAT_DIGITS = 17
FINITE_DIFFERENCE_STEP = 1e-5
MIN_RESOLUTION = 64

# constants, and associated enums
AVAILABLE_CHECKS = [
    "exact.GroupOrders",
    "exact.IcosahedralInvariantSpace",
    "exact.ClassificationDimensions",
    "exact.SymmetricExtension",
    "exact.Solenoidal",
    "exact.IdentityChain",
    "exact.OrbitEquation",
    "numeric.FixedPoints",
    "numeric.Conservation",
    "numeric.TranslationEquation",
    "numeric.CurveResiduals",
    "numeric.SingularCase",
    "numeric.CircleImages",
    "numeric.LevelSets",
]


class EnvironmentVariable(str, Enum):
    """Represents an Environment Variable that is used by this program."""

    LogFile = "LogFile"                                          # Optional. What file to put the log in
    DEBUG = "DEBUG"                                              # Optional. Verbose logs and post-mortem debugging
    NO_PARALLEL = "ProjectiveSuperflows_NO_PARALLEL"             # Optional. Run parallel() jobs inline


@unique
class GroupFamily(str, Enum):
    """Rows of the table of finite subgroups of O(3), plus the symmetric-group representations."""

    CYCLIC = "cyclic"
    CYCLIC_TIMES_Z2 = "cyclic-z2"
    MIXED_CYCLIC = "mixed-cyclic"
    DIHEDRAL = "dihedral"
    DIHEDRAL_TIMES_Z2 = "dihedral-z2"
    MIXED_DIHEDRAL_CYCLIC = "mixed-dihedral-cyclic"
    TETRAHEDRAL = "tetrahedral"
    TETRAHEDRAL_TIMES_Z2 = "tetrahedral-z2"
    MIXED_TETRAHEDRAL = "mixed-tetrahedral"
    OCTAHEDRAL = "octahedral"
    OCTAHEDRAL_TIMES_Z2 = "octahedral-z2"
    MIXED_DIHEDRAL = "mixed-dihedral"
    ICOSAHEDRAL = "icosahedral"
    ICOSAHEDRAL_TIMES_Z2 = "icosahedral-z2"
    SYMMETRIC_REP = "symmetric-rep"
    SYMMETRIC_REP_TIMES_Z2 = "symmetric-rep-z2"

    @property
    def parametric(self) -> bool:
        return self in PARAMETRIC_FAMILIES

    @property
    def diagonalizable(self) -> bool:
        """Families whose rotation part lives in the xy-plane, so τ diagonalizes them."""
        return self in DIAGONALIZABLE_FAMILIES


PARAMETRIC_FAMILIES = frozenset({
    GroupFamily.CYCLIC, GroupFamily.CYCLIC_TIMES_Z2, GroupFamily.MIXED_CYCLIC, GroupFamily.DIHEDRAL,
    GroupFamily.DIHEDRAL_TIMES_Z2, GroupFamily.MIXED_DIHEDRAL_CYCLIC, GroupFamily.MIXED_DIHEDRAL,
    GroupFamily.SYMMETRIC_REP, GroupFamily.SYMMETRIC_REP_TIMES_Z2,
})
DIAGONALIZABLE_FAMILIES = PARAMETRIC_FAMILIES - {GroupFamily.SYMMETRIC_REP, GroupFamily.SYMMETRIC_REP_TIMES_Z2}


@unique
class GroupTag(str, Enum):
    """Classification label carried by a MatrixGroup."""

    TRIVIAL = "trivial"
    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    MIXED = "mixed"
    TETRAHEDRAL = "T"
    MIXED_TETRAHEDRAL = "T^"
    OCTAHEDRAL = "O"
    ICOSAHEDRAL = "I"
    PRISM = "prism"
    ANTIPRISM = "antiprism"
    PRODUCT_WITH_MINUS_I = "product-with-minus-I"
    SYMMETRIC_REP = "symmetric-rep"
    GENERATED = "generated"


@unique
class VerdictReason(str, Enum):
    UNIQUE_FIELD = "unique_field"
    CONTAINS_MINUS_I = "contains_minus_I"
    FAMILY_DIMENSION_GT_1 = "family_dimension_gt_1"
    ZERO_ONLY = "zero_only"
    SYMMETRY_EXTENDS = "symmetry_extends"


@unique
class SuperflowName(str, Enum):
    """The five catalog superflows; values are the ASCII names used on the command line."""

    TETRAHEDRAL = "T"
    OCTAHEDRAL = "O"
    ICOSAHEDRAL = "I"
    PRISMATIC = "P3"
    ANTIPRISMATIC = "A4"

    @property
    def display(self) -> str:
        return {"T": "T̂", "O": "𝕆", "I": "𝕀", "P3": "P₃", "A4": "A₄"}[self.value]


@unique
class FixedPointClass(str, Enum):
    PENTAGON_CENTER = "pentagon-center"
    TRIANGLE_CENTER = "triangle-center"
    EDGE = "edge/vertex"


@unique
class ComponentKind(str, Enum):
    EMPTY = "empty"
    ISOLATED_POINTS = "isolated-points"
    CIRCLES = "circles"
    GREAT_CIRCLE_ARCS = "great-circle-arcs"


@unique
class Stepper(str, Enum):
    RK4 = "rk4-fixed"
    RK45 = "rk45-adaptive"


@unique
class Direction(str, Enum):
    FORWARD = "forward-field"
    BACKWARD = "backward-system"


@unique
class ProjectionKind(str, Enum):
    STEREOGRAPHIC_SCALED = "scaled"
    STEREOGRAPHIC_TRUE = "true"
    ORTHOGONAL_X0 = "orthogonal-x0"
    ORTHOGONAL_DIAG = "orthogonal-diag"


@unique
class FigureName(str, Enum):
    ICOSAHEDRAL_WIDE = "icosahedral-wide"
    ICOSAHEDRAL_CLOSE = "icosahedral-close"
    OCTAHEDRAL_CLOSE = "octahedral-close"
    QUADRATIC_DEFORMATION = "quadratic-deformation"


class ExitCode(IntEnum):
    """Process exit codes of the command line interface."""

    OK = 0
    FAILED = 1
    USAGE = 2
