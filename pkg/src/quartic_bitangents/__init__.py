"""Tropical and algebraic bitangents of tropically smooth plane quartics.

The pipeline: parse a valued quartic, check tropical smoothness through
its Newton subdivision, dualize to the tropical curve, decompose the
tropical bitangent locus into its 7 classes, solve for all 28 algebraic
bitangents of realizations at small rational t, decompose the avoidance
locus of real realizations into connected components, and verify that
the components partition the real bitangents by tropical class.
"""

from .avoidance import (
    AvoidanceComponents,
    DualPoint,
    TopologyReport,
    assign_bitangent,
    components,
    line_avoids,
    real_topology,
    stable_components,
)
from .curve import (
    IntersectionReport,
    TropicalLine,
    TropicalPlaneCurve,
    dualize,
    stable_intersection,
)
from .errors import (
    AmbiguityError,
    ConditioningError,
    DegeneracyError,
    EstimationError,
    InputError,
    InternalConsistencyError,
    IsolationError,
    ParseError,
    PrecisionError,
    QuarticError,
    ResolutionError,
    SchemaError,
    TrackingError,
    UniquenessError,
    UnsupportedInputError,
    VerificationFailure,
)
from .fixtures import FIXTURE_NAMES, load_all_fixtures, load_fixture
from .locus import BitangentClass, bitangent_locus, classify_line
from .quartic import (
    DualSubdivision,
    ValuedCoefficient,
    ValuedQuartic,
    is_tropically_smooth,
    newton_subdivision,
    parse_quartic,
    serialize_quartic,
)
from .solver import (
    BitangentLine,
    RealizedQuartic,
    default_precision,
    realize,
    solve_bitangents,
    track_bitangents,
    tropicalize_bitangent,
)
from .verify import (
    PartitionContext,
    VerificationReport,
    VerifyConfig,
    build_context,
    verify_lemma_bitangent,
    verify_partition,
    verify_tropical_convexity,
)

__version__ = "0.1.0"
