"""Exact growth and complexity computations for subshift groupoids,
groupoids of germs of self-similar groups, and their convolution algebras."""

from .fields import GF2, QQ, BitRowBasis, PrimeField, Rationals, RowBasis, SparseVector, parse_field
from .groupoid import (
    DeltaResult,
    GermGroupoidModel,
    LabeledBall,
    SubshiftModel,
    WindowUnit,
    ball_to_dot,
    canonical_code,
    delta_enumerated,
    gamma,
)
from .matrix_recursion import (
    GroupRingElement,
    IdentityError,
    LevelMatrix,
    grig_witness,
    homomorphism_check,
    image_at_level,
    loglog_slope,
    parse_element,
    recursion_step,
    thinned_growth,
)
from .selfsimilar import (
    ADDING_MACHINE,
    GRIGORCHUK,
    EventuallyPeriodicPoint,
    NotContracting,
    SelfSimilarGroup,
    StateCapExceeded,
    WreathRecursion,
    group_from_spec,
)
from .shift_algebra import (
    RadiusExhausted,
    WindowSpace,
    expansive_certificate,
    growth_dims,
    module_apply,
    module_growth,
    semigroup_dims,
    separation_radius,
)
from .subshift import Language, build_language, recurrence_check
from .words import (
    Alphabet,
    EventuallyPeriodicSource,
    ExplicitSource,
    SturmianSource,
    SubstitutionSource,
    ToeplitzSource,
    WordSource,
    golden_sturmian,
    source_from_config,
    source_from_json,
    thue_morse,
)

__version__ = "0.1.0"
