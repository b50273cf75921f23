"""Exact computation with groups of piecewise linear interval bijections.

The package models triples (breakpoint module, slope group, endpoint),
their elements as canonical piecewise affine maps, digit codings of the
doubled-point interval model, and isomorphism invariants with
three-valued verdicts.  All arithmetic is exact: rationals via
fractions, irrationals as coordinate vectors in real algebraic fields
with sign decided by interval refinement.
"""

from .classify import (
    EmbeddingAnswer,
    Verdict,
    class_of,
    classify_pair,
    coinvariants,
    order_embedding_exists,
    rank_one_report,
)
from .coding import (
    EventuallyPeriodicWord,
    beta_cut_point,
    beta_cylinder_interval,
    beta_expand,
    beta_word_value,
    embed_v2_cut,
    embed_v2_element,
    n_adic_expand,
    n_adic_value,
    substitute_tau,
)
from .document import SpecDocument, parse_spec
from .elements import (
    CutPoint,
    FixedPoint,
    FixedPointReport,
    Piece,
    PLMap,
    compose,
    cut_point,
    from_prefix_pairs,
    generator_library,
    invert,
    make_plmap,
    prefix_exchange_convert,
    random_word,
    to_prefix_pairs,
)
from .errors import (
    BoundExceeded,
    BreakpointNotInGamma,
    ContextMismatch,
    DependentBasis,
    DivisionByZero,
    EmptyLibrary,
    EmptyWord,
    FieldMismatch,
    ForbiddenFactor,
    InvalidEndpoint,
    MultipleRootsInInterval,
    NoRootInInterval,
    NonDense,
    NotAntichain,
    NotBijective,
    NotComplete,
    NotInGamma,
    NotInvariant,
    NotSquarefree,
    OutOfDomain,
    ParseError,
    SlopeNotInLambda,
    SteinError,
    UnorderedBreakpoints,
    UnparsableWord,
    UnsupportedComparison,
    UnsupportedGamma,
    UnsupportedInput,
    UnsupportedSlopeGroup,
    UsageError,
    ValidationError,
    WrongContext,
    ZeroLeadingCoefficient,
)
from .intlinalg import (
    AbelianInvariants,
    IntMatrix,
    cokernel_invariants,
    hermite_normal_form,
    localize_factors,
    smith_normal_form,
)
from .modules import (
    BreakpointModule,
    ScaleResult,
    SlopeGroup,
    SteinTriple,
    algebraic_triple,
    golden_field,
    golden_triple,
    scale_equivalence,
    stein_triple,
    thompson_triple,
)
from .numbers import (
    FieldElement,
    MinimalPolynomial,
    RealAlgebraicField,
    approx,
    make_field,
    rational_field,
    sign_of,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants",
    "BoundExceeded",
    "BreakpointModule",
    "BreakpointNotInGamma",
    "ContextMismatch",
    "CutPoint",
    "DependentBasis",
    "DivisionByZero",
    "EmbeddingAnswer",
    "EmptyLibrary",
    "EmptyWord",
    "EventuallyPeriodicWord",
    "FieldElement",
    "FieldMismatch",
    "FixedPoint",
    "FixedPointReport",
    "ForbiddenFactor",
    "IntMatrix",
    "InvalidEndpoint",
    "MinimalPolynomial",
    "MultipleRootsInInterval",
    "NoRootInInterval",
    "NonDense",
    "NotAntichain",
    "NotBijective",
    "NotComplete",
    "NotInGamma",
    "NotInvariant",
    "NotSquarefree",
    "OutOfDomain",
    "PLMap",
    "ParseError",
    "Piece",
    "RealAlgebraicField",
    "ScaleResult",
    "SlopeGroup",
    "SlopeNotInLambda",
    "SpecDocument",
    "SteinError",
    "SteinTriple",
    "UnorderedBreakpoints",
    "UnparsableWord",
    "UnsupportedComparison",
    "UnsupportedGamma",
    "UnsupportedInput",
    "UnsupportedSlopeGroup",
    "UsageError",
    "ValidationError",
    "Verdict",
    "WrongContext",
    "ZeroLeadingCoefficient",
    "algebraic_triple",
    "approx",
    "beta_cut_point",
    "beta_cylinder_interval",
    "beta_expand",
    "beta_word_value",
    "class_of",
    "classify_pair",
    "coinvariants",
    "cokernel_invariants",
    "compose",
    "cut_point",
    "embed_v2_cut",
    "embed_v2_element",
    "from_prefix_pairs",
    "generator_library",
    "golden_field",
    "golden_triple",
    "hermite_normal_form",
    "invert",
    "localize_factors",
    "make_field",
    "make_plmap",
    "n_adic_expand",
    "n_adic_value",
    "order_embedding_exists",
    "parse_spec",
    "prefix_exchange_convert",
    "random_word",
    "rank_one_report",
    "rational_field",
    "scale_equivalence",
    "sign_of",
    "smith_normal_form",
    "stein_triple",
    "substitute_tau",
    "thompson_triple",
    "to_prefix_pairs",
]
