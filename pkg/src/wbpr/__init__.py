"""Phase retrieval toolkit for wide-band signals.

Factored Hardy-space models on the disc, transfer to the unit strip,
the constructions that enumerate all functions sharing a modulus on the
line, Riesz-product Pauli partners, and checkers for coupled
constraints that restore uniqueness.
"""

from .coupled import (
    DerivationKind,
    DichotomyResult,
    ReferencePoint,
    RotationOrbitReport,
    SegmentSpec,
    UniquenessResult,
    apply_derivation,
    check_derivation_dichotomy,
    conclude_uniqueness,
    reference_solutions,
    rotation_orbit_witness,
    segment_agreement,
)
from .errors import (
    BudgetExceeded,
    DepthTooLarge,
    DomainError,
    DominanceViolated,
    NotUnimodular,
    OddnessViolated,
    QuadratureAccuracyWarning,
    ResamplingError,
    RootOnCircle,
    SpecFormatError,
    ZeroReference,
)
from .hardy import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
    blaschke_factor,
    boundary_grid,
    canonical_angle,
    eval_blaschke,
    eval_disc,
    eval_outer,
    eval_singular_inner,
    factorize_polynomial,
    multiset_match,
    odd_part,
    reflect_samples,
    star,
    zeros_close,
)
from .harness import (
    CheckResult,
    Grid1D,
    VerificationReport,
    check_lemma_conditions,
    compare_modulus,
    fourier_pairing_check,
    measure_moments,
    modulus_deviation,
)
from .riesz import (
    CoefficientTable,
    RieszSpec,
    SpectralEnvelope,
    WideBandSignal,
    balanced_ternary_digits,
    default_alpha,
    display_alpha,
    eval_riesz,
    evaluate_table,
    indicator_envelope,
    pauli_partner,
    riesz_coefficients,
    verify_pauli_pair,
)
from .solutions import (
    FlipSelection,
    OddSingularPerturbation,
    OuterModifier,
    SolutionRequest,
    build_solution,
    enumerate_solutions,
    flip_zeros,
    modify_outer,
    perturb_singular,
    strip_solutions,
    trivial_solutions,
    uv_split,
)
from .strip import (
    PushforwardResult,
    StripFunction,
    StripSideData,
    boundary_to_strip,
    disc_to_strip,
    eval_strip,
    lift,
    lower,
    pushforward_measure,
    required_halfwidth,
    strip_boundary_angle,
    strip_to_disc,
    strip_to_disc_derivative,
    strip_weight,
)
from .serialize import (
    atomic_write_text,
    disc_from_dict,
    disc_to_dict,
    dump_json,
    load_json,
    load_spec,
    modifier_from_dict,
    modifier_to_dict,
    report_to_dict,
    request_from_dict,
    save_json,
    save_spec,
    spec_from_dict,
    spec_to_dict,
    strip_from_dict,
    strip_side_from_dict,
    strip_to_dict,
    write_csv,
)

__version__ = "0.1.0"
