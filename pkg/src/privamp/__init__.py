"""Finite-blocklength privacy amplification against quantum side information.

Renyi information measures, max-relative-entropy smoothing with certified
bounds, security and equivocation exponents, and two-universal hashing
simulation, all at desk scale on dense numpy linear algebra.
"""

from .operators import (
    BudgetExceededError,
    EigensolverError,
    HermitianOperator,
    SpectralDecomposition,
    commutator_defect,
    distinct_eigenvalue_count_iid,
    eig,
    mat_power,
    pinching,
    positive_part_trace,
    simultaneous_eigenbasis,
    tensor_power,
)
from .states import CQState, StateDescriptor
from .measures import (
    ConditionalRenyiCurve,
    DivergenceResult,
    RenyiDivergenceCurve,
    apply_measurement,
    fidelity,
    max_relative_entropy,
    min_conditional_entropy,
    purified_distance,
    relative_entropy,
    renyi_conditional_entropy,
    sandwiched_renyi_divergence,
    trace_distance,
)
from .exponents import (
    CurvePoint,
    ExponentCurve,
    ExponentValue,
    critical_rate,
    equivocation_rate,
    exponent_curve,
    golden_section_max,
    golden_section_min,
    pa_lower_exponent,
    pa_upper_exponent,
    positive_part_decay_rate,
    rate_derivative,
    renyi_security_exponent,
    smoothing_exponent,
)
from .smoothing import (
    SmoothingCertificate,
    SpectrumDistribution,
    achievability_bound,
    classical_smoothing_oracle,
    converse_bound,
    iid_smoothing_certificate,
    iid_spectrum,
    pinched_smoothing_witness,
    smooth_min_entropy,
    smoothing_certificate,
)
from .hashing import (
    AffinePrimeFamily,
    AllFunctionsFamily,
    FamilyExpectation,
    HashFunction,
    InsecurityReport,
    PermutationProductFamily,
    apply_hash,
    example1_suite,
    example2_suite,
    family_expectation,
    hashed_q_expectation_check,
    insecurity,
    leftover_hash_exponent_check,
    make_family,
    min_insecurity_exhaustive,
    positive_part_superadditivity_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
