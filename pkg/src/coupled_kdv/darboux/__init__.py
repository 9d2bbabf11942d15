from .classify import Classification, classify, r_denominator, singular_loci
from .descriptor import AnalyticFamily
from .families import (
    equal_constants_family,
    first_transform_fields,
    imaginary_lambda_f,
    r_family,
    reduced_jets,
    reduced_solution,
    two_component,
)
from .jets import Jet
from .transforms import (
    CompoundResult,
    DT1Result,
    DT2Result,
    EigenOverflowError,
    EigenSample,
    PotentialSample,
    SingularPointError,
    SpectralParams,
    WaveConstants,
    compound_dt,
    dt1_apply,
    dt2_apply,
    eigenpair,
    lax_coefficients,
    spectral_residual,
    time_flow_residual,
    transform_eigen,
)
