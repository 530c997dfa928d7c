"""Finite Wigner chaos on a discretized time grid.

Kernels live on a grid of ``m`` equal cells of ``[0, T]``; Wigner integrals,
their Ito products, free Malliavin operators, the reduction operator and
vacuum spectral measures are computed exactly at that resolution.
"""
__version__ = "0.1.0"

from .exceptions import DomainError, FreeChaosError, ParseError, SchemaError, ShapeError
from .grid import (
    CoeffTensor,
    GridSpec,
    contract_p,
    inner,
    involution,
    is_mirror_symmetric,
    project_indicator,
    tensor,
)
from .fock import (
    FockBasis,
    FockVector,
    OperatorMatrix,
    enumerate_basis,
    field_matrix,
    ladder_matrix,
    operator_norm_estimate,
    vacuum_expectation,
    wick_matrix,
)
from .chaos import (
    ChaosElement,
    adjoint,
    fock_vector,
    free_bm,
    haagerup_bound,
    ito_product,
    l2_inner,
    l2_norm,
    matrix_rep,
    moment,
    trace,
    wigner,
)
from .malliavin import (
    ChaosBitensor,
    SimpleBiprocess,
    bimodule_action,
    biprocess_pair,
    dagger,
    directional_divergence,
    directional_gradient,
    divergence_simple,
    gradient_biprocess,
    is_adapted,
    number_operator,
    partial_trace,
    pure_bitensor,
    stochastic_integral,
)
from .reduction import (
    ReductionReport,
    ReductionStep,
    delta_ph,
    iterate_reduction,
    key_inequality_check,
    tau_p,
    zero_divisor_probe,
)
from .spectra import (
    SpectralMeasure,
    atom_scan,
    catalan,
    max_window_weight,
    moment_compare,
    semicircle_reference,
    vacuum_spectral_measure,
)
from .io import emit_chaos_json, parse_chaos_json
from .verify import run_verify
