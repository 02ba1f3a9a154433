"""Gross-Pitaevskii hierarchy numerics.

Thin re-export of the compiled _gph module: grids, wave functions, dense
marginals, contraction operators, Sobolev norms and the conserved energy
functionals.
"""

from _gph import (  # noqa: F401
    DenseMarginal,
    EnergyReport,
    Grid,
    MixtureState,
    NlsParams,
    WaveFunction,
    __version__,
    b_full,
    b_plus_dense,
    cancellation_residuals,
    d_factor,
    e1,
    factorized_marginal,
    from_values,
    gaussian_state,
    hs_sobolev_norm,
    k_energy,
    k_op_trace,
    mixture_marginal,
    nls_energy,
    partial_trace,
    plane_wave,
    random_state,
    strang_step,
    trace_sobolev_norm,
)
