"""Quantum chi^2_kappa divergences, SDPI constants and their tensorization."""
from .correlation import (
    BipartiteState,
    canonical_purification,
    channel_output_bipartite,
    maximal_correlation,
)
from .kappa import HALF, KMAX, KMIN, KappaFunction, alpha, dominates_half, wyd
from .metric import gamma_op, k_whiten_op, mho_op, omega_op, petz_recovery, upsilon_op
from .sdpi import (
    chi_squared,
    contraction_coefficient_estimate,
    sdpi_constant,
    sdpi_constant_eig,
    sdpi_constant_svd,
    sdpi_ratio,
)
from .states import (
    DensityMatrix,
    Povm,
    QuantumChannel,
    bsc_channel,
    depolarizing,
    identity_channel,
    qc_channel,
    random_channel,
    random_density,
    tensor,
)
from .tensorization import counterexample_search, tensorization_check

__version__ = "0.1.0"
