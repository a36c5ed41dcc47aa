"""SDPI constants of product channels versus the largest local constant."""
from dataclasses import asdict, dataclass, field
from functools import reduce

import numpy as np

from .errors import DimensionBudgetExceeded, DimMismatch, ParamError
from .kappa import dominance_verdict
from .sdpi import sdpi_constant_eig
from .states import (
    DensityMatrix,
    as_density,
    random_channel,
    random_density,
    random_qc_channel,
    tensor,
)

DIM_BUDGET = 36
GAP_TOL = 1e-7


@dataclass
class TensorizationReport:
    eta_global: float
    eta_locals: list
    eta_max: float
    gap: float
    kappa: str
    dims: list
    hypothesis_flags: dict = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self):
        return asdict(self)


def _flags(channels, kappa):
    dominates, basis = dominance_verdict(kappa)
    is_half = kappa.is_half
    all_qc = all(ch.is_qc for ch in channels)
    return {
        "kappa_is_half": is_half,
        "all_channels_qc": all_qc,
        "kappa_dominates_half": dominates,
        "dominance_basis": basis,
        "tensorization_proven": is_half or (all_qc and dominates),
    }


def tensorization_check(channels, sigmas, kappa):
    """Compare ``eta(E_1 x ... x E_N, s_1 x ... x s_N)`` with ``max_j eta(E_j, s_j)``."""
    channels = list(channels)
    sigmas = [as_density(s) for s in sigmas]
    if not channels or len(channels) != len(sigmas):
        raise DimMismatch("need one reference state per channel")
    for ch, s in zip(channels, sigmas):
        if ch.dim_in != s.dim or ch.dim_out != s.dim:
            raise DimMismatch("each channel must act on the space of its reference state")
    dims = [s.dim for s in sigmas]
    total = int(np.prod(dims))
    if total > DIM_BUDGET:
        raise DimensionBudgetExceeded(f"product dimension {total} exceeds budget {DIM_BUDGET}")

    locals_ = [sdpi_constant_eig(ch, s, kappa).eta for ch, s in zip(channels, sigmas)]
    if len(channels) == 1:
        eta_global = locals_[0]
    else:
        big_ch = tensor(*channels)
        big_sigma = DensityMatrix(reduce(np.kron, [s.matrix for s in sigmas]))
        eta_global = sdpi_constant_eig(big_ch, big_sigma, kappa).eta
    eta_max = max(locals_)
    return TensorizationReport(
        eta_global=eta_global,
        eta_locals=locals_,
        eta_max=eta_max,
        gap=eta_global - eta_max,
        kappa=str(kappa),
        dims=dims,
        hypothesis_flags=_flags(channels, kappa),
    )


@dataclass
class SearchResult:
    best: TensorizationReport
    trials: int
    max_abs_gap: float
    gap_violations: int
    lower_bound_violations: int
    family: str

    def to_dict(self):
        out = asdict(self)
        out["best"] = self.best.to_dict()
        return out


def random_instance(seed, dims, family="general"):
    """Random product instance; trial ``i`` of a search uses ``seed + i``."""
    rng = np.random.default_rng(seed)
    if family == "general":
        channels = [random_channel(rng, n) for n in dims]
    elif family == "qc":
        channels = [random_qc_channel(rng, n) for n in dims]
    else:
        raise ParamError(f"unknown channel family {family!r}")
    sigmas = [random_density(rng, n) for n in dims]
    return channels, sigmas


def counterexample_search(kappa, dims=(2, 2), trials=100, seed=0, family="general",
                          tol=GAP_TOL):
    """Seeded random search for positive tensorization gaps.

    Returns the trial with the largest signed gap. Trials are independent and
    their aggregation is a max, so the result does not depend on trial order.
    """
    if trials < 1:
        raise ParamError("trials must be >= 1")
    best = None
    max_abs = 0.0
    violations = 0
    lower = 0
    for i in range(trials):
        channels, sigmas = random_instance(seed + i, dims, family)
        rep = tensorization_check(channels, sigmas, kappa)
        rep.seed = seed + i
        max_abs = max(max_abs, abs(rep.gap))
        violations += rep.gap > tol
        lower += rep.gap < -1e-8
        if best is None or rep.gap > best.gap:
            best = rep
    return SearchResult(best, trials, max_abs, int(violations), int(lower), family)
