"""chi^2_kappa divergence and SDPI constants.

Two independent routes compute ``eta(E, sigma)``:

``sdpi_constant_eig``
    Hermitize ``Upsilon`` with ``Omega_sigma^{+-1/2}`` and take the top
    eigenvalue after deflating the fixed direction ``Omega^1/2 vec(sigma)``.
``sdpi_constant_svd``
    Whiten ``K = Gamma_E(sigma)^-1 E Gamma_sigma`` with ``Mho^{+-1/2}`` on both
    sides, remove the ``Mho^1/2 vec(I)`` directions and square the largest
    singular value.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimMismatch,
    NotHermitian,
    NotTraceless,
    NumericalInstability,
    ParamError,
    ZeroDirection,
)
from .metric import (
    k_whiten_op,
    mho_op,
    omega_coeffs,
    omega_op,
    upsilon_op,
)
from .states import (
    FULL_RANK_RTOL,
    DensityMatrix,
    QuantumChannel,
    as_density,
    random_density,
)

CLAMP_SLACK = 1e-9
SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class SdpiReport:
    eta: float
    method: str
    spectrum: np.ndarray
    fixed_point_residual: float
    direction: np.ndarray | None = None

    def to_dict(self):
        return {
            "eta": self.eta,
            "method": self.method,
            "spectrum": [float(x) for x in self.spectrum],
            "fixed_point_residual": self.fixed_point_residual,
        }


def chi_squared(rho, sigma, kappa):
    """``<rho - sigma, Omega_sigma^kappa (rho - sigma)>``, or ``inf``.

    A singular ``sigma`` is handled on its support; the divergence is
    infinite when ``rho`` has weight outside that support.
    """
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatch(f"state dims differ: {rho.dim} vs {sigma.dim}")
    w, U = sigma.spectrum
    supp = w > FULL_RANK_RTOL * w[-1]
    if not np.all(supp):
        Q = U[:, ~supp]
        leak = np.linalg.norm(Q.conj().T @ rho.matrix @ Q)
        if leak > FULL_RANK_RTOL:
            return math.inf
    V = U[:, supp]
    coeffs = omega_coeffs(w[supp], kappa)
    om = linalg.spectral_superop(V, coeffs)
    A = rho.matrix - sigma.matrix
    val = linalg.hs_inner(A, linalg.apply_super(om, A)).real
    return max(float(val), 0.0)


def _clamp(eta):
    if eta < -CLAMP_SLACK or eta > 1.0 + CLAMP_SLACK:
        raise NumericalInstability(f"SDPI constant {eta!r} outside [0, 1] beyond slack")
    return float(min(max(eta, 0.0), 1.0))


def _hermitian_part(V):
    """Hermitian representative of an eigen-direction of a Hermitian-preserving map."""
    H = 0.5 * (V + V.conj().T)
    K = 0.5j * (V.conj().T - V)
    return H if np.linalg.norm(H) >= np.linalg.norm(K) else K


def sdpi_constant_eig(ch: QuantumChannel, sigma, kappa):
    sigma = as_density(sigma)
    ups = upsilon_op(ch, sigma, kappa)
    om = omega_op(sigma, kappa)
    half = om.power(0.5)
    mhalf = om.power(-0.5)
    S = half @ ups.op @ mhalf
    asym = np.linalg.norm(S - S.conj().T)
    if asym > SYMMETRY_RTOL * max(1.0, np.linalg.norm(S)):
        raise NumericalInstability(f"Hermitized Upsilon is not Hermitian (asymmetry {asym:.2e})")
    S = 0.5 * (S + S.conj().T)
    spectrum = np.linalg.eigvalsh(S)[::-1]

    v = half @ linalg.vec(sigma.matrix)
    v = v / np.linalg.norm(v)
    P = np.eye(v.size) - np.outer(v, v.conj())
    w, X = np.linalg.eigh(P @ S @ P)
    eta = _clamp(w[-1])
    direction = _hermitian_part(linalg.devec(mhalf @ X[:, -1], sigma.dim))
    residual = np.linalg.norm(ups(sigma.matrix) - sigma.matrix)
    return SdpiReport(eta, "eig", spectrum, float(residual), direction)


def sdpi_constant_svd(ch: QuantumChannel, sigma, kappa):
    sigma = as_density(sigma)
    kw = k_whiten_op(ch, sigma)
    out = ch(sigma)
    mho_in = mho_op(sigma, kappa)
    mho_out = mho_op(out, kappa)
    M = mho_out.power(0.5) @ kw.op @ mho_in.power(-0.5)
    n = sigma.dim
    eye = linalg.vec(np.eye(n, dtype=complex))
    u_in = mho_in.power(0.5) @ eye
    u_out = mho_out.power(0.5) @ eye
    u_in /= np.linalg.norm(u_in)
    u_out /= np.linalg.norm(u_out)
    P_in = np.eye(n * n) - np.outer(u_in, u_in.conj())
    P_out = np.eye(n * n) - np.outer(u_out, u_out.conj())
    top = np.linalg.svd(P_out @ M @ P_in, compute_uv=False)[0]
    spectrum = np.linalg.svd(M, compute_uv=False)
    residual = np.linalg.norm(kw(np.eye(n)) - np.eye(n))
    return SdpiReport(_clamp(top**2), "svd", spectrum, float(residual))


def sdpi_constant(ch, sigma, kappa, method="eig"):
    if method == "eig":
        return sdpi_constant_eig(ch, sigma, kappa)
    if method == "svd":
        return sdpi_constant_svd(ch, sigma, kappa)
    raise ParamError(f"unknown method {method!r}")


def sdpi_ratio(ch: QuantumChannel, sigma, kappa, A):
    """Contraction ratio ``<E A, Omega_E(sigma) E A> / <A, Omega_sigma A>``.

    ``A`` must be a nonzero traceless Hermitian matrix.
    """
    sigma = as_density(sigma)
    A = np.asarray(A, dtype=complex)
    norm = np.linalg.norm(A)
    if norm == 0:
        raise ZeroDirection("direction A must be nonzero")
    if not linalg.is_hermitian(A):
        raise NotHermitian("direction A must be Hermitian")
    if abs(np.trace(A)) > 1e-12 * max(1.0, norm):
        raise NotTraceless(f"direction A has trace {np.trace(A)!r}")
    ups = upsilon_op(ch, sigma, kappa)
    om = omega_op(sigma, kappa)
    num = linalg.hs_inner(A, om(ups(A))).real
    den = linalg.hs_inner(A, om(A)).real
    return float(num / den)


# -- contraction coefficient (sup over sigma), lower-bound estimator ----------


@dataclass(frozen=True, eq=False)
class ContractionEstimate:
    eta: float
    sigma: DensityMatrix
    trials: int


def _eta_or_none(ch, sigma, kappa):
    try:
        return sdpi_constant_eig(ch, sigma, kappa).eta
    except (ValueError, np.linalg.LinAlgError):
        return None


def _density_from_factor(G):
    M = G @ G.conj().T
    return DensityMatrix(M / np.trace(M).real)


def contraction_coefficient_estimate(ch: QuantumChannel, kappa, trials=20, seed=0,
                                     refine_rounds=40):
    """Lower bound on ``sup_sigma eta(E, sigma)``.

    ``I/n`` and random full-rank ``sigma`` are scored first; the best is then improved by
    coordinate search over a Cholesky-like factor ``G`` with ``sigma = G G^dag``.
    """
    if trials < 1:
        raise ParamError("trials must be >= 1")
    n = ch.dim_in
    best_eta, best_G = -1.0, None
    # the maximally mixed state is always scored alongside the random draws
    candidates = [DensityMatrix(np.eye(n) / n)]
    candidates += [random_density(np.random.default_rng(seed + t), n) for t in range(trials)]
    for sig in candidates:
        eta = _eta_or_none(ch, sig, kappa)
        if eta is not None and eta > best_eta:
            best_eta = eta
            best_G = linalg.matrix_function(sig.matrix, np.sqrt)
    if best_G is None:
        raise NumericalInstability("no admissible reference state found")

    G = best_G
    step = 0.25 * np.linalg.norm(G)
    for _ in range(refine_rounds):
        improved = False
        for idx in np.ndindex(n, n):
            for delta in (step, -step, 1j * step, -1j * step):
                cand = G.copy()
                cand[idx] += delta
                try:
                    sig = _density_from_factor(cand)
                except ValueError:
                    continue
                if not sig.full_rank:
                    continue
                eta = _eta_or_none(ch, sig, kappa)
                if eta is not None and eta > best_eta:
                    best_eta, G, improved = eta, cand, True
        if not improved:
            step *= 0.5
    return ContractionEstimate(best_eta, _density_from_factor(G), trials)
