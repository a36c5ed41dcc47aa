"""Superoperators weighted by a reference state: Gamma, Omega, Mho, Upsilon, K.

Gamma, Omega and Mho are assembled in the eigenframe of ``sigma`` from scalar
coefficients, never by inverting a dense superoperator. In that frame each is
diagonal, so fractional powers are taken coefficient-wise.

Conventions (``s_j`` the eigenvalues of ``sigma``, ``P_j`` its eigenprojectors):

* ``Gamma(X) = sigma^1/2 X sigma^1/2``, coefficients ``sqrt(s_j s_m)``
* ``Omega = sum kappa(s_j/s_m) / s_m  P_j # P_m`` (non-commutative ``sigma^-1``)
* ``Mho   = sum s_j kappa(s_j/s_m)   P_j # P_m`` (non-commutative ``sigma``)

Mho is also defined for singular ``sigma``; pairs touching the kernel are
dropped, so it acts on the support block only.
"""
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimMismatch, FullRankRequired
from .kappa import KappaFunction
from .states import FULL_RANK_RTOL, DensityMatrix, QuantumChannel, as_density


@dataclass(frozen=True, eq=False)
class MetricOperator:
    kind: str
    sigma: DensityMatrix
    kappa: KappaFunction | None
    op: np.ndarray
    support_dim: int
    frame: np.ndarray | None = None
    coeffs: np.ndarray | None = None

    def power(self, p):
        """Coefficient-wise power; only for the spectrally built kinds."""
        if self.coeffs is None:
            raise TypeError(f"{self.kind} has no spectral frame")
        c = np.zeros_like(self.coeffs)
        nz = self.coeffs != 0
        c[nz] = self.coeffs[nz] ** p
        return linalg.spectral_superop(self.frame, c)

    def __call__(self, X):
        return linalg.apply_super(self.op, X)


def _spectrum(sigma):
    w, U = sigma.spectrum
    w = np.where(w > FULL_RANK_RTOL * w[-1], w, 0.0)
    return w, U


def _require_full_rank(*states):
    for rho in states:
        if not rho.full_rank:
            raise FullRankRequired("state must be full rank (min eigenvalue >= 1e-12 * max)")


def gamma_op(sigma):
    sigma = as_density(sigma)
    w, U = _spectrum(sigma)
    r = np.sqrt(w)
    coeffs = np.outer(r, r).astype(complex)
    return MetricOperator(
        "Gamma", sigma, None, linalg.spectral_superop(U, coeffs),
        int(np.count_nonzero(w)), U, coeffs,
    )


def omega_coeffs(w, kappa):
    ratio = w[:, None] / w[None, :]
    return kappa(ratio.ravel()).reshape(ratio.shape) / w[None, :]


def omega_op(sigma, kappa):
    sigma = as_density(sigma)
    _require_full_rank(sigma)
    w, U = _spectrum(sigma)
    coeffs = omega_coeffs(w, kappa).astype(complex)
    return MetricOperator(
        "Omega", sigma, kappa, linalg.spectral_superop(U, coeffs), sigma.dim, U, coeffs
    )


def mho_coeffs(w, kappa):
    supp = w > 0
    coeffs = np.zeros((w.size, w.size))
    ws = w[supp]
    ratio = ws[:, None] / ws[None, :]
    block = ws[:, None] * kappa(ratio.ravel()).reshape(ratio.shape)
    coeffs[np.ix_(supp, supp)] = block
    return coeffs


def mho_op(sigma, kappa):
    sigma = as_density(sigma)
    w, U = _spectrum(sigma)
    coeffs = mho_coeffs(w, kappa).astype(complex)
    return MetricOperator(
        "Mho", sigma, kappa, linalg.spectral_superop(U, coeffs),
        int(np.count_nonzero(w)), U, coeffs,
    )


def _check_square(ch, sigma):
    if ch.dim_in != sigma.dim:
        raise DimMismatch(f"channel input dim {ch.dim_in} != state dim {sigma.dim}")


def upsilon_op(ch: QuantumChannel, sigma, kappa):
    """``Omega_sigma^-1 o E^dag o Omega_E(sigma) o E``."""
    sigma = as_density(sigma)
    _check_square(ch, sigma)
    out = ch(sigma)
    _require_full_rank(sigma, out)
    om_in = omega_op(sigma, kappa)
    om_out = omega_op(out, kappa)
    E = ch.superop
    op = linalg.compose(om_in.power(-1.0), linalg.adjoint_hs(E), om_out.op, E)
    return MetricOperator("Upsilon", sigma, kappa, op, sigma.dim)


def k_whiten_op(ch: QuantumChannel, sigma):
    """``Gamma_E(sigma)^-1 o E o Gamma_sigma`` (unital, completely positive)."""
    sigma = as_density(sigma)
    _check_square(ch, sigma)
    out = ch(sigma)
    _require_full_rank(sigma, out)
    op = linalg.compose(gamma_op(out).power(-1.0), ch.superop, gamma_op(sigma).op)
    return MetricOperator("KWhiten", sigma, None, op, sigma.dim)


def petz_recovery(ch: QuantumChannel, sigma):
    """Petz recovery map ``Gamma_sigma o E^dag o Gamma_E(sigma)^-1``.

    Kraus operators are ``sigma^1/2 K_i^dag E(sigma)^-1/2``.
    """
    sigma = as_density(sigma)
    _check_square(ch, sigma)
    out = ch(sigma)
    _require_full_rank(sigma, out)
    s_half = linalg.matrix_function(sigma.matrix, np.sqrt)
    o_mhalf = linalg.matrix_function(out.matrix, lambda x: x**-0.5)
    kraus = [s_half @ K.conj().T @ o_mhalf for K in ch.kraus]
    return QuantumChannel(kraus, label=f"petz({ch.label})")
