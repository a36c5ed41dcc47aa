"""Purifications, bipartite states and the kappa-quantum maximal correlation."""
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimMismatch
from .metric import mho_coeffs
from .states import FULL_RANK_RTOL, DensityMatrix, QuantumChannel, as_density


@dataclass(frozen=True, eq=False)
class BipartiteState:
    state: DensityMatrix
    dims: tuple

    def __post_init__(self):
        state = as_density(self.state)
        n1, n2 = (int(d) for d in self.dims)
        if state.dim != n1 * n2:
            raise DimMismatch(f"state of dim {state.dim} does not split as {n1}x{n2}")
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "dims", (n1, n2))

    @property
    def matrix(self):
        return self.state.matrix

    def marginal(self, which):
        """Reduced state of subsystem ``which`` (0 or 1)."""
        return DensityMatrix(linalg.partial_trace(self.matrix, self.dims, keep=which))


@dataclass(frozen=True, eq=False)
class Purification:
    amplitudes: np.ndarray
    dim: int

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


def canonical_purification(sigma):
    """``sum_j sqrt(s_j) |s_j> (x) |s_j>`` in the eigenbasis of ``sigma``.

    Both reduced states of the resulting pure state equal ``sigma``.
    """
    sigma = as_density(sigma)
    w, U = sigma.spectrum
    w = np.clip(w, 0.0, None)
    psi = sum(np.sqrt(s) * np.kron(u, u) for s, u in zip(w, U.T))
    psi = psi / np.linalg.norm(psi)
    return Purification(psi, sigma.dim)


def channel_output_bipartite(ch: QuantumChannel, psi: Purification):
    """``(id (x) E)(|psi><psi|)``; the channel acts on the second factor."""
    n = psi.dim
    if ch.dim_in != n:
        raise DimMismatch(f"channel input dim {ch.dim_in} != purification factor dim {n}")
    P = psi.projector()
    eye = np.eye(n)
    rho = sum(np.kron(eye, K) @ P @ np.kron(eye, K).conj().T for K in ch.kraus)
    return BipartiteState(DensityMatrix(rho), (n, ch.dim_out))


def _support_whitening(rho, kappa):
    """Frame ``W`` on the support block and the Mho weights in that frame."""
    w, U = rho.spectrum
    supp = w > FULL_RANK_RTOL * w[-1]
    V = U[:, supp]
    coeffs = mho_coeffs(w[supp], kappa)
    return np.kron(V.conj(), V), linalg.vec(coeffs).real, supp.sum()


def _unit(v):
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v


@dataclass(frozen=True, eq=False)
class MaxCorrelation:
    mu: float
    F: np.ndarray
    G: np.ndarray
    constraint_residuals: dict


def bilinear_matrix(rho12: BipartiteState):
    """Matrix ``B`` with ``tr(rho12 F (x) G^dag) = vec(G)^dag B vec(F)``."""
    n1, n2 = rho12.dims
    t = rho12.matrix.reshape(n1, n2, n1, n2)
    # B[b + d*n2, c + a*n1] = rho[(a, b), (c, d)]
    return t.transpose(3, 1, 0, 2).reshape(n2 * n2, n1 * n1)


def maximal_correlation(rho12: BipartiteState, kappa):
    """``max |tr(rho12 F (x) G^dag)|`` over Mho-normalized, centred ``F, G``.

    The constraint set is a product of unit spheres in the Mho-weighted
    norms, so after whitening the maximum is a largest singular value.
    Marginals may be singular; only their support blocks carry weight.
    """
    rho1, rho2 = rho12.marginal(0), rho12.marginal(1)
    W1, d1, r1 = _support_whitening(rho1, kappa)
    W2, d2, r2 = _support_whitening(rho2, kappa)
    B = W2.conj().T @ bilinear_matrix(rho12) @ W1
    Mw = (B / np.sqrt(d2)[:, None]) / np.sqrt(d1)[None, :]

    u1 = np.sqrt(d1) * linalg.vec(np.eye(r1))
    u2 = np.sqrt(d2) * linalg.vec(np.eye(r2))
    u1 /= np.linalg.norm(u1)
    u2 /= np.linalg.norm(u2)
    P1 = np.eye(u1.size) - np.outer(u1, u1.conj())
    P2 = np.eye(u2.size) - np.outer(u2, u2.conj())
    Ul, sv, Vh = np.linalg.svd(P2 @ Mw @ P1)
    x = _unit(P1 @ Vh[0].conj())
    y = _unit(P2 @ Ul[:, 0])
    n1, n2 = rho12.dims
    F = linalg.devec(W1 @ (x / np.sqrt(d1)), n1)
    G = linalg.devec(W2 @ (y / np.sqrt(d2)), n2)

    residuals = {
        "tr_rho1_F": float(abs(np.trace(rho1.matrix @ F))),
        "tr_rho2_G": float(abs(np.trace(rho2.matrix @ G))),
        "norm_F": float(abs(np.linalg.norm(x) - 1.0)),
        "norm_G": float(abs(np.linalg.norm(y) - 1.0)),
    }
    return MaxCorrelation(float(sv[0]), F, G, residuals)

