"""Dense complex linear algebra and the operator/superoperator bridge.

Vectorization is column stacking throughout the package:
``vec(X)[i + j*n] = X[i, j]``, so that ``vec(A @ X @ B) = (B.T kron A) vec(X)``.
A superoperator is an ``(n*n, n*n)`` complex array acting on ``vec(X)``.
"""
from typing import NamedTuple

import numpy as np

from .errors import DimMismatch, NotHermitian

HERMITIAN_RTOL = 1e-10


class HermitianSpectrum(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # unitary, columns are eigenvectors


def _square(M, name="matrix"):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def is_hermitian(M, rtol=HERMITIAN_RTOL):
    M = np.asarray(M)
    scale = max(np.linalg.norm(M), 1.0)
    return np.linalg.norm(M - M.conj().T) <= rtol * scale


def hermitian_eig(M):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before calling LAPACK so that the result is
    exactly reproducible for inputs that are Hermitian only up to rounding.
    """
    M = _square(M)
    if not is_hermitian(M):
        raise NotHermitian("matrix is not Hermitian to tolerance 1e-10")
    w, U = np.linalg.eigh(0.5 * (M + M.conj().T))
    return HermitianSpectrum(w, U)


def matrix_function(M, f):
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, U = hermitian_eig(M)
    return (U * f(w)) @ U.conj().T


def vec(X):
    X = np.asarray(X)
    if X.ndim != 2:
        raise DimMismatch(f"vec expects a matrix, got shape {X.shape}")
    return X.reshape(-1, order="F")


def devec(v, n=None, m=None):
    """Inverse of :func:`vec`; returns an ``n x m`` matrix (square by default)."""
    v = np.asarray(v)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    if m is None:
        m = v.size // n
    if n * m != v.size:
        raise DimMismatch(f"cannot reshape length {v.size} into {n}x{m}")
    return v.reshape((n, m), order="F")


def sandwich(A, B):
    """Superoperator of ``X -> A X B``."""
    A = _square(A, "A")
    B = _square(B, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"sandwich factors differ in size: {A.shape} vs {B.shape}")
    return np.kron(B.T, A)


def apply_super(S, X):
    """Apply superoperator ``S`` to the square matrix ``X``."""
    X = np.asarray(X)
    S = np.asarray(S)
    if S.shape[1] != X.size:
        raise DimMismatch(f"superoperator of width {S.shape[1]} cannot act on {X.shape}")
    out = S @ vec(X)
    n_out = int(round(np.sqrt(out.size)))
    return devec(out, n_out)


def compose(*ops):
    """Superoperator composition, applied right to left like ``f(g(x))``."""
    out = ops[0]
    for op in ops[1:]:
        if out.shape[1] != op.shape[0]:
            raise DimMismatch("superoperators cannot be composed")
        out = out @ op
    return out


def adjoint_hs(S):
    """Adjoint with respect to the Hilbert-Schmidt inner product."""
    return np.asarray(S).conj().T


def hs_inner(A, B):
    """``tr(A^dagger B)``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return np.vdot(A, B)


def spectral_superop(U, coeffs):
    """Superoperator ``sum_{j,m} coeffs[j, m] |u_j><u_j| # |u_m><u_m|``.

    ``U`` holds the orthonormal frame as columns. ``coeffs`` may have complex
    or zero entries; zero entries drop the corresponding block.
    """
    W = np.kron(U.conj(), U)
    return (W * vec(np.asarray(coeffs))) @ W.conj().T


def identity_superop(n):
    return np.eye(n * n, dtype=complex)


def partial_trace(rho, dims, keep):
    """Partial trace of a bipartite operator, keeping subsystem ``keep`` (0 or 1)."""
    n1, n2 = dims
    rho = np.asarray(rho)
    if rho.shape != (n1 * n2, n1 * n2):
        raise DimMismatch(f"operator of shape {rho.shape} is not on a {n1}x{n2} space")
    t = rho.reshape(n1, n2, n1, n2)
    if keep == 0:
        return np.einsum("ajbj->ab", t)
    return np.einsum("iaib->ab", t)
