import numpy as np
import pytest
import scipy.linalg

from qsdpi import kappa as K
from qsdpi.states import random_channel, random_density

ALL_KAPPAS = [
    K.HALF,
    K.alpha(0.0),
    K.alpha(0.25),
    K.alpha(0.9),
    K.wyd(-1.0),
    K.wyd(-0.3),
    K.wyd(0.0),
    K.wyd(0.5),
    K.wyd(1.5),
    K.wyd(2.0),
    K.KMIN,
    K.KMAX,
]


@pytest.fixture(params=ALL_KAPPAS, ids=str)
def kappa(request):
    return request.param


def random_instance(seed, n=None):
    rng = np.random.default_rng(seed)
    n = n if n is not None else int(rng.integers(2, 5))
    return random_channel(rng, n), random_density(rng, n)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_traceless_hermitian(rng, n):
    A = random_matrix(rng, n)
    A = A + A.conj().T
    return A - np.trace(A) / n * np.eye(n)


def omega_oracle(sigma, kappa):
    """Omega = R_sigma^-1 kappa(L_sigma R_sigma^-1) from dense superoperator algebra.

    Independent of the package's eigenframe construction: left/right
    multiplications are Kronecker products and kappa is applied through
    scipy's Hermitian eigensolver on the n^2 x n^2 modular operator.
    """
    sigma = np.asarray(sigma)
    n = sigma.shape[0]
    inv = np.linalg.inv(sigma)
    eye = np.eye(n)
    L = np.kron(eye, sigma)
    R_inv = np.kron(inv.T, eye)
    modular = L @ R_inv
    modular = 0.5 * (modular + modular.conj().T)
    w, V = scipy.linalg.eigh(modular)
    k_mod = (V * kappa(w)) @ V.conj().T
    return R_inv @ k_mod


def traceless_hermitian_basis(n):
    """Real orthonormal basis of traceless Hermitian n x n matrices."""
    basis = []
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[j, k] = E[k, j] = 1 / np.sqrt(2)
            basis.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[j, k], E[k, j] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            basis.append(E)
    for d in range(1, n):
        diag = np.zeros(n)
        diag[:d] = 1.0
        diag[d] = -d
        basis.append(np.diag(diag / np.linalg.norm(diag)).astype(complex))
    return basis


def eta_oracle(ch, sigma, kappa):
    """sup over traceless Hermitian A of the contraction ratio.

    Generalized symmetric eigenproblem in a real basis of H_n^0 with the
    dense Omega oracle: no Hermitization, no deflation.
    """
    sigma = np.asarray(sigma)
    n = sigma.shape[0]
    out = ch.apply_matrix(sigma)
    om_in = omega_oracle(sigma, kappa)
    om_out = omega_oracle(out, kappa)
    basis = traceless_hermitian_basis(n)
    vin = np.array([b.reshape(-1, order="F") for b in basis]).T
    vout = np.array([ch.apply_matrix(b).reshape(-1, order="F") for b in basis]).T
    num = (vout.conj().T @ om_out @ vout).real
    den = (vin.conj().T @ om_in @ vin).real
    num = 0.5 * (num + num.T)
    den = 0.5 * (den + den.T)
    return scipy.linalg.eigh(num, den, eigvals_only=True)[-1]
