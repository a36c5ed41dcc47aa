"""Density matrices, channels in Kraus form, POVMs and seeded generators."""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    BasisNotOrthonormal,
    DimMismatch,
    InvalidPovm,
    NotAChannel,
    NotAState,
    ParamError,
)

PSD_TOL = 1e-12
TRACE_TOL = 1e-12
FULL_RANK_RTOL = 1e-12
CHANNEL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise NotAState(f"density matrix must be square, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise NotAState("density matrix has non-finite entries")
        if not linalg.is_hermitian(M):
            raise NotAState("density matrix is not Hermitian")
        M = 0.5 * (M + M.conj().T)
        w = np.linalg.eigvalsh(M)
        if w[0] < -PSD_TOL:
            raise NotAState(f"density matrix has negative eigenvalue {w[0]:.3e}")
        if abs(np.trace(M).real - 1.0) > TRACE_TOL:
            raise NotAState(f"density matrix has trace {np.trace(M).real!r}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self):
        return linalg.hermitian_eig(self.matrix)

    @property
    def full_rank(self):
        w = self.spectrum.eigenvalues
        return bool(w[0] >= FULL_RANK_RTOL * w[-1])

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(np.asarray(rho))


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map stored as Kraus operators of shape ``(dim_out, dim_in)``.

    ``is_qc`` records that the channel was built as a quantum-classical
    channel; it is constructor provenance, not inferred from the Kraus set.
    """

    kraus: tuple
    is_qc: bool = False
    label: str = ""

    def __post_init__(self):
        ks = tuple(np.asarray(K, dtype=complex) for K in self.kraus)
        if not ks:
            raise NotAChannel("channel needs at least one Kraus operator")
        shape = ks[0].shape
        if len(shape) != 2 or any(K.shape != shape for K in ks):
            raise DimMismatch("Kraus operators must share one 2-d shape")
        for K in ks:
            K.setflags(write=False)
        object.__setattr__(self, "kraus", ks)
        completeness = sum(K.conj().T @ K for K in ks)
        err = np.linalg.norm(completeness - np.eye(shape[1]))
        if err > CHANNEL_TOL:
            raise NotAChannel(f"Kraus operators are not trace preserving (err {err:.2e})")

    @property
    def dim_in(self):
        return self.kraus[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus[0].shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    @cached_property
    def superop(self):
        """Matrix acting on column-stacked inputs: ``sum_k conj(K) kron K``."""
        return sum(np.kron(K.conj(), K) for K in self.kraus)

    @cached_property
    def choi(self):
        n = self.dim_in
        J = np.zeros((n * self.dim_out, n * self.dim_out), dtype=complex)
        for i in range(n):
            for j in range(n):
                Eij = np.zeros((n, n), dtype=complex)
                Eij[i, j] = 1.0
                J += np.kron(Eij, self.apply_matrix(Eij))
        return J

    def apply_matrix(self, X):
        X = np.asarray(X)
        if X.shape != (self.dim_in, self.dim_in):
            raise DimMismatch(f"channel on dim {self.dim_in} cannot act on {X.shape}")
        return sum(K @ X @ K.conj().T for K in self.kraus)

    def adjoint_matrix(self, Y):
        return sum(K.conj().T @ Y @ K for K in self.kraus)


def apply(ch, rho):
    """Channel output as a :class:`DensityMatrix`."""
    rho = as_density(rho)
    return DensityMatrix(ch.apply_matrix(rho.matrix))


def as_superoperator(ch):
    return ch.superop


def adjoint_channel(ch):
    """Superoperator of the Heisenberg-picture map ``Y -> sum K^dag Y K``."""
    return linalg.adjoint_hs(ch.superop)


def is_cptp(ch, tol=CHANNEL_TOL):
    n = ch.dim_in
    completeness = sum(K.conj().T @ K for K in ch.kraus)
    if np.linalg.norm(completeness - np.eye(n)) > tol:
        return False
    return bool(np.linalg.eigvalsh(ch.choi)[0] >= -tol)


def tensor(*channels):
    """Tensor product channel; Kraus set is all Kronecker products."""
    out = channels[0]
    for ch in channels[1:]:
        kraus = [np.kron(A, B) for A in out.kraus for B in ch.kraus]
        out = QuantumChannel(
            kraus,
            is_qc=out.is_qc and ch.is_qc,
            label=f"{out.label}*{ch.label}",
        )
    return out


# -- POVMs and named channels ------------------------------------------------


@dataclass(frozen=True, eq=False)
class Povm:
    effects: tuple

    def __post_init__(self):
        effs = tuple(np.asarray(F, dtype=complex) for F in self.effects)
        if not effs:
            raise InvalidPovm("POVM needs at least one effect")
        n = effs[0].shape[0]
        for j, F in enumerate(effs):
            if F.shape != (n, n):
                raise InvalidPovm(f"effect {j} has shape {F.shape}, expected {(n, n)}")
            if not linalg.is_hermitian(F):
                raise InvalidPovm(f"effect {j} is not Hermitian")
            w = np.linalg.eigvalsh(0.5 * (F + F.conj().T))
            if w[0] < -PSD_TOL:
                raise InvalidPovm(f"effect {j} is not positive semidefinite")
            if w[-1] <= PSD_TOL:
                raise InvalidPovm(f"effect {j} is the zero matrix")
        if np.linalg.norm(sum(effs) - np.eye(n)) > CHANNEL_TOL:
            raise InvalidPovm("effects do not sum to the identity")
        object.__setattr__(self, "effects", effs)

    @property
    def dim(self):
        return self.effects[0].shape[0]


def qc_channel(povm, basis=None):
    """Measure ``povm`` then prepare ``basis[:, j]`` on outcome ``j``.

    ``basis`` is a unitary whose columns are the prepared states; the
    computational basis is used when omitted. Kraus operators are
    ``|psi_j><phi_jk|`` with ``F_j = sum_k |phi_jk><phi_jk|``.
    """
    if not isinstance(povm, Povm):
        povm = Povm(povm)
    n = povm.dim
    if basis is None:
        basis = np.eye(n, dtype=complex)
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (n, len(povm.effects)) or len(povm.effects) != n:
        raise DimMismatch(
            f"need {n} effects and an {n}x{n} basis, got {len(povm.effects)} and {basis.shape}"
        )
    if np.linalg.norm(basis.conj().T @ basis - np.eye(n)) > CHANNEL_TOL:
        raise BasisNotOrthonormal("preparation basis is not orthonormal")
    kraus = []
    for j, F in enumerate(povm.effects):
        w, U = linalg.hermitian_eig(F)
        for lam, phi in zip(w, U.T):
            if lam > PSD_TOL:
                kraus.append(np.sqrt(lam) * np.outer(basis[:, j], phi.conj()))
    return QuantumChannel(kraus, is_qc=True, label="qc")


def identity_channel(n):
    return QuantumChannel([np.eye(n)], label="id")


def unitary_channel(U):
    return QuantumChannel([np.asarray(U)], label="unitary")


def depolarizing(eps, n=2):
    """``rho -> eps rho + (1 - eps) tr(rho) I/n``."""
    if not 0.0 <= eps <= 1.0:
        raise ParamError(f"depolarizing parameter must lie in [0, 1], got {eps}")
    kraus = [np.sqrt(eps) * np.eye(n)]
    if eps < 1.0:
        c = np.sqrt((1.0 - eps) / n)
        for i in range(n):
            for j in range(n):
                K = np.zeros((n, n))
                K[i, j] = c
                kraus.append(K)
    return QuantumChannel(kraus, label=f"depolarizing({eps:g})")


def bsc_channel(eps):
    """Quantum implementation of the binary symmetric channel."""
    if not 0.0 <= eps <= 1.0:
        raise ParamError(f"crossover probability must lie in [0, 1], got {eps}")
    F1 = np.diag([1.0 - eps, eps])
    ch = qc_channel(Povm([F1, np.eye(2) - F1]))
    return QuantumChannel(ch.kraus, is_qc=True, label=f"bsc({eps:g})")


def replacer_channel(omega, dim_in=None):
    """``rho -> tr(rho) omega``."""
    omega = as_density(omega).matrix
    n_out = omega.shape[0]
    n_in = n_out if dim_in is None else dim_in
    w, U = linalg.hermitian_eig(omega)
    kraus = []
    for lam, u in zip(w, U.T):
        if lam > PSD_TOL:
            for i in range(n_in):
                e = np.zeros(n_in)
                e[i] = 1.0
                kraus.append(np.sqrt(lam) * np.outer(u, e))
    return QuantumChannel(kraus, label="replacer")


# -- random generators --------------------------------------------------------


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_isometry(seed, rows, cols):
    rng = _rng(seed)
    Q, R = np.linalg.qr(_ginibre(rng, rows, cols))
    # fix column phases so the distribution is Haar and the output deterministic
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_unitary(seed, n):
    return random_isometry(seed, n, n)


def random_density(seed, n):
    """``G G^dag / tr`` with ``G`` complex Gaussian, resampled until full rank."""
    if n < 1:
        raise ParamError("dimension must be positive")
    rng = _rng(seed)
    while True:
        G = _ginibre(rng, n, n)
        M = G @ G.conj().T
        rho = DensityMatrix(M / np.trace(M).real)
        if rho.full_rank:
            return rho


def random_channel(seed, n, env_dim=None):
    """Random channel from a Haar isometry ``C^n -> C^n (x) C^env``."""
    env_dim = n * n if env_dim is None else env_dim
    if n < 1 or env_dim < 1:
        raise ParamError("dimensions must be positive")
    V = random_isometry(seed, n * env_dim, n)
    kraus = [V[k * n:(k + 1) * n, :] for k in range(env_dim)]
    return QuantumChannel(kraus, label="random")


def random_povm(seed, n, outcomes=None):
    """Random POVM with full-rank effects built from a random isometry."""
    outcomes = n if outcomes is None else outcomes
    V = random_isometry(seed, n * outcomes, n)
    effects = []
    for k in range(outcomes):
        B = V[k * n:(k + 1) * n, :]
        effects.append(B.conj().T @ B)
    # absorb the rounding residual into the last effect
    effects[-1] = effects[-1] + (np.eye(n) - sum(effects))
    return Povm(effects)


def random_qc_channel(seed, n):
    rng = _rng(seed)
    povm = random_povm(rng, n)
    basis = random_unitary(rng, n)
    return qc_channel(povm, basis)
