import numpy as np
import pytest

from qsdpi import kappa as K
from qsdpi.correlation import (
    BipartiteState,
    bilinear_matrix,
    canonical_purification,
    channel_output_bipartite,
    maximal_correlation,
)
from qsdpi.errors import DimMismatch
from qsdpi.linalg import partial_trace, vec
from qsdpi.sdpi import sdpi_constant
from qsdpi.states import (
    DensityMatrix,
    bsc_channel,
    identity_channel,
    random_density,
    random_isometry,
    random_unitary,
    replacer_channel,
)

from conftest import ALL_KAPPAS, random_instance, random_matrix


def _mho_norm2(X, rho, kappa):
    """<X, Mho_rho X> by explicit double sum over the support eigenpairs."""
    s, U = np.linalg.eigh(rho)
    total = 0.0
    for j in range(len(s)):
        for m in range(len(s)):
            if s[j] > 1e-12 and s[m] > 1e-12:
                amp = U[:, j].conj() @ X @ U[:, m]
                total += s[j] * kappa(s[j] / s[m]) * abs(amp) ** 2
    return total


def test_purification_marginals():
    for seed in range(10):
        sigma = random_density(seed, 3)
        psi = canonical_purification(sigma)
        P = psi.projector()
        assert np.linalg.norm(partial_trace(P, (3, 3), 1) - sigma.matrix) <= 1e-10
        assert np.linalg.norm(partial_trace(P, (3, 3), 0) - sigma.matrix) <= 1e-10


def test_purification_of_maximally_mixed_and_pure():
    psi = canonical_purification(np.eye(2) / 2)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert abs(abs(np.vdot(bell, psi.amplitudes)) - 1) <= 1e-12
    prod = canonical_purification(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(np.abs(prod.amplitudes), [1, 0, 0, 0], atol=1e-12)


def test_channel_output_identity_and_replacer():
    sigma = random_density(1, 2)
    psi = canonical_purification(sigma)
    out = channel_output_bipartite(identity_channel(2), psi)
    np.testing.assert_allclose(out.matrix, psi.projector(), atol=1e-14)
    omega = random_density(2, 3)
    rep = channel_output_bipartite(replacer_channel(omega, dim_in=2), psi)
    np.testing.assert_allclose(rep.matrix, np.kron(sigma.matrix, omega.matrix), atol=1e-13)
    assert rep.dims == (2, 3)


def test_first_marginal_unchanged():
    ch, sigma = random_instance(3, 3)
    out = channel_output_bipartite(ch, canonical_purification(sigma))
    np.testing.assert_allclose(out.marginal(0).matrix, sigma.matrix, atol=1e-12)
    np.testing.assert_allclose(out.marginal(1).matrix, ch(sigma).matrix, atol=1e-12)


def test_channel_output_dim_mismatch():
    with pytest.raises(DimMismatch):
        channel_output_bipartite(identity_channel(3), canonical_purification(np.eye(2) / 2))
    with pytest.raises(DimMismatch):
        BipartiteState(np.eye(4) / 4, (2, 3))


def test_bsc_gives_doubly_symmetric_binary_source():
    eps = 0.15
    out = channel_output_bipartite(bsc_channel(eps), canonical_purification(np.eye(2) / 2))
    np.testing.assert_allclose(out.matrix, 0.5 * np.diag([1 - eps, eps, eps, 1 - eps]), atol=1e-14)
    # classical maximal correlation of that source is 1 - 2 eps
    assert maximal_correlation(out, K.HALF).mu == pytest.approx(1 - 2 * eps, abs=1e-12)


def test_bilinear_matrix_convention():
    rng = np.random.default_rng(0)
    rho = BipartiteState(random_density(rng, 6), (2, 3))
    F, G = random_matrix(rng, 2), random_matrix(rng, 3)
    direct = np.trace(rho.matrix @ np.kron(F, G.conj().T))
    assert vec(G).conj() @ bilinear_matrix(rho) @ vec(F) == pytest.approx(direct, abs=1e-13)


def test_product_state_has_zero_correlation(kappa):
    rho = np.kron(random_density(0, 2).matrix, random_density(1, 3).matrix)
    assert maximal_correlation(BipartiteState(rho, (2, 3)), kappa).mu == pytest.approx(0.0, abs=1e-12)


def test_maximally_entangled_has_unit_correlation():
    psi = canonical_purification(np.eye(3) / 3)
    rho = BipartiteState(DensityMatrix(psi.projector()), (3, 3))
    assert maximal_correlation(rho, K.HALF).mu == pytest.approx(1.0, abs=1e-12)


def test_optimizers_attain_value_and_satisfy_constraints(kappa):
    for seed in range(5):
        ch, sigma = random_instance(10 + seed, 3)
        rho = channel_output_bipartite(ch, canonical_purification(sigma))
        res = maximal_correlation(rho, kappa)
        r1, r2 = rho.marginal(0).matrix, rho.marginal(1).matrix
        value = abs(np.trace(rho.matrix @ np.kron(res.F, res.G.conj().T)))
        assert value == pytest.approx(res.mu, abs=1e-10)
        assert abs(np.trace(r1 @ res.F)) <= 1e-10 and abs(np.trace(r2 @ res.G)) <= 1e-10
        assert _mho_norm2(res.F, r1, kappa) == pytest.approx(1.0, abs=1e-10)
        assert _mho_norm2(res.G, r2, kappa) == pytest.approx(1.0, abs=1e-10)


def test_random_feasible_pairs_stay_below(kappa):
    rng = np.random.default_rng(5)
    ch, sigma = random_instance(20, 2)
    rho = channel_output_bipartite(ch, canonical_purification(sigma))
    mu = maximal_correlation(rho, kappa).mu
    r1, r2 = rho.marginal(0).matrix, rho.marginal(1).matrix
    for _ in range(200):
        F, G = random_matrix(rng, 2), random_matrix(rng, 2)
        F = F - np.trace(r1 @ F) * np.eye(2)
        G = G - np.trace(r2 @ G) * np.eye(2)
        F /= np.sqrt(_mho_norm2(F, r1, kappa))
        G /= np.sqrt(_mho_norm2(G, r2, kappa))
        assert abs(np.trace(rho.matrix @ np.kron(F, G.conj().T))) <= mu + 1e-10


@pytest.mark.parametrize("kappa", ALL_KAPPAS, ids=str)
def test_mu_in_unit_interval(kappa):
    for seed in range(10):
        rho = BipartiteState(random_density(seed, 6), (2, 3))
        mu = maximal_correlation(rho, kappa).mu
        assert -1e-12 <= mu <= 1 + 1e-9


def test_sqrt_eta_half_equals_mu_half():
    for seed in range(30):
        ch, sigma = random_instance(100 + seed, 2 + seed % 2)
        eta = sdpi_constant(ch, sigma, K.HALF).eta
        mu = maximal_correlation(channel_output_bipartite(ch, canonical_purification(sigma)), K.HALF).mu
        assert abs(np.sqrt(eta) - mu) <= 1e-8


def test_rotated_purification_gives_same_mu():
    for seed in range(10):
        ch, sigma = random_instance(200 + seed, 3)
        psi = canonical_purification(sigma)
        W = random_unitary(seed, 3)
        rotated = type(psi)(np.kron(W, np.eye(3)) @ psi.amplitudes, 3)
        a = maximal_correlation(channel_output_bipartite(ch, psi), K.HALF).mu
        b = maximal_correlation(channel_output_bipartite(ch, rotated), K.HALF).mu
        assert abs(a - b) <= 1e-8


def test_isometry_invariance(kappa):
    for seed in range(5):
        rng = np.random.default_rng(seed)
        rho = BipartiteState(random_density(rng, 4), (2, 2))
        U, V = random_isometry(rng, 4, 2), random_isometry(rng, 4, 2)
        W = np.kron(U, V)
        big = BipartiteState(DensityMatrix(W @ rho.matrix @ W.conj().T), (4, 4))
        assert abs(maximal_correlation(big, kappa).mu - maximal_correlation(rho, kappa).mu) <= 1e-8
