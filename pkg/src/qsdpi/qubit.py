"""Closed-form qubit SDPI constants, used as an oracle for the generic solvers.

The reference state is ``sigma = (I + s Z) / 2`` with ``s`` in ``[0, 1)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMeasurement, InvalidPovm, ParamError
from .kappa import HALF, KappaFunction, alpha, wyd
from .sdpi import sdpi_constant_eig
from .states import DensityMatrix, Povm, depolarizing, qc_channel

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_s(s):
    if not 0.0 <= s < 1.0:
        raise ParamError(f"s must lie in [0, 1), got {s}")


def qubit_sigma(s):
    _check_s(s)
    return DensityMatrix(0.5 * (I2 + s * PAULI_Z))


@dataclass(frozen=True)
class PauliPovmEffect:
    """``F1 = f0 I + fx X + fy Y + fz Z``; the POVM is ``{F1, I - F1}``."""

    f0: float
    fx: float = 0.0
    fy: float = 0.0
    fz: float = 0.0

    def __post_init__(self):
        r = np.sqrt(self.fx**2 + self.fy**2 + self.fz**2)
        if not 0.0 <= self.f0 <= 1.0 or r > min(self.f0, 1.0 - self.f0) + 1e-12:
            raise InvalidPovm("F1 and I - F1 must both be positive semidefinite")

    @property
    def matrix(self):
        return self.f0 * I2 + self.fx * PAULI_X + self.fy * PAULI_Y + self.fz * PAULI_Z

    def channel(self, basis=None):
        F1 = self.matrix
        return qc_channel(Povm([F1, I2 - F1]), basis)


def bsc_effect(eps):
    return PauliPovmEffect(0.5, 0.0, 0.0, (1.0 - 2.0 * eps) / 2.0)


def x_measurement_effect(xi):
    return PauliPovmEffect(0.5, xi / 2.0, 0.0, 0.0)


def c_s_forms(kappa: KappaFunction, s):
    """The three algebraically equivalent expressions for ``c_s``."""
    _check_s(s)
    x = (1.0 + s) / (1.0 - s)
    sym = kappa(x) * 2.0 / (1.0 - s) + kappa(1.0 / x) * 2.0 / (1.0 + s)
    upper = 4.0 / (1.0 - s) * kappa(x)
    lower = 4.0 / (1.0 + s) * kappa(1.0 / x)
    return sym, upper, lower


def c_s(kappa, s):
    """Off-diagonal weight of ``Omega_sigma``: ``(4 / (1 - s)) kappa((1 + s)/(1 - s))``."""
    return c_s_forms(kappa, s)[1]


def qc_eta_closed_form(effect: PauliPovmEffect, s, kappa):
    """SDPI constant of the two-outcome QC channel with effect ``F1``.

    Independent of the prepared basis. An effect proportional to the
    identity gives 0: the output then does not depend on the input.
    """
    _check_s(s)
    p = effect.f0 + s * effect.fz
    if p <= 0.0 or p >= 1.0:
        raise DegenerateMeasurement("tr(F1 sigma) must lie strictly inside (0, 1)")
    cs = c_s(kappa, s)
    weight = (effect.fx**2 + effect.fy**2) / cs + effect.fz**2 * (1.0 - s**2) / 4.0
    return 4.0 / (p * (1.0 - p)) * weight


def bsc_eta_closed_form(eps, s):
    """``(1 - 2 eps)^2 (1 - s^2) / (1 - (1 - 2 eps)^2 s^2)``, the same for every kappa."""
    _check_s(s)
    if not 0.0 <= eps <= 1.0:
        raise ParamError(f"crossover probability must lie in [0, 1], got {eps}")
    a = (1.0 - 2.0 * eps) ** 2
    return a * (1.0 - s**2) / (1.0 - a * s**2)


def depolarizing_eta_closed_form(eps, s, kappa):
    """Returns ``(eta, closed)``.

    ``closed`` is True when ``c_{s eps} >= (1 - s^2)/(1 - s^2 eps^2) c_s`` and
    ``eta = eps^2 c_{s eps} / c_s``; otherwise no closed form is known and the
    generic eigenvalue solver supplies ``eta``.
    """
    _check_s(s)
    if not 0.0 <= eps <= 1.0:
        raise ParamError(f"depolarizing parameter must lie in [0, 1], got {eps}")
    cs = c_s(kappa, s)
    cse = c_s(kappa, s * eps)
    if cse - (1.0 - s**2) / (1.0 - s**2 * eps**2) * cs >= 0.0:
        return eps**2 * cse / cs, True
    eta = sdpi_constant_eig(depolarizing(eps), qubit_sigma(s), kappa).eta
    return eta, False


# -- figure tables -------------------------------------------------------------

FIGURE_KINDS = ("bsc_sweep", "qc_alpha_sweep", "qc_wyd_sweep")


def figure_data(kind, params, grid):
    """Rows ``(parameter, eta_closed_form, eta_numeric)`` for a parameter sweep.

    ``bsc_sweep`` sweeps ``s`` with ``params["eps"]``; the QC sweeps vary the
    kappa parameter (alpha or WYD beta) at fixed ``params["xi"]``, ``params["s"]``.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ParamError("grid must be nonempty")
    rows = []
    if kind == "bsc_sweep":
        eps = float(params.get("eps", 0.05))
        effect = bsc_effect(eps)
        ch = effect.channel()
        for s in grid:
            closed = bsc_eta_closed_form(eps, s)
            numeric = sdpi_constant_eig(ch, qubit_sigma(s), HALF).eta
            rows.append({"s": s, "eta_closed_form": closed, "eta_numeric": numeric})
    elif kind in ("qc_alpha_sweep", "qc_wyd_sweep"):
        xi = float(params.get("xi", 0.95))
        s = float(params.get("s", 0.95))
        effect = x_measurement_effect(xi)
        ch = effect.channel()
        sigma = qubit_sigma(s)
        make, name = (alpha, "alpha") if kind == "qc_alpha_sweep" else (wyd, "beta")
        for g in grid:
            kappa = make(g)
            closed = qc_eta_closed_form(effect, s, kappa)
            numeric = sdpi_constant_eig(ch, sigma, kappa).eta
            rows.append({name: g, "eta_closed_form": closed, "eta_numeric": numeric})
    else:
        raise ParamError(f"unknown figure kind {kind!r}")
    return rows
