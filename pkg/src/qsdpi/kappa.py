"""Weight functions kappa for the chi^2_kappa divergence family.

Every member satisfies ``kappa(1) == 1`` and ``x * kappa(x) == kappa(1/x)``.
Only closed-form families are offered; arbitrary callables are not accepted
because membership (operator anti-monotonicity) cannot be certified
numerically.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParamError

FAMILIES = ("alpha", "wyd", "min", "max")

# Below this distance from x = 1 the WYD quotient is replaced by its series.
WYD_SERIES_RADIUS = 1e-6

_GRID = np.logspace(-6, 6, 4001)


@dataclass(frozen=True)
class KappaFunction:
    family: str
    param: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParamError(f"unknown kappa family {self.family!r}")
        if self.family == "alpha":
            if self.param is None or not 0.0 <= self.param <= 1.0:
                raise ParamError(f"alpha must lie in [0, 1], got {self.param}")
        elif self.family == "wyd":
            if self.param is None or not -1.0 <= self.param <= 2.0:
                raise ParamError(f"WYD beta must lie in [-1, 2], got {self.param}")
        elif self.param is not None:
            raise ParamError(f"{self.family} takes no parameter")

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        if self.family in ("alpha", "wyd"):
            return f"{self.family}:{self.param:g}"
        return self.family

    @property
    def is_half(self):
        return self.family == "alpha" and self.param == 0.5

    @classmethod
    def parse(cls, text):
        """Parse ``alpha:0.5``, ``wyd:1.5``, ``min``, ``max`` or ``half``."""
        text = text.strip().lower()
        if text == "half":
            return HALF
        if text in ("min", "max"):
            return cls(text)
        fam, sep, val = text.partition(":")
        if not sep or fam not in ("alpha", "wyd"):
            raise ParamError(f"cannot parse kappa {text!r}")
        try:
            param = float(val)
        except ValueError:
            raise ParamError(f"cannot parse kappa parameter {val!r}") from None
        return cls(fam, param)


def alpha(a):
    return KappaFunction("alpha", float(a))


def wyd(beta):
    return KappaFunction("wyd", float(beta))


HALF = KappaFunction("alpha", 0.5)
KMIN = KappaFunction("min")
KMAX = KappaFunction("max")


def _expm1_ratio(b, t):
    """``expm1(b t) / b``, continuous through ``b = 0`` where it equals ``t``."""
    u = b * t
    small = np.abs(u) < 1e-5
    phi = np.empty_like(u)
    us = u[small]
    phi[small] = 1.0 + us / 2.0 + us**2 / 6.0
    phi[~small] = np.expm1(u[~small]) / u[~small]
    return t * phi


def _wyd(beta, x):
    t = np.log(x)
    near = np.abs(x - 1.0) < WYD_SERIES_RADIUS
    out = np.empty_like(t)
    # second-order expansion in t = log x: 1 - t/2 + (1 - beta(1-beta)) t^2 / 12
    tn = t[near]
    out[near] = 1.0 - tn / 2.0 + (1.0 - beta * (1.0 - beta)) * tn**2 / 12.0
    tf = t[~near]
    num = _expm1_ratio(beta, tf) * _expm1_ratio(1.0 - beta, tf)
    out[~near] = num / np.expm1(tf) ** 2
    return out


def evaluate(kappa, x):
    """Evaluate ``kappa`` at positive ``x`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("kappa is defined for x > 0 only")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    fam = kappa.family
    if fam == "alpha":
        a = kappa.param
        if a == 0.5:
            out = arr**-0.5
        else:
            out = 0.5 * (arr**-a + arr ** (a - 1.0))
    elif fam == "wyd":
        out = _wyd(kappa.param, arr)
    elif fam == "min":
        out = 2.0 / (1.0 + arr)
    else:
        out = (1.0 + arr) / (2.0 * arr)
    return float(out[0]) if scalar else out


def dominance_verdict(kappa):
    """Decide ``kappa >= kappa_{1/2}``; returns ``(verdict, basis)``.

    ``basis`` is ``"analytic"`` for the known cases and ``"grid"`` when the
    answer comes from a log-spaced check on [1e-6, 1e6], which is heuristic.
    """
    if kappa.family in ("alpha", "max"):
        return True, "analytic"
    if kappa.family == "min":
        return False, "analytic"
    if kappa.param in (1.5, 2.0):
        return True, "analytic"
    vals = evaluate(kappa, _GRID)
    ok = bool(np.all(vals >= _GRID**-0.5 * (1.0 - 1e-12)))
    return ok, "grid"


def dominates_half(kappa):
    return dominance_verdict(kappa)[0]
