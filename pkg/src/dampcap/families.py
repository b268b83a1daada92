"""Direct-basis transition matrices for the standard damping families.

Every constructor returns a column-stochastic ``d x d`` matrix ``Q`` with
``Q[m, n] = 0`` for ``m > n``.  Families with a per-level damping rate accept
either a scalar (broadcast to every level) or a length-``d`` sequence.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import brentq

from .channel import _check_dim, as_transition
from .numerics import log_binomial

RENORM_TOL = 1e-9


def _per_level(gammas, d: int, name: str = "gamma") -> np.ndarray:
    g = np.asarray(gammas, dtype=float)
    if g.ndim == 0:
        g = np.full(d, float(g))
    if g.shape != (d,):
        raise ValueError(f"{name} must be a scalar or have length {d}, got shape {g.shape}")
    if np.any(~np.isfinite(g)):
        raise ValueError(f"{name} must be finite")
    return g


def _unit_range(g: np.ndarray, name: str = "gamma") -> None:
    bad = np.flatnonzero((g < 0) | (g > 1))
    if bad.size:
        n = int(bad[0])
        raise ValueError(f"{name}[{n}] = {g[n]} is outside [0, 1]")


def _nonnegative(g: np.ndarray, name: str = "gamma") -> None:
    bad = np.flatnonzero(g < 0)
    if bad.size:
        n = int(bad[0])
        raise ValueError(f"{name}[{n}] = {g[n]} is negative")


def _as_int(x, name: str) -> int:
    if isinstance(x, bool) or int(x) != x:
        raise ValueError(f"{name} must be an integer, got {x!r}")
    return int(x)


def _from_log_columns(logq: np.ndarray) -> np.ndarray:
    q = np.exp(logq)
    sums = q.sum(axis=0)
    drift = np.abs(sums - 1.0)
    if np.any(drift > RENORM_TOL):
        n = int(np.argmax(drift))
        raise ArithmeticError(f"column {n} sums to {sums[n]!r} after log-space evaluation")
    return as_transition(q / sums)


def bosonic(d: int, gammas) -> np.ndarray:
    """Binomial decay: ``Q(m|n) = C(n, m) g_n**(n-m) (1 - g_n)**m``."""
    d = _check_dim(d)
    g = _per_level(gammas, d)
    _unit_range(g)
    q = np.zeros((d, d))
    for n in range(d):
        m = np.arange(n + 1)
        binom = np.array([math.comb(n, k) for k in m], dtype=float)
        q[: n + 1, n] = binom * g[n] ** (n - m) * (1.0 - g[n]) ** m
    return as_transition(q)


def hypergeometric(d: int, M: int, L: int) -> np.ndarray:
    """``Q(m|n) = C(M, m) C(L - M, n - m) / C(L, n)``; ``M = L`` is lossless."""
    d = _check_dim(d)
    M, L = _as_int(M, "M"), _as_int(L, "L")
    if not 0 <= M <= L:
        raise ValueError(f"need 0 <= M <= L, got M={M}, L={L}")
    if d - 1 > L:
        raise ValueError(f"need d - 1 <= L, got d={d}, L={L}")
    logq = np.full((d, d), -np.inf)
    for n in range(d):
        for m in range(max(0, n + M - L), min(n, M) + 1):
            logq[m, n] = log_binomial(M, m) + log_binomial(L - M, n - m) - log_binomial(L, n)
    return _from_log_columns(logq)


def negative_hypergeometric(d: int, M: int, L: int) -> np.ndarray:
    """``Q(m|n) = C(m + M - 1, m) C(L - M - m, n - m) / C(L, n)`` for ``n <= L - M``."""
    d = _check_dim(d)
    M, L = _as_int(M, "M"), _as_int(L, "L")
    if M < 1 or L < 1:
        raise ValueError(f"M and L must be positive, got M={M}, L={L}")
    if d - 1 > L - M:
        raise ValueError(f"need d - 1 <= L - M, got d={d}, M={M}, L={L}")
    logq = np.full((d, d), -np.inf)
    for n in range(d):
        for m in range(n + 1):
            logq[m, n] = (log_binomial(m + M - 1, m) + log_binomial(L - M - m, n - m)
                          - log_binomial(L, n))
    return _from_log_columns(logq)


def _log_rising(x: float, k: int) -> float:
    """``ln x (x + 1) ... (x + k - 1)``."""
    return float(np.sum(np.log(x + np.arange(k)))) if k else 0.0


def beta_binomial(d: int, alpha: float, beta: float) -> np.ndarray:
    """``Q(m|n) = C(n, m) B(m + alpha, n - m + beta) / B(alpha, beta)``.

    The beta-function ratio is expanded into rising factorials, which avoids
    the cancellation between large log-gamma values when ``alpha + beta`` is big.
    """
    d = _check_dim(d)
    if not (alpha > 0 and beta > 0):
        raise ValueError(f"alpha and beta must be positive, got alpha={alpha}, beta={beta}")
    alpha, beta = float(alpha), float(beta)
    logq = np.full((d, d), -np.inf)
    for n in range(d):
        denom = _log_rising(alpha + beta, n)
        for m in range(n + 1):
            logq[m, n] = (log_binomial(n, m) + _log_rising(alpha, m)
                          + _log_rising(beta, n - m) - denom)
    return _from_log_columns(logq)


def _geometric_column(g: float, n: int) -> np.ndarray:
    # weights g**(n - m) normalized by their sum, equal to (1-g)/(1-g**(n+1)) g**(n-m)
    w = g ** (n - np.arange(n + 1, dtype=float))
    return w / w.sum()


def geometric(d: int, gammas) -> np.ndarray:
    """``Q(m|n) = (1 - g_n) / (1 - g_n**(n+1)) g_n**(n-m)``; uniform column at ``g_n = 1``."""
    d = _check_dim(d)
    g = _per_level(gammas, d)
    _nonnegative(g)
    q = np.zeros((d, d))
    for n in range(d):
        q[: n + 1, n] = _geometric_column(g[n], n)
    return as_transition(q)


def constant_ratio_diagonal(g: float, n: int) -> float:
    """Diagonal entry ``(1 - 2g + g**(n+1)) / (1 - g)``, i.e. ``1 - sum_{k=1..n} g**k``."""
    return 1.0 - float(np.sum(g ** np.arange(1, n + 1, dtype=float)))


def constant_ratio(d: int, gammas) -> np.ndarray:
    """Off-diagonal ``Q(m|n) = g_n**(n-m)``, remaining weight on the diagonal."""
    d = _check_dim(d)
    g = _per_level(gammas, d)
    _nonnegative(g)
    q = np.zeros((d, d))
    for n in range(d):
        diag = constant_ratio_diagonal(g[n], n)
        if diag < -1e-12:
            raise ValueError(
                f"gamma[{n}] = {g[n]} is inadmissible: diagonal Q({n}|{n}) = {diag:.6g} < 0")
        q[:n, n] = g[n] ** (n - np.arange(n, dtype=float))
        q[n, n] = max(diag, 0.0)
    return as_transition(q)


def constant_ratio_max_gamma(d: int) -> float:
    """Largest uniform ``gamma`` for which the constant-ratio channel is valid."""
    d = _check_dim(d)
    if d <= 2:
        return 1.0
    # the top level is the binding constraint and its diagonal decreases in gamma
    return brentq(lambda g: constant_ratio_diagonal(g, d - 1), 0.0, 1.0, xtol=1e-15)


def two_jump(d: int, gamma1: float, gamma2: float) -> np.ndarray:
    """Each level decays by one step (rate ``gamma1``) or two steps (``gamma2``)."""
    d = _check_dim(d)
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError(f"rates must be nonnegative, got gamma1={gamma1}, gamma2={gamma2}")
    if d == 2 and gamma2 != 0:
        warnings.warn("two_jump with d=2 has no two-step decay; gamma2 is ignored",
                      stacklevel=2)
    q = np.zeros((d, d))
    q[0, 0] = 1.0
    if d > 1:
        q[1, 1] = 1.0 / (1.0 + gamma1)
        q[0, 1] = gamma1 / (1.0 + gamma1)
    for n in range(2, d):
        z = 1.0 + gamma1 + gamma2
        q[n, n] = 1.0 / z
        q[n - 1, n] = gamma1 / z
        q[n - 2, n] = gamma2 / z
    return as_transition(q)


def lambda_channel(d: int, gamma: float) -> np.ndarray:
    """Only the top level decays, geometrically, into every lower level."""
    d = _check_dim(d)
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    q = np.eye(d)
    q[:, d - 1] = _geometric_column(float(gamma), d - 1)
    return as_transition(q)


def v_channel(d: int, gammas) -> np.ndarray:
    """Every excited level either survives (``1 - g_n``) or drops to the ground level."""
    d = _check_dim(d)
    g = _per_level(gammas, d)
    _unit_range(g)
    q = np.eye(d)
    for n in range(1, d):
        q[n, n] = 1.0 - g[n]
        q[0, n] = g[n]
    return as_transition(q)


@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[..., np.ndarray]
    params: dict[str, type]
    # parameter values that make the channel the identity, if any exist
    lossless: dict[str, Any] | None = None
    per_level: tuple[str, ...] = ()


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in [
        Family("bosonic", lambda d, gamma: bosonic(d, gamma), {"gamma": float},
               {"gamma": 0.0}, ("gamma",)),
        Family("hypergeometric", hypergeometric, {"M": int, "L": int}, None),
        Family("negative_hypergeometric", negative_hypergeometric, {"M": int, "L": int}, None),
        Family("beta_binomial", beta_binomial, {"alpha": float, "beta": float}, None),
        Family("geometric", lambda d, gamma: geometric(d, gamma), {"gamma": float},
               {"gamma": 0.0}, ("gamma",)),
        Family("constant_ratio", lambda d, gamma: constant_ratio(d, gamma), {"gamma": float},
               {"gamma": 0.0}, ("gamma",)),
        Family("two_jump", two_jump, {"gamma1": float, "gamma2": float},
               {"gamma1": 0.0, "gamma2": 0.0}),
        Family("lambda", lambda_channel, {"gamma": float}, {"gamma": 0.0}),
        Family("v", lambda d, gamma: v_channel(d, gamma), {"gamma": float},
               {"gamma": 0.0}, ("gamma",)),
    ]
}


def lossless_params(family: str, d: int) -> dict[str, Any] | None:
    """Parameters giving the exact identity channel, or ``None`` if the family has none."""
    fam = get_family(family)
    if family == "hypergeometric":
        return {"M": max(d - 1, 1), "L": max(d - 1, 1)}
    return None if fam.lossless is None else dict(fam.lossless)


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown channel family {name!r}") from None


@dataclass(frozen=True)
class ChannelSpec:
    """A family name, a dimension and the family's parameters."""

    family: str
    d: int
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        fam = get_family(self.family)
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        missing = set(fam.params) - set(self.params)
        extra = set(self.params) - set(fam.params)
        if extra:
            raise ValueError(f"unknown parameter {sorted(extra)[0]!r} for family {self.family!r}")
        if missing:
            raise ValueError(f"missing parameter {sorted(missing)[0]!r} for family {self.family!r}")
        clean = {}
        for key, kind in fam.params.items():
            val = self.params[key]
            if key in fam.per_level and isinstance(val, (list, tuple, np.ndarray)):
                clean[key] = [float(v) for v in val]
            elif kind is int:
                clean[key] = _as_int(val, key)
            else:
                if isinstance(val, bool) or not isinstance(val, (int, float, np.floating, np.integer)):
                    raise ValueError(f"parameter {key!r} must be a number, got {val!r}")
                clean[key] = float(val)
        object.__setattr__(self, "params", clean)

    def transition(self) -> np.ndarray:
        return get_family(self.family).build(self.d, **self.params)

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "d": self.d, "params": dict(self.params)}


def family_moments(spec: ChannelSpec, n: int) -> tuple[float, float]:
    """Closed-form mean and variance of column ``n`` (the decay distribution of level ``n``)."""
    p = spec.params
    if not 0 <= n < spec.d:
        raise IndexError(f"level {n} out of range for d={spec.d}")
    if spec.family == "bosonic":
        g = _per_level(p["gamma"], spec.d)[n]
        return n * (1 - g), n * g * (1 - g)
    if spec.family == "hypergeometric":
        M, L = p["M"], p["L"]
        r = M / L
        var = n * r * (1 - r) * (L - n) / (L - 1) if L > 1 else 0.0
        return n * r, var
    if spec.family == "negative_hypergeometric":
        M, L = p["M"], p["L"]
        mu = n * M / (L - n + 1)
        if n == 0:
            return 0.0, 0.0
        return mu, mu * (1 - mu / n) * (L + 1) / (L - n + 2)
    if spec.family == "beta_binomial":
        a, b = p["alpha"], p["beta"]
        xi = a / (a + b)
        return n * xi, n * xi * (1 - xi) * (a + b + n) / (a + b + 1)
    raise ValueError(f"no closed-form moments for family {spec.family!r}")
