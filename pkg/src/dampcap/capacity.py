"""Mutual-information optimization and Holevo quantities for damping channels."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .channel import (amplitudes_from_transition, as_amplitudes, as_transition,
                      direct_transition, fourier_output_state, fourier_transition,
                      level_populations)
from .families import ChannelSpec
from .numerics import _entropy_terms, as_prob_vector, shannon_entropy, von_neumann_entropy

LN2 = math.log(2.0)
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
CIRCULANT_TOL = 1e-9
PRIOR_FLOOR = 1e-300
POLISH_SUPPORT = 1e-6
POLISH_STEPS = 50
POLISH_RESIDUAL = 1e-13
POLISH_BELOW = 1e-4
POLISH_EVERY = 64
SUPPORT_THRESHOLD = 0.01
TIE_TOL = 1e-12


class ConvergenceWarning(UserWarning):
    pass


def _neg_column_entropies(q: np.ndarray) -> np.ndarray:
    """``sum_m Q[m, n] ln Q[m, n]`` per column, in nats."""
    safe = np.where(q > 0, q, 1.0)
    return np.sum(q * np.log(safe), axis=0)


def _divergences(q: np.ndarray, qlogq: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``D_n = sum_m Q[m, n] ln(Q[m, n] / (Q p)[m])`` in nats.

    A letter reaching an output that the prior never produces gets ``+inf``.
    """
    out = q @ p
    dead = out <= 0
    log_out = np.log(np.where(dead, 1.0, out))
    D = qlogq - q.T @ log_out
    if dead.any():
        D[(q[dead] > 0).any(axis=0)] = np.inf
    return D


def _average(p: np.ndarray, D: np.ndarray) -> float:
    live = p > 0
    return float(p[live] @ D[live])


def mutual_information(q, p) -> float:
    """``I(X;Y)`` in bits for column-stochastic ``Q`` and input prior ``p``."""
    q = as_transition(q)
    p = as_prob_vector(p)
    if p.size != q.shape[1]:
        raise ValueError(f"prior has length {p.size}, channel has {q.shape[1]} inputs")
    info = _average(p, _divergences(q, _neg_column_entropies(q), p)) / LN2
    return max(info, 0.0)


@dataclass
class BAResult:
    prior: np.ndarray
    information: float
    iterations: int
    gap: float
    certified: bool
    history: list[float] = field(default_factory=list, repr=False)


def _ba_update(p: np.ndarray, D: np.ndarray) -> np.ndarray:
    """One Blahut-Arimoto reweighting ``p_n exp(D_n) / Z``, clamped below at the floor."""
    w = p * np.exp(D - D.max())
    w /= w.sum()
    np.maximum(w, PRIOR_FLOOR, out=w)
    return w / w.sum()


def _squarem(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray | None:
    """Squared extrapolation through three successive iterates, or ``None``."""
    r = p1 - p0
    v = p2 - 2 * p1 + p0
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return None
    alpha = min(-np.linalg.norm(r) / nv, -1.0)
    while alpha < -1.0 - 1e-3:
        p3 = p0 - 2 * alpha * r + alpha * alpha * v
        if np.all(p3 >= PRIOR_FLOOR) and np.all(np.isfinite(p3)):
            return p3 / p3.sum()
        alpha = (alpha - 1.0) / 2.0
    return None


def _kkt_newton(q, qlogq, fixed, support, x):
    """Newton iterations for ``D_n = C`` (n in support) with the support mass fixed.

    Returns ``(x, None)`` on convergence, ``(x, n)`` when letter ``n`` would
    need negative mass, or ``None`` if the iteration does not settle.
    """
    budget = 1.0 - fixed.sum()
    qs = q[:, support]
    k = x.size
    C = None
    for _ in range(POLISH_STEPS):
        trial = fixed.copy()
        trial[support] = x
        out = q @ trial
        D = _divergences(q, qlogq, trial)[support]
        if C is None:
            C = float(x @ D) / budget
        res = np.append(D - C, x.sum() - budget)
        if np.abs(res).max() <= POLISH_RESIDUAL:
            return x, None
        inv = 1.0 / np.where(out > 0, out, np.inf)
        J = np.zeros((k + 1, k + 1))
        J[:k, :k] = -(qs.T * inv) @ qs
        J[:k, k] = -1.0
        J[k, :k] = 1.0
        step = np.linalg.lstsq(J, -res, rcond=None)[0]
        dx = step[:k]
        ratio = np.where(dx < 0, -x / np.where(dx < 0, dx, -1.0), np.inf)
        if ratio.min() <= 1.0:
            return x, int(np.flatnonzero(support)[np.argmin(ratio)])
        x = x + dx
        C += step[k]
    return None


def _newton_polish(q, qlogq, p):
    """Solve the capacity optimality conditions on the apparent support of ``p``.

    Letters outside the support keep their (tiny) masses.  A support letter
    driven to nonpositive mass is moved to the floor and the solve restarts.
    Returns the polished prior, or ``None`` if Newton fails to settle.
    """
    support = p > POLISH_SUPPORT * p.max()
    fixed = np.where(support, 0.0, p)
    while support.any():
        budget = 1.0 - fixed.sum()
        result = _kkt_newton(q, qlogq, fixed, support, p[support] / p[support].sum() * budget)
        if result is None:
            return None
        x, blocked = result
        if blocked is None:
            trial = fixed.copy()
            trial[support] = x
            return trial / trial.sum()
        support[blocked] = False
        fixed[blocked] = PRIOR_FLOOR
    return None


def blahut_arimoto(q, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                   record: bool = False, accelerate: bool = True) -> BAResult:
    """Capacity-achieving prior of a classical channel by Blahut-Arimoto.

    Starts from the uniform prior and iterates ``p_n <- p_n exp(D_n) / Z``
    until the capacity bracket ``max_n D_n - sum_n p_n D_n`` (bits, maximum
    over every input letter) drops to ``tol``.  The returned ``information``
    is the mutual information of the final prior; the true capacity lies
    within ``gap`` above it.

    With ``accelerate`` every pair of updates is followed by a squared
    extrapolation step, and once the bracket is small the optimality
    conditions ``D_n = C`` are solved on the apparent support by Newton's
    method.  Each such move is kept only if it does not lower the
    information, so the iterates stay monotone, and certification always
    uses the full bracket.  ``iterations`` counts update evaluations.

    If ``max_iter`` runs out first, the last iterate is returned with
    ``certified=False`` and a ``ConvergenceWarning`` is issued.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    q = as_transition(q)
    d = q.shape[1]
    qlogq = _neg_column_entropies(q)
    p = np.full(d, 1.0 / d)
    D = _divergences(q, qlogq, p)
    next_check = POLISH_EVERY
    history = []
    it = 0
    while True:
        info = _average(p, D)
        gap = (D.max() - info) / LN2
        if record:
            history.append(info / LN2)
        if gap <= tol or it >= max_iter:
            break
        if accelerate and it >= next_check and gap < POLISH_BELOW:
            next_check = it + POLISH_EVERY
            polished = _newton_polish(q, qlogq, p)
            if polished is not None:
                D_pol = _divergences(q, qlogq, polished)
                if _average(polished, D_pol) >= info:
                    p, D = polished, D_pol
                    continue
        p1 = _ba_update(p, D)
        it += 1
        if not accelerate or it + 2 > max_iter:
            p, D = p1, _divergences(q, qlogq, p1)
            continue
        D1 = _divergences(q, qlogq, p1)
        p2 = _ba_update(p1, D1)
        it += 1
        D2 = _divergences(q, qlogq, p2)
        p3 = _squarem(p, p1, p2)
        p, D = p2, D2
        if p3 is not None:
            p4 = _ba_update(p3, _divergences(q, qlogq, p3))
            it += 1
            D4 = _divergences(q, qlogq, p4)
            if _average(p4, D4) >= _average(p2, D2):
                p, D = p4, D4
    certified = gap <= tol
    if not certified:
        warnings.warn(f"Blahut-Arimoto stopped after {it} iterations with gap {gap:.3e} bits",
                      ConvergenceWarning, stacklevel=2)
    return BAResult(prior=p, information=max(info / LN2, 0.0), iterations=it,
                    gap=max(gap, 0.0), certified=bool(certified), history=history)


def is_circulant(q, tol: float = CIRCULANT_TOL) -> bool:
    q = np.asarray(q, dtype=float)
    d = q.shape[0]
    idx = (np.arange(d)[:, None] - np.arange(d)[None, :]) % d
    return bool(np.all(np.abs(q - q[idx, 0]) <= tol))


def symmetric_capacity(qt) -> float:
    """Capacity ``log2 d - H(column)`` of a circulant channel, whose optimal prior is uniform."""
    qt = as_transition(qt)
    if not is_circulant(qt):
        raise ValueError("transition matrix is not circulant; use blahut_arimoto")
    d = qt.shape[0]
    return max(math.log2(d) - shannon_entropy(qt[:, 0]), 0.0)


def holevo_direct(q, prior) -> float:
    """Holevo quantity of the computational-basis ensemble.

    The outputs are diagonal, so this is ``H(Q p) - sum_n p_n H(Q[:, n])``.
    """
    q = as_transition(q)
    prior = as_prob_vector(prior)
    if prior.size != q.shape[1]:
        raise ValueError(f"prior has length {prior.size}, channel has {q.shape[1]} inputs")
    col_h = np.array([_entropy_terms(q[:, n]) for n in range(q.shape[1])])
    return max(shannon_entropy(q @ prior) - float(prior @ col_h), 0.0)


def holevo_fourier(c) -> float:
    """Holevo quantity of the uniform Fourier-basis ensemble.

    The average output is diagonal with populations ``w_m``, and every
    Fourier output state shares the spectrum of the ``n = 0`` one, so
    ``chi = H(w) - S(rho_0)``.
    """
    c = as_amplitudes(c)
    return max(shannon_entropy(level_populations(c))
               - von_neumann_entropy(fourier_output_state(c, 0)), 0.0)


@dataclass
class CapacityReport:
    spec: ChannelSpec | None
    i_direct: float
    i_fourier: float
    c_det: float
    winner: str
    chi_direct: float
    chi_fourier: float
    delta: float
    prior_direct: np.ndarray
    prior_entropy: float
    ba_iterations: int
    ba_certified: bool = True

    @property
    def d(self) -> int:
        return self.prior_direct.size

    def prior_support(self, threshold: float = SUPPORT_THRESHOLD) -> list[int]:
        """Input letters the optimal direct-basis prior actually uses."""
        return [int(n) for n in np.flatnonzero(self.prior_direct > threshold)]

    def to_dict(self) -> dict[str, Any]:
        out = self.spec.to_dict() if self.spec is not None else {"family": None, "d": self.d,
                                                                   "params": {}}
        out.update(
            i_direct=self.i_direct, i_fourier=self.i_fourier, c_det=self.c_det,
            winner=self.winner, chi_direct=self.chi_direct, chi_fourier=self.chi_fourier,
            delta=self.delta, prior_direct=[float(x) for x in self.prior_direct],
            prior_entropy=self.prior_entropy, ba_iterations=self.ba_iterations,
            ba_certified=bool(self.ba_certified),
        )
        return out


def report_from_amplitudes(c, spec: ChannelSpec | None = None, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> CapacityReport:
    """Detected capacity of the channel with amplitude matrix ``c``."""
    c = as_amplitudes(c)
    d = c.shape[0]
    if d < 2:
        raise ValueError("detected capacity needs d >= 2")
    q = direct_transition(c)
    ba = blahut_arimoto(q, tol=tol, max_iter=max_iter)
    i_direct = ba.information
    i_fourier = symmetric_capacity(fourier_transition(c))
    winner = "fourier" if i_fourier >= i_direct - TIE_TOL else "direct"
    c_det = max(i_direct, i_fourier)
    chi_fourier = holevo_fourier(c)
    return CapacityReport(
        spec=spec,
        i_direct=i_direct,
        i_fourier=i_fourier,
        c_det=c_det,
        winner=winner,
        chi_direct=holevo_direct(q, ba.prior),
        chi_fourier=chi_fourier,
        delta=(chi_fourier - c_det) / math.log2(d),
        prior_direct=ba.prior,
        prior_entropy=shannon_entropy(ba.prior),
        ba_iterations=ba.iterations,
        ba_certified=ba.certified,
    )


def detected_capacity(spec: ChannelSpec, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> CapacityReport:
    """Best of the direct and Fourier encodings for a named channel family."""
    c = amplitudes_from_transition(spec.transition())
    return report_from_amplitudes(c, spec=spec, tol=tol, max_iter=max_iter)
