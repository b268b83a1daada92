"""Multilevel damping channels: amplitudes, Kraus operators, transition matrices.

A damping channel on ``d`` levels is fixed by a real upper-triangular
amplitude matrix ``c`` with ``c[m, n]`` the amplitude for level ``n`` to
decay to level ``m <= n``.  Its Kraus operators are

    A_k = sum_{r >= k} c[r - k, r] |r - k><r|,    k = 0, ..., d - 1,

and trace preservation is the column normalization ``sum_m c[m, n]**2 = 1``.

Transition matrices are stored column-stochastic: ``Q[m, n]`` is the
probability of reading outcome ``m`` when letter ``n`` was sent.
"""
from __future__ import annotations

import numpy as np

from .numerics import PROB_TOL, as_hermitian

MAX_DIM = 64
IMAG_TOL = 1e-10
ENTRY_TOL = 1e-12


def _check_dim(d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    return int(d)


def as_transition(q, tol: float = PROB_TOL) -> np.ndarray:
    """Validate a square column-stochastic matrix and return it as floats."""
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"transition matrix must be square, got shape {q.shape}")
    _check_dim(q.shape[0])
    if np.any(~np.isfinite(q)):
        raise ValueError("transition matrix has non-finite entries")
    if np.any(q < -ENTRY_TOL) or np.any(q > 1 + ENTRY_TOL):
        raise ValueError("transition entries must lie in [0, 1]")
    sums = q.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        n = int(bad[0])
        raise ValueError(f"column {n} of the transition matrix sums to {sums[n]!r}")
    return np.clip(q, 0.0, 1.0)


def as_amplitudes(c, tol: float = PROB_TOL) -> np.ndarray:
    """Validate an amplitude matrix: real, nonnegative, upper triangular, unit columns."""
    c = np.asarray(c)
    if np.iscomplexobj(c):
        raise ValueError("only real amplitudes are supported")
    c = c.astype(float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"amplitude matrix must be square, got shape {c.shape}")
    _check_dim(c.shape[0])
    if np.any(c < 0):
        raise ValueError("amplitudes must be nonnegative")
    if np.any(np.tril(c, -1) != 0):
        raise ValueError("amplitude matrix has support below the diagonal (upward transition)")
    norms = np.sum(c * c, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        n = int(bad[0])
        raise ValueError(f"amplitude column {n} has squared norm {norms[n]!r}, not 1")
    return c


def amplitudes_from_transition(q) -> np.ndarray:
    """Real amplitudes ``c[m, n] = sqrt(Q[m, n])`` of a damping transition matrix."""
    q = as_transition(q)
    if np.any(np.tril(q, -1) > 0):
        m, n = np.argwhere(np.tril(q, -1) > 0)[0]
        raise ValueError(f"Q({m}|{n}) > 0 is an upward transition; not a damping channel")
    return as_amplitudes(np.sqrt(np.triu(q)))


def kraus_operators(c) -> list[np.ndarray]:
    """The ``d`` Kraus operators; ``A_k`` collects all jumps of size ``k``."""
    c = as_amplitudes(c)
    d = c.shape[0]
    ops = []
    for k in range(d):
        a = np.zeros((d, d), dtype=complex)
        r = np.arange(k, d)
        a[r - k, r] = c[r - k, r]
        ops.append(a)
    return ops


def check_kraus(ops, tol: float = 1e-10) -> list[np.ndarray]:
    ops = [np.asarray(a, dtype=complex) for a in ops]
    if not ops:
        raise ValueError("empty Kraus set")
    d = ops[0].shape[0]
    if any(a.shape != (d, d) for a in ops):
        raise ValueError("Kraus operators must share one square shape")
    total = sum(a.conj().T @ a for a in ops)
    if not np.allclose(total, np.eye(d), rtol=0.0, atol=tol):
        raise ValueError("Kraus operators are not trace preserving")
    return ops


def apply_channel(ops, rho) -> np.ndarray:
    """Apply ``E(rho) = sum_k A_k rho A_k^dagger``."""
    ops = check_kraus(ops)
    rho = as_hermitian(rho)
    d = ops[0].shape[0]
    if rho.shape != (d, d):
        raise ValueError(f"state has shape {rho.shape}, channel acts on dimension {d}")
    if abs(np.trace(rho) - 1.0) > PROB_TOL:
        raise ValueError("input state must have unit trace")
    out = sum(a @ rho @ a.conj().T for a in ops)
    return 0.5 * (out + out.conj().T)


def direct_transition(c) -> np.ndarray:
    """Computational-basis transition matrix ``Q[m, n] = c[m, n]**2``."""
    c = as_amplitudes(c)
    return as_transition(c * c)


def fourier_basis(d: int) -> np.ndarray:
    """Columns are the Fourier states ``|n~> = d**-0.5 sum_j w**(n j) |j>``."""
    d = _check_dim(d)
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def _real_part(z: np.ndarray, what: str) -> np.ndarray:
    resid = np.max(np.abs(np.imag(z)), initial=0.0)
    if resid > IMAG_TOL:
        raise ArithmeticError(f"{what}: imaginary residue {resid:.3e} exceeds {IMAG_TOL}")
    return np.real(z)


def fourier_transition(c) -> np.ndarray:
    """Fourier-basis transition matrix from the closed-form triple sum.

    Only the first column ``Q~[k, 0]`` is evaluated; the matrix is circulant,
    so ``Q~[m, n] = Q~[(m - n) % d, 0]``.
    """
    c = as_amplitudes(c)
    d = c.shape[0]
    offsets = np.arange(d)
    col = np.zeros(d, dtype=complex)
    for l in range(d):
        for s in range(l + 1):
            c_sl = c[s, l]
            if c_sl == 0.0:
                continue
            t = np.arange(d - l + s)
            phase = np.exp(2j * np.pi * np.outer(offsets, t - s) / d)
            col += c_sl * (phase @ c[t, l - s + t])
    col /= d**2
    col = np.clip(_real_part(col, "fourier_transition"), 0.0, None)
    idx = (np.arange(d)[:, None] - np.arange(d)[None, :]) % d
    return as_transition(col[idx])


def fourier_transition_oracle(ops) -> np.ndarray:
    """Fourier transition matrix by direct simulation of the channel."""
    ops = check_kraus(ops)
    d = ops[0].shape[0]
    basis = fourier_basis(d)
    q = np.empty((d, d))
    for n in range(d):
        v = basis[:, n]
        out = apply_channel(ops, np.outer(v, v.conj()))
        vals = np.einsum("im,ij,jm->m", basis.conj(), out, basis)
        q[:, n] = _real_part(vals, "fourier_transition_oracle")
    return as_transition(q)


def fourier_output_state(c, n: int) -> np.ndarray:
    """Channel output ``E(|n~><n~|)`` for Fourier input letter ``n``.

    Entry ``(m, s)`` is ``(1/d) sum_t c[m, t] c[s, s + t - m] w**(n (m - s))``.
    """
    c = as_amplitudes(c)
    d = c.shape[0]
    if not 0 <= n < d:
        raise IndexError(f"level index {n} out of range for d={d}")
    # jump-size correlations: G[m, s] = sum over jumps k of c[m, m+k] c[s, s+k]
    g = np.zeros((d, d))
    for k in range(d):
        v = np.zeros(d)
        v[: d - k] = c[np.arange(d - k), np.arange(k, d)]
        g += np.outer(v, v)
    phases = np.exp(2j * np.pi * n * (np.arange(d)[:, None] - np.arange(d)[None, :]) / d)
    return g * phases / d


def level_populations(c) -> np.ndarray:
    """Output level populations ``w_m = (1/d) sum_t c[m, t]**2`` for uniform Fourier input."""
    c = as_amplitudes(c)
    return np.sum(c * c, axis=1) / c.shape[0]
