"""Entropies, log-space combinatorics and a Hermitian eigensolver.

All entropies are returned in bits.  Natural logarithms are used inside the
log-gamma helpers and never leak out of them.
"""
from __future__ import annotations

import math

import numpy as np

PROB_TOL = 1e-9
ENTRY_TOL = 1e-12
HERMITIAN_TOL = 1e-12
NEG_EIG_TOL = 1e-10
ZERO_CUTOFF = 1e-15

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_prob_vector(p, tol: float = PROB_TOL) -> np.ndarray:
    """Validate ``p`` as a probability vector and return it as a float array.

    A vector whose sum is off by less than ``tol`` is renormalized; anything
    further off raises ``ValueError``.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be a nonempty 1-d array")
    if np.any(~np.isfinite(p)):
        raise ValueError("probability vector has non-finite entries")
    if np.any(p < -ENTRY_TOL) or np.any(p > 1 + ENTRY_TOL):
        raise ValueError("probability entries must lie in [0, 1]")
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def xlogx(x: float) -> float:
    """Return ``x * log2(x)`` with ``0 log 0 = 0``."""
    if x < -1e-12 or x > 1 + 1e-9:
        raise ValueError(f"xlogx argument {x!r} outside [0, 1]")
    if x < ZERO_CUTOFF:
        return 0.0
    return x * math.log2(x)


def _entropy_terms(p: np.ndarray) -> float:
    nz = p[p >= ZERO_CUTOFF]
    return float(-np.sum(nz * np.log2(nz)))


def shannon_entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits."""
    p = as_prob_vector(p)
    return max(_entropy_terms(p), 0.0)


def log_binomial(n: int, k: int) -> float:
    """``ln C(n, k)``; ``-inf`` when ``k`` is outside ``[0, n]``."""
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_beta(a: float, b: float) -> float:
    """``ln B(a, b)`` via log-gamma."""
    if not (a > 0 and b > 0):
        raise ValueError(f"beta function needs positive arguments, got ({a}, {b})")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def as_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, rtol=0.0, atol=tol):
        raise ValueError("matrix is not Hermitian")
    return m


def _jacobi_sweeps(a: np.ndarray) -> np.ndarray:
    """Cyclic complex Jacobi on a working copy; returns the diagonal."""
    d = a.shape[0]
    offdiag = ~np.eye(d, dtype=bool)
    # absolute for density matrices, relative once the norm exceeds 1
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a[offdiag])
        if off < threshold:
            return np.real(np.diag(a)).copy()
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if zeta == 0.0:
                    t = 1.0
                elif abs(zeta) > 1e150:
                    t = 0.5 / zeta
                else:
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- J^H A J with J acting on the (p, q) plane
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    raise RuntimeError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix, largest first.

    Uses cyclic Jacobi rotations; the sweep stops once the off-diagonal
    Frobenius norm drops below ``JACOBI_TOL``.
    """
    a = as_hermitian(m).copy()
    a = 0.5 * (a + a.conj().T)
    if a.shape[0] == 1:
        return np.array([a[0, 0].real])
    vals = _jacobi_sweeps(a)
    return np.sort(vals)[::-1]


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy ``-Tr rho log2 rho`` of a density matrix.

    Eigenvalues in ``[-1e-10, 0)`` are treated as round-off and clipped.
    """
    rho = as_hermitian(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > PROB_TOL:
        raise ValueError(f"density matrix has trace {tr!r}")
    lam = hermitian_eigenvalues(rho)
    if lam[-1] < -NEG_EIG_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lam[-1]!r}")
    lam = np.clip(lam, 0.0, None)
    return max(_entropy_terms(lam), 0.0)
