"""Spectral decomposition and exact unitary time evolution.

The Hamiltonians here are tiny dense Hermitian matrices, so every propagator
U(t) = V exp(-i L t) V^dag is built from one eigendecomposition that is reused
across a whole time grid.  No step-size error enters anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-10
RESIDUAL_TOL = 1e-10


def check_hermitian(H) -> np.ndarray:
    """Validate and return H as a complex Hermitian ndarray."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    dev = np.abs(H - H.conj().T).max()
    if dev > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return H


def check_pure_state(psi, n: int | None = None) -> np.ndarray:
    """Validate a normalized amplitude vector in the site basis."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"expected a 1-d amplitude vector, got shape {psi.shape}")
    if n is not None and psi.shape[0] != n:
        raise ValueError(f"dimension mismatch: state has {psi.shape[0]} sites, expected {n}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: |psi| = {norm!r}")
    return psi


def check_density_matrix(rho, n: int | None = None) -> np.ndarray:
    """Validate a unit-trace positive-semidefinite density matrix."""
    rho = check_hermitian(rho)
    if n is not None and rho.shape[0] != n:
        raise ValueError(f"dimension mismatch: state has {rho.shape[0]} sites, expected {n}")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > NORM_TOL:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < -NORM_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and unitary eigenvector columns of a Hamiltonian."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def _fix_column_phases(V: np.ndarray) -> np.ndarray:
    # Deterministic gauge: first nonzero component of each column real positive.
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            a = col[idx[0]]
            col *= np.conj(a) / abs(a)
    return V


def spectral_decompose(H) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix with a fixed phase convention.

    The output is deterministic for identical input; eigenvalues ascend and
    eigenvector columns are orthonormal even inside degenerate blocks.
    """
    H = check_hermitian(H)
    eigenvalues, V = np.linalg.eigh(H)
    V = _fix_column_phases(V)
    scale = max(1.0, float(np.abs(eigenvalues).max(initial=0.0)))
    resid = np.abs(H @ V - V * eigenvalues).max()
    ortho = np.abs(V.conj().T @ V - np.eye(H.shape[0])).max()
    if resid > RESIDUAL_TOL * scale or ortho > RESIDUAL_TOL:
        raise ArithmeticError(
            f"eigendecomposition failed: residual {resid:.3e}, orthonormality {ortho:.3e}"
        )
    eigenvalues.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(eigenvalues, V)


def propagator(d: SpectralDecomposition, t: float) -> np.ndarray:
    """Unitary U(t) = V exp(-i L t) V^dag; negative t evolves backward."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    phases = np.exp(-1j * d.eigenvalues * t)
    return (d.eigenvectors * phases) @ d.eigenvectors.conj().T


def evolve_pure(d: SpectralDecomposition, psi0, t: float) -> np.ndarray:
    """Evolve an amplitude vector: psi(t) = U(t) psi0."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    psi0 = check_pure_state(psi0, d.n)
    c = d.eigenvectors.conj().T @ psi0
    return d.eigenvectors @ (np.exp(-1j * d.eigenvalues * t) * c)


def evolve_density(d: SpectralDecomposition, rho0, t: float) -> np.ndarray:
    """Evolve a density matrix: rho(t) = U(t) rho0 U(t)^dag."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    rho0 = check_density_matrix(rho0, d.n)
    U = propagator(d, t)
    return U @ rho0 @ U.conj().T


def site_amplitudes(d: SpectralDecomposition, psi0, times) -> np.ndarray:
    """Amplitudes of a pure state on a whole time grid, shape (n, len(times)).

    Column j holds psi(times[j]); equivalent to stacking evolve_pure calls.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ValueError("times must be a 1-d array")
    if times.size and not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    psi0 = check_pure_state(psi0, d.n)
    c = d.eigenvectors.conj().T @ psi0
    phases = np.exp(-1j * np.outer(d.eigenvalues, times))
    return d.eigenvectors @ (c[:, None] * phases)


def occupation(rho, i: int) -> float:
    """Occupation probability of site i (1-based), clamped to [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    if not 1 <= i <= n:
        raise IndexError(f"site index {i} out of range 1..{n}")
    p = float(np.real(rho[i - 1, i - 1]))
    if p < -NORM_TOL or p > 1.0 + NORM_TOL:
        raise ValueError(f"diagonal element {p!r} is not a probability")
    return min(max(p, 0.0), 1.0)
