"""Initial and target states in the single-excitation site basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import check_pure_state


@dataclass(frozen=True)
class SpatialPairSpec:
    """Two-site superposition (|i> - e^{i phi} |j>)/sqrt(2) on an n-site chain."""

    n: int
    i: int
    j: int
    phi: float

    def __post_init__(self):
        if not (1 <= self.i <= self.n and 1 <= self.j <= self.n):
            raise IndexError(f"sites ({self.i}, {self.j}) out of range 1..{self.n}")
        if self.i == self.j:
            raise ValueError(f"pair sites must differ, got i = j = {self.i}")


@dataclass(frozen=True)
class WernerSpec:
    """Mixing weight b of a Werner-like state; b in [-1, 1] keeps it positive."""

    b: float

    def __post_init__(self):
        if not -1.0 <= self.b <= 1.0:
            raise ValueError(f"mixing weight b must lie in [-1, 1], got {self.b}")


def localized(n: int, i: int) -> np.ndarray:
    """Excitation fully at site i."""
    if not 1 <= i <= n:
        raise IndexError(f"site index {i} out of range 1..{n}")
    psi = np.zeros(n, dtype=complex)
    psi[i - 1] = 1.0
    return psi


def spatial_pair(n: int, i: int, j: int, phi: float) -> np.ndarray:
    """State (|i> - e^{i phi} |j>)/sqrt(2); phi = pi gives (|i> + |j>)/sqrt(2)."""
    spec = SpatialPairSpec(n, i, j, float(phi))
    psi = np.zeros(n, dtype=complex)
    psi[spec.i - 1] = 1.0 / np.sqrt(2.0)
    psi[spec.j - 1] = -np.exp(1j * spec.phi) / np.sqrt(2.0)
    return psi


def density_from_pure(psi) -> np.ndarray:
    """Rank-1 density matrix |psi><psi|."""
    psi = check_pure_state(psi)
    return np.outer(psi, psi.conj())


def werner(n: int, b) -> np.ndarray:
    """Werner-like mixture on the two injection sites.

    Returns b * |psi><psi| + (1 - b) * (|1><1| + |2><2|)/2 with
    psi = (|1> + |2>)/sqrt(2).  b = 1 is the pure pair state, b = 0 the
    maximally mixed state of the two-site manifold; the occupied 2x2 block
    has eigenvalues (1 +- b)/2.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 sites, got {n}")
    spec = b if isinstance(b, WernerSpec) else WernerSpec(float(b))
    rho = spec.b * density_from_pure(spatial_pair(n, 1, 2, np.pi))
    rho[0, 0] += (1.0 - spec.b) / 2.0
    rho[1, 1] += (1.0 - spec.b) / 2.0
    return rho


def target_pure(n: int, phi: float) -> np.ndarray:
    """Transfer target (|n-1> - e^{i phi} |n>)/sqrt(2) at the right end."""
    if n < 2:
        raise ValueError(f"need n >= 2 sites, got {n}")
    return spatial_pair(n, n - 1, n, phi)


def target_werner(n: int, b) -> np.ndarray:
    """Ideally transferred Werner state on the rightmost pair (n-1, n)."""
    if n < 2:
        raise ValueError(f"need n >= 2 sites, got {n}")
    spec = b if isinstance(b, WernerSpec) else WernerSpec(float(b))
    rho = np.zeros((n, n), dtype=complex)
    rho[n - 2, n - 2] = rho[n - 1, n - 1] = 0.5
    rho[n - 2, n - 1] = rho[n - 1, n - 2] = spec.b / 2.0
    return rho
