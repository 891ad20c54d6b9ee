"""Seeded random ensembles for states, Hamiltonians and unitaries."""

from __future__ import annotations

import numpy as np

from .linalg import dagger
from .states import DensityMatrix, Hamiltonian

DEFAULT_FLOOR = 1e-2


def rng_for(*keys: int) -> np.random.Generator:
    """Independent generator keyed by e.g. ``(seed, cell, trial)``."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))


def ginibre(d: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)


def random_density_matrix(
    d: int, rng: np.random.Generator, floor: float = DEFAULT_FLOOR
) -> DensityMatrix:
    """G G^dagger / Tr, mixed with ``floor`` of I/d so the result is full rank."""
    g = ginibre(d, rng)
    w = g @ dagger(g)
    w /= np.trace(w).real
    rho = (1 - floor) * w + floor * np.eye(d) / d
    return DensityMatrix((rho + dagger(rho)) / 2)


def random_hamiltonian(
    d: int, rng: np.random.Generator, spectral_range: float | None = 1.0
) -> Hamiltonian:
    """(A + A^dagger)/2, rescaled to the given spectral range unless None."""
    a = ginibre(d, rng)
    h = (a + dagger(a)) / 2
    if spectral_range is not None and d > 1:
        w = np.linalg.eigvalsh(h)
        h = h * (spectral_range / (w[-1] - w[0]))
    return Hamiltonian(h)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(d, rng))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_block_unitary(h: Hamiltonian, rng: np.random.Generator) -> np.ndarray:
    """Unitary commuting with ``h``: Haar-random inside each degenerate block."""
    from .coherence import block_structure

    u = np.zeros((h.dim, h.dim), dtype=complex)
    for block in block_structure(h).blocks:
        idx = np.array(block)
        u[np.ix_(idx, idx)] = random_unitary(len(block), rng)
    return h.from_eigenbasis(u)


def random_block_diagonal_state(
    h: Hamiltonian, rng: np.random.Generator, floor: float = DEFAULT_FLOOR
) -> DensityMatrix:
    """Random full-rank state with zero coherence with respect to ``h``."""
    from .coherence import dephase

    return dephase(random_density_matrix(h.dim, rng, floor), h)


def random_coherent_state(
    h: Hamiltonian, rng: np.random.Generator, floor: float = DEFAULT_FLOOR, min_coherence: float = 1e-3
) -> DensityMatrix:
    """Random full-rank state whose coherence with respect to ``h`` is at least ``min_coherence``."""
    from .coherence import coherence

    while True:
        rho = random_density_matrix(h.dim, rng, floor)
        if coherence(rho, h) >= min_coherence:
            return rho
