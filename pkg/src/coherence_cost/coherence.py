"""Coherence with respect to a Hamiltonian and related asymmetry diagnostics.

All basis-dependent quantities are evaluated in the ascending eigenbasis
of the reference Hamiltonian. Degenerate eigenvalues are grouped into
blocks, and only entries connecting different blocks count as coherence,
which makes the measure independent of the basis chosen inside a block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import tolerances
from .errors import DimensionMismatch, ZeroCoherenceInput
from .linalg import dagger, max_abs
from .states import DensityMatrix, Hamiltonian

DEFAULT_SAMPLE_TIMES = (0.37, 1.0, 2.5, math.pi)


@dataclass(frozen=True)
class BlockStructure:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def labels(self) -> np.ndarray:
        """Block index of each eigenvector."""
        out = np.empty(sum(len(b) for b in self.blocks), dtype=int)
        for k, block in enumerate(self.blocks):
            out[list(block)] = k
        return out

    def cross_block_mask(self) -> np.ndarray:
        lab = self.labels
        return lab[:, None] != lab[None, :]


def block_structure(h: Hamiltonian, eps_degen: float | None = None) -> BlockStructure:
    eps_degen = tolerances.get().degen if eps_degen is None else eps_degen
    w = h.eigenvalues
    scale = max(float(w[-1] - w[0]), float(np.max(np.abs(w))))
    thresh = eps_degen * scale
    blocks, current = [], [0]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= thresh:
            current.append(i)
        else:
            blocks.append(tuple(current))
            current = [i]
    blocks.append(tuple(current))
    return BlockStructure(tuple(blocks))


def _check_dims(h: Hamiltonian, *ms) -> None:
    for m in ms:
        if np.shape(m) != (h.dim, h.dim):
            raise DimensionMismatch(f"operator of shape {np.shape(m)} vs Hamiltonian of dim {h.dim}")


def l1_distance(a, b, basis: Hamiltonian | None = None) -> float:
    """Sum of absolute entrywise differences, in the eigenbasis of ``basis`` if given."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    diff = a - b
    if basis is not None:
        _check_dims(basis, diff)
        diff = basis.to_eigenbasis(diff)
    return float(np.sum(np.abs(diff)))


def dephase(rho: DensityMatrix, h: Hamiltonian) -> DensityMatrix:
    """Remove every entry that connects distinct energy blocks."""
    _check_dims(h, rho.matrix)
    r = h.to_eigenbasis(rho.matrix)
    r[block_structure(h).cross_block_mask()] = 0
    out = h.from_eigenbasis(r)
    return DensityMatrix.unchecked((out + dagger(out)) / 2)


def coherence(rho, h: Hamiltonian) -> float:
    """Sum of |rho_ij| over pairs (i, j) in different energy blocks."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    _check_dims(h, m)
    r = h.to_eigenbasis(m)
    return float(np.sum(np.abs(r[block_structure(h).cross_block_mask()])))


def contraction_factor(ch, rho: DensityMatrix) -> float:
    """Ratio of coherence after one thermalization step to coherence before."""
    before = coherence(rho, ch.h_s)
    if before <= tolerances.get().coh:
        raise ZeroCoherenceInput(f"input coherence {before:.3e} is zero; ratio undefined")
    return coherence(ch.apply(rho), ch.h_s) / before


def is_time_translation_symmetric(
    channel: Callable[[DensityMatrix], DensityMatrix],
    h: Hamiltonian,
    sample_times: Sequence[float] = DEFAULT_SAMPLE_TIMES,
    trials: int = 20,
    rng: np.random.Generator | None = None,
    tol_symm: float | None = None,
) -> tuple[bool, float]:
    """Check e^{-iHt} F(rho) e^{iHt} == F(e^{-iHt} rho e^{iHt}) on random states.

    Returns ``(symmetric, max_deviation)``.
    """
    from .ensembles import random_density_matrix

    if not len(sample_times):
        raise ValueError("sample_times must be non-empty")
    tol_symm = tolerances.get().symm if tol_symm is None else tol_symm
    rng = np.random.default_rng(0) if rng is None else rng
    w = h.eigenvalues
    worst = 0.0
    for _ in range(trials):
        rho = random_density_matrix(h.dim, rng)
        out = np.asarray(channel(rho), dtype=complex)
        for t in sample_times:
            u = h.from_eigenbasis(np.diag(np.exp(-1j * w * t)))
            lhs = u @ out @ dagger(u)
            moved = DensityMatrix.unchecked(u @ rho.matrix @ dagger(u))
            rhs = np.asarray(channel(moved), dtype=complex)
            worst = max(worst, max_abs(lhs - rhs))
    return worst < tol_symm, worst
