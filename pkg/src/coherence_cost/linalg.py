"""Dense complex linear algebra on small Hilbert spaces.

Matrices are plain ``numpy`` complex arrays. Everything here is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import tolerances
from .errors import DimensionMismatch, FixtureUnreadable, NotHermitian, RankDeficient


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex array, enforcing the dimension cap."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if a.shape[0] > tolerances.MAX_DIM**2:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds cap {tolerances.MAX_DIM**2}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_violation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    @property
    def spectral_range(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


def eigh(m, tol_herm: float | None = None) -> SpectralDecomposition:
    a = as_matrix(m)
    tol_herm = tolerances.get().herm if tol_herm is None else tol_herm
    viol = hermiticity_violation(a)
    if viol > tol_herm:
        raise NotHermitian(f"max |m - m^dagger| = {viol:.3e} exceeds {tol_herm:.1e}")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    for arr in (w, v):
        arr.setflags(write=False)
    return SpectralDecomposition(w, v)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(
    m, dims: tuple[int, int], keep: Literal["first", "second"] = "first"
) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``C^d1 (x) C^d2``."""
    a = as_matrix(m)
    d1, d2 = dims
    if d1 < 1 or d2 < 1 or a.shape[0] != d1 * d2:
        raise DimensionMismatch(f"matrix of dim {a.shape[0]} is not {d1}x{d2}")
    t = a.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ikjk->ij", t)
    if keep == "second":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")


def mat_func(m, f: Literal["exp", "log"], eps_rank: float | None = None) -> np.ndarray:
    """Apply ``exp`` or ``log`` to a Hermitian matrix through its spectrum."""
    spec = m if isinstance(m, SpectralDecomposition) else eigh(m)
    w, v = spec.eigenvalues, spec.eigenvectors
    if f == "exp":
        fw = np.exp(w)
    elif f == "log":
        eps_rank = tolerances.get().rank if eps_rank is None else eps_rank
        if w[0] <= eps_rank:
            raise RankDeficient(f"smallest eigenvalue {w[0]:.3e} <= {eps_rank:.1e}; log undefined")
        fw = np.log(w)
    else:
        raise ValueError(f"unsupported matrix function {f!r}")
    return (v * fw) @ dagger(v)


def swap_unitary(d: int) -> np.ndarray:
    """Permutation matrix with T |i>|j> = |j>|i> on ``C^d (x) C^d``."""
    if d < 1:
        raise DimensionMismatch("swap dimension must be positive")
    t = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.divmod(np.arange(d * d), d)
    t[j * d + i, i * d + j] = 1.0
    return t


def to_json(m) -> dict:
    a = as_matrix(m)
    return {
        "dim": int(a.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
        if dim < 1 or len(entries) != dim * dim:
            raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
        flat = [complex(float(re), float(im)) for re, im in entries]
    except (KeyError, TypeError, ValueError) as exc:
        raise FixtureUnreadable(f"malformed matrix fixture: {exc}") from None
    return as_matrix(np.array(flat).reshape(dim, dim))
