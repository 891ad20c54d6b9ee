"""Density matrices, Hamiltonians, Gibbs states and their inversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import NotHermitian, NotPSD, RankDeficient, TraceNotOne
from .linalg import SpectralDecomposition, as_matrix, dagger, eigh, hermiticity_violation


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates; use :meth:`unchecked` for results that are
    valid by construction and would only pay for a redundant eigensolve.
    """

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(_check_state(as_matrix(self.matrix))))

    @classmethod
    def unchecked(cls, matrix) -> DensityMatrix:
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian matrix with its spectral decomposition computed once."""

    matrix: np.ndarray
    spectrum: SpectralDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "spectrum", eigh(m))
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    def to_eigenbasis(self, m) -> np.ndarray:
        """Express an operator in the ascending eigenbasis of this Hamiltonian."""
        v = self.eigenvectors
        return dagger(v) @ np.asarray(m, dtype=complex) @ v

    def from_eigenbasis(self, m) -> np.ndarray:
        v = self.eigenvectors
        return v @ np.asarray(m, dtype=complex) @ dagger(v)

    def shifted(self, offset: float) -> Hamiltonian:
        return Hamiltonian(self.matrix + offset * np.eye(self.dim))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def check_beta(beta: float) -> float:
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError(f"inverse temperature must be positive and finite, got {beta}")
    return beta


def _check_state(m: np.ndarray) -> np.ndarray:
    tol = tolerances.get()
    viol = hermiticity_violation(m)
    if viol > tol.herm:
        raise NotHermitian(f"hermiticity violated: max |m - m^dagger| = {viol:.3e}")
    tr = np.trace(m)
    if abs(tr - 1) > tol.trace:
        raise TraceNotOne(f"trace is {tr.real:.12g} (deviation {abs(tr - 1):.3e})")
    lmin = float(np.linalg.eigvalsh((m + dagger(m)) / 2)[0])
    if lmin < -tol.psd:
        raise NotPSD(f"min eigenvalue {lmin:.6g} is negative")
    return m


def validate_state(m) -> DensityMatrix:
    """Accept ``m`` as a density matrix or raise naming the violated property."""
    return DensityMatrix(m)


def gibbs_state(h: Hamiltonian, beta: float) -> DensityMatrix:
    """exp(-beta H) / Z, evaluated with a ground-energy shift for stability."""
    return DensityMatrix.unchecked(h.from_eigenbasis(np.diag(gibbs_populations(h, beta))))


def gibbs_populations(h: Hamiltonian, beta: float) -> np.ndarray:
    """Boltzmann weights in the ascending eigenbasis of ``h``."""
    beta = check_beta(beta)
    w = h.eigenvalues
    p = np.exp(-beta * (w - w[0]))
    return p / p.sum()


def gibbs_log(h: Hamiltonian, beta: float) -> np.ndarray:
    """log of the Gibbs state, -beta H - log Z, without taking a numerical log."""
    beta = check_beta(beta)
    w = h.eigenvalues
    shifted = -beta * (w - w[0])
    log_p = shifted - np.log(np.exp(shifted).sum())
    return h.from_eigenbasis(np.diag(log_p))


def effective_hamiltonian(rho: DensityMatrix, beta: float) -> Hamiltonian:
    """Hamiltonian whose Gibbs state at ``beta`` is ``rho``.

    Gauge: -(1/beta) log rho shifted so the ground energy is exactly zero.
    """
    beta = check_beta(beta)
    spec = eigh(rho.matrix)
    w, v = spec.eigenvalues, spec.eigenvectors
    eps = tolerances.get().rank
    if w[0] <= eps:
        raise RankDeficient(
            f"state has eigenvalue {w[0]:.3e} <= {eps:.1e}; "
            "use --regularize to mix in the identity"
        )
    e = -np.log(w) / beta
    e -= e.min()
    return Hamiltonian((v * e) @ dagger(v))


def regularize(rho: DensityMatrix, eps: float) -> DensityMatrix:
    """(1 - eps) rho + eps I/d."""
    if not 0 <= eps <= 1:
        raise ValueError(f"regularization weight must lie in [0, 1], got {eps}")
    d = rho.dim
    return DensityMatrix((1 - eps) * rho.matrix + eps * np.eye(d) / d)


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))
