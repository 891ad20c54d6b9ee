"""Partial-swap collision model of thermalization.

One collision lets the system meet a fresh bath copy prepared in the Gibbs
state of the system Hamiltonian, through ``P = cos(theta) I + i sin(theta) T``
with ``T`` the swap. Tracing the bath out gives

    rho -> c^2 rho + s^2 rho_beta + i c s [rho_beta, rho]

which :meth:`PartialSwapChannel.apply` evaluates directly, while
:meth:`PartialSwapChannel.apply_joint` goes through the joint space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .coherence import coherence, l1_distance
from .errors import DimensionMismatch, MaxStepsExceeded
from .linalg import dagger, kron, partial_trace, swap_unitary
from .states import DensityMatrix, Hamiltonian, check_beta, gibbs_log, gibbs_state


@dataclass(frozen=True, eq=False)
class PartialSwapChannel:
    theta: float
    beta: float
    h_s: Hamiltonian
    c: float = field(init=False)
    s: float = field(init=False)
    rho_beta: DensityMatrix = field(init=False, repr=False)

    def __post_init__(self):
        theta = float(self.theta)
        if not (0 < theta <= math.pi / 2):
            raise ValueError(f"theta must lie in (0, pi/2], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "beta", check_beta(self.beta))
        object.__setattr__(self, "c", math.cos(theta))
        object.__setattr__(self, "s", math.sin(theta))
        object.__setattr__(self, "rho_beta", gibbs_state(self.h_s, self.beta))

    @property
    def dim(self) -> int:
        return self.h_s.dim

    @property
    def log_rho_beta(self) -> np.ndarray:
        return gibbs_log(self.h_s, self.beta)

    def unitary(self) -> np.ndarray:
        d = self.dim
        return self.c * np.eye(d * d) + 1j * self.s * swap_unitary(d)

    def _check(self, rho: DensityMatrix) -> None:
        if rho.dim != self.dim:
            raise DimensionMismatch(f"state of dim {rho.dim} vs channel of dim {self.dim}")

    def _step(self, r: np.ndarray) -> np.ndarray:
        rb = self.rho_beta.matrix
        c, s = self.c, self.s
        return c * c * r + s * s * rb + 1j * c * s * (rb @ r - r @ rb)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        self._check(rho)
        return DensityMatrix.unchecked(self._step(rho.matrix))

    def increment(self, rho: DensityMatrix) -> np.ndarray:
        """Phi(rho) - rho, formed without subtracting two nearly equal states."""
        self._check(rho)
        r, rb = rho.matrix, self.rho_beta.matrix
        return self.s**2 * (rb - r) + 1j * self.c * self.s * (rb @ r - r @ rb)

    def apply_joint(self, rho: DensityMatrix) -> DensityMatrix:
        """Tr_bath P (rho (x) rho_beta) P^dagger, evaluated on the joint space."""
        self._check(rho)
        p = self.unitary()
        joint = p @ kron(rho.matrix, self.rho_beta.matrix) @ dagger(p)
        return DensityMatrix.unchecked(partial_trace(joint, (self.dim, self.dim), keep="first"))

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        return self.apply(rho)


def partial_swap_unitary(ch: PartialSwapChannel) -> np.ndarray:
    return ch.unitary()


def apply(ch: PartialSwapChannel, rho: DensityMatrix) -> DensityMatrix:
    return ch.apply(rho)


@dataclass(frozen=True)
class ThermalizationPath:
    states: tuple[DensityMatrix, ...]
    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.states)

    def rows(self, h_s: Hamiltonian) -> list[dict]:
        """Per-step records: distance to equilibrium, coherence, populations."""
        out = []
        for n, (rho, dist) in enumerate(zip(self.states, self.distances)):
            row = {"step": n, "d_l1": float(dist), "coherence": coherence(rho, h_s)}
            pops = np.diagonal(h_s.to_eigenbasis(rho.matrix)).real
            row.update({f"p{i}": float(p) for i, p in enumerate(pops)})
            out.append(row)
        return out


def iterate(ch: PartialSwapChannel, rho0: DensityMatrix, n: int) -> ThermalizationPath:
    """The states rho0, F(rho0), ..., F^n(rho0) and their l1 distances to rho_beta."""
    if n < 0:
        raise ValueError("number of steps must be non-negative")
    if n > tolerances.get().max_steps:
        raise MaxStepsExceeded(f"{n} steps requested, limit is {tolerances.get().max_steps}")
    states = [rho0]
    for _ in range(n):
        states.append(ch.apply(states[-1]))
    rb = ch.rho_beta.matrix
    dist = np.array([l1_distance(r.matrix, rb, ch.h_s) for r in states])
    return ThermalizationPath(tuple(states), dist)


def steps_to_equilibrium(ch: PartialSwapChannel, rho0: DensityMatrix, eps: float) -> int:
    """Smallest n with D_l1(F^n(rho0), rho_beta) <= eps."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    ch._check(rho0)
    limit = tolerances.get().max_steps
    # Eigenbasis of H_s: rho_beta is diagonal, so the step acts entrywise.
    p = np.diagonal(ch.h_s.to_eigenbasis(ch.rho_beta.matrix)).real
    factor = ch.c * (ch.c + 1j * ch.s * (p[:, None] - p[None, :]))
    np.fill_diagonal(factor, ch.c**2)
    delta = ch.h_s.to_eigenbasis(rho0.matrix) - np.diag(p)
    for n in range(limit + 1):
        if np.sum(np.abs(delta)) <= eps:
            return n
        delta = factor * delta
    raise MaxStepsExceeded(f"distance still above {eps:g} after {limit} steps")
