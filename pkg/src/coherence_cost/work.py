"""Work cost of stabilizing a target state against the collision model.

The swap stabilizer fed with a copy of the target, whose resource
Hamiltonian makes the target its own Gibbs state, injects

    W = (sin^2 theta / beta) * (D(rho|rho_beta) + D(rho_beta|rho))

per collision. :func:`work_direct` gets W by bookkeeping energies on the
joint system-resource space; :func:`work_closed_form` uses the relative
entropy expression. The two must agree.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import tolerances
from .channel import PartialSwapChannel
from .coherence import coherence
from .errors import CoherenceCostError, RankDeficient, SupportViolation
from .gto import StabilizerPlan, build_block_diagonal_stabilizer, is_block_diagonal, plan_work
from .linalg import commutator, dagger, eigh, swap_unitary
from .states import DensityMatrix, effective_hamiltonian


class WorkMismatch(CoherenceCostError):
    pass


def _support(spec, eps):
    keep = spec.eigenvalues > eps
    return spec.eigenvalues[keep], spec.eigenvectors[:, keep]


def relative_entropy(a: DensityMatrix, b: DensityMatrix, log_b: np.ndarray | None = None) -> float:
    """Tr a (log a - log b), with 0 log 0 = 0.

    ``log_b`` may be supplied when it is known in closed form (Gibbs states),
    in which case ``b`` is taken to be full rank.
    """
    tol = tolerances.get()
    lam, va = _support(eigh(a.matrix), tol.rank)
    if log_b is None:
        spec_b = eigh(b.matrix)
        mu, vb = _support(spec_b, tol.rank)
        # Support of a must sit inside the support of b.
        leak = va - vb @ (dagger(vb) @ va)
        residual = float(np.max(np.abs(leak))) if leak.size else 0.0
        if residual > tol.support:
            raise SupportViolation(
                f"support of first argument leaves that of the second (residual {residual:.3e})"
            )
        log_b = (vb * np.log(mu)) @ dagger(vb)
    cross = np.einsum("ik,ij,jk->k", va.conj(), log_b, va).real
    return float(np.sum(lam * np.log(lam)) - np.sum(lam * cross))


def symm_relative_entropy(
    a: DensityMatrix,
    b: DensityMatrix,
    log_a: np.ndarray | None = None,
    log_b: np.ndarray | None = None,
) -> float:
    return relative_entropy(a, b, log_b) + relative_entropy(b, a, log_a)


def _require_full_rank(rho: DensityMatrix) -> None:
    eps = tolerances.get().rank
    lmin = float(np.linalg.eigvalsh(rho.matrix)[0])
    if lmin <= eps:
        raise RankDeficient(
            f"target has eigenvalue {lmin:.3e} <= {eps:.1e}; the work cost needs a full-rank "
            "target (try --regularize)"
        )


def coherent_plan(ch: PartialSwapChannel, rho_target: DensityMatrix, gauge_shift: float = 0.0) -> StabilizerPlan:
    h_r = effective_hamiltonian(rho_target, ch.beta)
    if gauge_shift:
        h_r = h_r.shifted(gauge_shift)
    return StabilizerPlan(swap_unitary(ch.dim), rho_target, h_r, ch.h_s)


def work_direct(ch: PartialSwapChannel, rho_target: DensityMatrix, gauge_shift: float = 0.0) -> float:
    """Energy change of system plus resource under the swap, on the joint space.

    The swap leaves rho_target (x) rho_target fixed, so only the increment
    Phi(rho) - rho contributes. Feeding the increment keeps the joint energies
    O(sin^2 theta) and avoids cancellation at small angles.
    """
    _require_full_rank(rho_target)
    return plan_work(coherent_plan(ch, rho_target, gauge_shift), ch.increment(rho_target))


def d_symm_to_equilibrium(ch: PartialSwapChannel, rho_target: DensityMatrix) -> float:
    return symm_relative_entropy(rho_target, ch.rho_beta, log_b=ch.log_rho_beta)


def work_closed_form(ch: PartialSwapChannel, rho_target: DensityMatrix) -> float:
    _require_full_rank(rho_target)
    return ch.s**2 / ch.beta * d_symm_to_equilibrium(ch, rho_target)


def cross_term(ch: PartialSwapChannel, rho_target: DensityMatrix) -> float:
    """Magnitude of the i c s term in the expanded work, which vanishes identically.

    -i c s (Tr [H_s, rho_beta] rho + Tr rho_beta [rho, H_r])
    """
    h_r = effective_hamiltonian(rho_target, ch.beta).matrix
    rb = ch.rho_beta.matrix
    r = rho_target.matrix
    term = np.trace(commutator(ch.h_s.matrix, rb) @ r) + np.trace(rb @ commutator(r, h_r))
    return float(abs(-1j * ch.c * ch.s * term))


@dataclass(frozen=True)
class WorkReport:
    w_direct: float
    w_closed: float
    discrepancy: float
    d_symm: float
    theta: float
    beta: float
    coherence: float
    # Cost of the energy-conserving swap plan, available only for block-diagonal targets.
    w_block_diagonal_plan: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def work_report(ch: PartialSwapChannel, rho_target: DensityMatrix) -> WorkReport:
    w_direct = work_direct(ch, rho_target)
    d_symm = d_symm_to_equilibrium(ch, rho_target)
    w_closed = ch.s**2 / ch.beta * d_symm
    discrepancy = abs(w_direct - w_closed)
    tol = tolerances.get().work
    if discrepancy >= tol:
        raise WorkMismatch(f"direct and closed-form work differ by {discrepancy:.3e} (tolerance {tol:.1e})")
    w_block = None
    if is_block_diagonal(rho_target, ch.h_s):
        plan = build_block_diagonal_stabilizer(rho_target, ch.h_s)
        w_block = plan_work(plan, ch.apply(rho_target))
    return WorkReport(
        w_direct=w_direct,
        w_closed=w_closed,
        discrepancy=discrepancy,
        d_symm=d_symm,
        theta=ch.theta,
        beta=ch.beta,
        coherence=coherence(rho_target, ch.h_s),
        w_block_diagonal_plan=w_block,
    )
