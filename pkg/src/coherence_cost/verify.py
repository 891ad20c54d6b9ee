"""Seeded property suites behind the ``verify`` command.

Each check draws its own random instance from a generator keyed by
``(seed, suite, dim, trial)`` and returns ``(ok, value)`` where ``value``
is the measured violation or margin; the suite reports the worst one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .channel import PartialSwapChannel, iterate, steps_to_equilibrium
from .coherence import coherence, dephase, is_time_translation_symmetric, l1_distance
from .ensembles import (
    random_block_unitary,
    random_coherent_state,
    random_density_matrix,
    random_hamiltonian,
    rng_for,
)
from .errors import MaxStepsExceeded
from .gto import build_coherent_stabilizer, check_gto, verify_stabilizability
from .linalg import commutator, dagger, eigh, kron, max_abs, partial_trace, swap_unitary
from .states import DensityMatrix, Hamiltonian, effective_hamiltonian, gibbs_state
from .work import cross_term, work_closed_form, work_direct

BETAS = (0.1, 1.0, 10.0)


def _theta(rng) -> float:
    return math.pi / 2 - rng.uniform(0, math.pi / 2)


def _channel(rng, dim) -> PartialSwapChannel:
    return PartialSwapChannel(_theta(rng), BETAS[rng.integers(3)], random_hamiltonian(dim, rng))


def check_eigh(rng, dim):
    h = random_hamiltonian(dim, rng, spectral_range=None).matrix
    spec = eigh(h)
    v = spec.eigenvectors
    err = max(
        float(np.linalg.norm(spec.reconstruct() - h)),
        float(np.linalg.norm(dagger(v) @ v - np.eye(dim))),
    )
    return err < 1e-10 and bool(np.all(np.diff(spec.eigenvalues) >= 0)), err


def check_partial_trace(rng, dim):
    a = random_density_matrix(dim, rng).matrix
    b = random_density_matrix(dim + 1, rng).matrix * rng.uniform(0.5, 2)
    err = max_abs(partial_trace(kron(a, b), (dim, dim + 1)) - np.trace(b) * a)
    return err < 1e-12, err


def check_swap(rng, dim):
    t = swap_unitary(dim)
    a = random_density_matrix(dim, rng).matrix
    b = random_density_matrix(dim, rng).matrix
    err = max(max_abs(t @ kron(a, b) @ dagger(t) - kron(b, a)), max_abs(t @ t - np.eye(dim * dim)))
    return err < 1e-12, err


def check_gibbs_roundtrip(rng, dim):
    rho = random_density_matrix(dim, rng)
    beta = BETAS[rng.integers(3)]
    h = effective_hamiltonian(rho, beta)
    err = max_abs(gibbs_state(h, beta).matrix - rho.matrix)
    comm = max_abs(commutator(h.matrix, rho.matrix))
    return err < 1e-9 and comm < 1e-10, max(err, comm)


def check_dual_path(rng, dim):
    ch = _channel(rng, dim)
    rho = random_density_matrix(dim, rng)
    err = max_abs(ch.apply(rho).matrix - ch.apply_joint(rho).matrix)
    return err < 1e-12, err


def check_channel_valid(rng, dim):
    ch = _channel(rng, dim)
    out = ch.apply(random_density_matrix(dim, rng, floor=0.0)).matrix
    lmin = float(np.linalg.eigvalsh(out)[0])
    tr_err = abs(np.trace(out) - 1)
    fixed = max_abs(ch.apply(ch.rho_beta).matrix - ch.rho_beta.matrix)
    return lmin >= -1e-10 and tr_err < 1e-12 and fixed < 1e-12, max(-lmin, tr_err, fixed)


def check_energy_conservation(rng, dim):
    ch = _channel(rng, dim)
    hs = ch.h_s.matrix
    total = kron(hs, np.eye(dim)) + kron(np.eye(dim), hs)
    p = ch.unitary()
    err = max(max_abs(commutator(p, total)), max_abs(dagger(p) @ p - np.eye(dim * dim)))
    return err < 1e-12, err


def check_zero_law(rng, dim, steps=50):
    ch = _channel(rng, dim)
    path = iterate(ch, random_density_matrix(dim, rng, floor=0.0), steps)
    bound = ch.c ** np.arange(steps + 1) * path.distances[0]
    excess = float(np.max(path.distances - bound))
    return excess <= 1e-10, excess


def check_steps_to_equilibrium(rng, dim):
    ch = PartialSwapChannel(rng.uniform(0.3, math.pi / 2), BETAS[rng.integers(3)], random_hamiltonian(dim, rng))
    rho = random_density_matrix(dim, rng)
    eps = 10.0 ** -rng.uniform(3, 6)
    try:
        n = steps_to_equilibrium(ch, rho, eps)
    except MaxStepsExceeded:
        return False, math.inf
    brute, r = 0, rho
    while l1_distance(r.matrix, ch.rho_beta.matrix, ch.h_s) > eps:
        r = ch.apply(r)
        brute += 1
    return n == brute, float(abs(n - brute))


def check_contraction(rng, dim):
    ch = _channel(rng, dim)
    rho = random_coherent_state(ch.h_s, rng)
    ratio = coherence(ch.apply(rho), ch.h_s) / coherence(rho, ch.h_s)
    return ratio <= ch.c + 1e-12 and ratio < 1, ratio - ch.c


def check_dephase(rng, dim):
    h = random_hamiltonian(dim, rng)
    rho = random_density_matrix(dim, rng)
    once = dephase(rho, h)
    err = max(
        max_abs(dephase(once, h).matrix - once.matrix),
        max_abs(commutator(once.matrix, h.matrix)),
        abs(np.trace(once.matrix) - 1),
    )
    return err < 1e-12, err


def check_block_covariance(rng, dim):
    # Degenerate Hamiltonian: the lowest level is doubled. Within-block
    # unitaries commute with dephasing and preserve zero coherence.
    levels = np.sort(rng.uniform(0, 1, dim))
    levels[1] = levels[0]
    v = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))[0]
    h = Hamiltonian(v @ np.diag(levels) @ dagger(v))
    rho = random_density_matrix(dim, rng)
    u = random_block_unitary(h, rng)
    moved = DensityMatrix.unchecked(u @ rho.matrix @ dagger(u))
    err = max(
        max_abs(dephase(moved, h).matrix - u @ dephase(rho, h).matrix @ dagger(u)),
        coherence(u @ dephase(rho, h).matrix @ dagger(u), h),
    )
    return err < 1e-12, err


def check_time_symmetry(rng, dim):
    ch = _channel(rng, dim)
    ok, dev = is_time_translation_symmetric(ch, ch.h_s, trials=1, rng=rng)
    return ok, dev


def check_necessity_signature(rng, dim):
    h = random_hamiltonian(dim, rng)
    target = random_coherent_state(h, rng)
    plan = build_coherent_stabilizer(target, BETAS[rng.integers(3)], h)
    diag = check_gto(plan)
    ok = diag.stationarity_commutator_norm < 1e-10 and diag.energy_commutator_norm > 1e-6
    return ok, diag.energy_commutator_norm


def check_work_identity(rng, dim):
    ch = _channel(rng, dim)
    rho = random_density_matrix(dim, rng)
    err = abs(work_direct(ch, rho) - work_closed_form(ch, rho))
    return err < 1e-9, err


def check_work_gauge(rng, dim):
    ch = _channel(rng, dim)
    rho = random_density_matrix(dim, rng)
    err = abs(work_direct(ch, rho, gauge_shift=rng.uniform(-5, 5)) - work_direct(ch, rho))
    return err < 1e-12, err


def check_cross_term(rng, dim):
    ch = _channel(rng, dim)
    val = cross_term(ch, random_density_matrix(dim, rng))
    return val < 1e-12, val


def check_work_scaling(rng, dim):
    h = random_hamiltonian(dim, rng)
    beta = BETAS[rng.integers(3)]
    rho = random_density_matrix(dim, rng)
    t1, t2 = _theta(rng), _theta(rng)
    w1 = work_direct(PartialSwapChannel(t1, beta, h), rho)
    w2 = work_direct(PartialSwapChannel(t2, beta, h), rho)
    err = abs((w1 / w2) / (math.sin(t1) ** 2 / math.sin(t2) ** 2) - 1)
    return err < 1e-9, err


def check_work_positivity(rng, dim):
    ch = _channel(rng, dim)
    rho = random_density_matrix(dim, rng)
    w = work_closed_form(ch, rho)
    w_eq = work_closed_form(ch, ch.rho_beta)
    return w > 1e-10 and abs(w_eq) < 1e-10, max(abs(w_eq), -w)


SUITES = (
    ("eigh_reconstruction", check_eigh),
    ("partial_trace_product", check_partial_trace),
    ("swap_involution", check_swap),
    ("gibbs_roundtrip", check_gibbs_roundtrip),
    ("channel_dual_path", check_dual_path),
    ("channel_validity", check_channel_valid),
    ("partial_swap_energy_conservation", check_energy_conservation),
    ("zero_law_bound", check_zero_law),
    ("steps_to_equilibrium_brute_force", check_steps_to_equilibrium),
    ("coherence_contraction", check_contraction),
    ("dephase_properties", check_dephase),
    ("dephase_block_covariance", check_block_covariance),
    ("channel_time_translation_symmetry", check_time_symmetry),
    ("coherent_stabilizer_signature", check_necessity_signature),
    ("work_identity", check_work_identity),
    ("work_gauge_independence", check_work_gauge),
    ("work_cross_term", check_cross_term),
    ("work_scaling", check_work_scaling),
    ("work_positivity", check_work_positivity),
)


@dataclass
class SuiteResult:
    suite: str
    dim: int
    trials: int
    passed: int
    failed: int
    worst: float

    @property
    def ok(self) -> bool:
        return self.failed == 0


def run_suite(index: int, name: str, check, dim: int, trials: int, seed: int) -> SuiteResult:
    passed, worst = 0, -math.inf
    for trial in range(trials):
        ok, value = check(rng_for(seed, index, dim, trial), dim)
        passed += bool(ok)
        worst = max(worst, float(value))
    return SuiteResult(name, dim, trials, passed, trials - passed, worst)


def stabilizability_results(dim: int, trials: int, seed: int) -> list[SuiteResult]:
    rep = verify_stabilizability(dim, trials, seed)
    return [
        SuiteResult(
            "stabilizability_sufficiency", dim, rep.sufficiency_targets, rep.sufficiency_passed,
            rep.sufficiency_targets - rep.sufficiency_passed, rep.sufficiency_max_residual,
        ),
        SuiteResult(
            "stabilizability_contraction", dim, rep.necessity_targets, rep.contraction_strict,
            rep.necessity_targets - rep.contraction_strict, rep.contraction_max_ratio_over_cos,
        ),
        SuiteResult(
            "stabilizability_gto_monotonicity", dim, rep.gto_instances, rep.gto_monotone - rep.gto_stabilized,
            rep.gto_instances - rep.gto_monotone + rep.gto_stabilized, rep.gto_max_increase,
        ),
    ]


def run_verification(dims, trials: int, seed: int, workers: int | None = None) -> list[SuiteResult]:
    """Run every suite for every dimension; results are ordered by (dim, suite)."""
    jobs = [(i, name, fn, d) for d in dims for i, (name, fn) in enumerate(SUITES)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_suite, i, name, fn, d, trials, seed) for i, name, fn, d in jobs]
        prop = [pool.submit(stabilizability_results, d, trials, seed) for d in dims]
        results = [f.result() for f in futures]
        for f in prop:
            results.extend(f.result())
    return results


def result_rows(results) -> list[dict]:
    return [asdict(r) | {"ok": r.ok} for r in results]
