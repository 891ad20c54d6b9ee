"""Acceptance criteria, each at its stated tolerance.

Every test records a pass/fail line that is printed in the terminal summary.
"""

import math
import subprocess
import sys
import time

import numpy as np

from coherence_cost.channel import PartialSwapChannel, steps_to_equilibrium
from coherence_cost.coherence import coherence, l1_distance
from coherence_cost.ensembles import (
    random_block_diagonal_state,
    random_coherent_state,
    random_density_matrix,
    random_hamiltonian,
    rng_for,
)
from coherence_cost.gto import (
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
    random_gto_plan,
)
from coherence_cost.states import Hamiltonian, pure_state
from coherence_cost.work import cross_term, work_closed_form, work_direct

BETAS = (0.1, 1.0, 10.0)
SEED = 2024


def random_instance(rng, dims=(2, 3, 4, 5)):
    d = int(rng.choice(dims))
    theta = math.pi / 2 - rng.uniform(0, math.pi / 2)
    beta = float(rng.choice(BETAS))
    h = random_hamiltonian(d, rng)
    return PartialSwapChannel(theta, beta, h), random_density_matrix(d, rng)


def test_work_identity(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        ch, rho = random_instance(rng_for(SEED, 1, i))
        worst = max(worst, abs(work_direct(ch, rho) - work_closed_form(ch, rho)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10
    record_criterion(1, "work identity", ok, f"max discrepancy {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_channel_dual_path(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        ch, rho = random_instance(rng_for(SEED, 2, i))
        worst = max(worst, float(np.max(np.abs(ch.apply(rho).matrix - ch.apply_joint(rho).matrix))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 5
    record_criterion(2, "channel dual path", ok, f"max deviation {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_coherence_contraction(record_criterion):
    start = time.perf_counter()
    worst, strict = -math.inf, 0
    for i in range(500):
        rng = rng_for(SEED, 3, i)
        ch, _ = random_instance(rng)
        rho = random_coherent_state(ch.h_s, rng)
        before, after = coherence(rho, ch.h_s), coherence(ch.apply(rho), ch.h_s)
        worst = max(worst, after - (ch.c * before + 1e-12))
        strict += after < before
    h = Hamiltonian(np.diag([0.0, 1.0]))
    qubit = PartialSwapChannel(math.pi / 4, math.log(2), h)
    factor = coherence(qubit.apply(pure_state([1, 1])), h) / coherence(pure_state([1, 1]), h)
    fixture_err = abs(factor - math.sqrt(10) / 6)
    elapsed = time.perf_counter() - start
    ok = worst <= 0 and strict == 500 and fixture_err < 1e-12 and elapsed < 5
    record_criterion(
        3, "coherence contraction", ok,
        f"max excess {worst:.2e}, strict {strict}/500, qubit factor error {fixture_err:.1e}, {elapsed:.2f}s",
    )
    assert ok


def test_sufficiency(record_criterion):
    worst_gto, worst_fix = 0.0, 0.0
    for i in range(100):
        rng = rng_for(SEED, 4, i)
        ch, _ = random_instance(rng)
        target = random_block_diagonal_state(ch.h_s, rng)
        assert np.linalg.eigvalsh(target.matrix)[0] > 0
        plan = build_block_diagonal_stabilizer(target, ch.h_s)
        diag = check_gto(plan)
        worst_gto = max(worst_gto, diag.energy_commutator_norm, diag.stationarity_commutator_norm)
        out = apply_plan(plan, ch.apply(target))
        worst_fix = max(worst_fix, float(np.max(np.abs(out.matrix - target.matrix))))
    ok = worst_gto < 1e-10 and worst_fix < 1e-12
    record_criterion(4, "block-diagonal sufficiency", ok, f"max GTO norm {worst_gto:.2e}, max residual {worst_fix:.2e}")
    assert ok


def test_necessity_signature(record_criterion):
    worst_stat, min_energy = 0.0, math.inf
    for i in range(100):
        rng = rng_for(SEED, 5, i)
        ch, _ = random_instance(rng)
        target = random_coherent_state(ch.h_s, rng)
        diag = check_gto(build_coherent_stabilizer(target, ch.beta, ch.h_s))
        worst_stat = max(worst_stat, diag.stationarity_commutator_norm)
        min_energy = min(min_energy, diag.energy_commutator_norm)
    max_increase = -math.inf
    for i in range(200):
        rng = rng_for(SEED, 6, i)
        d = 2 + i % 4
        h = random_hamiltonian(d, rng)
        plan = random_gto_plan(h, rng)
        rho = random_density_matrix(d, rng)
        max_increase = max(max_increase, coherence(apply_plan(plan, rho), h) - coherence(rho, h))
    ok = worst_stat < 1e-10 and min_energy > 1e-6 and max_increase <= 1e-10
    record_criterion(
        5, "necessity signature", ok,
        f"max stationarity {worst_stat:.2e}, min energy norm {min_energy:.2e}, max GTO increase {max_increase:.2e}",
    )
    assert ok


def brute_force_steps(ch, rho, eps):
    n = 0
    while l1_distance(rho.matrix, ch.rho_beta.matrix, ch.h_s) > eps:
        rho = ch.apply(rho)
        n += 1
    return n


def test_zero_law_and_equilibrium_steps(record_criterion):
    worst = -math.inf
    for i in range(20):
        rng = rng_for(SEED, 7, i)
        ch, rho = random_instance(rng)
        gaps = np.diff(ch.h_s.eigenvalues)
        assert gaps.min() > 1e-6
        d0 = l1_distance(rho.matrix, ch.rho_beta.matrix, ch.h_s)
        cur = rho
        for n in range(1, 201):
            cur = ch.apply(cur)
            d = l1_distance(cur.matrix, ch.rho_beta.matrix, ch.h_s)
            worst = max(worst, d - (ch.c**n * d0 + 1e-10))
    mismatches = 0
    for i in range(50):
        rng = rng_for(SEED, 8, i)
        d = int(rng.choice((2, 3, 4, 5)))
        theta = rng.uniform(0.3, math.pi / 2)
        ch = PartialSwapChannel(theta, float(rng.choice(BETAS)), random_hamiltonian(d, rng))
        rho = random_density_matrix(d, rng)
        eps = 10 ** -rng.uniform(3, 6)
        mismatches += steps_to_equilibrium(ch, rho, eps) != brute_force_steps(ch, rho, eps)
    ok = worst <= 0 and mismatches == 0
    record_criterion(6, "zero law and equilibrium steps", ok, f"max excess {worst:.2e}, step mismatches {mismatches}/50")
    assert ok


def test_work_properties(record_criterion):
    min_w, worst_ratio, worst_gauge, worst_cross = math.inf, 0.0, 0.0, 0.0
    zero_at_gibbs, positive_elsewhere = 0.0, math.inf
    for i in range(100):
        rng = rng_for(SEED, 9, i)
        ch, rho = random_instance(rng)
        w = work_direct(ch, rho)
        min_w = min(min_w, w)
        zero_at_gibbs = max(zero_at_gibbs, abs(work_direct(ch, ch.rho_beta)))
        if np.max(np.abs(rho.matrix - ch.rho_beta.matrix)) > 1e-8:
            positive_elsewhere = min(positive_elsewhere, w)
        theta2 = math.pi / 2 - rng.uniform(0, math.pi / 2)
        other = PartialSwapChannel(theta2, ch.beta, ch.h_s)
        ratio = w / work_direct(other, rho)
        worst_ratio = max(worst_ratio, abs(ratio - math.sin(ch.theta) ** 2 / math.sin(theta2) ** 2))
        for shift in (-2.0, 0.7, 5.0):
            worst_gauge = max(worst_gauge, abs(work_direct(ch, rho, gauge_shift=shift) - w))
        worst_cross = max(worst_cross, cross_term(ch, rho))
    ok = (
        min_w >= -1e-12
        and zero_at_gibbs < 1e-10
        and positive_elsewhere > 1e-10
        and worst_ratio < 1e-9
        and worst_gauge < 1e-12
        and worst_cross < 1e-12
    )
    record_criterion(
        7, "work properties", ok,
        f"min W {min_w:.2e}, |W(rho_beta)| {zero_at_gibbs:.1e}, min W off equilibrium {positive_elsewhere:.2e}, "
        f"ratio error {worst_ratio:.1e}, gauge {worst_gauge:.1e}, cross {worst_cross:.1e}",
    )
    assert ok


def test_cli_determinism(record_criterion):
    cmd = [sys.executable, "-m", "coherence_cost", "verify", "--dims", "2,3", "--trials", "100", "--seed", "7"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    ok = first.returncode == 0 and second.returncode == 0 and first.stdout == second.stdout and first.stdout
    record_criterion(
        8, "CLI determinism", ok,
        f"exit codes {first.returncode}/{second.returncode}, {len(first.stdout)} bytes, identical {first.stdout == second.stdout}",
    )
    assert ok
