import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from coherence_cost.channel import PartialSwapChannel
from coherence_cost.ensembles import random_density_matrix, random_hamiltonian
from coherence_cost.errors import RankDeficient, SupportViolation
from coherence_cost.states import DensityMatrix, Hamiltonian, pure_state
from coherence_cost.work import (
    cross_term,
    d_symm_to_equilibrium,
    relative_entropy,
    symm_relative_entropy,
    work_closed_form,
    work_direct,
    work_report,
)

LN2 = math.log(2)
QUBIT_H = Hamiltonian(np.diag([0.0, 1.0]))
PLUS = pure_state([1, 1])
NOISY_PLUS = DensityMatrix(0.9 * PLUS.matrix + 0.05 * np.eye(2))


def oracle_work(theta, beta, h, rho):
    """Joint-space energy bookkeeping built only from numpy and scipy primitives."""
    d = h.shape[0]
    c, s = math.cos(theta), math.sin(theta)
    gibbs = scipy.linalg.expm(-beta * h)
    gibbs /= np.trace(gibbs)
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1
    p = c * np.eye(d * d) + 1j * s * swap
    joint = p @ np.kron(rho, gibbs) @ p.conj().T
    thermalized = np.einsum("ikjk->ij", joint.reshape(d, d, d, d))
    h_r = -scipy.linalg.logm(rho) / beta
    h_tot = np.kron(h, np.eye(d)) + np.kron(np.eye(d), h_r)
    before = np.kron(thermalized, rho)
    after = swap @ before @ swap
    return float(np.trace(h_tot @ (after - before)).real)


def oracle_d_symm(a, b):
    la, lb = scipy.linalg.logm(a), scipy.linalg.logm(b)
    return float(np.trace((a - b) @ (la - lb)).real)


def test_relative_entropy_examples():
    rho = DensityMatrix(np.diag([0.3, 0.7]))
    assert abs(relative_entropy(rho, rho)) < 1e-15
    assert abs(relative_entropy(DensityMatrix(np.diag([1.0, 0.0])), DensityMatrix(np.eye(2) / 2)) - LN2) < 1e-15
    expected = 0.5 * math.log(9 / 8)
    assert abs(relative_entropy(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.diag([2 / 3, 1 / 3]))) - expected) < 1e-15


def test_relative_entropy_support_violation():
    with pytest.raises(SupportViolation):
        relative_entropy(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.diag([1.0, 0.0])))


def test_relative_entropy_pure_inside_support():
    # Pure states are fine as first argument, and in a rotated basis too.
    value = relative_entropy(PLUS, DensityMatrix(np.eye(2) / 2))
    assert abs(value - LN2) < 1e-14


def test_relative_entropy_against_logm(rng):
    for d in (2, 3, 4):
        a, b = random_density_matrix(d, rng), random_density_matrix(d, rng)
        la, lb = scipy.linalg.logm(a.matrix), scipy.linalg.logm(b.matrix)
        expected = float(np.trace(a.matrix @ (la - lb)).real)
        assert abs(relative_entropy(a, b) - expected) < 1e-10
        assert relative_entropy(a, b) >= 0


def test_symmetrized_entropy_is_symmetric(rng):
    a, b = random_density_matrix(3, rng), random_density_matrix(3, rng)
    assert abs(symm_relative_entropy(a, b) - symm_relative_entropy(b, a)) < 1e-14
    assert abs(symm_relative_entropy(a, b) - oracle_d_symm(a.matrix, b.matrix)) < 1e-10


def test_golden_work_value():
    ch = PartialSwapChannel(math.pi / 4, LN2, QUBIT_H)
    w = work_direct(ch, NOISY_PLUS)
    assert abs(w - oracle_work(math.pi / 4, LN2, QUBIT_H.matrix, NOISY_PLUS.matrix)) < 1e-12
    assert abs(w - 1.0391170238581395) < 1e-12
    assert abs(work_closed_form(ch, NOISY_PLUS) - w) < 1e-12


def test_closed_form_matches_logm_oracle(rng):
    for d in (2, 3, 4, 5):
        h = random_hamiltonian(d, rng)
        for beta in (0.1, 1.0, 10.0):
            theta = rng.uniform(0.05, math.pi / 2)
            ch = PartialSwapChannel(theta, beta, h)
            rho = random_density_matrix(d, rng)
            expected = oracle_work(theta, beta, h.matrix, rho.matrix)
            assert abs(work_direct(ch, rho) - expected) < 1e-9
            oracle_closed = math.sin(theta) ** 2 / beta * oracle_d_symm(rho.matrix, ch.rho_beta.matrix)
            assert abs(work_closed_form(ch, rho) - oracle_closed) < 1e-9


def test_work_vanishes_at_equilibrium():
    ch = PartialSwapChannel(0.8, 1.3, Hamiltonian(np.diag([0.0, 0.4, 1.0])))
    assert abs(work_direct(ch, ch.rho_beta)) < 1e-12
    assert abs(work_closed_form(ch, ch.rho_beta)) < 1e-12


def test_full_swap_work_equals_d_symm_over_beta(rng):
    ch = PartialSwapChannel(math.pi / 2, 2.0, random_hamiltonian(3, rng))
    rho = random_density_matrix(3, rng)
    assert abs(work_direct(ch, rho) - d_symm_to_equilibrium(ch, rho) / 2.0) < 1e-12


def test_small_angle_scaling_is_quadratic():
    ratios = []
    for theta in (1e-4, 1e-3):
        ch = PartialSwapChannel(theta, LN2, QUBIT_H)
        ratios.append(work_direct(ch, NOISY_PLUS) / math.sin(theta) ** 2)
    assert abs(ratios[0] - ratios[1]) / ratios[1] < 1e-6


def test_block_diagonal_target_costs_nothing_with_energy_conserving_plan():
    ch = PartialSwapChannel(math.pi / 4, LN2, QUBIT_H)
    rep = work_report(ch, DensityMatrix(np.diag([0.7, 0.3])))
    assert rep.w_direct > 0
    assert rep.coherence == 0
    assert abs(rep.w_block_diagonal_plan) < 1e-15


def test_coherent_report_has_no_block_plan():
    ch = PartialSwapChannel(math.pi / 4, LN2, QUBIT_H)
    rep = work_report(ch, NOISY_PLUS)
    assert rep.w_block_diagonal_plan is None
    assert rep.discrepancy < 1e-9
    assert set(rep.as_dict()) >= {"w_direct", "w_closed", "discrepancy", "d_symm"}


def test_gauge_shift_leaves_work_unchanged(rng):
    for d in (2, 3, 4):
        ch = PartialSwapChannel(0.7, 1.0, random_hamiltonian(d, rng))
        rho = random_density_matrix(d, rng)
        base = work_direct(ch, rho)
        for shift in (-3.0, 0.5, 10.0):
            assert abs(work_direct(ch, rho, gauge_shift=shift) - base) < 1e-12


def test_cross_term_vanishes(rng):
    for d in (2, 3, 5):
        ch = PartialSwapChannel(0.9, 1.0, random_hamiltonian(d, rng))
        assert cross_term(ch, random_density_matrix(d, rng)) < 1e-12


def test_rank_deficient_target():
    ch = PartialSwapChannel(math.pi / 4, 1.0, QUBIT_H)
    with pytest.raises(RankDeficient, match="regularize"):
        work_direct(ch, PLUS)
    with pytest.raises(RankDeficient):
        work_closed_form(ch, PLUS)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    dim=st.integers(2, 5),
    theta=st.floats(0.01, math.pi / 2),
    beta=st.sampled_from([0.1, 1.0, 10.0]),
)
def test_work_identity_property(seed, dim, theta, beta):
    rng = np.random.default_rng(seed)
    ch = PartialSwapChannel(theta, beta, random_hamiltonian(dim, rng))
    rho = random_density_matrix(dim, rng)
    w = work_direct(ch, rho)
    assert w >= -1e-12
    assert abs(w - work_closed_form(ch, rho)) < 1e-9


def test_direct_work_keeps_relative_accuracy_at_small_angles(rng):
    for theta in (1e-2, 1e-4, 1e-6):
        ch = PartialSwapChannel(theta, 0.1, random_hamiltonian(4, rng))
        rho = random_density_matrix(4, rng)
        closed = work_closed_form(ch, rho)
        # beta = 0.1 makes H_r large (~ -log(rho) / beta), which costs a few digits.
        assert abs(work_direct(ch, rho) - closed) / closed < 1e-10
