import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from dagas.cyclic_mc import (ChainSpec, char_poly_exact, cyclic_marginal,
                             cyclic_path_prob, dominant_eigen, limit_chain,
                             limit_prefix_prob, power_iteration, prefix_prob,
                             to_cyclic_mc, transfer_cyclic_law)
from dagas.errors import DominanceError, ValidationError
from dagas.transfer import build_transfer


def symmetric_two_state(n):
    return ChainSpec([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], cycle=n)


# -- cyclic path probabilities ---------------------------------------------------

def test_cyclic_path_symmetric():
    chain = symmetric_two_state(2)
    assert cyclic_path_prob(chain, (0, 1)) == pytest.approx(0.25)


def test_cyclic_path_n1_specialization():
    nu = [0.3, 0.7]
    M = [[0.9, 0.1], [0.4, 0.6]]
    chain = ChainSpec(nu, M, cycle=1)
    z = 0.3 * 0.9 + 0.7 * 0.6
    assert cyclic_path_prob(chain, (0,)) == pytest.approx(0.3 * 0.9 / z)
    assert cyclic_path_prob(chain, (1,)) == pytest.approx(0.7 * 0.6 / z)


def test_cyclic_path_identity_transitions():
    nu = [0.2, 0.5, 0.3]
    chain = ChainSpec(nu, np.eye(3), cycle=3)
    for x in range(3):
        assert cyclic_path_prob(chain, (x, x, x)) == pytest.approx(nu[x])
    assert cyclic_path_prob(chain, (0, 1, 0)) == 0.0


def test_cyclic_paths_sum_to_one():
    rng = np.random.default_rng(5)
    M = rng.random((3, 3))
    M /= M.sum(axis=1, keepdims=True)
    nu = rng.random(3)
    nu /= nu.sum()
    for n in (2, 4, 5):
        chain = ChainSpec(nu, M, cycle=n)
        total = sum(cyclic_path_prob(chain, t)
                    for t in product(range(3), repeat=n))
        assert total == pytest.approx(1.0, abs=1e-12)


# -- marginals -------------------------------------------------------------------

def test_marginal_uniform_nu_is_stationary():
    rng = np.random.default_rng(11)
    M = rng.random((3, 3))
    M /= M.sum(axis=1, keepdims=True)
    chain = ChainSpec(np.full(3, 1 / 3), M, cycle=5)
    base = [cyclic_marginal(chain, 0, x) for x in range(3)]
    for i in range(1, 5):
        for x in range(3):
            assert cyclic_marginal(chain, i, x) == pytest.approx(base[x])


def test_marginal_symmetric_chain():
    chain = symmetric_two_state(4)
    for i in range(4):
        assert cyclic_marginal(chain, i, 0) == pytest.approx(0.5)


def test_invariant_nu_is_not_stationary_for_cyclic():
    # nu invariant for M does not make the cyclic chain stationary
    M = np.array([[0.9, 0.1], [0.4, 0.6]])
    nu = np.array([0.8, 0.2])  # invariant: nu M = nu
    assert np.allclose(nu @ M, nu)
    chain = ChainSpec(nu, M, cycle=4)
    m0 = cyclic_marginal(chain, 0, 0)
    m1 = cyclic_marginal(chain, 1, 0)
    assert abs(m0 - m1) > 1e-4


def test_marginals_sum_to_one():
    M = np.array([[0.2, 0.8], [0.7, 0.3]])
    chain = ChainSpec([0.6, 0.4], M, cycle=6)
    for i in range(6):
        assert sum(cyclic_marginal(chain, i, x) for x in range(2)) == \
            pytest.approx(1.0)


# -- transfer trajectory laws ------------------------------------------------------

def test_transfer_law_tri_pair_example():
    tm = build_transfer("tri-pair", 0.3)
    assert transfer_cyclic_law(tm, 2, (0, 1)) == pytest.approx(0.3 / 1.6)


def test_transfer_law_identity():
    v = np.eye(2)
    for traj in ((0, 0, 0), (1, 1, 1)):
        assert transfer_cyclic_law(v, 3, traj) == pytest.approx(0.5)
    assert transfer_cyclic_law(v, 3, (0, 1, 0)) == 0.0


def test_transfer_law_prefix_k0():
    tm = build_transfer("tri-pair", 0.25)
    n = 6
    tr = np.trace(np.linalg.matrix_power(tm.mat, n))
    for x in (0, 1):
        expect = np.linalg.matrix_power(tm.mat, n)[x, x] / tr
        assert transfer_cyclic_law(tm, n, (x,)) == pytest.approx(expect)


def test_transfer_law_prefixes_marginalize():
    tm = build_transfer("lr", 0.3, r_set=(0, 1))
    n = 7
    for prefix in ((0,), (0, 1), (1, 0)):
        total = sum(transfer_cyclic_law(tm, n, prefix + (x,)) for x in (0, 1))
        # summing over the next state of a non-final prefix marginalizes
        assert total == pytest.approx(transfer_cyclic_law(tm, n, prefix))


# -- Theorem constructions ----------------------------------------------------------

def test_to_cyclic_rows_stochastic():
    tm = build_transfer("lr", 0.35, r_set=(0, 1, 2))
    chain, eig = to_cyclic_mc(tm, 5)
    assert np.allclose(chain.M.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(chain.nu, 0.25)


def test_to_cyclic_of_stochastic_matrix_is_itself():
    M = np.array([[0.3, 0.7], [0.5, 0.5]])
    chain, eig = to_cyclic_mc(M, 4)
    assert eig.lam == pytest.approx(1.0)
    assert np.allclose(chain.M, M, atol=1e-12)


@pytest.mark.parametrize("family,kwargs,p", [
    ("tri-pair", {}, 0.3), ("lr", {"r_set": (0, 1)}, 0.2)])
def test_theorem3i_exhaustive_equality(family, kwargs, p):
    tm = build_transfer(family, p, **kwargs)
    for n in (3, 4):
        chain, _ = to_cyclic_mc(tm, n)
        for traj in product(range(tm.size), repeat=n):
            assert cyclic_path_prob(chain, traj) == pytest.approx(
                transfer_cyclic_law(tm, n, traj), abs=1e-12)


def test_limit_chain_invariant_law():
    tm = build_transfer("tri-pair", 0.3)
    chain, eig = limit_chain(tm)
    assert chain.nu.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(chain.nu @ chain.M, chain.nu, atol=1e-12)
    lam = (1 + math.sqrt(1 + 4 * 0.3)) / 2
    assert eig.lam == pytest.approx(lam)
    assert chain.nu[1] == pytest.approx(0.3 / (0.3 + lam ** 2))


def test_limit_prefix_matches_eq_3_13():
    tm = build_transfer("lr", 0.25, r_set=(0, 1))
    chain, eig = limit_chain(tm)
    for prefix in ((0,), (1,), (0, 0), (0, 1, 0), (1, 0, 0, 1)):
        assert prefix_prob(chain, prefix) == pytest.approx(
            limit_prefix_prob(eig, tm, prefix), abs=1e-13)


def test_limit_prefixes_consistent_under_marginalization():
    tm = build_transfer("tri-pair", 0.2)
    chain, eig = limit_chain(tm)
    for prefix in ((0,), (1,), (0, 1)):
        total = sum(limit_prefix_prob(eig, tm, prefix + (x,)) for x in (0, 1))
        assert total == pytest.approx(limit_prefix_prob(eig, tm, prefix))


def test_finite_n_marginals_converge_geometrically():
    tm = build_transfer("tri-pair", 0.3)
    lim, eig = limit_chain(tm)
    rate = eig.second_modulus / eig.lam
    prev = None
    for n in (4, 6, 8, 10):
        chain, _ = to_cyclic_mc(tm, n)
        resid = max(abs(cyclic_marginal(chain, 0, x) - lim.nu[x])
                    for x in range(2))
        if prev is not None:
            assert resid <= prev * rate ** 2 * 1.5
        prev = resid


# -- dominant eigen ------------------------------------------------------------------

def test_dominant_eigen_tri_pair_closed_form():
    for p in (0.1, 0.3, 0.7):
        eig = dominant_eigen(build_transfer("tri-pair", p))
        assert eig.lam == pytest.approx((1 + math.sqrt(1 + 4 * p)) / 2)
        assert float(eig.left @ eig.right) == pytest.approx(1.0, abs=1e-12)


def test_dominant_eigen_residuals():
    tm = build_transfer("lr", 0.3, r_set=(0, 1, 4))
    eig = dominant_eigen(tm)
    vnorm = np.max(np.abs(tm.mat).sum(axis=1))
    assert np.max(np.abs(tm.mat @ eig.right - eig.lam * eig.right)) <= 1e-10 * vnorm
    assert np.max(np.abs(eig.left @ tm.mat - eig.lam * eig.left)) <= 1e-10 * vnorm
    assert np.all(eig.right > 0) and np.all(eig.left > 0)


def test_dominant_eigen_identity_rejected():
    with pytest.raises(DominanceError):
        dominant_eigen(np.eye(2))


def test_dominant_eigen_rotation_rejected():
    # a pure cycle has all eigenvalues on the same circle
    with pytest.raises(DominanceError):
        dominant_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_power_iteration_cross_check():
    tm = build_transfer("tn", 0.3, n=3)
    eig = dominant_eigen(tm)
    assert power_iteration(tm) == pytest.approx(eig.lam, abs=1e-10)


def test_char_poly_exact_vs_numpy():
    mat = [[Fraction(1), Fraction(1, 4)], [Fraction(3, 4), Fraction(1, 4)]]
    coeffs = char_poly_exact(mat)
    # x^2 - (5/4) x + (1/4 - 3/16)
    assert coeffs == [Fraction(1), Fraction(-5, 4), Fraction(1, 16)]
    roots = np.roots([float(c) for c in coeffs])
    vals = np.linalg.eigvals(np.array(mat, dtype=float))
    assert np.allclose(sorted(roots), sorted(vals))


def test_chain_validation():
    with pytest.raises(ValidationError):
        ChainSpec([0.5, 0.6], [[1, 0], [0, 1]])
    with pytest.raises(ValidationError):
        ChainSpec([0.5, 0.5], [[0.9, 0.2], [0.5, 0.5]])
