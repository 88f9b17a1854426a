"""Cyclic Markov chains, transfer-matrix laws, and the limit chain.

A (nu, M, N)-cyclic Markov chain is a Markov chain conditioned to return to
its starting state after N steps; its trajectory law is
nu(x0) prod_i M[x_i, x_{i+1}] / Z_N with x_N = x_0 and Z_N the matching
normalizer.  A nonnegative matrix V with a simple real strictly dominant
eigenvalue lambda induces, for every N, trajectory laws
prod_i V[x_i, x_{i+1}] / trace(V^N); these are exactly the
(uniform, M, N)-cyclic chains for M[i,j] = V[i,j] R_j / (lambda R_i), and as
N grows they converge to the (nu, M) chain with nu(x) = L_x R_x, where L and
R are the left/right eigenvectors normalized to L . R = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DominanceError, ValidationError, ZeroNormalizerError

STOCHASTIC_TOL = 1e-12
DOMINANCE_REL_GAP = 1e-8
DENSE_EIG_LIMIT = 512


@dataclass(frozen=True)
class TransferMatrix:
    """Nonnegative matrix over sliding-window states {0,1}^m."""

    family: str              # "lr" | "tri-pair" | "tri-line" | "tn"
    params: tuple            # (r_set,) for lr, (n,) for tn, () otherwise
    p: float
    m: int                   # window size; state space has 2^m elements
    mat: np.ndarray

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def state_bits(self, state: int) -> tuple[int, ...]:
        """Window occupancies, oldest site first (MSB first)."""
        return tuple((state >> (self.m - 1 - k)) & 1 for k in range(self.m))


@dataclass(frozen=True)
class EigenTriple:
    """Dominant eigenvalue with left/right eigenvectors, L . R = 1."""

    lam: float
    left: np.ndarray
    right: np.ndarray
    spectrum: tuple[complex, ...]    # all eigenvalues, |.| descending

    @property
    def second_modulus(self) -> float:
        return abs(self.spectrum[1]) if len(self.spectrum) > 1 else 0.0


@dataclass(frozen=True)
class ChainSpec:
    """Finite-state Markov chain, cyclic when ``cycle`` is set."""

    nu: np.ndarray
    M: np.ndarray
    cycle: Optional[int] = None

    def __post_init__(self):
        nu = np.asarray(self.nu, dtype=float)
        M = np.asarray(self.M, dtype=float)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "M", M)
        n = M.shape[0]
        if M.shape != (n, n) or nu.shape != (n,):
            raise ValidationError("shape mismatch between nu and M")
        if np.any(nu < -STOCHASTIC_TOL) or abs(nu.sum() - 1.0) > 1e-9:
            raise ValidationError("nu is not a probability vector")
        if np.any(M < -STOCHASTIC_TOL):
            raise ValidationError("M has negative entries")
        rows = M.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > STOCHASTIC_TOL:
            raise ValidationError(
                f"M rows sum to 1 only within {np.max(np.abs(rows - 1.0)):.2e}")
        if self.cycle is not None:
            if self.cycle < 1:
                raise ValidationError("cycle length must be >= 1")
            if cyclic_normalizer(self) <= 0.0:
                raise ZeroNormalizerError("cyclic normalizer is zero")

    @property
    def size(self) -> int:
        return self.M.shape[0]


def _as_matrix(V) -> np.ndarray:
    mat = V.mat if isinstance(V, TransferMatrix) else np.asarray(V, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError("transfer matrix must be square")
    if np.any(mat < 0):
        raise ValidationError("transfer matrix must be nonnegative")
    return mat


def _realify(vec: np.ndarray) -> np.ndarray:
    phase = vec[int(np.argmax(np.abs(vec)))]
    v = np.real(vec * np.conj(phase / abs(phase)))
    if v.sum() < 0:
        v = -v
    return v


def dominant_eigen(V) -> EigenTriple:
    """Dense eigensolve; verifies lambda is real, simple, strictly dominant.

    The gap gate |lambda| - max |other| > 1e-8 |lambda| turns the qualitative
    hypothesis into a float-checkable one.  Eigenvectors are realified, made
    positive when possible (Perron-Frobenius), and scaled so L . R = 1 by a
    single division.
    """
    mat = _as_matrix(V)
    n = mat.shape[0]
    if n > DENSE_EIG_LIMIT:
        raise ValidationError(f"state space {n} exceeds dense solve limit")
    vals, rights = np.linalg.eig(mat)
    order = np.argsort(-np.abs(vals))
    vals = vals[order]
    lam = vals[0]
    if abs(lam.imag) > 1e-10 * max(abs(lam), 1.0):
        raise DominanceError(f"dominant eigenvalue {lam} is not real")
    if n > 1:
        gap = abs(lam) - abs(vals[1])
        if gap <= DOMINANCE_REL_GAP * abs(lam):
            raise DominanceError(
                f"dominant eigenvalue is not simple/strict: |{lam:.6g}| vs "
                f"|{vals[1]:.6g}|")
    lam = float(lam.real)
    right = _realify(rights[:, order[0]])
    lvals, lefts = np.linalg.eig(mat.T)
    lorder = np.argsort(-np.abs(lvals))
    left = _realify(lefts[:, lorder[0]])
    right = right / np.abs(right).sum()
    dot = float(left @ right)
    if dot == 0.0:
        raise DominanceError("left and right eigenvectors are orthogonal")
    left = left / dot
    return EigenTriple(lam, left, right, tuple(vals))


def power_iteration(V, iters: int = 2000, tol: float = 1e-14) -> float:
    """Plain power iteration on the dominant eigenvalue (cross-check only)."""
    mat = _as_matrix(V)
    v = np.ones(mat.shape[0]) / mat.shape[0]
    lam = 0.0
    for _ in range(iters):
        w = mat @ v
        nlam = float(np.max(np.abs(w)))
        if nlam == 0.0:
            return 0.0
        v = w / nlam
        if abs(nlam - lam) < tol * max(nlam, 1.0):
            return nlam
        lam = nlam
    return lam


def char_poly_exact(mat: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial by Faddeev-LeVerrier over the rationals.

    Returns coefficients [1, c_1, ..., c_n] of x^n + c_1 x^(n-1) + ... + c_n.
    """
    n = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    Mk = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        AM = [[sum(A[i][q] * Mk[q][j] for q in range(n)) for j in range(n)]
              for i in range(n)]
        ck = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(ck)
        Mk = [[AM[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


# ---------------------------------------------------------------------------
# Finite-N cyclic laws
# ---------------------------------------------------------------------------

def cyclic_normalizer(chain: ChainSpec) -> float:
    if chain.cycle is None:
        raise ValidationError("chain has no cycle length")
    MN = np.linalg.matrix_power(chain.M, chain.cycle)
    return float(chain.nu @ np.diag(MN))


def cyclic_path_prob(chain: ChainSpec, trajectory: Sequence[int]) -> float:
    """Probability of a full trajectory x_0..x_{N-1} under the cyclic law."""
    if chain.cycle is None or len(trajectory) != chain.cycle:
        raise ValidationError("trajectory length must equal the cycle length")
    z = cyclic_normalizer(chain)
    if z <= 0.0:
        raise ZeroNormalizerError("cyclic normalizer is zero")
    num = chain.nu[trajectory[0]]
    for a, b in zip(trajectory, tuple(trajectory[1:]) + (trajectory[0],)):
        num *= chain.M[a, b]
    return float(num / z)


def cyclic_marginal(chain: ChainSpec, i: int, x: int) -> float:
    """P(X_i = x) for the cyclic chain, by matrix products."""
    if chain.cycle is None:
        raise ValidationError("chain has no cycle length")
    if not 0 <= i < chain.cycle:
        raise ValidationError(f"position {i} outside [0, {chain.cycle})")
    z = cyclic_normalizer(chain)
    if z <= 0.0:
        raise ZeroNormalizerError("cyclic normalizer is zero")
    Mi = np.linalg.matrix_power(chain.M, i)
    Mr = np.linalg.matrix_power(chain.M, chain.cycle - i)
    num = float(np.sum(chain.nu * Mi[:, x] * Mr[x, :]))
    return num / z


def prefix_prob(chain: ChainSpec, prefix: Sequence[int]) -> float:
    """nu(x_0) prod M steps, for a plain (non-cyclic) chain."""
    if chain.cycle is not None:
        raise ValidationError("prefix_prob is for non-cyclic chains")
    pr = chain.nu[prefix[0]]
    for a, b in zip(prefix, prefix[1:]):
        pr *= chain.M[a, b]
    return float(pr)


def transfer_cyclic_law(V, N: int, prefix: Sequence[int]) -> float:
    """P(X_0..X_k = prefix) under the length-N transfer trajectory law.

    prod_{i<k} V[x_i, x_{i+1}] * (V^(N-k))[x_k, x_0] / trace(V^N); the full
    trajectory case k = N-1 recovers the cyclic product law.  Computed on
    V / ||V||_inf so large N cannot overflow.
    """
    mat = _as_matrix(V)
    k = len(prefix) - 1
    if k < 0 or k >= N:
        raise ValidationError("prefix must have between 1 and N states")
    scale = float(np.max(np.abs(mat).sum(axis=1)))
    if scale == 0.0:
        raise ZeroNormalizerError("zero transfer matrix")
    S = mat / scale
    tr = float(np.trace(np.linalg.matrix_power(S, N)))
    if tr <= 0.0:
        raise ZeroNormalizerError("trace(V^N) is zero")
    num = 1.0
    for a, b in zip(prefix, prefix[1:]):
        num *= S[a, b]
    num *= np.linalg.matrix_power(S, N - k)[prefix[-1], prefix[0]]
    return float(num / tr)


# ---------------------------------------------------------------------------
# Theorem-style constructions
# ---------------------------------------------------------------------------

def to_cyclic_mc(V, N: int) -> tuple[ChainSpec, EigenTriple]:
    """Cyclic chain (uniform nu, M, N) whose law equals the transfer law."""
    eig = dominant_eigen(V)
    mat = _as_matrix(V)
    n = mat.shape[0]
    M = mat * eig.right[None, :] / (eig.lam * eig.right[:, None])
    chain = ChainSpec(np.full(n, 1.0 / n), M, cycle=int(N))
    return chain, eig


def limit_chain(V) -> tuple[ChainSpec, EigenTriple]:
    """The N -> infinity chain: nu(x) = L_x R_x, same M as the cyclic one."""
    eig = dominant_eigen(V)
    mat = _as_matrix(V)
    M = mat * eig.right[None, :] / (eig.lam * eig.right[:, None])
    nu = eig.left * eig.right
    return ChainSpec(nu, M, cycle=None), eig


def limit_prefix_prob(eig: EigenTriple, V, prefix: Sequence[int]) -> float:
    """Closed-form limit law R_{x_k} L_{x_0} / lambda^k * prod V steps."""
    mat = _as_matrix(V)
    k = len(prefix) - 1
    num = eig.right[prefix[-1]] * eig.left[prefix[0]] / eig.lam ** k
    for a, b in zip(prefix, prefix[1:]):
        num *= mat[a, b]
    return float(num)
