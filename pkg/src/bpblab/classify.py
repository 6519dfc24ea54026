"""Structural classification of contractions.

Necessary sign-pattern conditions for extreme contractions on polyhedral
spaces, an LP-based extremality test, isometry testing and enumeration, and
signed-permutation equivalence orbits including the 90-element census of
extreme contractions from l_inf^3 to l_1^3.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .errors import (
    InfiniteGroupError,
    NormNotOneError,
    UnsupportedSpaceError,
    WrongSpacesError,
)
from .operators import OperatorMatrix, op_norm
from .spaces import INF, TAU_EQ, SpaceSpec, l1, linf, pnorm


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation of indices with a sign flip per coordinate."""

    perm: tuple
    signs: tuple

    def matrix(self) -> np.ndarray:
        n = len(self.perm)
        m = np.zeros((n, n))
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            m[i, j] = s
        return m


def all_signed_permutations(n: int):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            yield SignedPermutation(perm, signs)


@dataclass(frozen=True)
class ExtremalityVerdict:
    """Outcome of the extremality test for a norm-one operator."""

    status: str  # "extreme", "not_extreme", "necessary_condition_only"
    method: str
    witness: Optional[np.ndarray] = None
    condition_holds: Optional[bool] = None

    @property
    def is_extreme(self) -> bool:
        return self.status == "extreme"


def _require_pair(T: OperatorMatrix, p, same_dim=True):
    if T.domain.p != p or T.codomain.p != p:
        raise WrongSpacesError(f"operator must map l_{p} to l_{p}")
    if same_dim and T.domain.n != T.codomain.n:
        raise WrongSpacesError("operator must be square")


def linf_row_condition(T: OperatorMatrix) -> bool:
    """Every row has exactly one nonzero entry and that entry is +/-1.

    A necessary condition for T to be an extreme contraction of the space of
    operators on l_inf^n; not claimed sufficient.
    """
    _require_pair(T, INF)
    _require_norm_one(T)
    return _one_unimodular_per_line(T.entries)


def l1_column_condition(T: OperatorMatrix) -> bool:
    """Column-wise analogue of linf_row_condition for l_1^n."""
    _require_pair(T, 1)
    _require_norm_one(T)
    return _one_unimodular_per_line(T.entries.T)


def _one_unimodular_per_line(M: np.ndarray) -> bool:
    for row in M:
        nz = row[np.abs(row) > TAU_EQ]
        if len(nz) != 1 or abs(abs(nz[0]) - 1.0) > TAU_EQ:
            return False
    return True


def _require_norm_one(T: OperatorMatrix):
    value, _ = op_norm(T)
    if abs(value - 1.0) > 1e-7:
        raise NormNotOneError(f"operator norm is {value}, expected 1")


def _dual_extreme_functionals(codomain: SpaceSpec) -> np.ndarray:
    """Extreme points of the dual unit ball, rows."""
    if codomain.p == 1:
        return np.array(
            list(itertools.product((1.0, -1.0), repeat=codomain.n))
        )
    if codomain.p == INF:
        return np.concatenate([np.eye(codomain.n), -np.eye(codomain.n)])
    raise UnsupportedSpaceError("polyhedral codomain required")


def _domain_vertices(domain: SpaceSpec) -> np.ndarray:
    if domain.p == INF:
        return np.array(list(itertools.product((1.0, -1.0), repeat=domain.n)))
    if domain.p == 1:
        return np.concatenate([np.eye(domain.n), -np.eye(domain.n)])
    raise UnsupportedSpaceError("polyhedral domain required")


def is_extreme_contraction(T: OperatorMatrix, seed: int = 0) -> ExtremalityVerdict:
    """Whether a norm-one T is an extreme point of the operator unit ball.

    Polyhedral pairs: T is extreme iff {D : ||T+D|| <= 1, ||T-D|| <= 1} is
    {0}.  Since the ball norm is a max of linear functionals f((T+-D)s) over
    the domain vertices s and the extreme dual functionals f, the set is a
    symmetric polytope; T is extreme iff maximising each coordinate of D over
    it gives 0.  Non-polyhedral codomains fall back to a randomized
    perturbation search, flagged as evidence only.
    """
    _require_norm_one(T)
    dom, cod = T.domain, T.codomain
    if dom.polyhedral and cod.polyhedral and dom.n <= 3 and cod.n <= 3:
        return _lp_extremality(T)
    return _random_extremality(T, seed)


def _lp_extremality(T: OperatorMatrix) -> ExtremalityVerdict:
    m, n = T.entries.shape
    V = _domain_vertices(T.domain)          # (v, n)
    F = _dual_extreme_functionals(T.codomain)  # (f, m)
    # rows of constraints: for each (f, s) pair, f D s <= 1 - f T s.
    # Coefficient of d_{ij} in f D s is f_i * s_j, so the row is kron(f, s).
    rows = np.einsum("fi,vj->fvij", F, V).reshape(len(F) * len(V), m * n)
    rhs = 1.0 - (F @ T.entries @ V.T).reshape(-1)
    rows = np.concatenate([rows, -rows])  # constraints on T+D and T-D
    rhs = np.concatenate([rhs, rhs])
    bounds = [(-2.0, 2.0)] * (m * n)
    for k in range(m * n):
        c = np.zeros(m * n)
        c[k] = -1.0  # maximize d_k
        res = linprog(c, A_ub=rows, b_ub=rhs, bounds=bounds, method="highs")
        if not res.success:
            raise RuntimeError(f"LP solver failed: {res.message}")
        if -res.fun > 1e-7:
            D = res.x.reshape(m, n)
            return ExtremalityVerdict("not_extreme", "lp", witness=D)
    return ExtremalityVerdict("extreme", "lp")


def _random_extremality(T: OperatorMatrix, seed: int) -> ExtremalityVerdict:
    rng = np.random.default_rng(seed)
    m, n = T.entries.shape
    for _ in range(200):
        D = rng.standard_normal((m, n))
        D /= np.abs(D).sum()
        for t in (0.5, 0.1, 0.02, 0.004):
            Dt = OperatorMatrix(t * D, T.domain, T.codomain)
            np1, _ = op_norm(T + Dt)
            np2, _ = op_norm(T - Dt)
            if np1 <= 1.0 + TAU_EQ and np2 <= 1.0 + TAU_EQ:
                return ExtremalityVerdict(
                    "not_extreme", "random_search", witness=t * D
                )
    return ExtremalityVerdict("necessary_condition_only", "random_search")


def is_isometry(T: OperatorMatrix) -> bool:
    """Surjective isometry test for a square operator on one l_p space."""
    if T.domain.p != T.codomain.p or T.domain.n != T.codomain.n:
        raise WrongSpacesError("isometries need a square operator, same exponent")
    M = T.entries
    if T.domain.hilbert:
        return bool(np.abs(M.T @ M - np.eye(T.domain.n)).max() < TAU_EQ)
    if not _is_signed_permutation_matrix(M):
        return False
    if T.domain.polyhedral:
        return True
    # p outside {1, 2, inf}: signed permutations are the whole group; spot
    # check norm preservation on a few sampled vectors anyway.
    rng = np.random.default_rng(7)
    X = rng.standard_normal((8, T.domain.n))
    return bool(
        np.abs(
            pnorm(X @ M.T, T.domain.p, axis=1) - pnorm(X, T.domain.p, axis=1)
        ).max()
        < 1e-9
    )


def _is_signed_permutation_matrix(M: np.ndarray, tol: float = TAU_EQ) -> bool:
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        return False
    A = np.abs(M)
    near_one = np.abs(A - 1.0) < tol
    near_zero = A < tol
    if not (near_one | near_zero).all():
        return False
    return bool((near_one.sum(axis=0) == 1).all() and (near_one.sum(axis=1) == 1).all())


def enumerate_isometries(s: SpaceSpec) -> list[OperatorMatrix]:
    """All 2^n * n! signed permutation isometries of l_p^n, p != 2."""
    if s.hilbert:
        raise InfiniteGroupError("the Hilbert isometry group is infinite")
    return [
        OperatorMatrix(sp.matrix(), s, s) for sp in all_signed_permutations(s.n)
    ]


def _round_key(M: np.ndarray) -> tuple:
    r = np.round(M, 12) + 0.0  # normalise -0.0
    return tuple(r.reshape(-1))


def orbit_with_witnesses(A: OperatorMatrix) -> dict:
    """The two-sided signed-permutation orbit {L A R}.

    Maps each orbit member's rounded-entry key to (member entries, L, R)
    with member = L @ A @ R.
    """
    n = A.domain.n
    mats = [sp.matrix() for sp in all_signed_permutations(n)]
    out = {}
    for L in mats:
        LA = L @ A.entries
        for R in mats:
            B = LA @ R
            key = _round_key(B)
            if key not in out:
                out[key] = (B, L, R)
    return out


def equivalence_orbit(A: OperatorMatrix) -> list[OperatorMatrix]:
    """Deduplicated orbit of A under signed permutations on both sides."""
    return [
        OperatorMatrix(B, A.domain, A.codomain)
        for B, _, _ in orbit_with_witnesses(A).values()
    ]


CANONICAL_RANK_ONE_3 = np.array(
    [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
)
CANONICAL_BLOCK_3 = np.array(
    [[0.5, 0.5, 0.0], [0.5, -0.5, 0.0], [0.0, 0.0, 0.0]]
)


@functools.lru_cache(maxsize=1)
def _extreme_census():
    dom, cod = linf(3), l1(3)
    rank_one = orbit_with_witnesses(OperatorMatrix(CANONICAL_RANK_ONE_3, dom, cod))
    block = orbit_with_witnesses(OperatorMatrix(CANONICAL_BLOCK_3, dom, cod))
    return rank_one, block


def enumerate_extreme_linf3_l13() -> list[OperatorMatrix]:
    """The 90 extreme contractions from l_inf^3 to l_1^3.

    The union of the two-sided signed-permutation orbits of the rank-one
    canonical form (18 members) and the 2x2 block canonical form (72).
    """
    rank_one, block = _extreme_census()
    dom, cod = linf(3), l1(3)
    out = [OperatorMatrix(B, dom, cod) for B, _, _ in rank_one.values()]
    out += [OperatorMatrix(B, dom, cod) for B, _, _ in block.values()]
    return out


def census_lookup(T: OperatorMatrix):
    """Locate T in the 90-element census.

    Returns (orbit_name, canonical, L, R) with T = L @ canonical @ R, or
    None if T is not in the enumeration.
    """
    rank_one, block = _extreme_census()
    key = _round_key(T.entries)
    if key in rank_one:
        _, L, R = rank_one[key]
        return ("rank_one", CANONICAL_RANK_ONE_3, L, R)
    if key in block:
        _, L, R = block[key]
        return ("block", CANONICAL_BLOCK_3, L, R)
    return None
