"""Minimum mutual information over inputs that reproduce a target output.

For a fixed channel, ``I(Q, W)`` is concave in ``Q``, so its minimum over the
polytope ``{Q >= 0 : Q W = P_Y}`` sits at a vertex.  Vertices are found by
support enumeration: every basic feasible solution solves the equality system
restricted to a set of linearly independent columns.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from ._core_py import compositions
from .errors import DomainError, InfeasibleError, ResourceError
from .probability import (
    PRODUCT_SUM_TOL,
    Channel,
    FiniteDistribution,
    output_distribution,
)

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
CLAMP_TOL = 1e-12
DEDUP_DECIMALS = 9
TIE_TOL = 1e-12
ORACLE_MAX_POINTS = 5_000_000


def _check_input(Q: FiniteDistribution, W: Channel):
    if Q.alphabet != W.input_alphabet:
        raise DomainError("input distribution and channel input alphabets differ")


def _aligned_output(P_Y: FiniteDistribution, W: Channel) -> np.ndarray:
    if P_Y.alphabet == W.output_alphabet:
        return P_Y.pmf
    if set(P_Y.alphabet) == set(W.output_alphabet) and len(P_Y.alphabet) == len(W.output_alphabet):
        return P_Y.reorder(W.output_alphabet).pmf
    raise DomainError("target and channel output alphabets differ")


def _mi(q: np.ndarray, W: np.ndarray) -> float:
    joint = q[:, None] * W
    py = q @ W
    rows, cols = np.nonzero(joint > 0)
    terms = joint[rows, cols] * (np.log(W[rows, cols]) - np.log(py[cols]))
    return max(0.0, math.fsum(terms.tolist()))


def mutual_information(Q: FiniteDistribution, W: Channel) -> float:
    """``I(Q, W)`` in nats, with ``0 log 0 = 0``."""
    _check_input(Q, W)
    return _mi(Q.pmf, W.matrix)


def entropy(P: FiniteDistribution) -> float:
    p = P.pmf[P.pmf > 0]
    return math.fsum((-p * np.log(p)).tolist())


def conditional_divergence(W: Channel, refY: FiniteDistribution, P: FiniteDistribution) -> float:
    """``sum_a P(a) D(W(.|a) || refY)``; ``+inf`` if ``refY`` misses reachable outputs."""
    _check_input(P, W)
    ref = _aligned_output(refY, W)
    joint = P.pmf[:, None] * W.matrix
    rows, cols = np.nonzero(joint > 0)
    if np.any(ref[cols] == 0):
        return math.inf
    terms = joint[rows, cols] * (np.log(W.matrix[rows, cols]) - np.log(ref[cols]))
    return math.fsum(terms.tolist())


def _rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    d = np.abs(np.diag(R))
    return int(np.sum(d > PIVOT_TOL))


@dataclass(frozen=True)
class Vertex:
    q: FiniteDistribution
    support: tuple[int, ...]
    mutual_information: float


@dataclass(frozen=True)
class PolytopeVertexSet:
    channel: Channel
    target: FiniteDistribution
    rank: int
    vertices: tuple[Vertex, ...]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def _solve_on_support(A: np.ndarray, b: np.ndarray, S: tuple[int, ...]) -> np.ndarray | None:
    A_S = A[:, S]
    k = len(S)
    # pick k independent equations, solve square, then check all equations
    _, _, piv = scipy.linalg.qr(A_S.T, pivoting=True)
    rows = np.sort(piv[:k])
    sub = A_S[rows]
    if _rank(sub) < k:
        return None
    x = np.linalg.solve(sub, b[rows])
    if np.max(np.abs(A_S @ x - b)) > FEAS_TOL:
        return None
    return x


def feasible_polytope_vertices(
    W: Channel, P_Y: FiniteDistribution, tol: float = FEAS_TOL
) -> PolytopeVertexSet:
    """All basic feasible solutions of ``{Q >= 0 : Q W = P_Y}``."""
    py = _aligned_output(P_Y, W)
    nx = len(W.input_alphabet)
    A = np.vstack([W.matrix.T, np.ones(nx)])
    b = np.append(py, 1.0)
    r = _rank(A)
    seen: dict[tuple, Vertex] = {}
    for k in range(1, r + 1):
        for S in itertools.combinations(range(nx), k):
            if _rank(A[:, S]) < k:
                continue
            x = _solve_on_support(A, b, S)
            if x is None or np.any(x < -CLAMP_TOL):
                continue
            q = np.zeros(nx)
            q[list(S)] = np.where(x < 0, 0.0, x)
            if np.max(np.abs(q @ W.matrix - py)) > tol:
                continue
            key = tuple(np.round(q, DEDUP_DECIMALS).tolist())
            if key in seen:
                continue
            support = tuple(int(i) for i in np.flatnonzero(q > 0))
            Q = FiniteDistribution(W.input_alphabet, q, atol=PRODUCT_SUM_TOL)
            seen[key] = Vertex(Q, support, _mi(q, W.matrix))
    if not seen:
        raise InfeasibleError("no input distribution reproduces the target output")
    target = FiniteDistribution(W.output_alphabet, py, atol=PRODUCT_SUM_TOL)
    return PolytopeVertexSet(W, target, r, tuple(seen.values()))


def min_mutual_information(
    W: Channel, P_Y: FiniteDistribution, tol: float = FEAS_TOL
) -> tuple[FiniteDistribution, float]:
    """Minimum of ``I(Q, W)`` over inputs with ``Q W = P_Y``; ties go to the smallest support."""
    vs = feasible_polytope_vertices(W, P_Y, tol)
    low = min(v.mutual_information for v in vs)
    best = min((v for v in vs if v.mutual_information <= low + TIE_TOL), key=lambda v: v.support)
    return best.q, best.mutual_information


@dataclass(frozen=True)
class OracleResult:
    """Grid-oracle outcome; ``error`` bounds the discretization error of ``value``."""

    value: float
    error: float
    matched: int
    conclusive: bool


def _mi_rows(Q: np.ndarray, W: np.ndarray) -> np.ndarray:
    PY = Q @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W[None, :, :] > 0, W[None, :, :] / PY[:, None, :], 1.0)
        terms = Q[:, :, None] * W[None, :, :] * np.log(ratio)
    return np.maximum(np.nan_to_num(terms, nan=0.0).sum(axis=(1, 2)), 0.0)


def _max_row_divergence(Q: np.ndarray, W: np.ndarray) -> float:
    PY = Q @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W[None, :, :] > 0, W[None, :, :] / PY[:, None, :], 1.0)
        D = (W[None, :, :] * np.log(ratio)).sum(axis=2)
    return float(np.max(D))


def grid_oracle_min_I(
    W: Channel, P_Y: FiniteDistribution, step: float, match_tol: float
) -> OracleResult:
    """Brute-force minimum of ``I(Q, W)`` over simplex grid points matching ``P_Y``.

    Independent of the vertex method; meant for validation only.  The reported
    error is ``G * (D + |X| step)``, with ``G`` the largest row divergence
    ``D(W_a || Q W)`` over matched points (a Lipschitz constant of ``I`` in
    L1) and ``D`` the L1 extent of the matched set.
    """
    nx = len(W.input_alphabet)
    if nx > 4:
        raise DomainError("grid oracle supports at most 4 input symbols")
    m = int(round(1.0 / step))
    count = math.comb(m + nx - 1, nx - 1)
    if count > ORACLE_MAX_POINTS:
        raise ResourceError(f"{count} grid points exceeds the oracle limit {ORACLE_MAX_POINTS}")
    py = _aligned_output(P_Y, W)
    Q = compositions(m, nx) / m
    match = np.max(np.abs(Q @ W.matrix - py), axis=1) <= match_tol
    if not match.any():
        return OracleResult(math.nan, math.inf, 0, False)
    Qm = Q[match]
    I = _mi_rows(Qm, W.matrix)
    extent = float(np.sum(Qm.max(axis=0) - Qm.min(axis=0)))
    G = _max_row_divergence(Qm, W.matrix)
    return OracleResult(float(I.min()), G * (extent + nx / m), int(match.sum()), True)


@dataclass(frozen=True)
class AlternatingResult:
    S: float
    S_star: float
    per_component: tuple[float, float]
    optimizers: tuple[FiniteDistribution, FiniteDistribution]


def alternating_resolvability(
    pair: Sequence[tuple[FiniteDistribution, Channel]], tol: float = FEAS_TOL
) -> AlternatingResult:
    """Resolvability of the parity-alternating memoryless pair: ``(max_j I*_j, min_j I*_j)``."""
    if len(pair) != 2:
        raise DomainError("alternating model needs exactly two (source, channel) pairs")
    opt = []
    vals = []
    for P, W in pair:
        Q, I = min_mutual_information(W, output_distribution(P, W), tol)
        opt.append(Q)
        vals.append(I)
    return AlternatingResult(max(vals), min(vals), (vals[0], vals[1]), (opt[0], opt[1]))
