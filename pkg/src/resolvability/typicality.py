"""Types, typical-set predicates and the typical-set-truncated output distribution.

Type membership is decided in exact rational arithmetic: counts are integers
and float parameters are converted to :class:`fractions.Fraction` exactly, so
a predicate at its boundary never depends on rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

from ._core_py import compositions
from .errors import DegenerateTruncationError, DomainError, ResourceError
from .probability import (
    DEFAULT_BUDGET,
    PRODUCT_SUM_TOL,
    Channel,
    FiniteDistribution,
    output_distribution,
    product_alphabet,
)


@dataclass(frozen=True)
class TypeVector:
    """Empirical distribution of a length-``n`` sequence, kept as integer counts."""

    alphabet: tuple
    counts: tuple[int, ...]
    n: int

    def freq(self, symbol: Hashable) -> Fraction:
        return Fraction(self.counts[self.alphabet.index(symbol)], self.n)

    @property
    def freqs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.float64) / self.n


def _symbols(seq: Iterable) -> list[str]:
    return [str(s) for s in seq]


def type_of(x: Sequence, alphabet: Sequence | None = None) -> TypeVector:
    """Type of ``x``; the alphabet defaults to the sorted set of symbols present."""
    xs = _symbols(x)
    if not xs:
        raise DomainError("type of an empty sequence is undefined")
    alphabet = tuple(sorted(set(xs))) if alphabet is None else tuple(_symbols(alphabet))
    pos = {a: i for i, a in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for s in xs:
        if s not in pos:
            raise DomainError(f"symbol {s!r} not in alphabet {alphabet}")
        counts[pos[s]] += 1
    return TypeVector(alphabet, tuple(counts), len(xs))


def joint_type_of(
    x: Sequence,
    y: Sequence,
    x_alphabet: Sequence | None = None,
    y_alphabet: Sequence | None = None,
) -> TypeVector:
    """Joint type of ``(x, y)`` over the product alphabet of ``(a, b)`` pairs."""
    xs, ys = _symbols(x), _symbols(y)
    if len(xs) != len(ys):
        raise DomainError(f"sequence lengths differ ({len(xs)} vs {len(ys)})")
    xa = tuple(sorted(set(xs))) if x_alphabet is None else tuple(_symbols(x_alphabet))
    ya = tuple(sorted(set(ys))) if y_alphabet is None else tuple(_symbols(y_alphabet))
    pairs = [(a, b) for a in xa for b in ya]
    pos = {p: i for i, p in enumerate(pairs)}
    counts = [0] * len(pairs)
    for p in zip(xs, ys):
        if p not in pos:
            raise DomainError(f"pair {p!r} not in the product alphabet")
        counts[pos[p]] += 1
    return TypeVector(tuple(pairs), tuple(counts), len(xs))


def is_typical_output(y: Sequence, P_Y: FiniteDistribution, eps: float) -> bool:
    """``|P_y(b) - P_Y(b)| <= eps`` for every output symbol ``b``."""
    t = type_of(y, P_Y.alphabet)
    e = Fraction(eps)
    return all(abs(Fraction(c, t.n) - Fraction(p)) <= e for c, p in zip(t.counts, P_Y.pmf.tolist()))


def is_cond_typical(y: Sequence, x: Sequence, W: Channel, eps: float) -> bool:
    """``|P_xy(a,b) - P_x(a) W(b|a)| <= eps`` for every pair ``(a, b)``."""
    jt = joint_type_of(x, y, W.input_alphabet, W.output_alphabet)
    n = jt.n
    e = Fraction(eps)
    nx = len(W.output_alphabet)
    for i, a in enumerate(W.input_alphabet):
        row = jt.counts[i * nx:(i + 1) * nx]
        px = Fraction(sum(row), n)
        for j in range(nx):
            if abs(Fraction(row[j], n) - px * Fraction(float(W.matrix[i, j]))) > e:
                return False
    return True


def in_AY(P: FiniteDistribution, W: Channel, P_Y: FiniteDistribution, eps: float) -> bool:
    """Whether ``P W`` lies within ``2 |X| eps`` of ``P_Y`` in every coordinate."""
    PW = output_distribution(P, W)
    if P_Y.alphabet != PW.alphabet:
        P_Y = P_Y.reorder(PW.alphabet)
    return bool(np.all(np.abs(PW.pmf - P_Y.pmf) <= 2 * len(W.input_alphabet) * eps))


def typical_tolerance(eps: float, input_alphabet_size: int) -> float:
    """Tolerance ``|X| * eps`` applied to the output typical set before truncation."""
    return input_alphabet_size * eps


def _typical_mask(counts: np.ndarray, n: int, P_Y: FiniteDistribution, eps: float) -> np.ndarray:
    """Exact typicality of each row of integer counts, evaluated once per distinct type."""
    uniq, inverse = np.unique(counts, axis=0, return_inverse=True)
    e = Fraction(eps)
    ps = [Fraction(p) for p in P_Y.pmf.tolist()]
    ok = np.array(
        [all(abs(Fraction(int(c), n) - p) <= e for c, p in zip(row, ps)) for row in uniq],
        dtype=bool,
    )
    return ok[inverse.reshape(-1)]


def truncate_to_typical(
    P: FiniteDistribution,
    P_Y_marginal: FiniteDistribution,
    eps: float,
) -> tuple[FiniteDistribution, float]:
    """Condition a distribution over ``Y**n`` on the output typical set.

    ``P`` must be listed over ``product_alphabet(P_Y_marginal.alphabet, n)``.
    Returns the conditional distribution and ``tau = P(typical set)``.  The
    tolerance is used as given; see :func:`typical_tolerance` for the ``|X|``
    scaling.
    """
    k = P_Y_marginal.size
    n = round(math.log(P.size) / math.log(k)) if k > 1 else 1
    if k ** n != P.size or P.alphabet != product_alphabet(P_Y_marginal.alphabet, n):
        raise DomainError("distribution is not listed over the product output alphabet")
    idx = np.arange(P.size, dtype=np.int64)
    digits = np.stack([(idx // k ** (n - 1 - i)) % k for i in range(n)], axis=1)
    counts = np.stack([(digits == b).sum(axis=1) for b in range(k)], axis=1)
    mask = _typical_mask(counts, n, P_Y_marginal, eps)
    kept = np.where(mask, P.pmf, 0.0)
    tau = float(np.sum(kept))
    if tau <= 0.0:
        raise DegenerateTruncationError(
            f"no sequence of length {n} is {eps:g}-typical; truncation is undefined"
        )
    return FiniteDistribution(P.alphabet, kept / tau, atol=PRODUCT_SUM_TOL), tau


def type_classes(n: int, k: int, budget: int = DEFAULT_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """All count vectors of length-``n`` sequences over ``k`` symbols and their log class sizes."""
    count = math.comb(n + k - 1, k - 1)
    if count > budget:
        raise ResourceError(f"{count} type classes exceeds the budget {budget}")
    c = compositions(n, k)
    lg = np.array([math.lgamma(i + 1) for i in range(n + 1)])
    return c, lg[n] - lg[c].sum(axis=1)


def _log_seq_prob(counts: np.ndarray, pmf: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        logp = np.log(pmf)
    terms = np.where(counts > 0, counts * np.where(np.isfinite(logp), logp, 0.0), 0.0)
    dead = ((counts > 0) & ~np.isfinite(logp)).any(axis=1)
    out = terms.sum(axis=1)
    out[dead] = -np.inf
    return out


def typical_set_probability(P_Y: FiniteDistribution, n: int, eps: float) -> float:
    """``tau_n``: i.i.d. probability of the ``eps``-typical output set, summed over type classes."""
    c, logsize = type_classes(n, P_Y.size)
    mask = _typical_mask(c, n, P_Y, eps)
    logprob = logsize + _log_seq_prob(c, P_Y.pmf)
    return float(np.sum(np.exp(logprob[mask])))


def iid_product_distance(P: FiniteDistribution, Q: FiniteDistribution, n: int) -> float:
    """Exact ``d(P**n, Q**n)`` via type classes (each class has constant probability ratio)."""
    if P.alphabet != Q.alphabet:
        Q = Q.reorder(P.alphabet)
    c, logsize = type_classes(n, P.size)
    a = logsize + _log_seq_prob(c, P.pmf)
    b = logsize + _log_seq_prob(c, Q.pmf)
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(invalid="ignore"):
        diff = np.where(np.isneginf(hi), 0.0, np.exp(hi) * -np.expm1(lo - hi))
    return min(1.0, 0.5 * float(np.sum(diff)))
