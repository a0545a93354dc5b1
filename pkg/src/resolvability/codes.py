"""Resolvability codes: construction, exact evaluation and exhaustive search.

A code is a multiset of ``M`` codewords in ``X**n``; the uniform index picks
one and the channel does the rest, so the induced output is the uniform
mixture of the codeword rows.

Random codes draw from ``numpy.random.PCG64`` seeded with the integer seed
(through numpy's ``SeedSequence``).  Each codeword consumes one double from
``Generator.random`` and is decoded by inverse CDF over the input pmf in
alphabet order (``searchsorted(..., side="right")``), which makes a code a
pure function of ``(P_X, M, seed)``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ParseError, ResourceError, ValidationError
from .probability import (
    PRODUCT_SUM_TOL,
    Channel,
    FiniteDistribution,
    variational_distance,
)
from .spectrum import Spectrum, info_density_spectrum

DEFAULT_SEARCH_BUDGET = 10**6
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ResolvabilityCode:
    n: int
    codewords: tuple[str, ...]
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "codewords", tuple(str(c) for c in self.codewords))
        if self.n < 1:
            raise ValidationError("code blocklength must be >= 1")
        if not self.codewords:
            raise ValidationError("a code needs at least one codeword")

    @property
    def M(self) -> int:
        return len(self.codewords)

    def to_dict(self) -> dict:
        return {"n": self.n, "M": self.M, "seed": self.seed, "codewords": list(self.codewords)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> ResolvabilityCode:
        try:
            words = data["codewords"]
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"code record is missing or has a bad field: {exc}") from None
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise ParseError("codewords must be a JSON array of strings")
        if "M" in data and int(data["M"]) != len(words):
            raise ValidationError(f"M = {data['M']} but {len(words)} codewords listed")
        seed = data.get("seed")
        return cls(n, tuple(words), None if seed is None else int(seed))

    @classmethod
    def from_json(cls, text: str) -> ResolvabilityCode:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        return cls.from_dict(data)


def _codeword_indices(code: ResolvabilityCode, Wn: Channel) -> np.ndarray:
    lookup = {x: i for i, x in enumerate(Wn.input_alphabet)}
    try:
        return np.array([lookup[c] for c in code.codewords], dtype=np.int64)
    except KeyError as exc:
        raise DomainError(f"codeword {exc.args[0]!r} is not a channel input") from None


def code_input_distribution(code: ResolvabilityCode, Wn: Channel) -> FiniteDistribution:
    """Law of ``phi(U_M)`` over the channel input alphabet."""
    counts = np.bincount(_codeword_indices(code, Wn), minlength=len(Wn.input_alphabet))
    return FiniteDistribution(Wn.input_alphabet, counts / code.M, atol=PRODUCT_SUM_TOL)


def code_output_distribution(code: ResolvabilityCode, Wn: Channel) -> FiniteDistribution:
    """Uniform mixture of the codeword rows of ``Wn``."""
    counts = np.bincount(_codeword_indices(code, Wn), minlength=len(Wn.input_alphabet))
    mix = (counts @ Wn.matrix) / code.M
    return FiniteDistribution(Wn.output_alphabet, mix, atol=PRODUCT_SUM_TOL)


def code_distance(code: ResolvabilityCode, Wn: Channel, target: FiniteDistribution) -> float:
    return variational_distance(target, code_output_distribution(code, Wn))


def random_code(P_X: FiniteDistribution, M: int, seed: int, n: int = 1) -> ResolvabilityCode:
    """``M`` i.i.d. codewords from ``P_X`` (a distribution over ``X**n``)."""
    if M < 1:
        raise ValidationError("code size M must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf = np.cumsum(P_X.pmf)
    u = rng.random(M) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return ResolvabilityCode(n, tuple(P_X.alphabet[i] for i in idx.tolist()), seed=seed)


def best_random_code(
    P_X: FiniteDistribution,
    Wn: Channel,
    target: FiniteDistribution,
    M: int,
    trials: int,
    seed: int,
    n: int = 1,
) -> tuple[ResolvabilityCode, float]:
    """Best of ``trials`` random codes; trial ``t`` uses seed ``seed + t`` (first wins ties)."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    best: tuple[ResolvabilityCode, float] | None = None
    for t in range(trials):
        code = random_code(P_X, M, seed + t, n=n)
        d = code_distance(code, Wn, target)
        if best is None or d < best[1]:
            best = (code, d)
    return best


def multiset_count(K: int, M: int) -> int:
    return math.comb(K + M - 1, M)


def exhaustive_optimal_code(
    Wn: Channel,
    target: FiniteDistribution,
    M: int,
    n: int = 1,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> tuple[ResolvabilityCode, float]:
    """Globally optimal size-``M`` code by enumerating codeword multisets.

    Among codes within ``1e-12`` of the minimum, the lexicographically first
    multiset (in channel input order) is returned.
    """
    if M < 1:
        raise ValidationError("code size M must be >= 1")
    K = len(Wn.input_alphabet)
    count = multiset_count(K, M)
    if count > budget:
        raise ResourceError(
            f"{count} codeword multisets (|X^n|={K}, M={M}) exceeds the search budget {budget}"
        )
    if target.alphabet != Wn.output_alphabet:
        target = target.reorder(Wn.output_alphabet)
    d = kernels.multiset_distances(
        np.ascontiguousarray(Wn.matrix), np.ascontiguousarray(target.pmf), M, count
    )
    best = int(np.flatnonzero(d <= d.min() + TIE_TOL)[0])
    combo = next(itertools.islice(itertools.combinations_with_replacement(range(K), M), best, None))
    code = ResolvabilityCode(n, tuple(Wn.input_alphabet[i] for i in combo))
    return code, float(d[best])


def all_codes(Wn: Channel, M: int, n: int = 1) -> list[ResolvabilityCode]:
    """Every size-``M`` codeword multiset, in search order."""
    return [
        ResolvabilityCode(n, tuple(Wn.input_alphabet[i] for i in combo))
        for combo in itertools.combinations_with_replacement(range(len(Wn.input_alphabet)), M)
    ]


def code_info_spectrum(
    code: ResolvabilityCode,
    Wn: Channel,
    ref: FiniteDistribution,
    n: int | None = None,
) -> Spectrum:
    """Per-letter law of ``log W(Y|X)/ref(Y)`` with ``X = phi(U_M)`` and ``Y`` its channel output."""
    n = code.n if n is None else n
    return info_density_spectrum(code_input_distribution(code, Wn), Wn, ref, n=n, normalize=True)


def codewords_label(codewords: Sequence[str]) -> str:
    return ";".join(codewords)
