"""Finite-alphabet distributions, channels, n-fold products and variational distance.

All probabilities are float64 in natural units.  Sums go through numpy's
pairwise summation; normalization is checked at 1e-12 for user input and at
1e-9 for anything produced by an n-fold product or a mixture.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError, ValidationError

SUM_TOL = 1e-12
PRODUCT_SUM_TOL = 1e-9
DEFAULT_BUDGET = 1 << 22


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def join_symbols(symbols: Sequence[str]) -> str:
    """Label of a sequence: concatenation for one-character symbols, else space-joined."""
    if all(len(s) == 1 for s in symbols):
        return "".join(symbols)
    return " ".join(symbols)


def product_alphabet(alphabet: Sequence[str], n: int) -> tuple[str, ...]:
    """Labels of ``alphabet**n`` in lexicographic (``itertools.product``) order."""
    sep = "" if all(len(s) == 1 for s in alphabet) else " "
    return tuple(sep.join(t) for t in itertools.product(alphabet, repeat=n))


def split_label(label: str, alphabet: Sequence[str]) -> tuple[str, ...]:
    """Inverse of :func:`join_symbols` for sequences over ``alphabet``."""
    if all(len(s) == 1 for s in alphabet):
        return tuple(label)
    return tuple(label.split(" ")) if label else ()


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """A pmf over an ordered alphabet of string labels."""

    alphabet: tuple[str, ...]
    pmf: np.ndarray
    atol: float = field(default=SUM_TOL, repr=False)

    def __post_init__(self):
        alphabet = tuple(str(a) for a in self.alphabet)
        pmf = np.array(self.pmf, dtype=np.float64).reshape(-1)
        if len(alphabet) != len(pmf):
            raise ValidationError(
                f"alphabet has {len(alphabet)} symbols but pmf has {len(pmf)} entries"
            )
        if len(set(alphabet)) != len(alphabet):
            raise ValidationError("alphabet labels must be unique")
        if len(pmf) == 0:
            raise ValidationError("empty distribution")
        if not np.all(np.isfinite(pmf)):
            raise ValidationError("pmf entries must be finite")
        bad = np.flatnonzero(pmf < 0)
        if bad.size:
            i = int(bad[0])
            raise ValidationError(f"negative mass {float(pmf[i])!r} at symbol {alphabet[i]!r}")
        total = float(np.sum(pmf))
        if abs(total - 1.0) > self.atol:
            raise ValidationError(f"pmf sums to {total!r}, not 1 (tolerance {self.atol:g})")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "pmf", _readonly(pmf))

    @classmethod
    def uniform(cls, alphabet: Iterable[str]) -> FiniteDistribution:
        alphabet = tuple(alphabet)
        return cls(alphabet, np.full(len(alphabet), 1.0 / len(alphabet)))

    @classmethod
    def point_mass(cls, alphabet: Iterable[str], symbol: str) -> FiniteDistribution:
        alphabet = tuple(alphabet)
        pmf = np.zeros(len(alphabet))
        pmf[alphabet.index(symbol)] = 1.0
        return cls(alphabet, pmf)

    @classmethod
    def bernoulli(cls, p: float, alphabet: Sequence[str] = ("0", "1")) -> FiniteDistribution:
        """Distribution putting mass ``p`` on the second symbol."""
        return cls(tuple(alphabet), [1.0 - p, p])

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise DomainError(f"symbol {symbol!r} not in alphabet") from None

    def prob(self, symbol: str) -> float:
        return float(self.pmf[self.index(symbol)])

    def reorder(self, alphabet: Sequence[str]) -> FiniteDistribution:
        """Same distribution listed in a different symbol order."""
        if set(alphabet) != set(self.alphabet) or len(alphabet) != len(self.alphabet):
            raise DomainError("reorder target is not a permutation of the alphabet")
        lookup = {a: i for i, a in enumerate(self.alphabet)}
        return FiniteDistribution(
            tuple(alphabet), self.pmf[[lookup[a] for a in alphabet]], atol=self.atol
        )

    def to_dict(self) -> dict:
        return {"alphabet": list(self.alphabet), "pmf": self.pmf.tolist()}

    def __eq__(self, other):
        if not isinstance(other, FiniteDistribution):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.pmf, other.pmf)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix; rows follow ``input_alphabet``, columns ``output_alphabet``."""

    input_alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    matrix: np.ndarray
    atol: float = field(default=SUM_TOL, repr=False)

    def __post_init__(self):
        xin = tuple(str(a) for a in self.input_alphabet)
        yout = tuple(str(b) for b in self.output_alphabet)
        W = np.array(self.matrix, dtype=np.float64)
        if W.ndim != 2 or W.shape != (len(xin), len(yout)):
            raise ValidationError(
                f"matrix shape {W.shape} does not match alphabets ({len(xin)}, {len(yout)})"
            )
        if len(set(xin)) != len(xin) or len(set(yout)) != len(yout):
            raise ValidationError("alphabet labels must be unique")
        if not np.all(np.isfinite(W)):
            raise ValidationError("channel entries must be finite")
        neg = np.argwhere(W < 0)
        if neg.size:
            i, j = (int(v) for v in neg[0])
            raise ValidationError(f"negative entry {float(W[i, j])!r} in row {i} ({xin[i]!r})")
        sums = W.sum(axis=1)
        off = np.flatnonzero(np.abs(sums - 1.0) > self.atol)
        if off.size:
            i = int(off[0])
            raise ValidationError(f"row {i} ({xin[i]!r}) sums to {float(sums[i])!r}, not 1")
        object.__setattr__(self, "input_alphabet", xin)
        object.__setattr__(self, "output_alphabet", yout)
        object.__setattr__(self, "matrix", _readonly(W))

    @classmethod
    def identity(cls, alphabet: Iterable[str]) -> Channel:
        alphabet = tuple(alphabet)
        return cls(alphabet, alphabet, np.eye(len(alphabet)))

    @classmethod
    def bsc(cls, p: float, alphabet: Sequence[str] = ("0", "1")) -> Channel:
        return cls(tuple(alphabet), tuple(alphabet), [[1 - p, p], [p, 1 - p]])

    @classmethod
    def constant(cls, input_alphabet: Iterable[str], row: FiniteDistribution) -> Channel:
        """Channel whose every row equals ``row`` (output independent of input)."""
        xin = tuple(input_alphabet)
        return cls(xin, row.alphabet, np.tile(row.pmf, (len(xin), 1)))

    def row(self, symbol: str) -> FiniteDistribution:
        i = self.input_alphabet.index(symbol)
        return FiniteDistribution(self.output_alphabet, self.matrix[i], atol=self.atol)

    def to_dict(self) -> dict:
        return {
            "input_alphabet": list(self.input_alphabet),
            "output_alphabet": list(self.output_alphabet),
            "matrix": self.matrix.tolist(),
        }


@dataclass(frozen=True)
class ProductSpec:
    """n-fold memoryless model: one (source, channel) pair, or two selected by parity of n."""

    components: tuple[tuple[FiniteDistribution, Channel], ...]
    n: int
    mode: str = "iid"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(tuple(c) for c in self.components))
        if self.n < 1:
            raise ValidationError("blocklength n must be >= 1")
        if self.mode == "iid":
            if len(self.components) != 1:
                raise ValidationError("iid mode takes exactly one (source, channel) pair")
        elif self.mode == "alternating":
            if len(self.components) != 2:
                raise ValidationError("alternating mode takes exactly two (source, channel) pairs")
        else:
            raise ValidationError(f"unknown mode {self.mode!r}")
        for P, W in self.components:
            _check_same_alphabet(P.alphabet, W.input_alphabet, "source", "channel input")

    @property
    def component_index(self) -> int:
        """0 for odd n (first pair), 1 for even n; always 0 in iid mode."""
        return parity_index(self.n) if self.mode == "alternating" else 0

    @property
    def component(self) -> tuple[FiniteDistribution, Channel]:
        return self.components[self.component_index]


@dataclass(frozen=True)
class MemorylessModel:
    """A (source, channel) pair, or two of them alternating with the parity of n."""

    components: tuple[tuple[FiniteDistribution, Channel], ...]
    mode: str = "iid"

    def __post_init__(self):
        # validation is shared with ProductSpec
        ProductSpec(self.components, 1, self.mode)
        object.__setattr__(self, "components", tuple(tuple(c) for c in self.components))

    def at(self, n: int) -> ProductSpec:
        return ProductSpec(self.components, n, self.mode)

    def component_index(self, n: int) -> int:
        return parity_index(n) if self.mode == "alternating" else 0

    def component(self, n: int) -> tuple[FiniteDistribution, Channel]:
        return self.components[self.component_index(n)]


def parity_index(n: int) -> int:
    """Component used at blocklength n in the alternating model: 0 if n odd, 1 if even."""
    return 0 if n % 2 == 1 else 1


def _check_same_alphabet(a: Sequence[str], b: Sequence[str], what_a: str, what_b: str):
    if tuple(a) != tuple(b):
        raise DomainError(f"{what_a} alphabet {tuple(a)} does not match {what_b} alphabet {tuple(b)}")


def _aligned(P: FiniteDistribution, Q: FiniteDistribution) -> np.ndarray:
    if P.alphabet == Q.alphabet:
        return Q.pmf
    if len(P.alphabet) == len(Q.alphabet) and set(P.alphabet) == set(Q.alphabet):
        return Q.reorder(P.alphabet).pmf
    raise DomainError("distributions are over different alphabets")


def variational_distance(P: FiniteDistribution, Q: FiniteDistribution) -> float:
    """Half the L1 distance between two pmfs on the same alphabet."""
    q = _aligned(P, Q)
    d = 0.5 * float(np.sum(np.abs(P.pmf - q)))
    return min(d, 1.0)


def output_distribution(P_X: FiniteDistribution, W: Channel) -> FiniteDistribution:
    """Push ``P_X`` through ``W``."""
    _check_same_alphabet(P_X.alphabet, W.input_alphabet, "input distribution", "channel input")
    p_y = P_X.pmf @ W.matrix
    return FiniteDistribution(W.output_alphabet, p_y, atol=PRODUCT_SUM_TOL)


def _check_budget(count: int, budget: int, what: str):
    if count > budget:
        raise ResourceError(
            f"{what} needs {count} outcomes, over the enumeration budget of {budget}; "
            "use spectrum_memoryless_exact for per-letter computations instead"
        )


def _kron_power(v: np.ndarray, n: int) -> np.ndarray:
    out = v
    for _ in range(n - 1):
        out = np.kron(out, v)
    return out


def product_distribution(spec: ProductSpec, budget: int = DEFAULT_BUDGET) -> FiniteDistribution:
    """Exact pmf of the n-letter source of ``spec`` over lexicographically ordered sequences."""
    P, _ = spec.component
    _check_budget(P.size ** spec.n, budget, "product distribution")
    pmf = _kron_power(P.pmf, spec.n)
    return FiniteDistribution(product_alphabet(P.alphabet, spec.n), pmf, atol=PRODUCT_SUM_TOL)


def product_channel(
    W: Channel | Sequence[Channel],
    n: int,
    mode: str = "iid",
    budget: int = DEFAULT_BUDGET,
) -> Channel:
    """Materialize the n-letter memoryless channel.

    In ``"alternating"`` mode ``W`` is a pair and the parity of ``n`` picks the
    component used for the whole block.  The budget caps the number of matrix
    entries ``|X|**n * |Y|**n``.
    """
    if n < 1:
        raise ValidationError("blocklength n must be >= 1")
    if mode == "alternating":
        if isinstance(W, Channel) or len(W) != 2:
            raise ValidationError("alternating mode takes a pair of channels")
        W = W[parity_index(n)]
    elif mode != "iid":
        raise ValidationError(f"unknown mode {mode!r}")
    elif not isinstance(W, Channel):
        raise ValidationError("iid mode takes a single channel")
    entries = (len(W.input_alphabet) ** n) * (len(W.output_alphabet) ** n)
    _check_budget(entries, budget, "product channel")
    M = W.matrix
    out = M
    for _ in range(n - 1):
        out = np.kron(out, M)
    return Channel(
        product_alphabet(W.input_alphabet, n),
        product_alphabet(W.output_alphabet, n),
        out,
        atol=PRODUCT_SUM_TOL,
    )


def mixture_budget_check(count: int, budget: int, what: str):
    """Public wrapper used by other modules to report budget overruns uniformly."""
    _check_budget(count, budget, what)


def log_nonzero(p: np.ndarray) -> np.ndarray:
    """Natural log with ``log 0 = -inf`` and no warnings."""
    with np.errstate(divide="ignore"):
        return np.log(p)


def nats_to_bits(x: float) -> float:
    return x / math.log(2.0)
