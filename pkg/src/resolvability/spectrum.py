"""Exact distributions of information densities and their quantile operators.

A :class:`Spectrum` is a finitely supported distribution on the extended
reals (at most one ``+inf`` atom).  ``kind`` records the scale of its values:

``"sum"``
    the unnormalized log-ratio over ``n`` letters,
``"per_letter"``
    the same divided by ``n``,
``"second_order"``
    ``(sum - n R) / sqrt(n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError, ValidationError
from .probability import Channel, FiniteDistribution, log_nonzero, parity_index

DEDUP_TOL = 1e-9
SPECTRUM_SUM_TOL = 1e-9
DEFAULT_ATOM_CAP = 10**7
KINDS = ("sum", "per_letter", "second_order")


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    probs: np.ndarray
    n: int = 1
    kind: str = "sum"

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        p = np.array(self.probs, dtype=np.float64).reshape(-1)
        if v.shape != p.shape or v.size == 0:
            raise ValidationError("spectrum needs matching, nonempty value/probability arrays")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown spectrum kind {self.kind!r}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValidationError("spectrum probabilities must be finite and nonnegative")
        if np.any(np.isnan(v)) or np.any(v == -np.inf):
            raise ValidationError("spectrum values must be real or +inf")
        if np.any(np.diff(v) <= 0):
            raise ValidationError("spectrum values must be strictly increasing")
        total = float(np.sum(p))
        if abs(total - 1.0) > SPECTRUM_SUM_TOL:
            raise ValidationError(f"spectrum probabilities sum to {total!r}")
        v.setflags(write=False)
        p.setflags(write=False)
        # suffix[i] = Pr{Z >= values[i]}; suffix[len] = 0
        suffix = np.concatenate((np.cumsum(p[::-1])[::-1], [0.0]))
        suffix.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "_suffix", suffix)

    @classmethod
    def from_atoms(
        cls,
        values: Sequence[float] | np.ndarray,
        probs: Sequence[float] | np.ndarray,
        n: int = 1,
        kind: str = "sum",
        tol: float = DEDUP_TOL,
    ) -> Spectrum:
        """Sort, drop zero-mass atoms and merge values within ``tol`` of a group's smallest value."""
        v = np.asarray(values, dtype=np.float64).reshape(-1)
        p = np.asarray(probs, dtype=np.float64).reshape(-1)
        keep = p > 0
        v, p = v[keep], p[keep]
        inf = v == np.inf
        p_inf = float(np.sum(p[inf])) if inf.any() else 0.0
        v, p = v[~inf], p[~inf]
        order = np.argsort(v, kind="stable")
        mv, mp = kernels.merge_sorted_atoms(
            np.ascontiguousarray(v[order]), np.ascontiguousarray(p[order]), float(tol)
        )
        if p_inf > 0:
            mv = np.append(mv, np.inf)
            mp = np.append(mp, p_inf)
        return cls(mv, mp, n=n, kind=kind)

    @classmethod
    def point_mass(cls, value: float, n: int = 1, kind: str = "sum") -> Spectrum:
        return cls([value], [1.0], n=n, kind=kind)

    @property
    def inf_mass(self) -> float:
        return float(self.probs[-1]) if self.values[-1] == np.inf else 0.0

    @property
    def finite(self) -> tuple[np.ndarray, np.ndarray]:
        m = self.values < np.inf
        return self.values[m], self.probs[m]

    def __len__(self) -> int:
        return self.values.size

    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def affine(self, scale: float, shift: float, kind: str) -> Spectrum:
        """Spectrum of ``scale * Z + shift`` (``scale > 0``)."""
        if scale <= 0:
            raise DomainError("affine scale must be positive")
        return Spectrum(self.values * scale + shift, self.probs, n=self.n, kind=kind)

    def per_letter(self) -> Spectrum:
        """Divide ``sum`` values by ``n``; other kinds are returned unchanged."""
        if self.kind != "sum":
            return self
        return self.affine(1.0 / self.n, 0.0, "per_letter")

    def suffix_mass(self, alpha: float, strict: bool) -> float:
        side = "right" if strict else "left"
        return float(self._suffix[np.searchsorted(self.values, alpha, side=side)])

    def same_atoms(self, other: Spectrum, tol: float = DEDUP_TOL, ptol: float = 1e-12) -> bool:
        """Atom-for-atom agreement within value and probability tolerances."""
        if len(self) != len(other):
            return False
        a_inf = self.values == np.inf
        if not np.array_equal(a_inf, other.values == np.inf):
            return False
        return bool(
            np.all(np.abs(self.values[~a_inf] - other.values[~a_inf]) <= tol)
            and np.all(np.abs(self.probs - other.probs) <= ptol)
        )


def info_density_spectrum(
    P_X: FiniteDistribution,
    W: Channel,
    ref: FiniteDistribution,
    n: int = 1,
    normalize: bool = False,
) -> Spectrum:
    """Exact law of ``log W(Y|X)/ref(Y)`` under ``P_X x W``.

    ``n`` is the number of letters the sequences span; with ``normalize`` the
    values are divided by it.  Pairs with zero joint mass are dropped; a zero
    in ``ref`` under positive joint mass contributes to the ``+inf`` atom.
    """
    if P_X.alphabet != W.input_alphabet:
        raise DomainError("input distribution and channel input alphabets differ")
    if ref.alphabet != W.output_alphabet:
        if set(ref.alphabet) != set(W.output_alphabet) or len(ref.alphabet) != len(W.output_alphabet):
            raise DomainError("reference and channel output alphabets differ")
        ref = ref.reorder(W.output_alphabet)
    joint = P_X.pmf[:, None] * W.matrix
    rows, cols = np.nonzero(joint > 0)
    log_w = np.log(W.matrix[rows, cols])
    log_ref = log_nonzero(ref.pmf)[cols]
    dens = np.where(np.isneginf(log_ref), np.inf, log_w - np.where(np.isneginf(log_ref), 0.0, log_ref))
    s = Spectrum.from_atoms(dens, joint[rows, cols], n=n, kind="sum")
    return s.per_letter() if normalize else s


def self_information_spectrum(P: FiniteDistribution, n: int = 1, normalize: bool = False) -> Spectrum:
    """Law of ``-log P(X)``."""
    p = P.pmf[P.pmf > 0]
    s = Spectrum.from_atoms(-np.log(p), p, n=n, kind="sum")
    return s.per_letter() if normalize else s


def _lgamma_table(n: int) -> np.ndarray:
    return np.array([math.lgamma(c + 1) for c in range(n + 1)], dtype=np.float64)


def spectrum_memoryless_exact(
    per_letter: Spectrum | Sequence[Spectrum],
    n: int,
    mode: str = "iid",
    normalize: bool = False,
    cap: int = DEFAULT_ATOM_CAP,
) -> Spectrum:
    """Exact law of the sum of ``n`` i.i.d. copies of a per-letter spectrum.

    Works on type classes: every composition ``(c_1..c_k)`` of ``n`` over the
    ``k`` finite per-letter atoms contributes ``sum c_i v_i`` with multinomial
    probability, so the cost is ``C(n+k-1, k-1)`` rather than ``|X|**n``.  In
    ``"alternating"`` mode ``per_letter`` is a pair and the parity of ``n``
    selects one component for the whole block.
    """
    if n < 1:
        raise ValidationError("blocklength n must be >= 1")
    if mode == "alternating":
        if isinstance(per_letter, Spectrum) or len(per_letter) != 2:
            raise ValidationError("alternating mode takes a pair of per-letter spectra")
        base = per_letter[parity_index(n)]
    elif mode == "iid":
        if not isinstance(per_letter, Spectrum):
            raise ValidationError("iid mode takes a single per-letter spectrum")
        base = per_letter
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    if base.kind != "sum" or base.n != 1:
        raise ValidationError("per-letter spectrum must be an unnormalized single-letter spectrum")

    if n == 1:
        out = base
    else:
        v, p = base.finite
        q_inf = base.inf_mass
        k = v.size
        if k == 0:
            out = Spectrum.point_mass(np.inf, n=n)
        else:
            count = math.comb(n + k - 1, k - 1)
            if count > cap:
                raise ResourceError(
                    f"{count} type classes for n={n} over {k} atoms exceeds the atom cap {cap}"
                )
            finite_mass = 1.0 - q_inf
            logp = np.log(p / finite_mass)
            sums, logprobs = kernels.multinomial_atoms(
                np.ascontiguousarray(v), np.ascontiguousarray(logp), _lgamma_table(n), n, count
            )
            probs = np.exp(logprobs)
            if q_inf > 0:
                probs = probs * math.exp(n * math.log1p(-q_inf))
                sums = np.append(sums, np.inf)
                probs = np.append(probs, -math.expm1(n * math.log1p(-q_inf)))
            out = Spectrum.from_atoms(sums, probs, n=n, kind="sum")
    return out.per_letter() if normalize else Spectrum(out.values, out.probs, n=n, kind="sum")


def convolve_spectra(a: Spectrum, b: Spectrum, cap: int = DEFAULT_ATOM_CAP) -> Spectrum:
    """Law of the independent sum of two ``sum``-kind spectra (blocklengths add)."""
    if a.kind != "sum" or b.kind != "sum":
        raise ValidationError("only unnormalized spectra can be convolved")
    if len(a) * len(b) > cap:
        raise ResourceError(f"{len(a) * len(b)} pairwise atoms exceeds the atom cap {cap}")
    with np.errstate(invalid="ignore"):
        vals = (a.values[:, None] + b.values[None, :]).ravel()
    probs = (a.probs[:, None] * b.probs[None, :]).ravel()
    return Spectrum.from_atoms(vals, probs, n=a.n + b.n, kind="sum")


def eps_upper_quantile(s: Spectrum, eps: float) -> float:
    """``inf{alpha : Pr{Z > alpha} <= eps}`` evaluated on the step function.

    Returns ``-inf`` for ``eps = 1`` and ``+inf`` when the ``+inf`` atom alone
    carries more than ``eps``.
    """
    if not 0.0 <= eps <= 1.0 or math.isnan(eps):
        raise DomainError(f"eps must lie in [0, 1], got {eps!r}")
    if eps >= 1.0:
        return -math.inf
    tails = s._suffix[1:]  # Pr{Z > values[i]}
    hit = np.flatnonzero(tails <= eps)
    if hit.size == 0:
        return math.inf
    return float(s.values[hit[0]])


def tail_probability(s: Spectrum, alpha: float, strict: bool = True) -> float:
    """``Pr{Z > alpha}`` (strict) or ``Pr{Z >= alpha}``."""
    return s.suffix_mass(alpha, strict)


def spectrum_mean_var(s: Spectrum) -> tuple[float, float]:
    """Mean and variance of a spectrum without an infinite atom."""
    if s.inf_mass > 0:
        raise DomainError("spectrum has an infinite atom; moments are undefined")
    v, p = s.values, s.probs
    mean = math.fsum((p * v).tolist())
    var = math.fsum((p * (v - mean) ** 2).tolist())
    return mean, var
