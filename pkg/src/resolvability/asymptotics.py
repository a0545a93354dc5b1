"""Finite-n diagnostics for limsup/liminf quantities over a computed range of blocklengths.

Nothing here claims a limit.  Ball membership looks at a fixed tail window
(the last half of the computed range), and the Gaussian quantile is a
comparison oracle for the second-order quantiles, not a statement about them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .probability import FiniteDistribution, MemorylessModel, output_distribution
from .spectrum import (
    Spectrum,
    eps_upper_quantile,
    info_density_spectrum,
    spectrum_mean_var,
    spectrum_memoryless_exact,
)
from .typicality import iid_product_distance

SURROGATE_NOTE = "finite-range surrogate over the last half of the computed n; not a limit"

# Acklam's rational approximation to the standard normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF.

    Acklam's piecewise rational approximation (relative error < 1.2e-9)
    followed by one Halley step against ``erfc``, which brings the error to
    around 1e-15 on (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def gaussian_approx_quantile(V: float, delta: float) -> float:
    """``sqrt(V) * Phi^{-1}(1 - delta)``: the Gaussian comparison value at level ``delta``."""
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    if V < 0:
        raise DomainError("variance must be nonnegative")
    if V == 0 or delta == 0.5:
        return 0.0
    return math.sqrt(V) * normal_quantile(1.0 - delta)


def normalize_second_order(s: Spectrum, n: int, R: float) -> Spectrum:
    """Map every atom ``v`` of the unnormalized spectrum to ``(v - n R) / sqrt(n)``."""
    if s.kind == "second_order":
        raise DomainError("spectrum is already second-order normalized")
    if n < 1:
        raise DomainError("blocklength n must be >= 1")
    v = s.values * n if s.kind == "per_letter" else s.values
    return Spectrum((v - n * R) / math.sqrt(n), s.probs, n=n, kind="second_order")


@dataclass(frozen=True)
class BallVerdict:
    member: bool
    mode: str
    delta: float
    window: tuple[tuple[int, float], ...]
    witness: tuple[tuple[int, float], ...]
    note: str = SURROGATE_NOTE


def ball_membership(
    distances: Sequence[tuple[int, float]],
    delta: float,
    mode: str = "limsup",
    slack: float = 1e-12,
) -> BallVerdict:
    """Whether ``(n, d_n)`` data look like a member of the limsup or liminf delta-ball.

    limsup: every distance in the tail window is ``<= delta + slack``.
    liminf: some distance in the tail window is.  The witness lists the
    window entries that decide the verdict.
    """
    if not distances:
        raise DomainError("need at least one (n, distance) pair")
    if mode not in ("limsup", "liminf"):
        raise DomainError(f"unknown mode {mode!r}")
    pts = sorted((int(n), float(d)) for n, d in distances)
    if any(b[0] == a[0] for a, b in zip(pts, pts[1:])):
        raise DomainError("blocklengths must be distinct")
    window = tuple(pts[len(pts) // 2:])
    ok = tuple(p for p in window if p[1] <= delta + slack)
    bad = tuple(p for p in window if p[1] > delta + slack)
    if mode == "limsup":
        member = not bad
        witness = window if member else bad
    else:
        member = bool(ok)
        witness = ok if member else window
    return BallVerdict(member, mode, delta, window, witness)


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    component: int
    first_order_quantile: float
    second_order_quantile: float | None
    mean_per_letter: float
    distance: float | None = None


def per_letter_spectra(model: MemorylessModel) -> list[Spectrum]:
    """Single-letter mutual-information density spectrum of each model component."""
    return [info_density_spectrum(P, W, output_distribution(P, W)) for P, W in model.components]


def convergence_sweep(
    model: MemorylessModel,
    n_list: Sequence[int],
    delta: float,
    R: float | Sequence[float] | None = None,
    reference: Sequence[FiniteDistribution] | FiniteDistribution | None = None,
    threads: int = 1,
) -> list[ConvergenceRecord]:
    """Per-n quantiles of the information density of ``model``.

    ``first_order_quantile`` is the ``delta`` upper quantile of the per-letter
    density; with ``R`` given (one rate, or one per component),
    ``second_order_quantile`` is the same quantile after ``(sum - n R)/sqrt(n)``.  In alternating mode each ``n`` uses the
    component selected by its parity.  With ``reference`` (one output
    distribution per component), ``distance`` is the exact variational
    distance between the model's n-letter output and the reference product.
    """
    ns = [int(n) for n in n_list]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n_list must be nonempty and strictly increasing")
    bases = per_letter_spectra(model)
    per_letter = bases[0] if model.mode == "iid" else bases
    rates = None if R is None else (
        [float(R)] * len(model.components) if np.isscalar(R) else [float(r) for r in R]
    )
    if rates is not None and len(rates) != len(model.components):
        raise DomainError("need one rate per model component")
    if isinstance(reference, FiniteDistribution):
        reference = [reference] * len(model.components)

    def one(n: int) -> ConvergenceRecord:
        j = model.component_index(n)
        s = spectrum_memoryless_exact(per_letter, n, mode=model.mode)
        first = eps_upper_quantile(s.per_letter(), delta)
        second = None
        if rates is not None:
            second = eps_upper_quantile(normalize_second_order(s, n, rates[j]), delta)
        mean = spectrum_mean_var(s)[0] / n if s.inf_mass == 0 else math.inf
        dist = None
        if reference is not None:
            P, W = model.components[j]
            dist = iid_product_distance(output_distribution(P, W), reference[j], n)
        return ConvergenceRecord(n, j, first, second, mean, dist)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(one, ns))
    return [one(n) for n in ns]


def subsequence_quantiles(records: Sequence[ConvergenceRecord]) -> dict[int, np.ndarray]:
    """First-order quantiles grouped by model component (odd vs even n in alternating mode)."""
    out: dict[int, list[float]] = {}
    for r in records:
        out.setdefault(r.component, []).append(r.first_order_quantile)
    return {k: np.array(v) for k, v in out.items()}
