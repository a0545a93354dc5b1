"""Finite-length achievability and converse bounds on the approximation distance.

Both bounds read a spectrum of the per-letter density at threshold ``c``
(nats per symbol).  ``sum``-kind spectra are divided by their ``n`` first, so
grid points that coincide with atoms compare exactly.

The achievability bound is existential: it bounds the distance of the *best*
size-``M`` code for the input that generated the spectrum, so it is checked
against exhaustive minima rather than any particular random code.  The
converse bound holds for every code, evaluated on that code's own spectrum.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .spectrum import Spectrum

PRECONDITION_TOL = 1e-12
GRID_POINTS = 50
GRID_NUDGE = 1e-12


@dataclass(frozen=True)
class BoundPoint:
    which: str
    c: float
    M: int
    n: int
    value: float
    raw: float


@dataclass(frozen=True)
class SweepCurve:
    which: str
    points: tuple[BoundPoint, ...]
    model: str = ""

    def __post_init__(self):
        Ms = [p.M for p in self.points]
        if any(b <= a for a, b in zip(Ms, Ms[1:])):
            raise DomainError("sweep parameter axis must be strictly increasing")

    @property
    def values(self) -> list[float]:
        return [p.value for p in self.points]


def _per_letter(s: Spectrum, n: int | None) -> tuple[Spectrum, int]:
    if s.kind == "second_order":
        raise DomainError("bounds need a first-order (sum or per-letter) spectrum")
    return s.per_letter(), (s.n if n is None else n)


def _check_M(M: int):
    if M < 1 or int(M) != M:
        raise DomainError(f"code size M must be a positive integer, got {M!r}")


def achievability_bound(s: Spectrum, M: int, c: float, n: int | None = None) -> float:
    """``Pr{Z > c} + sqrt(exp(n c) / M) / 2``, clamped to 1."""
    if c < 0 or math.isnan(c):
        raise DomainError(f"threshold c must be >= 0, got {c!r}")
    _check_M(M)
    pl, n = _per_letter(s, n)
    tail = pl.suffix_mass(c, strict=True)
    expo = 0.5 * (n * c - math.log(M))
    penalty = 0.5 * math.exp(expo) if expo < 700 else math.inf
    return min(1.0, tail + penalty)


def converse_precondition(M: int, c: float, n: int) -> bool:
    """``M <= exp(n c)``, compared in the log domain with a 1e-12 slack."""
    return math.log(M) <= n * c + PRECONDITION_TOL


def converse_bound(s_code: Spectrum, M: int, c: float, n: int | None = None) -> float:
    """Raw ``Pr{Z >= c} - M exp(-n c)`` for the code-induced density ``Z``.

    May be negative (a vacuous bound); callers report ``max(raw, 0)``.
    """
    _check_M(M)
    pl, n = _per_letter(s_code, n)
    if not converse_precondition(M, c, n):
        raise PreconditionError(f"M = {M} exceeds exp(n c) = exp({n} * {c!r})")
    tail = pl.suffix_mass(c, strict=False)
    return tail - math.exp(math.log(M) - n * c)


def default_c_grid(s: Spectrum, points: int = GRID_POINTS) -> np.ndarray:
    """Atoms, atoms +- 1e-12, and ``points`` uniform values over ``[min - 1, max + 1]``."""
    v, _ = s.per_letter().finite
    if v.size == 0:
        return np.array([0.0])
    atoms = np.concatenate((v, v - GRID_NUDGE, v + GRID_NUDGE))
    uniform = np.linspace(v.min() - 1.0, v.max() + 1.0, points)
    return np.unique(np.concatenate((atoms, uniform)))


def effective_grid(
    s: Spectrum, M: int, n: int, which: str, c_grid: Sequence[float] | None = None
) -> np.ndarray:
    v, _ = s.per_letter().finite
    grid = default_c_grid(s) if c_grid is None else np.asarray(c_grid, dtype=np.float64)
    extra = [v]
    if which == "converse":
        extra.append([math.log(M) / n])
    grid = np.unique(np.concatenate([grid, *extra]))
    if which == "achievability":
        grid = grid[grid >= 0]
    elif which == "converse":
        grid = grid[[converse_precondition(M, c, n) for c in grid.tolist()]]
    else:
        raise DomainError(f"unknown bound {which!r}")
    return grid


def bound_points(
    s: Spectrum, M: int, which: str, n: int | None = None, c_grid: Sequence[float] | None = None
) -> list[BoundPoint]:
    """Evaluate one bound at every admissible grid threshold, in increasing ``c``."""
    n = s.n if n is None else n
    out = []
    for c in effective_grid(s, M, n, which, c_grid).tolist():
        if which == "achievability":
            val = achievability_bound(s, M, c, n)
            out.append(BoundPoint(which, c, M, n, val, val))
        else:
            raw = converse_bound(s, M, c, n)
            out.append(BoundPoint(which, c, M, n, max(raw, 0.0), raw))
    return out


def optimize_bound_over_c(
    s: Spectrum,
    M: int,
    n: int | None = None,
    which: str = "achievability",
    c_grid: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Best threshold over the grid with spectrum atoms injected.

    Minimizes the achievability bound or maximizes the raw converse bound;
    ties go to the smaller ``c``.
    """
    pts = bound_points(s, M, which, n, c_grid)
    if not pts:
        raise DomainError("no admissible threshold in the grid")
    best = pts[0]
    for p in pts[1:]:
        if (which == "achievability" and p.raw < best.raw) or (
            which == "converse" and p.raw > best.raw
        ):
            best = p
    return best.c, best.raw


def bound_sweep(
    spectra: Spectrum | Callable[[int], Spectrum],
    M_grid: Sequence[int],
    which: str,
    n: int | None = None,
    c_grid: Sequence[float] | None = None,
    model: str = "",
    threads: int = 1,
) -> SweepCurve:
    """Optimized bound for each code size.

    ``spectra`` is one spectrum (achievability: the input's own density) or a
    callable giving the spectrum to use at each ``M`` (converse: a code's).
    """
    get = spectra if callable(spectra) else (lambda M: spectra)

    def one(M: int) -> BoundPoint:
        s = get(M)
        nn = s.n if n is None else n
        c, raw = optimize_bound_over_c(s, M, nn, which, c_grid)
        val = raw if which == "achievability" else max(raw, 0.0)
        return BoundPoint(which, c, M, nn, val, raw)

    Ms = [int(M) for M in M_grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            pts = list(ex.map(one, Ms))
    else:
        pts = [one(M) for M in Ms]
    return SweepCurve(which, tuple(pts), model)
