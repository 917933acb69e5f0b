"""Modulars, Luxemburg norms and membership in Orlicz spaces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import young
from .errors import PreconditionError
from .measure import DEFAULT_BUDGET, Budget, MeasurableFunction, MeasureSpace, integrate

MAX_BISECTIONS = 200
BRACKET_DOUBLINGS = 100
_HUGE = 1e300


@dataclass(frozen=True)
class NormResult:
    """Outcome of the Luxemburg-norm bisection."""

    value: float
    iterations: int
    bracket: tuple
    diverged: bool = False

    def __float__(self):
        return float(self.value)


def _floatify(f: MeasurableFunction) -> MeasurableFunction:
    if f.atom_values.dtype == object:
        return MeasurableFunction(f.space, f.atom_values.astype(float), f.continuum)
    return f


def modular(space: MeasureSpace, f: MeasurableFunction, phi: young.YoungFunction, budget: Budget = DEFAULT_BUDGET):
    """``∫ phi(|f|) dμ`` (``inf`` when divergent under the budget)."""
    g = _floatify(f).map(lambda v: young.evaluate(phi, v))
    return integrate(space, g, budget)


def _is_zero(f: MeasurableFunction, budget: Budget) -> bool:
    if np.any(f.atom_values.astype(float) != 0):
        return False
    return f.continuum_sup(budget.sup_grid) == 0


def luxemburg_norm(
    space: MeasureSpace,
    f: MeasurableFunction,
    phi: young.YoungFunction,
    tol: float = 1e-9,
    budget: Budget = DEFAULT_BUDGET,
) -> NormResult:
    """``inf{k > 0 : ∫ phi(|f|/k) dμ <= 1}`` by bisection on ``k``.

    The bracket starts at ``hi = max(1, sup|f|)`` and is doubled (and ``lo``
    halved) until it straddles the norm; bisection then stops once
    ``hi - lo <= tol * hi``.  When no scaling up to ``2^100`` times the start
    has a modular of at most one, the result is the ``inf`` sentinel with
    ``diverged=True``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = _floatify(f)
    if _is_zero(f, budget):
        return NormResult(0.0, 0, (0.0, 0.0))

    def rho(k):
        return modular(space, f.scale(1.0 / k), phi, budget)

    sup = max(f.atom_sup(), f.continuum_sup(budget.sup_grid))
    hi = max(1.0, sup) if math.isfinite(sup) else 1.0
    ceiling = min(hi * 2.0**BRACKET_DOUBLINGS, _HUGE)
    iterations = 0
    while rho(hi) > 1:
        hi *= 2
        iterations += 1
        if hi > ceiling:
            return NormResult(math.inf, iterations, (hi / 2, math.inf), diverged=True)
    lo = hi / 2
    while rho(lo) <= 1:
        hi, lo = lo, lo / 2
        iterations += 1
        if lo < 1e-300:
            return NormResult(hi, iterations, (0.0, hi))
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        iterations += 1
        if rho(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return NormResult(hi, iterations, (lo, hi))


def member(space: MeasureSpace, f: MeasurableFunction, phi: young.YoungFunction, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Whether ``∫ phi(k|f|) dμ`` is finite for some ``k`` in ``{2^-20, ..., 1}``."""
    f = _floatify(f)
    for j in range(0, -21, -1):
        if modular(space, f.scale(2.0**j), phi, budget) < math.inf:
            return True
    return False


def holder_product_bound(
    space: MeasureSpace,
    f1: MeasurableFunction,
    f2: MeasurableFunction,
    phi1: young.YoungFunction,
    phi2: young.YoungFunction,
    phi3: young.YoungFunction,
    tol: float = 1e-9,
    grid: young.Grid = young.DEFAULT_GRID,
    budget: Budget = DEFAULT_BUDGET,
):
    """Compare ``‖f1 f2‖_{phi3}`` with ``2 ‖f1‖_{phi1} ‖f2‖_{phi2}``.

    Requires a certificate for ``phi3(xy) <= phi1(x) + phi2(y)`` on ``grid``;
    otherwise raises :class:`PreconditionError` with the violating pair.
    Returns ``(lhs, rhs, holds)``.
    """
    cert = young.check_triple_inequality(phi1, phi2, phi3, young.PHI3_LEFT, grid)
    if not cert.holds:
        raise PreconditionError(
            f"phi3(xy) <= phi1(x) + phi2(y) fails at (x, y) = {cert.point}", cert.point
        )
    f1, f2 = _floatify(f1), _floatify(f2)
    lhs = luxemburg_norm(space, f1 * f2, phi3, tol, budget).value
    n1 = luxemburg_norm(space, f1, phi1, tol, budget).value
    n2 = luxemburg_norm(space, f2, phi2, tol, budget).value
    rhs = 0.0 if (n1 == 0 or n2 == 0) else 2 * n1 * n2
    return lhs, rhs, bool(lhs <= rhs + tol * max(1.0, rhs))


def luxemburg_norm_batch(values, masses, phi: young.YoungFunction, tol: float = 1e-9) -> np.ndarray:
    """Luxemburg norms of many functions on one finite atomic space at once.

    ``values`` has one row per function and one column per atom.  Same
    bracket-and-bisect scheme as :func:`luxemburg_norm`, run on all rows
    together.
    """
    vals = np.abs(np.atleast_2d(np.asarray(values, dtype=float)))
    masses = np.asarray(masses, dtype=float)

    def rho(k):
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = vals / k[:, None]
        return np.sum(young.evaluate(phi, scaled) * masses, axis=1)

    zero = ~np.any(vals > 0, axis=1)
    hi = np.maximum(1.0, vals.max(axis=1, initial=0.0))
    for _ in range(BRACKET_DOUBLINGS):
        grow = (rho(hi) > 1) & ~zero
        if not grow.any():
            break
        hi = np.where(grow, 2 * hi, hi)
    lo = hi / 2
    for _ in range(2000):
        shrink = (rho(lo) <= 1) & ~zero
        if not shrink.any():
            break
        hi = np.where(shrink, lo, hi)
        lo = np.where(shrink, lo / 2, lo)
    for _ in range(MAX_BISECTIONS):
        if np.all(hi - lo <= tol * hi):
            break
        mid = 0.5 * (lo + hi)
        inside = rho(mid) <= 1
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
    return np.where(zero, 0.0, hi)
