"""Young functions: evaluation, numerical conjugation, inversion and growth checks.

Every function here accepts a scalar or a numpy array and returns the same
shape.  Arithmetic overflow never raises; it yields ``inf``, which compares
as larger than every finite value.

Growth conditions are asymptotic statements and cannot be decided from
finitely many evaluations, so the checks return empirical certificates that
carry the grid they were verified on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConjugationError

DEFAULT_TOL = 1e-9
DEFAULT_CAP = 1e6
CONJUGATE_BRACKET_CAP = 1e300
MAX_ITER = 200
_BLOCK = 8

HOLDS = "holds-empirically"
COUNTEREXAMPLE = "counterexample"

DELTA2 = "delta2"
DELTA_PRIME = "delta_prime"
NABLA_PRIME = "nabla_prime"
DOMINATES = "dominates"
TRIPLE = "triple"

# which function sits on the left of the two-variable inequality
PHI2_LEFT = "phi2_left"  # phi2(xy) <= phi1(x) + phi3(y)
PHI1_LEFT = "phi1_left"  # phi1(xy) <= phi2(x) + phi3(y)
PHI3_LEFT = "phi3_left"  # phi3(xy) <= phi1(x) + phi2(y)
DIRECTIONS = (PHI2_LEFT, PHI1_LEFT, PHI3_LEFT)


@dataclass(frozen=True)
class YoungFunction:
    """An even convex gauge ``phi`` with ``phi(0) = 0``.

    ``kind`` is one of the catalog tags (``power``, ``exp_power``,
    ``l_log_l``) or ``custom`` / ``conjugate`` / ``composite`` for derived
    functions.  Derived functions are not guaranteed to be Young functions;
    use :func:`is_young` to test.
    """

    kind: str
    params: tuple = ()
    evaluator: Callable = field(default=None, repr=False, compare=False)
    name: str = ""
    log_evaluator: Callable | None = field(default=None, repr=False, compare=False)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        if self.name:
            return self.name
        if self.kind in CATALOG:
            return f"{self.kind}{{p={self.params[0]:g}}}"
        return self.kind


def _as_array(x):
    arr = np.abs(np.asarray(x, dtype=float))
    return arr, arr.ndim == 0


def _ret(values, scalar):
    return float(values) if scalar else values


def _power_eval(p):
    def fn(x):
        with np.errstate(over="ignore"):
            return x**p / p

    def log_fn(lx):
        return p * lx - math.log(p)

    return fn, log_fn


def _exp_series(t):
    # e^t - 1 - t, accurate for small t
    return t * t * (0.5 + t * (1 / 6 + t * (1 / 24 + t * (1 / 120 + t * (1 / 720 + t / 5040)))))


def _llogl_series(t):
    # (1+t)log(1+t) - t, accurate for small t
    return t * t * (0.5 - t * (1 / 6 - t * (1 / 12 - t * (1 / 20 - t * (1 / 30 - t / 42)))))


def _exp_power_eval(p):
    def fn(x):
        with np.errstate(over="ignore", invalid="ignore"):
            t = x**p
            small = t < 1e-2
            big = np.where(small, 0.0, t)
            out = np.where(small, _exp_series(np.where(small, t, 0.0)), np.expm1(big) - big)
        return np.where(np.isnan(out), np.inf, out)

    def log_fn(lx):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            lt = p * lx
            t = np.exp(lt)
            small = t < 1e-2
            ts = np.where(small, t, 0.0)
            ratio = ts * (1 / 3 + ts * (1 / 12 + ts * (1 / 60 + ts * (1 / 360 + ts / 2520))))
            low = 2 * lt - math.log(2) + np.log1p(ratio)
            mid_t = np.where(small | (t > 40), 1.0, t)
            mid = np.log(np.expm1(mid_t) - mid_t)
            high_t = np.where(t > 40, t, 41.0)
            high = high_t + np.log1p(-(1 + high_t) * np.exp(-high_t))
            out = np.where(small, low, np.where(t > 40, high, mid))
        return np.where(np.isneginf(lx), -np.inf, out)

    return fn, log_fn


def _llogl_eval(p):
    def fn(x):
        with np.errstate(over="ignore", invalid="ignore"):
            t = x**p
            small = t < 1e-2
            big = np.where(small, 0.0, t)
            out = np.where(small, _llogl_series(np.where(small, t, 0.0)), (1 + big) * np.log1p(big) - big)
        return np.where(np.isnan(out), np.inf, out)

    def log_fn(lx):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            lt = p * lx
            t = np.exp(lt)
            small = t < 1e-2
            ts = np.where(small, t, 0.0)
            ratio = -ts * (1 / 3 - ts * (1 / 6 - ts * (1 / 10 - ts * (1 / 15 - ts / 21))))
            low = 2 * lt - math.log(2) + np.log1p(ratio)
            huge = lt > 700
            tm = np.where(small | huge, 1.0, t)
            mid = np.log((1 + tm) * np.log1p(tm) - tm)
            lth = np.where(huge, lt, 701.0)
            high = lth + np.log(lth - 1)
            out = np.where(small, low, np.where(huge, high, mid))
        return np.where(np.isneginf(lx), -np.inf, out)

    return fn, log_fn


CATALOG = {
    "power": _power_eval,
    "exp_power": _exp_power_eval,
    "l_log_l": _llogl_eval,
}


def catalog(kind: str, p: float) -> YoungFunction:
    """Build a catalog entry by name."""
    if kind not in CATALOG:
        raise ValueError(f"unknown catalog entry {kind!r}; expected one of {sorted(CATALOG)}")
    p = float(p)
    if kind == "power" and p <= 1:
        raise ValueError("power entry needs p > 1")
    if p <= 0:
        raise ValueError(f"{kind} entry needs p > 0")
    fn, log_fn = CATALOG[kind](p)
    return YoungFunction(kind, (p,), fn, log_evaluator=log_fn)


def power(p: float) -> YoungFunction:
    """``x**p / p``."""
    return catalog("power", p)


def exp_power(p: float) -> YoungFunction:
    """``exp(x**p) - x**p - 1``."""
    return catalog("exp_power", p)


def l_log_l(p: float) -> YoungFunction:
    """``(1 + x**p) log(1 + x**p) - x**p``."""
    return catalog("l_log_l", p)


def custom(fn: Callable, name: str = "custom") -> YoungFunction:
    """Wrap a user evaluator.  ``fn`` must accept numpy arrays of ``x >= 0``."""
    return YoungFunction("custom", (), fn, name=name)


def evaluate(phi: YoungFunction, x):
    """Return ``phi(|x|)``; overflow yields ``inf``."""
    arr, scalar = _as_array(x)
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            out = np.asarray(phi.evaluator(arr), dtype=float)
        except OverflowError:
            out = np.vectorize(lambda v: _safe_scalar(phi, v), otypes=[float])(arr)
    out = np.where(np.isnan(out), np.inf, out)
    out = np.where(arr == 0, 0.0, out)
    return _ret(out, scalar)


def _safe_scalar(phi, v):
    try:
        return float(phi.evaluator(np.asarray(v)))
    except OverflowError:
        return math.inf


def log_evaluate(phi: YoungFunction, log_x):
    """Return ``log phi(exp(log_x))`` without forming ``phi`` itself.

    Catalog entries have overflow-free formulas; other kinds fall back to
    ``log(evaluate(...))``.
    """
    lx = np.asarray(log_x, dtype=float)
    scalar = lx.ndim == 0
    if phi.log_evaluator is not None:
        out = np.asarray(phi.log_evaluator(lx), dtype=float)
    else:
        with np.errstate(over="ignore", divide="ignore"):
            out = np.log(evaluate(phi, np.exp(lx)))
    return _ret(out, scalar)


def _gain(phi, x, y):
    with np.errstate(over="ignore", invalid="ignore"):
        g = x * y - evaluate(phi, x)
    return np.where(np.isnan(g), -np.inf, g)


def conjugate(phi: YoungFunction, y, tol: float = DEFAULT_TOL, cap: float = CONJUGATE_BRACKET_CAP):
    """Complementary function ``sup{x|y| - phi(x) : x >= 0}``.

    The maximiser is bracketed by doubling from ``x = 1`` until the gain has
    fallen on three consecutive doublings, then located by golden-section
    search.  Raises :class:`ConjugationError` when the bracket passes ``cap``
    while the gain is still rising.
    """
    arr, scalar = _as_array(y)
    out = np.zeros_like(arr)
    idx = np.flatnonzero(arr > 0)
    if idx.size == 0:
        return _ret(out, scalar)
    ys = arr.ravel()[idx]
    n = ys.size

    best_x = np.ones(n)
    best_g = _gain(phi, best_x, ys)
    prev_g = best_g.copy()
    falls = np.zeros(n, dtype=int)
    x = np.ones(n)
    active = np.ones(n, dtype=bool)
    # gains at the next _BLOCK doublings are evaluated in one call; the
    # bookkeeping below then walks them one doubling at a time
    steps = 2.0 ** np.arange(1, _BLOCK + 1)
    while active.any():
        rows = np.flatnonzero(active)
        xs_block = x[rows, None] * steps
        g_block = np.full((n, _BLOCK), -np.inf)
        g_block[rows] = _gain(phi, xs_block, ys[rows, None])
        x_block = np.zeros((n, _BLOCK))
        x_block[rows] = xs_block
        for j in range(_BLOCK):
            if not active.any():
                break
            x = np.where(active, x_block[:, j], x)
            if np.any(active & (x > cap)):
                bad = np.flatnonzero(active & (x > cap))[0]
                raise ConjugationError(
                    f"conjugate bracket exceeded {cap:g} at y={ys[bad]:g}", float(best_g[bad])
                )
            g = g_block[:, j]
            rising = g > prev_g
            falls = np.where(active, np.where(rising, 0, falls + 1), falls)
            better = active & (g > best_g)
            best_x = np.where(better, x, best_x)
            best_g = np.where(better, g, best_g)
            prev_g = np.where(active, g, prev_g)
            active &= falls < 3

    lo = np.where(best_x <= 1.0, 0.0, best_x / 2)
    hi = 2.0 * best_x
    xmax, gmax = _golden_max(lambda t: _gain(phi, t, ys), lo, hi, tol)
    val = np.maximum(np.maximum(gmax, best_g), 0.0)
    flat = out.ravel()
    flat[idx] = val
    return _ret(flat.reshape(arr.shape), scalar)


_INVPHI = (math.sqrt(5) - 1) / 2


def _golden_max(fn, lo, hi, tol):
    """Vectorised golden-section maximisation of concave ``fn`` on [lo, hi]."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = fn(c), fn(d)
    # the gain is flat at the maximiser, so its value error scales with the
    # square of the x-interval: sqrt(tol) in x leaves about tol in value
    rtol = math.sqrt(min(tol, 1e-6)) * 1e-4
    for _ in range(MAX_ITER):
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = np.where(left, hi - _INVPHI * (hi - lo), d)
        new_d = np.where(left, c, lo + _INVPHI * (hi - lo))
        fp = fn(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
        if np.all(hi - lo <= rtol * np.maximum(np.abs(hi), 1e-300)):
            break
    mid = 0.5 * (lo + hi)
    return mid, fn(mid)


def inverse(phi: YoungFunction, y, tol: float = DEFAULT_TOL):
    """Return ``x >= 0`` with ``phi(x) = y``.

    Power entries use the closed form ``(p y)^(1/p)``.  Other kinds use
    bisection on a bracket grown by doubling (or halving, for small ``y``)
    from ``x = 1``; iterates until the bracket is exhausted in floating point
    or ``MAX_ITER`` steps, which is far inside ``tol * max(1, y)``.
    """
    arr, scalar = _as_array(y)
    out = np.zeros_like(arr)
    flat = out.ravel()
    targets = arr.ravel()
    flat[np.isinf(targets)] = np.inf
    idx = np.flatnonzero((targets > 0) & np.isfinite(targets))
    if idx.size and phi.kind == "power":
        p = phi.params[0]
        with np.errstate(over="ignore"):
            flat[idx] = (p * targets[idx]) ** (1 / p)
    elif idx.size:
        flat[idx] = _bisect_increasing(lambda x: evaluate(phi, x), targets[idx])
    return _ret(flat.reshape(arr.shape), scalar)


def _bisect_increasing(fn, targets):
    """Solve ``fn(x) = target`` for an increasing ``fn`` with ``fn(0) = 0``."""
    hi = np.ones_like(targets)
    for _ in range(2100):
        low = fn(hi) < targets
        if not low.any():
            break
        hi = np.where(low, 2 * hi, hi)
    lo = hi / 2
    for _ in range(2100):
        high = fn(lo) >= targets
        if not high.any():
            break
        hi = np.where(high, lo, hi)
        lo = np.where(high, lo / 2, lo)
    lo = np.where(fn(lo) >= targets, 0.0, lo)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        up = fn(mid) < targets
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    return hi


def log_inverse(phi: YoungFunction, log_y):
    """Return ``log x`` with ``log phi(x) = log_y``, all in the log domain."""
    ly = np.asarray(log_y, dtype=float)
    scalar = ly.ndim == 0
    ly = np.atleast_1d(ly)
    lo = np.full(ly.shape, -8.0)
    hi = np.full(ly.shape, 8.0)
    for _ in range(64):
        below = log_evaluate(phi, lo) > ly
        above = log_evaluate(phi, hi) < ly
        if not (below.any() or above.any()):
            break
        lo = np.where(below, 2 * lo, lo)
        hi = np.where(above, 2 * hi, hi)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        up = log_evaluate(phi, mid) < ly
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    out = np.where(np.isneginf(ly), -np.inf, np.where(np.isposinf(ly), np.inf, hi))
    return float(out[0]) if scalar else out


# -- derived functions ---------------------------------------------------


def conjugate_function(phi: YoungFunction, tol: float = DEFAULT_TOL) -> YoungFunction:
    """The complementary function of ``phi`` as a numerically evaluated object."""
    return YoungFunction(
        "conjugate", (phi,), lambda y: conjugate(phi, y, tol), name=f"conj({phi})"
    )


def compose(outer: YoungFunction, inner: Callable, name: str = "") -> YoungFunction:
    """``outer(inner(x))``; the result may or may not be a Young function."""
    label = name or f"{outer}∘{getattr(inner, '__name__', 'g')}"
    return YoungFunction(
        "composite", (outer, inner), lambda x: evaluate(outer, inner(x)), name=label
    )


def inverse_function(phi: YoungFunction, tol: float = DEFAULT_TOL) -> Callable:
    """``phi^{-1}`` as a vectorised callable."""

    def inv(y):
        return inverse(phi, y, tol)

    inv.__name__ = f"inv({phi})"
    return inv


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Geometric sampling of ``[lo, hi]`` with ``points`` nodes."""

    lo: float = 2.0**-10
    hi: float = 2.0**20
    points: int = 128

    def __post_init__(self):
        if self.points < 64:
            raise ValueError("growth grids need at least 64 points")
        if not 0 < self.lo < self.hi:
            raise ValueError("grid needs 0 < lo < hi")

    def values(self) -> np.ndarray:
        return np.geomspace(self.lo, self.hi, self.points)

    def log_values(self) -> np.ndarray:
        return np.log(self.values())


DEFAULT_GRID = Grid()


@dataclass(frozen=True)
class GrowthCertificate:
    """Outcome of an empirical growth or comparison check.

    ``threshold`` is the ``x0`` above which the inequality was verified;
    ``0.0`` means it held at every grid point (and trivially at zero), i.e.
    globally on the grid.
    """

    condition: str
    verdict: str
    constant: float | None
    threshold: float | None
    grid: Grid
    point: tuple | None = None
    cap: float = DEFAULT_CAP
    direction: str | None = None
    functions: tuple = field(default=(), repr=False, compare=False)
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def reverify(self) -> bool:
        """Re-evaluate the defining inequality from the stored data."""
        if self.holds:
            return _holds_with(self)
        return _violated_at(self)


def _tail(grid, threshold):
    lx = grid.log_values()
    return lx[lx >= math.log(threshold) - 1e-12] if threshold and threshold > 0 else lx


_SLACK = 1e-10


def _holds_with(cert) -> bool:
    fs, cond = cert.functions, cert.condition
    lx = _tail(cert.grid, cert.threshold)
    if cond == DELTA2:
        (phi,) = fs
        lhs = log_evaluate(phi, lx + math.log(2))
        return bool(np.all(lhs <= math.log(cert.constant) + log_evaluate(phi, lx) + _SLACK))
    if cond in (DELTA_PRIME, NABLA_PRIME):
        (phi,) = fs
        X, Y = np.meshgrid(lx, lx)
        prod = log_evaluate(phi, X) + log_evaluate(phi, Y)
        if cond == DELTA_PRIME:
            return bool(np.all(log_evaluate(phi, X + Y) <= math.log(cert.constant) + prod + _SLACK))
        return bool(np.all(log_evaluate(phi, math.log(cert.constant) + X + Y) >= prod - _SLACK))
    if cond == DOMINATES:
        strong, weak = fs
        a = cert.constant
        return bool(np.all(log_evaluate(weak, lx) <= log_evaluate(strong, lx + math.log(a)) + _SLACK))
    if cond == TRIPLE:
        left, first, second = _triple_roles(fs, cert.direction)
        return bool(_triple_ok(left, first, second, cert.grid)[0].all())
    raise ValueError(cond)


def _violated_at(cert) -> bool:
    fs, cond, pt = cert.functions, cert.condition, cert.point
    if pt is None:
        return False
    if cond == DELTA2:
        (phi,) = fs
        lx = math.log(pt[0])
        return log_evaluate(phi, lx + math.log(2)) - log_evaluate(phi, lx) > math.log(cert.cap)
    if cond == DELTA_PRIME:
        (phi,) = fs
        lx, ly = math.log(pt[0]), math.log(pt[1])
        excess = log_evaluate(phi, lx + ly) - log_evaluate(phi, lx) - log_evaluate(phi, ly)
        return excess > math.log(cert.cap)
    if cond == NABLA_PRIME:
        (phi,) = fs
        lx, ly = math.log(pt[0]), math.log(pt[1])
        prod = log_evaluate(phi, lx) + log_evaluate(phi, ly)
        return log_evaluate(phi, math.log(cert.cap) + lx + ly) < prod
    if cond == DOMINATES:
        strong, weak = fs
        a, x = pt
        return log_evaluate(weak, math.log(x)) > log_evaluate(strong, math.log(a * x)) + _SLACK
    if cond == TRIPLE:
        left, first, second = _triple_roles(fs, cert.direction)
        x, y = pt
        return not _pair_ok(left, first, second, np.array([x]), np.array([y]))[0]
    raise ValueError(cond)


def check_growth(
    phi: YoungFunction, condition: str, grid: Grid = DEFAULT_GRID, cap: float = DEFAULT_CAP
) -> GrowthCertificate:
    """Smallest empirical constant for the Δ2, Δ' or ∇' condition on ``grid``.

    Δ2: ``phi(2x) <= k phi(x)``; Δ': ``phi(xy) <= c phi(x) phi(y)``;
    ∇': ``phi(b x y) >= phi(x) phi(y)``.  All ratios are formed in the log
    domain so that overflow of ``phi`` itself does not matter.  A constant
    above ``cap`` is reported as a counterexample at the first offending
    grid point.
    """
    lx = grid.log_values()
    xs = grid.values()
    if condition == DELTA2:
        ratio = log_evaluate(phi, lx + math.log(2)) - log_evaluate(phi, lx)
        ratio = np.where(np.isnan(ratio), np.inf, ratio)
        worst = float(np.max(ratio))
        if worst > math.log(cap):
            i = int(np.argmax(ratio > math.log(cap)))
            return GrowthCertificate(DELTA2, COUNTEREXAMPLE, None, None, grid, (float(xs[i]),), cap, functions=(phi,))
        return GrowthCertificate(DELTA2, HOLDS, math.exp(worst) * (1 + 1e-12), 0.0, grid, None, cap, functions=(phi,))
    if condition in (DELTA_PRIME, NABLA_PRIME):
        X, Y = np.meshgrid(lx, lx, indexing="ij")
        prod = log_evaluate(phi, X) + log_evaluate(phi, Y)
        if condition == DELTA_PRIME:
            need = log_evaluate(phi, X + Y) - prod
        else:
            need = log_inverse(phi, prod.ravel()).reshape(prod.shape) - X - Y
        need = np.where(np.isnan(need), np.inf, need)
        worst = float(np.max(need))
        if worst > math.log(cap):
            i, j = np.unravel_index(int(np.argmax(need > math.log(cap))), need.shape)
            return GrowthCertificate(
                condition, COUNTEREXAMPLE, None, None, grid, (float(xs[i]), float(xs[j])), cap, functions=(phi,)
            )
        return GrowthCertificate(condition, HOLDS, math.exp(worst) * (1 + 1e-12), 0.0, grid, None, cap, functions=(phi,))
    raise ValueError(f"unknown growth condition {condition!r}")


def dominates(
    phi1: YoungFunction,
    phi2: YoungFunction,
    grid: Grid = DEFAULT_GRID,
    max_log2_a: int = 20,
) -> GrowthCertificate:
    """Search for ``a`` and ``x0`` with ``phi2(x) <= phi1(a x)`` for ``x >= x0``.

    Candidates ``a = 1, 2, 4, ...`` are tried in order; the first one whose
    violations stop before the last quarter of the grid wins.  A holding
    certificate reports ``x0 = 0`` when no grid point violates.  Otherwise the
    result is a counterexample; its note says ``trend`` when every tried ``a``
    still fails at the largest grid point.
    """
    lx = grid.log_values()
    xs = grid.values()
    weak = log_evaluate(phi2, lx)
    tail_start = (3 * len(lx)) // 4
    persistent = True
    worst_point = None
    for j in range(max_log2_a + 1):
        a = 2.0**j
        ok = weak <= log_evaluate(phi1, lx + math.log(a)) + _SLACK
        gap = weak - log_evaluate(phi1, lx + math.log(a))
        if ok.all() and not _gap_rising(gap, lx):
            return GrowthCertificate(DOMINATES, HOLDS, a, 0.0, grid, functions=(phi1, phi2))
        if ok.all():
            worst_point = (a, float(xs[-1]))
            continue
        last_bad = int(np.flatnonzero(~ok)[-1])
        worst_point = (a, float(xs[last_bad]))
        if last_bad < tail_start and not _gap_rising(weak - log_evaluate(phi1, lx + math.log(a)), lx):
            return GrowthCertificate(
                DOMINATES, HOLDS, a, float(xs[last_bad + 1]), grid, functions=(phi1, phi2)
            )
        if ok[-1]:
            persistent = False
    note = "trend: violations persist at the largest grid point for every a" if persistent else "no a gives a verified tail"
    return GrowthCertificate(DOMINATES, COUNTEREXAMPLE, None, None, grid, worst_point, functions=(phi1, phi2), note=note)


_GAP_SLOPE = 1e-3


def _gap_rising(gap, lx) -> bool:
    """True when ``gap`` (in log units) still climbs over the last decade of the grid.

    A violation-free grid is not enough: a large ``a`` only pushes the
    crossover past the end of the grid when ``phi2`` grows faster.
    """
    tail = lx >= lx[-1] - math.log(10)
    if tail.sum() < 2 or not np.all(np.isfinite(gap[tail])):
        return bool(np.any(np.isposinf(gap[tail])))
    slope = (gap[tail][-1] - gap[tail][0]) / (lx[tail][-1] - lx[tail][0])
    return bool(slope > _GAP_SLOPE)


def _triple_roles(fs, direction):
    phi1, phi2, phi3 = fs
    if direction == PHI2_LEFT:
        return phi2, phi1, phi3
    if direction == PHI1_LEFT:
        return phi1, phi2, phi3
    if direction == PHI3_LEFT:
        return phi3, phi1, phi2
    raise ValueError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")


def _pair_ok(left, first, second, x, y):
    with np.errstate(divide="ignore"):
        lx, ly = np.log(x), np.log(y)
    lhs = log_evaluate(left, lx + ly)
    rhs = np.logaddexp(log_evaluate(first, lx), log_evaluate(second, ly))
    zero = (x == 0) | (y == 0)
    return zero | (lhs <= rhs + _SLACK)


def _triple_ok(left, first, second, grid):
    pts = np.concatenate([[0.0], grid.values()])
    X, Y = np.meshgrid(pts, pts, indexing="ij")
    return _pair_ok(left, first, second, X.ravel(), Y.ravel()).reshape(X.shape), X, Y


def check_triple_inequality(
    phi1: YoungFunction,
    phi2: YoungFunction,
    phi3: YoungFunction,
    direction: str = PHI2_LEFT,
    grid: Grid = DEFAULT_GRID,
) -> GrowthCertificate:
    """Verify a two-variable inequality such as ``phi2(xy) <= phi1(x) + phi3(y)``.

    ``direction`` picks the function on the left (see ``DIRECTIONS``).  The
    sample is the product of ``{0} ∪ grid`` with itself.
    """
    left, first, second = _triple_roles((phi1, phi2, phi3), direction)
    ok, X, Y = _triple_ok(left, first, second, grid)
    fs = (phi1, phi2, phi3)
    if ok.all():
        return GrowthCertificate(TRIPLE, HOLDS, None, 0.0, grid, direction=direction, functions=fs)
    i = np.unravel_index(int(np.argmax(~ok)), ok.shape)
    return GrowthCertificate(
        TRIPLE, COUNTEREXAMPLE, None, None, grid, (float(X[i]), float(Y[i])), direction=direction, functions=fs
    )


def is_young(phi: YoungFunction, grid: Grid = DEFAULT_GRID) -> tuple[bool, str]:
    """Sampled check of the Young-function axioms.

    Tests ``phi(0) = 0``, positivity, midpoint convexity on all grid pairs and
    a nondecreasing ``phi(x)/x`` that grows across the grid.
    """
    xs = grid.values()
    if evaluate(phi, 0.0) != 0.0:
        return False, "phi(0) != 0"
    vals = evaluate(phi, xs)
    if np.any(~(vals > 0)):
        return False, f"phi not positive at x={xs[np.argmax(~(vals > 0))]:g}"
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    mid = evaluate(phi, 0.5 * (X + Y))
    avg = 0.5 * (evaluate(phi, X) + evaluate(phi, Y))
    bad = mid > avg * (1 + 1e-9) + 1e-300
    if bad.any():
        i = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return False, f"convexity fails at ({X[i]:g}, {Y[i]:g})"
    with np.errstate(over="ignore", invalid="ignore"):
        slope = vals / xs
    finite = np.isfinite(slope)
    if np.any(np.diff(slope[finite]) < -1e-9 * np.abs(slope[finite][1:])):
        return False, "phi(x)/x decreases on the grid"
    if finite.sum() >= 2 and not slope[finite][-1] > slope[finite][0] * 2:
        return False, "phi(x)/x does not grow across the grid"
    return True, "ok"
