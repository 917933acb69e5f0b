"""Measure spaces made of atoms plus at most one non-atomic interval.

Infinite atom families are handled by truncation: a generated family keeps
its first ``N`` atoms and is flagged ``truncated``.  Sums and suprema over a
truncated family are judged by their trend over the last decade of atoms,
never by the truncated value alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import OrliczError, QuadratureError

STABLE = "stable"
DIVERGED = "diverged"
GROWING = "growing"

PARTITION_CAP = 12


@dataclass(frozen=True)
class Budget:
    """Truncation, divergence and detection thresholds shared by all criteria."""

    n: int = 10**5
    threshold: float = 1e12
    tol: float = 1e-9
    delta: float = 1e-9
    min_length: float = 1e-6
    support_eps: float = 1e-12
    sup_grid: int = 4096
    stable_rtol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.n <= 0 or self.threshold <= 0 or self.tol <= 0:
            raise ValueError("budget values must be positive")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Continuum:
    """The non-atomic part: an interval ``[a, b]`` with an optional density."""

    a: float
    b: float
    density: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"continuum interval [{self.a}, {self.b}] is empty")

    @property
    def length(self) -> float:
        return self.b - self.a

    def weight(self, x):
        if self.density is None:
            return np.ones_like(x)
        return _call_vectorised(self.density, x)

    def grid(self, points: int) -> np.ndarray:
        # open grid: the endpoints may be singular
        return self.a + (np.arange(points) + 0.5) * (self.length / points)


def _call_vectorised(fn, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        try:
            out = np.asarray(fn(x), dtype=float)
        except (TypeError, ValueError):
            out = np.array([float(fn(v)) for v in x.ravel()]).reshape(x.shape)
    if out.shape != x.shape:
        out = np.broadcast_to(out, x.shape).copy()
    return out


class MeasureSpace:
    """Atoms ``(id, mass)`` in a fixed order plus an optional continuum.

    ``points`` gives each atom a location on the real line (``nan`` when the
    atom has none) so that formulas in ``x`` can be evaluated on atoms.
    """

    def __init__(self, ids, masses, continuum=None, points=None, truncated=False, note=""):
        ids = tuple(ids)
        masses = np.asarray(masses)
        if masses.dtype != object:
            masses = masses.astype(float)
        if len(ids) != len(masses):
            raise ValueError("ids and masses differ in length")
        if len(set(ids)) != len(ids):
            raise ValueError("atom ids must be unique")
        for m in masses:
            if not (m > 0 and m < math.inf):
                raise ValueError(f"atom masses must be positive and finite, got {m}")
        self.ids = ids
        self.masses = masses
        self.continuum = continuum
        self.points = np.full(len(ids), np.nan) if points is None else np.asarray(points, dtype=float)
        self.truncated = truncated
        self.note = note
        self._index = {a: i for i, a in enumerate(ids)}

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple], continuum=None, points=None):
        atoms = list(atoms)
        return cls([a for a, _ in atoms], [m for _, m in atoms], continuum, points)

    @classmethod
    def generated(cls, mass: Callable, n: int, start: int = 1, point: Callable | None = None, continuum=None):
        """First ``n`` atoms of the family ``k -> mass(k)``, ``k >= start``.

        Indices whose mass leaves the normal floating-point range (subnormal,
        zero or overflowing) end the family early; subnormal masses carry
        too few significant bits for ratios such as ``phi^{-1}(1/mu)``.
        The space records the effective length in ``note``.
        """
        ks = np.arange(start, start + n, dtype=float)
        with np.errstate(all="ignore"):
            ms = _call_vectorised(mass, ks)
        bad = ~((ms >= np.finfo(float).tiny) & np.isfinite(ms))
        note = ""
        if bad.any():
            cut = int(np.argmax(bad))
            if cut == 0:
                raise ValueError("generated family has no atom with a positive finite mass")
            note = f"family cut at index {int(ks[cut])}: mass outside the normal float range"
            ks, ms = ks[:cut], ms[:cut]
        pts = None if point is None else _call_vectorised(point, ks)
        return cls([int(k) for k in ks], ms, continuum, pts, truncated=True, note=note)

    def __len__(self):
        return len(self.ids)

    def index(self, atom_id) -> int:
        try:
            return self._index[atom_id]
        except KeyError:
            raise KeyError(f"unknown atom id {atom_id!r}") from None

    @property
    def purely_atomic(self) -> bool:
        return self.continuum is None

    def total_atom_mass(self):
        return self.masses.sum() if len(self) else 0.0

    def __repr__(self):
        cont = f", continuum=[{self.continuum.a}, {self.continuum.b}]" if self.continuum else ""
        trunc = ", truncated" if self.truncated else ""
        return f"MeasureSpace({len(self)} atoms{cont}{trunc})"


class MeasurableFunction:
    """Constant value per atom plus an optional evaluator on the continuum.

    A missing continuum evaluator means the function vanishes there.
    """

    def __init__(self, space: MeasureSpace, atom_values, continuum: Callable | None = None):
        vals = np.asarray(atom_values)
        if vals.dtype != object:
            vals = vals.astype(float)
        if vals.shape != (len(space),):
            raise ValueError(f"expected {len(space)} atom values, got shape {vals.shape}")
        self.space = space
        self.atom_values = vals
        self.continuum = continuum

    @classmethod
    def from_map(cls, space, values: dict, continuum=None, default=None):
        out = []
        for a in space.ids:
            if a in values:
                out.append(values[a])
            elif default is not None:
                out.append(default)
            else:
                raise ValueError(f"no value for atom {a!r}")
        unknown = set(values) - set(space.ids)
        if unknown:
            raise ValueError(f"values given for unknown atoms {sorted(map(str, unknown))}")
        return cls(space, out, continuum)

    @classmethod
    def from_formula(cls, space, fn: Callable, continuum: Callable | None = None, on="point"):
        """Evaluate ``fn`` on atom locations (``on='point'``) or atom ids (``on='id'``)."""
        arg = space.points if on == "point" else np.asarray(space.ids, dtype=float)
        return cls(space, _call_vectorised(fn, arg), continuum)

    @classmethod
    def constant(cls, space, c: float):
        cont = (lambda x: np.full_like(np.asarray(x, dtype=float), c)) if space.continuum else None
        return cls(space, np.full(len(space), float(c)), cont)

    @classmethod
    def indicator(cls, space, ids: Iterable):
        vals = np.zeros(len(space))
        for a in ids:
            vals[space.index(a)] = 1.0
        return cls(space, vals)

    def at(self, x):
        """Continuum values at ``x`` (zero when no evaluator is set)."""
        x = np.asarray(x, dtype=float)
        if self.continuum is None:
            return np.zeros_like(x)
        return _call_vectorised(self.continuum, x)

    def map(self, fn: Callable) -> "MeasurableFunction":
        """Apply a vectorised scalar map to every value."""
        cont = None
        if self.continuum is not None:
            inner = self.continuum
            cont = lambda x: fn(_call_vectorised(inner, x))  # noqa: E731
        vals = self.atom_values
        new_vals = fn(vals) if vals.dtype != object else np.array([fn(v) for v in vals], dtype=object)
        return MeasurableFunction(self.space, new_vals, cont)

    def scale(self, c) -> "MeasurableFunction":
        return self.map(lambda v: v * c)

    def abs(self) -> "MeasurableFunction":
        return self.map(np.abs)

    def __mul__(self, other: "MeasurableFunction") -> "MeasurableFunction":
        if other.space is not self.space:
            raise OrliczError("functions live on different measure spaces")
        cont = None
        if self.continuum is not None and other.continuum is not None:
            a, b = self.continuum, other.continuum
            cont = lambda x: _call_vectorised(a, x) * _call_vectorised(b, x)  # noqa: E731
        return MeasurableFunction(self.space, self.atom_values * other.atom_values, cont)

    def atom_sup(self) -> float:
        return float(np.max(np.abs(self.atom_values.astype(float)))) if len(self.space) else 0.0

    def continuum_sup(self, points: int = 4096) -> float:
        c = self.space.continuum
        if c is None or self.continuum is None:
            return 0.0
        vals = np.abs(self.at(c.grid(points)))
        return float(np.max(np.where(np.isnan(vals), np.inf, vals)))

    def __repr__(self):
        return f"MeasurableFunction(on {self.space!r})"


class Transformation:
    """Atom-to-atom map plus an optional user-supplied weight ``f0`` on the continuum.

    ``images[i]`` is the index of the image of atom ``i``; ``-1`` marks an
    image that lies beyond a truncated family.
    """

    def __init__(self, space: MeasureSpace, images, continuum_weight: Callable | None = None):
        images = np.asarray(images, dtype=int)
        if images.shape != (len(space),):
            raise ValueError("atom map must be total on the atom list")
        if np.any(images >= len(space)) or np.any(images < -1):
            raise ValueError("atom map images must be existing atoms")
        if np.any(images == -1) and not space.truncated:
            raise ValueError("atom map images must be existing atoms")
        if continuum_weight is not None and space.continuum is not None:
            probe = _call_vectorised(continuum_weight, space.continuum.grid(256))
            if np.any(probe < 0):
                raise ValueError("continuum weight must be nonnegative")
        self.space = space
        self.images = images
        self.continuum_weight = continuum_weight

    @classmethod
    def from_map(cls, space, mapping: dict, continuum_weight=None):
        missing = [a for a in space.ids if a not in mapping]
        if missing:
            raise ValueError(f"atom map is not total; missing {missing[:5]}")
        images = []
        for a in space.ids:
            b = mapping[a]
            if b not in space._index:
                raise ValueError(f"atom {a!r} maps to unknown atom {b!r}")
            images.append(space.index(b))
        return cls(space, images, continuum_weight)

    @classmethod
    def from_formula(cls, space, fn: Callable, continuum_weight=None):
        """Image id given by ``fn(id)`` for integer-labelled (generated) atoms."""
        ids = np.asarray(space.ids, dtype=float)
        targets = np.rint(_call_vectorised(fn, ids)).astype(np.int64)
        lookup = space._index
        images = np.array([lookup.get(int(t), -1) for t in targets], dtype=int)
        return cls(space, images, continuum_weight)

    @classmethod
    def identity(cls, space, continuum_weight=None):
        return cls(space, np.arange(len(space)), continuum_weight)

    def is_surjective_on_atoms(self) -> bool:
        hit = np.zeros(len(self.space), dtype=bool)
        hit[self.images[self.images >= 0]] = True
        return bool(hit.all())

    def preimage(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.images == j)


# -- trends over truncated families ----------------------------------------


@dataclass(frozen=True)
class Trend:
    """Partial sums or partial maxima sampled at decade checkpoints."""

    status: str
    value: float
    checkpoints: tuple = ()
    partials: tuple = ()
    note: str = ""

    @property
    def finite(self) -> bool:
        return self.status != DIVERGED and math.isfinite(self.value)

    def as_dict(self):
        return {
            "status": self.status,
            "value": _jsonable(self.value),
            "checkpoints": list(self.checkpoints),
            "partials": [_jsonable(v) for v in self.partials],
            "note": self.note,
        }


def _jsonable(v):
    v = float(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def _checkpoints(n: int) -> list[int]:
    cps, k = [], n
    while k >= 1:
        cps.append(k)
        k //= 10
    return sorted(set(cps))


def series_trend(terms, truncated: bool, threshold: float, decay_floor: float = 1e-3) -> Trend:
    """Judge ``sum(terms)``.

    Finite families are summed exactly.  For a truncated family the last two
    decade increments are compared: a ratio of at least ``1 - decay_floor``
    means the increments are not decaying and the series is reported as
    diverging; otherwise the geometric tail implied by the ratio is added to
    the estimate.
    """
    terms = np.asarray(terms)
    if terms.dtype == object:
        total = sum(terms, Fraction(0)) if len(terms) else 0
        return Trend(STABLE if total <= threshold else DIVERGED, total)
    n = len(terms)
    if n == 0:
        return Trend(STABLE, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        partial = np.cumsum(np.where(np.isnan(terms), np.inf, terms))
    cps = _checkpoints(n)
    sums = tuple(float(partial[k - 1]) for k in cps)
    total = float(partial[-1])
    if not math.isfinite(total) or total > threshold:
        return Trend(DIVERGED, math.inf, tuple(cps), sums, "partial sum beyond threshold")
    if not truncated or len(cps) < 3:
        return Trend(STABLE, total, tuple(cps), sums)
    d_last = abs(sums[-1] - sums[-2])
    d_prev = abs(sums[-2] - sums[-3])
    if d_last == 0:
        return Trend(STABLE, total, tuple(cps), sums)
    if d_prev == 0:
        return Trend(STABLE, total, tuple(cps), sums, "increments appear only in the last decade")
    ratio = d_last / d_prev
    if ratio >= 1 - decay_floor:
        return Trend(DIVERGED, math.inf, tuple(cps), sums, f"decade increments not decaying (ratio {ratio:.4g})")
    tail = d_last * ratio / (1 - ratio)
    # a power-law fit to the last terms; far smaller for faster-than-power decay
    a_last, a_prev = abs(float(terms[-1])), abs(float(terms[n // 10 - 1]))
    if a_last > 0 and a_prev > 0:
        slope = math.log(a_prev / a_last) / math.log(n / (n // 10))
        if slope > 1:
            tail = min(tail, n * a_last / (slope - 1))
    elif a_last == 0:
        tail = 0.0
    estimate = total + tail
    if estimate > threshold:
        return Trend(DIVERGED, math.inf, tuple(cps), sums, "extrapolated sum beyond threshold")
    return Trend(STABLE, estimate, tuple(cps), sums, f"tail extrapolated with decade ratio {ratio:.4g}")


def sup_trend(values, truncated: bool, threshold: float, rtol: float = 1e-9) -> Trend:
    """Judge ``sup(values)``: stable, diverged (beyond threshold and still rising) or growing."""
    values = np.abs(np.asarray(values, dtype=float))
    n = len(values)
    if n == 0:
        return Trend(STABLE, 0.0)
    running = np.maximum.accumulate(np.where(np.isnan(values), np.inf, values))
    cps = _checkpoints(n)
    maxima = tuple(float(running[k - 1]) for k in cps)
    top = maxima[-1]
    if not truncated:
        status = STABLE if math.isfinite(top) else DIVERGED
        return Trend(status, top, tuple(cps), maxima)
    prev = maxima[-2] if len(maxima) > 1 else 0.0
    rising = top > prev * (1 + rtol)
    if not rising:
        return Trend(STABLE, top, tuple(cps), maxima)
    if top > threshold:
        return Trend(DIVERGED, math.inf, tuple(cps), maxima, "partial maxima beyond threshold and rising")
    return Trend(GROWING, top, tuple(cps), maxima, "partial maxima still rising below threshold")


# -- quadrature -------------------------------------------------------------

_GL16 = np.polynomial.legendre.leggauss(16)
_GL32 = np.polynomial.legendre.leggauss(32)
_MAX_DEPTH = 60
_QUAD_RTOL = 1e-11


def _gl(fn, lo, hi, rule):
    nodes, weights = rule
    half = 0.5 * (hi - lo)
    x = lo + half * (nodes + 1)
    vals = fn(x)
    if not np.all(np.isfinite(vals)):
        return math.inf
    return float(half * np.dot(weights, vals))


def _adaptive(fn, lo, hi, scale=0.0):
    """Adaptive Gauss-Legendre (16 vs 32 nodes) with bisection."""
    total = 0.0
    stack = [(lo, hi, 0)]
    ref = abs(scale)
    while stack:
        a, b, depth = stack.pop()
        coarse = _gl(fn, a, b, _GL16)
        fine = _gl(fn, a, b, _GL32)
        if not math.isfinite(fine) or not math.isfinite(coarse):
            return math.inf
        ref = max(ref, abs(total + fine))
        if abs(fine - coarse) <= _QUAD_RTOL * ref or abs(fine - coarse) < 1e-300:
            total += fine
            continue
        if depth >= _MAX_DEPTH:
            raise QuadratureError(f"quadrature did not converge on [{a:g}, {b:g}]", coarse, fine)
        m = 0.5 * (a + b)
        stack.append((a, m, depth + 1))
        stack.append((m, b, depth + 1))
    return total


def integrate_interval(fn: Callable, a: float, b: float, threshold: float = 1e12) -> tuple[float, dict]:
    """Integrate ``fn`` over ``[a, b]``, refining geometrically toward both endpoints.

    The core ``[a + h, b - h]`` (``h`` a quarter of the length) is integrated
    adaptively; the rest is split into shells shrinking tenfold toward each
    endpoint.  Shells stop once three in a row are negligible.  If shells run
    out (floating-point resolution or a 300-decade cap) without settling, a
    non-decaying shell sequence means divergence and a decaying one is closed
    by its geometric tail.  Returns ``(value, trace)``.
    """
    h = 0.25 * (b - a)
    core = _adaptive(fn, a + h, b - h)
    trace = {"core": _jsonable(core), "endpoints": []}
    if not math.isfinite(core):
        return math.inf, trace
    total = core
    for end, sign in ((a, 1.0), (b, -1.0)):
        shells = []
        width = h
        quiet = 0
        status = "converged"
        for _ in range(300):
            inner = width / 10
            if inner <= 8 * np.spacing(abs(end)) or inner < 1e-300:
                status = "resolution"
                break
            lo, hi = sorted((end + sign * inner, end + sign * width))
            c = _adaptive(fn, lo, hi, total)
            if not math.isfinite(c):
                trace["endpoints"].append({"end": end, "shells": len(shells) + 1, "status": "infinite"})
                return math.inf, trace
            shells.append(c)
            total += c
            width = inner
            if abs(total) > threshold:
                trace["endpoints"].append({"end": end, "shells": len(shells), "status": "threshold"})
                return math.inf, trace
            shrinking = len(shells) < 2 or abs(c) <= abs(shells[-2])
            quiet = quiet + 1 if (abs(c) <= 1e-12 * abs(total) and shrinking) else 0
            if quiet >= 3:
                break
            if len(shells) >= 12 and _not_decaying(shells[-8:]):
                status = "not-decaying"
                break
        else:
            status = "decade-cap"
        entry = {"end": end, "shells": len(shells), "status": status}
        if status != "converged":
            tail = _shell_tail(shells)
            if tail is None:
                entry["status"] = "diverged"
                trace["endpoints"].append(entry)
                return math.inf, trace
            total += tail
            entry["tail"] = tail
        trace["endpoints"].append(entry)
    if abs(total) > threshold:
        return math.inf, trace
    return total, trace


_POWER_FLOOR = 1.05


def _shell_tail(shells):
    """Tail beyond the last shell, or ``None`` when the shells signal divergence.

    Shell contributions are fitted over their second half both as a
    geometric sequence (``log c`` linear in the shell index ``k``) and as a
    power law (``log c`` linear in ``log k``).  The better fit decides:
    a power law decaying no faster than ``k^-1.05`` is treated as divergent,
    which catches logarithmic blow-ups that never reach the threshold.
    """
    if _not_decaying(shells[-5:]):
        return None
    mags = np.abs(np.asarray(shells, dtype=float))
    k = np.arange(1, len(mags) + 1, dtype=float)
    half = slice(len(mags) // 2, None)
    keep = mags[half] > 0
    if len(mags) >= 20 and keep.sum() >= 5:
        y = np.log(mags[half][keep])
        fits = {}
        for name, x in (("geometric", k[half][keep]), ("power", np.log(k[half][keep]))):
            coef, res, *_ = np.polyfit(x, y, 1, full=True)
            fits[name] = (coef[0], float(res[0]) if len(res) else 0.0)
        if fits["power"][1] < fits["geometric"][1]:
            s = -fits["power"][0]
            if s <= _POWER_FLOOR:
                return None
            return float(shells[-1]) * len(mags) / float(s - 1)
    if len(shells) >= 2 and shells[-2] != 0:
        r = abs(shells[-1] / shells[-2])
        if r < 1:
            return float(shells[-1]) * r / (1 - r)
    return 0.0


def _not_decaying(shells, floor: float = 1e-3) -> bool:
    if len(shells) < 2:
        return False
    mags = np.abs(np.asarray(shells))
    if np.any(mags[:-1] == 0):
        return False
    return bool(np.all(mags[1:] / mags[:-1] >= 1 - floor))


# -- operations -------------------------------------------------------------


def atom_terms(space: MeasureSpace, g: MeasurableFunction):
    vals = g.atom_values
    if vals.dtype == object or space.masses.dtype == object:
        return np.array([v * m for v, m in zip(vals, space.masses)], dtype=object)
    with np.errstate(invalid="ignore", over="ignore"):
        terms = vals * space.masses
    return np.where(vals == 0, 0.0, terms)


def integrate_with_trace(space: MeasureSpace, g: MeasurableFunction, budget: Budget = DEFAULT_BUDGET):
    """``integrate`` plus the atom trend and quadrature trace."""
    if g.space is not space:
        raise OrliczError("function lives on a different measure space")
    trend = series_trend(atom_terms(space, g), space.truncated, budget.threshold)
    trace = {"atoms": trend.as_dict()}
    if trend.status == DIVERGED:
        return math.inf, trace
    total = trend.value
    c = space.continuum
    if c is not None and g.continuum is not None:
        integrand = lambda x: g.at(x) * c.weight(x)  # noqa: E731
        value, qtrace = integrate_interval(integrand, c.a, c.b, budget.threshold)
        trace["continuum"] = qtrace
        total = total + value
    if total > budget.threshold:
        return math.inf, trace
    return total, trace


def integrate(space: MeasureSpace, g: MeasurableFunction, budget: Budget = DEFAULT_BUDGET):
    """Sum over atoms plus quadrature over the continuum; ``inf`` when divergent."""
    return integrate_with_trace(space, g, budget)[0]


def radon_nikodym(space: MeasureSpace, t: Transformation) -> MeasurableFunction:
    """``f0 = d(mu∘T^{-1})/d(mu)``: pulled-back mass over own mass on each atom."""
    if t.space is not space:
        raise OrliczError("transformation lives on a different measure space")
    if space.masses.dtype == object:
        pushed = [0] * len(space)
        for i, j in enumerate(t.images):
            if j >= 0:
                pushed[j] += space.masses[i]
        vals = np.array([pm / m for pm, m in zip(pushed, space.masses)], dtype=object)
    else:
        keep = t.images >= 0
        pushed = np.bincount(t.images[keep], weights=space.masses[keep], minlength=len(space))
        vals = pushed / space.masses
    return MeasurableFunction(space, vals, t.continuum_weight)


def pushforward_mass(space: MeasureSpace, t: Transformation):
    """``mu(T^{-1}(A_n))`` for every atom."""
    f0 = radon_nikodym(space, t)
    return f0.atom_values * space.masses


def q_t(space: MeasureSpace, f0: MeasurableFunction, atoms: Iterable = (), continuum: bool = False,
        budget: Budget = DEFAULT_BUDGET) -> float:
    """Essential supremum of ``f0`` over a region (atoms plus optionally the continuum)."""
    atoms = list(atoms)
    if not atoms and not continuum:
        raise ValueError("region must be nonempty")
    best = 0
    for a in atoms:
        best = max(best, f0.atom_values[space.index(a)])
    if continuum:
        if space.continuum is None:
            raise ValueError("space has no continuum part")
        best = max(best, f0.continuum_sup(budget.sup_grid))
    return best


def nonzero_interval(fn: MeasurableFunction, budget: Budget = DEFAULT_BUDGET):
    """Longest grid run on the continuum where ``|fn| > delta``.

    Returns ``(start, end)`` when the run is at least ``min_length`` times the
    interval length, else ``None`` (the function is treated as a.e. zero).
    """
    c = fn.space.continuum
    if c is None or fn.continuum is None:
        return None
    xs = c.grid(budget.sup_grid)
    vals = np.abs(fn.at(xs))
    hot = np.where(np.isnan(vals), True, vals > budget.delta)
    if not hot.any():
        return None
    step = c.length / budget.sup_grid
    best_len, best = 0, None
    run_start = None
    for i, flag in enumerate(np.append(hot, False)):
        if flag and run_start is None:
            run_start = i
        elif not flag and run_start is not None:
            if i - run_start > best_len:
                best_len, best = i - run_start, (run_start, i)
            run_start = None
    if best_len * step < budget.min_length * c.length:
        return None
    lo, hi = best
    return (float(c.a + lo * step), float(c.a + hi * step))


# -- partitions -------------------------------------------------------------


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of ``range(n)`` via restricted growth strings."""
    if n == 0:
        yield []
        return
    codes = [0] * n
    maxes = [0] * n

    def blocks():
        out = [[] for _ in range(max(codes) + 1)]
        for i, c in enumerate(codes):
            out[c].append(i)
        return out

    while True:
        yield blocks()
        i = n - 1
        while i > 0 and codes[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        codes[i] += 1
        for j in range(i + 1, n):
            codes[j] = 0
        for j in range(i, n):
            maxes[j] = max(maxes[j - 1], codes[j])


def _scalar_apply(fn, v):
    out = fn(v)
    if isinstance(out, np.ndarray):
        return out.item()
    return out


def partition_sum(space: MeasureSpace, f0: MeasurableFunction, composite: Callable, blocks: Sequence[Sequence[int]]):
    """``sum_j composite(Q_T(F_j)) mu(F_j)`` for atom blocks ``F_j`` (given as indices)."""
    total = 0
    for block in blocks:
        q = max(f0.atom_values[i] for i in block)
        mass = sum(space.masses[i] for i in block)
        total = total + _scalar_apply(composite, q) * mass
    return total


def partition_infimum(space: MeasureSpace, f0: MeasurableFunction, composite: Callable, strategy: str = "exhaustive"):
    """Infimum over atom partitions of ``sum composite(Q_T(F_j)) mu(F_j)``.

    ``exhaustive`` enumerates every set partition (at most ``PARTITION_CAP``
    atoms, purely atomic spaces); ``refinement`` evaluates the singleton
    partition only.  Returns ``(value, minimising partition)``.
    """
    n = len(space)
    if strategy == "refinement":
        blocks = [[i] for i in range(n)]
        return partition_sum(space, f0, composite, blocks), blocks
    if strategy != "exhaustive":
        raise ValueError(f"unknown strategy {strategy!r}")
    if space.continuum is not None:
        raise ValueError("exhaustive partitions need a purely atomic space")
    if n > PARTITION_CAP:
        raise ValueError(f"exhaustive partition search is capped at {PARTITION_CAP} atoms, got {n}")
    cache = {}
    best, best_blocks = None, None
    for blocks in set_partitions(n):
        total = 0
        for block in blocks:
            key = tuple(block)
            if key not in cache:
                cache[key] = partition_sum(space, f0, composite, [block])
            total = total + cache[key]
        if best is None or total < best:
            best, best_blocks = total, blocks
    return best, best_blocks


def membership_via_partition(space: MeasureSpace, f0: MeasurableFunction, composite: Callable,
                             budget: Budget = DEFAULT_BUDGET):
    """Whether ``composite∘f0`` has a finite integral, witnessed by the singleton partition.

    Returns ``(member, blocks, trace)``.
    """
    g = f0.map(composite)
    value, trace = integrate_with_trace(space, g, budget)
    blocks = [[i] for i in range(len(space))]
    return bool(value < math.inf), blocks, {"value": _jsonable(value) if not isinstance(value, Fraction) else str(value), **trace}
