"""Multiplication and composition operators between two Orlicz spaces.

Each criterion returns a :class:`Verdict`.  Sufficient conditions can only
certify, necessary conditions can only refute, and a criterion that does not
speak is reported as inconclusive rather than read as either outcome.  The
``assess_*`` functions run every applicable criterion and merge the results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from . import young
from .errors import ConjugationError, OrliczError, PreconditionError, QuadratureError
from .measure import (
    DEFAULT_BUDGET,
    DIVERGED,
    GROWING,
    STABLE,
    Budget,
    MeasurableFunction,
    MeasureSpace,
    Transformation,
    _checkpoints,
    integrate_interval,
    integrate_with_trace,
    nonzero_interval,
    radon_nikodym,
    series_trend,
    sup_trend,
)
from .orlicz import luxemburg_norm, luxemburg_norm_batch, member

CERTIFIED = "Certified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"

# criteria-log outcomes
PASS = "pass"
FAIL = "fail"
SILENT = "silent"
REFUSED = "refused"
LOGGED = "logged"


def _num(v):
    if v is None:
        return None
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    try:
        v = float(v)
    except (TypeError, ValueError):
        return str(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (str, type(None))):
        return obj
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return int(obj)
    return _num(obj)


@dataclass
class Verdict:
    """Three-state outcome with its evidence.

    ``criteria_log`` holds ``(criterion, outcome, value)`` triples in the
    order the criteria ran.
    """

    status: str
    bound: float | None = None
    witness: Any = None
    reason: str = ""
    criteria_log: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status not in (CERTIFIED, REFUTED, INCONCLUSIVE):
            raise ValueError(f"unknown verdict status {self.status!r}")
        if self.status == CERTIFIED and self.bound is None:
            raise ValueError("a certified verdict needs a bound")
        if self.status == REFUTED and self.witness is None:
            raise ValueError("a refuted verdict needs a witness")

    def log(self, name, outcome, value=None):
        self.criteria_log.append((name, outcome, value))

    def as_dict(self):
        return {
            "status": self.status,
            "bound": _num(self.bound),
            "witness": _plain(self.witness),
            "reason": self.reason,
            "criteria_log": [[n, o, _plain(v)] for n, o, v in self.criteria_log],
            "notes": list(self.notes),
        }


# -- cached certificates ----------------------------------------------------

_CERT_CACHE: dict = {}


def _key(phi):
    if phi.kind in young.CATALOG:
        return (phi.kind, phi.params)
    return ("id", id(phi))


def _cached(tag, fs, grid, compute):
    key = (tag, tuple(_key(f) for f in fs), grid)
    hit = _CERT_CACHE.get(key)
    if hit is None:
        hit = (fs, compute())  # keep the functions alive so ids stay unique
        _CERT_CACHE[key] = hit
    return hit[1]


def growth(phi, condition, grid=young.DEFAULT_GRID):
    return _cached(condition, (phi,), grid, lambda: young.check_growth(phi, condition, grid))


def domination(phi1, phi2, grid=young.DEFAULT_GRID):
    """Certificate for ``phi2 ≺ phi1``."""
    return _cached("dom", (phi1, phi2), grid, lambda: young.dominates(phi1, phi2, grid))


def triple(phi1, phi2, phi3, direction, grid=young.DEFAULT_GRID):
    return _cached(
        "tri:" + direction, (phi1, phi2, phi3), grid,
        lambda: young.check_triple_inequality(phi1, phi2, phi3, direction, grid),
    )


def _young_ok(phi, grid=young.DEFAULT_GRID):
    return _cached("young", (phi,), grid, lambda: young.is_young(phi, grid))


def _require(ok: bool, name: str, message: str, assume: Iterable, notes: list, detail=None):
    """Raise a refusal unless ``name`` was explicitly assumed."""
    if ok:
        return
    if name in set(assume):
        notes.append(f"assumed without certificate: {message}")
        return
    raise PreconditionError(message, detail)


# -- applying the operators -------------------------------------------------


def apply_mult(u: MeasurableFunction, f: MeasurableFunction) -> MeasurableFunction:
    """``u · f`` on atoms and on the continuum."""
    if u.space is not f.space:
        raise OrliczError("u and f live on different measure spaces")
    return u * f


def apply_comp(t: Transformation, f: MeasurableFunction) -> MeasurableFunction:
    """``f ∘ T`` for an atoms-only transformation.

    Composition on the continuum is refused: the only continuum data a
    transformation carries is its Radon-Nikodym weight.
    """
    if t.space is not f.space:
        raise OrliczError("T and f live on different measure spaces")
    if t.continuum_weight is not None or (t.space.continuum is not None and f.continuum is not None):
        raise OrliczError("composition on the continuum is not supported; only atoms-only maps compose")
    if np.any(t.images < 0):
        raise OrliczError("some atoms map beyond the truncated family")
    return MeasurableFunction(f.space, f.atom_values[t.images])


# -- multiplication operators -----------------------------------------------


def _abs_atoms(fn: MeasurableFunction):
    return np.abs(fn.atom_values.astype(float))


def mult_bounded_sufficient(u, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                            grid: young.Grid = young.DEFAULT_GRID, assume=()) -> Verdict:
    """Bound ``‖M_u‖ <= 2 ‖u‖_{phi3}`` under ``phi2(xy) <= phi1(x) + phi3(y)``."""
    notes = []
    cert = triple(phi1, phi2, phi3, young.PHI2_LEFT, grid)
    _require(cert.holds, "triple", f"phi2(xy) <= phi1(x) + phi3(y) fails at {cert.point}", assume, notes, cert.point)
    norm = luxemburg_norm(u.space, u, phi3, budget.tol, budget)
    if norm.diverged:
        v = Verdict(INCONCLUSIVE, reason="u has no finite phi3 norm; the sufficient bound is silent", notes=notes)
        v.log("mult_sufficient", SILENT, norm.value)
        return v
    v = Verdict(CERTIFIED, bound=2 * norm.value, reason="2 ||u||_phi3", notes=notes)
    v.log("mult_sufficient", PASS, norm.value)
    return v


def _continuum_escape_ok(phi1, phi2, grid):
    """Hypotheses under which a function in L^phi1 escapes L^phi2 on any interval."""
    dom = domination(phi1, phi2, grid)
    d2 = growth(phi2, young.DELTA2, grid)
    return (not dom.holds) and d2.holds, dom, d2


def mult_necessary_atomic(u, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                          direction: str = young.PHI1_LEFT, grid: young.Grid = young.DEFAULT_GRID,
                          assume=()) -> Verdict:
    """Necessary conditions: ``u = 0`` a.e. on the continuum and a finite atom sup.

    ``direction`` selects which triple inequality is assumed
    (``phi1_left``: ``phi1(xy) <= phi2(x) + phi3(y)``; ``phi2_left``: the
    reverse roles).  The atom supremum
    ``sup |u(A_n)| phi3^{-1}(1/mu(A_n))`` refutes only under ``phi1_left``,
    where the single-atom test functions force it.  The continuum clause
    refutes whenever ``phi2`` is not dominated by ``phi1`` and ``phi2`` has
    a Δ2 certificate, whatever the direction.
    """
    notes = [f"hypothesis direction: {direction}"]
    cert = triple(phi1, phi2, phi3, direction, grid)
    _require(cert.holds, "triple", f"{direction} triple inequality fails at {cert.point}", assume, notes, cert.point)
    space = u.space
    log = []

    interval = nonzero_interval(u, budget)
    if interval is not None:
        ok, dom, d2 = _continuum_escape_ok(phi1, phi2, grid)
        if ok:
            v = Verdict(REFUTED, witness={"nonzero_interval": interval}, reason="u is not a.e. zero on the continuum", notes=notes)
            v.log("mult_necessary_continuum", FAIL, interval)
            return v
        why = "phi2 is dominated by phi1" if dom.holds else "phi2 lacks a Δ2 certificate"
        log.append(("mult_necessary_continuum", SILENT, f"u nonzero on {interval} but {why}"))
    else:
        log.append(("mult_necessary_continuum", PASS, 0.0))

    terms = _abs_atoms(u) * young.inverse(phi3, 1.0 / space.masses.astype(float))
    terms = np.where(_abs_atoms(u) == 0, 0.0, terms)
    trend = sup_trend(terms, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status == DIVERGED:
        if direction == young.PHI1_LEFT:
            v = Verdict(REFUTED, witness={"atom_sup": trend.as_dict()}, reason="atom supremum diverges", notes=notes)
            for entry in log:
                v.log(*entry)
            v.log("mult_necessary_atoms", FAIL, trend.as_dict())
            return v
        notes.append("atom supremum diverges, but only the phi1_left reading makes it necessary")
        log.append(("mult_necessary_atoms", SILENT, trend.as_dict()))
    else:
        log.append(("mult_necessary_atoms", PASS if trend.status == STABLE else SILENT, trend.as_dict()))
    v = Verdict(INCONCLUSIVE, reason="necessary conditions pass", notes=notes)
    for entry in log:
        v.log(*entry)
    return v


def _delta_prime_pair(phi1, phi2, grid, assume, notes):
    c1 = growth(phi1, young.DELTA_PRIME, grid)
    c2 = growth(phi2, young.DELTA_PRIME, grid)
    _require(c1.holds, "delta_prime_phi1", f"no Δ' certificate for phi1 ({phi1})", assume, notes)
    _require(c2.holds, "delta_prime_phi2", f"no Δ' certificate for phi2 ({phi2})", assume, notes)
    comp = young.compose(phi2, young.inverse_function(phi1), name=f"{phi2}∘{phi1}^-1")
    ok, why = _cached("composite_young", (phi1, phi2), grid, lambda: young.is_young(comp, grid))
    _require(ok, "composite_young", f"phi2∘phi1^-1 is not a Young function on the grid: {why}", assume, notes)
    c = c1.constant if c1.holds else 1.0
    b = c2.constant if c2.holds else 1.0
    return b, c, comp


def mult_bounded_sufficient_atomic(u, phi1, phi2, budget: Budget = DEFAULT_BUDGET,
                                   grid: young.Grid = young.DEFAULT_GRID, assume=()) -> Verdict:
    """Certify via ``M = sup phi2(|u(A_n)| / phi1^{-1}(mu(A_n))) mu(A_n)``.

    Bound ``b M (phi2∘phi1^{-1})(c) + 1`` with ``c`` and ``b`` the Δ'
    constants of ``phi1`` and ``phi2``.
    """
    notes = []
    _require(nonzero_interval(u, budget) is None, "u_vanishes_on_continuum",
             "u does not vanish on the continuum", assume, notes)
    b, c, comp = _delta_prime_pair(phi1, phi2, grid, assume, notes)
    space = u.space
    masses = space.masses.astype(float)
    au = _abs_atoms(u)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = young.evaluate(phi2, au / young.inverse(phi1, masses)) * masses
    terms = np.where(au == 0, 0.0, terms)
    trend = sup_trend(terms, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status != STABLE:
        v = Verdict(INCONCLUSIVE, reason=f"atom supremum {trend.status}", notes=notes)
        v.log("mult_sufficient_atomic", SILENT, trend.as_dict())
        return v
    m = trend.value
    bound = b * m * float(young.evaluate(comp, c)) + 1
    v = Verdict(CERTIFIED, bound=bound, reason="b M (phi2∘phi1^-1)(c) + 1", notes=notes)
    v.log("mult_sufficient_atomic", PASS, {"M": m, "b": b, "c": c})
    return v


def mult_dual_membership(u, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                         grid: young.Grid = young.DEFAULT_GRID):
    """Whether ``u`` lies in ``L^{psi3∘psi1}`` (psi the numerical conjugates).

    A consistency check: when the operator is bounded under the triple
    hypotheses this must hold.  Returns ``(member, info)``.
    """
    cert = growth(phi1, young.DELTA_PRIME, grid)
    if not cert.holds:
        raise PreconditionError(f"no Δ' certificate for phi1 ({phi1})")
    psi1, psi3 = young.conjugate_function(phi1), young.conjugate_function(phi3)
    gauge = young.compose(psi3, psi1, name=f"conj({phi3})∘conj({phi1})")
    ok = member(u.space, u, gauge, budget)
    return ok, {"gauge": str(gauge)}


def default_probes(space: MeasureSpace):
    """Test functions for :func:`mult_probe_witness`: the constant 1 and the identity ``x``."""
    probes = {"one": MeasurableFunction.constant(space, 1.0)}
    if len(space) == 0 or not np.any(np.isnan(space.points)):
        ident = (lambda x: np.asarray(x, dtype=float)) if space.continuum is not None else None
        probes["x"] = MeasurableFunction(space, space.points.copy() if len(space) else [], ident)
    return probes


def mult_probe_witness(u, phi1, phi2, probes: dict | None = None, budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """Refute when some probe ``f`` is in ``L^phi1`` while ``u f`` is not in ``L^phi2``."""
    probes = default_probes(u.space) if probes is None else probes
    v = Verdict(INCONCLUSIVE, reason="no probe escapes")
    for name, f in probes.items():
        if not member(u.space, f, phi1, budget):
            v.log(f"probe:{name}", SILENT, "probe not in L^phi1")
            continue
        if member(u.space, apply_mult(u, f), phi2, budget):
            v.log(f"probe:{name}", PASS, "u f in L^phi2")
            continue
        out = Verdict(REFUTED, witness={"probe": name, "f_in_phi1": True, "uf_in_phi2": False},
                      reason=f"probe {name} lies in L^phi1 but u*{name} does not lie in L^phi2")
        out.criteria_log = v.criteria_log
        out.log(f"probe:{name}", FAIL, "u f not in L^phi2")
        return out
    return v


# -- witness constructions --------------------------------------------------


def _log_search(cond, start, steps=75):
    """First ``log y`` on the doubling grid ``start + k log 2`` where ``cond`` holds."""
    ly = start + math.log(2) * np.arange(steps)
    ok = cond(ly)
    if not ok.any():
        return None
    return float(ly[int(np.argmax(ok))])


def _continuum_region(space, region):
    c = space.continuum
    if c is None:
        raise PreconditionError("space has no continuum part")
    lo, hi = (c.a, c.b) if region is None else region
    if not hi > lo:
        raise PreconditionError("region has zero length")
    if lo < c.a or hi > c.b:
        raise PreconditionError("region leaves the continuum interval")
    return lo, hi


def escape_witness(phi1, phi2, space: MeasureSpace, region=None, budget: Budget = DEFAULT_BUDGET,
                   n_terms: int | None = None, grid: young.Grid = young.DEFAULT_GRID):
    """Build ``f`` in ``L^phi1`` with ``f`` outside ``L^phi2`` on ``region``.

    Points ``x_n`` satisfy ``phi2(x_n) > phi1(n x_n)`` (doubling search up to
    ``2^64``).  Nested intervals ``F_n`` have measure ``(n0 + n + 1)^-2``
    and ``E_n`` inside ``F_n \\ F_{n+1}`` has measure
    ``mu(F_n) / phi1(x_n)``; ``f = sum x_n 1_{E_n}``.  The modular sums
    telescope to ``sum mu(F_n)`` for ``phi1`` and exceed
    ``sum n mu(F_n)`` for ``phi2``.  Requires Lebesgue measure on the
    region.  Returns ``(f, trace)``; ``f`` is ``None`` when the search fails.
    """
    lo, hi = _continuum_region(space, region)
    if space.continuum.density is not None:
        raise PreconditionError("witness placement needs Lebesgue measure on the region")
    dom = domination(phi1, phi2, grid)
    if dom.holds:
        raise PreconditionError("phi2 is dominated by phi1; no escaping function exists", dom)
    if not growth(phi2, young.DELTA2, grid).holds:
        raise PreconditionError("phi2 lacks a Δ2 certificate")
    n_terms = n_terms or min(budget.n, 10**4)
    length = hi - lo
    n0 = max(2, math.ceil(length**-0.5))
    ns = np.arange(1, n_terms + 1, dtype=float)
    mf = (n0 + ns + 1) ** -2.0
    gap = mf - (n0 + ns + 2) ** -2.0
    logx = np.empty(n_terms)
    start = -10 * math.log(2)
    for i, n in enumerate(ns):
        need_gap = math.log(mf[i] / gap[i])

        def cond(ly, n=n, need_gap=need_gap):
            grow = young.log_evaluate(phi2, ly) > young.log_evaluate(phi1, ly + math.log(n))
            return grow & (young.log_evaluate(phi1, ly) >= need_gap)

        found = _log_search(cond, start, steps=75 + int((start + 10 * math.log(2)) / math.log(2)))
        if found is None:
            return None, {"status": INCONCLUSIVE, "reason": f"no x_n found for n={int(n)} below 2^64", "n0": n0}
        logx[i] = found
        start = found
    log_phi1 = young.log_evaluate(phi1, logx)
    me = np.exp(np.log(mf) - log_phi1)
    left = lo + np.concatenate([mf[1:], [(n0 + n_terms + 2) ** -2.0]])
    xs = np.exp(logx)

    def cont(x, left=left, width=me, xs=xs):
        x = np.asarray(x, dtype=float)
        off = x - lo
        # intervals E_n = [lo + mu(F_{n+1}), lo + mu(F_{n+1}) + mu(E_n)) are disjoint and ordered backwards
        starts = left - lo
        order = np.argsort(starts)
        s_sorted = starts[order]
        idx = np.searchsorted(s_sorted, off, side="right") - 1
        out = np.zeros_like(x)
        valid = idx >= 0
        j = order[np.clip(idx, 0, None)]
        inside = valid & (off < s_sorted[np.clip(idx, 0, None)] + width[j])
        out[inside] = xs[j[inside]]
        return out

    f = MeasurableFunction(space, np.zeros(len(space)), cont)
    phi1_terms = np.exp(log_phi1 + np.log(me))
    with np.errstate(over="ignore"):
        phi2_terms = np.exp(young.log_evaluate(phi2, logx) + np.log(me))
    t1 = series_trend(phi1_terms, True, budget.threshold)
    t2 = series_trend(phi2_terms, True, budget.threshold)
    trace = {
        "status": REFUTED if (t1.status == STABLE and t2.status == DIVERGED) else INCONCLUSIVE,
        "n0": n0,
        "terms": n_terms,
        "x_first": xs[:5].tolist(),
        "phi1_partial_sums": t1.as_dict(),
        "phi2_partial_sums": t2.as_dict(),
    }
    return f, trace


def nonatomic_nonexistence(phi1, phi2, space: MeasureSpace, budget: Budget = DEFAULT_BUDGET,
                           n_terms: int | None = None, grid: young.Grid = young.DEFAULT_GRID) -> Verdict:
    """No nonzero bounded weighted composition from L^phi1 to L^phi2 on a continuum.

    Builds ``y_n`` with ``phi2(y_n) > phi1(2^n n^3 y_n)``, pieces ``F_n`` of
    mass ``phi1(y_1) mu(F) / (2^n phi1(n^3 y_n))`` and
    ``f = sum n^2 y_n 1_{F_n}``.  The ``phi1`` modular of ``f`` is
    summable while, for the weakest admissible weight ``u = 1/n`` on
    ``F_n``, the ``phi2`` modular of ``u f`` has terms bounded below by
    ``phi1(y_1) mu(F)``.  All arithmetic is in the log domain.
    """
    c = space.continuum
    if c is None:
        raise PreconditionError("space has no continuum part")
    dom = domination(phi1, phi2, grid)
    if dom.holds:
        raise PreconditionError("phi2 is dominated by phi1", dom)
    n_terms = n_terms or min(budget.n, 10**4)
    ns = np.arange(1, n_terms + 1, dtype=float)
    logy = np.empty(n_terms)
    start = -10 * math.log(2)
    for i, n in enumerate(ns):
        shift = n * math.log(2) + 3 * math.log(n)

        def cond(ly, shift=shift):
            return young.log_evaluate(phi2, ly) > young.log_evaluate(phi1, ly + shift)

        found = _log_search(cond, start, steps=64 + 10 + int(max(0.0, start) / math.log(2)))
        if found is None:
            v = Verdict(INCONCLUSIVE, reason=f"no y_n found for n={int(n)} within the search range")
            v.log("nonexistence_witness", SILENT, int(n))
            return v
        logy[i] = found
        start = found
    mass_f = c.length if c.density is None else integrate_interval(c.weight, c.a, c.b, budget.threshold)[0]
    log_phi1_y1 = float(young.log_evaluate(phi1, logy[0]))
    log_mass = log_phi1_y1 + math.log(mass_f) - ns * math.log(2) - young.log_evaluate(phi1, logy + 3 * np.log(ns))
    f_log = logy + 2 * np.log(ns)
    phi1_terms = np.exp(young.log_evaluate(phi1, f_log) + log_mass)
    log_phi2_terms = young.log_evaluate(phi2, f_log - np.log(ns)) + log_mass
    with np.errstate(over="ignore"):
        phi2_terms = np.exp(log_phi2_terms)
    t1 = series_trend(phi1_terms, True, budget.threshold)
    t2 = series_trend(phi2_terms, True, budget.threshold)
    # partial sums in the log domain stay finite after the terms overflow
    log_partials = np.logaddexp.accumulate(log_phi2_terms)
    witness = {
        "terms": n_terms,
        "phi2_log_partial_sums": {k: float(log_partials[k - 1]) for k in _checkpoints(n_terms)},
        "y_first": np.exp(logy[:5]).tolist(),
        "total_piece_mass": float(np.sum(np.exp(log_mass))),
        "phi1_partial_sums": t1.as_dict(),
        "phi2_partial_sums": t2.as_dict(),
    }
    if t1.status == STABLE and t2.status == DIVERGED:
        v = Verdict(REFUTED, witness=witness, reason="no nonzero bounded weighted composition exists")
        v.log("nonexistence_witness", FAIL, witness)
        return v
    v = Verdict(INCONCLUSIVE, reason="witness sums did not separate under the budget")
    v.log("nonexistence_witness", SILENT, witness)
    return v


# -- composition operators --------------------------------------------------


def comp_necessary(t: Transformation, phi1, phi2, budget: Budget = DEFAULT_BUDGET,
                   grid: young.Grid = young.DEFAULT_GRID, assume=()) -> Verdict:
    """Necessary conditions when ``phi2`` is not dominated by ``phi1``.

    ``f0 = 0`` a.e. on the continuum and a finite
    ``sup phi1^{-1}(1/mu(A_n)) / phi2^{-1}(1/(f0(A_n) mu(A_n)))``.
    """
    notes = []
    dom = domination(phi1, phi2, grid)
    _require(not dom.holds, "not_dominated", "phi2 is dominated by phi1", assume, notes, dom)
    space = t.space
    f0 = radon_nikodym(space, t)
    interval = nonzero_interval(f0, budget)
    if interval is not None:
        v = Verdict(REFUTED, witness={"nonzero_interval": interval}, reason="f0 is not a.e. zero on the continuum", notes=notes)
        v.log("comp_necessary_continuum", FAIL, interval)
        return v
    masses = space.masses.astype(float)
    w = f0.atom_values.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = young.inverse(phi1, 1 / masses) / young.inverse(phi2, 1 / (w * masses))
    ratio = np.where(w == 0, 0.0, ratio)
    trend = sup_trend(ratio, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status == DIVERGED:
        v = Verdict(REFUTED, witness={"atom_sup": trend.as_dict()}, reason="atom ratio supremum diverges", notes=notes)
        v.log("comp_necessary_continuum", PASS, 0.0)
        v.log("comp_necessary_atoms", FAIL, trend.as_dict())
        return v
    v = Verdict(INCONCLUSIVE, reason="necessary conditions pass", notes=notes)
    v.log("comp_necessary_continuum", PASS, 0.0)
    v.log("comp_necessary_atoms", PASS if trend.status == STABLE else SILENT, trend.as_dict())
    return v


def comp_sufficient_atomic(t: Transformation, phi1, phi2, budget: Budget = DEFAULT_BUDGET,
                           grid: young.Grid = young.DEFAULT_GRID, assume=()) -> Verdict:
    """Certify via ``M = sup phi2(1 / phi1^{-1}(mu(A_n))) f0(A_n) mu(A_n)``."""
    notes = []
    space = t.space
    f0 = radon_nikodym(space, t)
    _require(nonzero_interval(f0, budget) is None, "f0_vanishes_on_continuum",
             "f0 does not vanish on the continuum", assume, notes)
    b, c, comp = _delta_prime_pair(phi1, phi2, grid, assume, notes)
    masses = space.masses.astype(float)
    w = f0.atom_values.astype(float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        terms = young.evaluate(phi2, 1 / young.inverse(phi1, masses)) * w * masses
    terms = np.where(w == 0, 0.0, terms)
    trend = sup_trend(terms, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status != STABLE:
        v = Verdict(INCONCLUSIVE, reason=f"atom supremum {trend.status}", notes=notes)
        v.log("comp_sufficient_atomic", SILENT, trend.as_dict())
        return v
    m = trend.value
    bound = b * m * float(young.evaluate(comp, c)) + 1
    v = Verdict(CERTIFIED, bound=bound, reason="b M (phi2∘phi1^-1)(c) + 1", notes=notes)
    v.log("comp_sufficient_atomic", PASS, {"M": m, "b": b, "c": c})
    return v


def _phi2_inverse_weight(f0: MeasurableFunction, phi2):
    return f0.map(lambda v: young.inverse(phi2, v))


def comp_via_mult(t: Transformation, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                  grid: young.Grid = young.DEFAULT_GRID, assume=()) -> Verdict:
    """Bound ``‖C_T‖ <= 2 b ‖phi2^{-1}(f0)‖_{phi3}``.

    Chains ``‖C_T f‖ <= b ‖M_w f‖`` (``w = phi2^{-1}(f0)``, ``b`` the ∇'
    constant of ``phi2``) with the multiplication bound under
    ``phi2(xy) <= phi1(x) + phi3(y)``.
    """
    notes = []
    nab = growth(phi2, young.NABLA_PRIME, grid)
    _require(nab.holds, "nabla_prime_phi2", f"no ∇' certificate for phi2 ({phi2})", assume, notes)
    cert = triple(phi1, phi2, phi3, young.PHI2_LEFT, grid)
    _require(cert.holds, "triple", f"phi2(xy) <= phi1(x) + phi3(y) fails at {cert.point}", assume, notes, cert.point)
    b = nab.constant if nab.holds else 1.0
    w = _phi2_inverse_weight(radon_nikodym(t.space, t), phi2)
    norm = luxemburg_norm(t.space, w, phi3, budget.tol, budget)
    if norm.diverged:
        v = Verdict(INCONCLUSIVE, reason="phi2^-1(f0) has no finite phi3 norm", notes=notes)
        v.log("comp_via_mult", SILENT, norm.value)
        return v
    v = Verdict(CERTIFIED, bound=2 * b * norm.value, reason="2 b ||phi2^-1(f0)||_phi3", notes=notes)
    v.log("comp_via_mult", PASS, {"norm": norm.value, "b": b})
    return v


def comp_condition_chain(t: Transformation, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                         grid: young.Grid = young.DEFAULT_GRID, assume=()) -> dict:
    """Evaluate conditions (ii) and (iii) and record whether (ii) ⇒ (iii) held.

    (ii): ``f0 = 0`` on the continuum and
    ``sup phi2(1/phi1^{-1}(mu(A_n))) f0(A_n) mu(A_n) < inf``;
    (iii): ``sup f0(A_n) phi2(phi3^{-1}(1/mu(A_n))) < inf``.
    ``None`` marks a condition left undecided by its trend.
    """
    notes = []
    cert = triple(phi1, phi2, phi3, young.PHI1_LEFT, grid)
    _require(cert.holds, "triple", f"phi1(xy) <= phi2(x) + phi3(y) fails at {cert.point}", assume, notes, cert.point)
    _require(growth(phi2, young.DELTA_PRIME, grid).holds, "delta_prime_phi2", "no Δ' certificate for phi2", assume, notes)
    space = t.space
    f0 = radon_nikodym(space, t)
    masses = space.masses.astype(float)
    w = f0.atom_values.astype(float)
    cont_zero = nonzero_interval(f0, budget) is None
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        m_terms = np.where(w == 0, 0.0, young.evaluate(phi2, 1 / young.inverse(phi1, masses)) * w * masses)
        iii_terms = np.where(w == 0, 0.0, w * young.evaluate(phi2, young.inverse(phi3, 1 / masses)))
    tm = sup_trend(m_terms, space.truncated, budget.threshold, budget.stable_rtol)
    t3 = sup_trend(iii_terms, space.truncated, budget.threshold, budget.stable_rtol)

    def decide(tr):
        return True if tr.status == STABLE else (False if tr.status == DIVERGED else None)

    ii = False if not cont_zero else decide(tm)
    iii = decide(t3)
    return {
        "ii": ii,
        "iii": iii,
        "continuum_pushforward_zero": cont_zero,
        "ii_sup": tm.as_dict(),
        "iii_sup": t3.as_dict(),
        "implication_ok": not (ii is True and iii is False),
        "notes": notes,
    }


def comp_mult_sandwich(t: Transformation, f: MeasurableFunction, phi1, phi2, budget: Budget = DEFAULT_BUDGET,
                       grid: young.Grid = young.DEFAULT_GRID) -> dict:
    """Compare ``‖C_T f‖_{phi2}`` with ``‖M_w f‖_{phi2}``, ``w = phi2^{-1}(f0)``.

    Checks ``‖C_T f‖ <= b ‖M_w f‖`` when ``phi2`` has a ∇' certificate
    (constant ``b``) and ``‖M_w f‖ <= c ‖C_T f‖`` when it has a Δ'
    certificate (constant ``c``); a missing certificate skips its side.
    ``phi1`` is carried for symmetry with the other criteria.
    """
    space = t.space
    comp_f = apply_comp(t, f)
    w = _phi2_inverse_weight(radon_nikodym(space, t), phi2)
    lhs = luxemburg_norm(space, comp_f, phi2, budget.tol, budget).value
    mid = luxemburg_norm(space, apply_mult(w, f), phi2, budget.tol, budget).value
    out = {"comp_norm": lhs, "mult_norm": mid, "upper": None, "lower": None}
    nab = growth(phi2, young.NABLA_PRIME, grid)
    dp = growth(phi2, young.DELTA_PRIME, grid)
    slack = budget.tol * 10
    if nab.holds:
        out["upper"] = bool(lhs <= nab.constant * mid * (1 + slack) + slack)
        out["b"] = nab.constant
    if dp.holds:
        out["lower"] = bool(mid <= dp.constant * lhs * (1 + slack) + slack)
        out["c"] = dp.constant
    out["holds"] = all(v is not False for v in (out["upper"], out["lower"]))
    return out


def comp_dual_membership(t: Transformation, phi1, phi2, phi3, budget: Budget = DEFAULT_BUDGET,
                         grid: young.Grid = young.DEFAULT_GRID):
    """Whether ``f0`` lies in ``L^{psi3∘psi1∘phi2^{-1}}``; returns ``(member, info)``."""
    if not growth(phi2, young.DELTA_PRIME, grid).holds:
        raise PreconditionError(f"no Δ' certificate for phi2 ({phi2})")
    psi1, psi3 = young.conjugate_function(phi1), young.conjugate_function(phi3)
    inner = young.compose(psi1, young.inverse_function(phi2))
    gauge = young.compose(psi3, inner, name=f"conj({phi3})∘conj({phi1})∘{phi2}^-1")
    f0 = radon_nikodym(t.space, t)
    g = f0.map(lambda v: young.evaluate(gauge, v))
    value, trace = integrate_with_trace(t.space, g, budget)
    return bool(value < math.inf), {"gauge": str(gauge), "value": _num(value), "trace": _plain(trace)}


# -- merged assessments -----------------------------------------------------


def _merge(results, extra_log=(), notes=()):
    """Combine criterion verdicts; a certificate and a refutation together are a conflict."""
    log, all_notes = [], list(notes)
    certs, refs = [], []
    for name, v in results:
        if isinstance(v, PreconditionError):
            log.append((name, REFUSED, str(v)))
            continue
        log.extend(v.criteria_log)
        all_notes.extend(n for n in v.notes if n not in all_notes)
        if v.status == CERTIFIED:
            certs.append((name, v))
        elif v.status == REFUTED:
            refs.append((name, v))
    log.extend(extra_log)
    if certs and refs:
        out = Verdict(INCONCLUSIVE, reason=f"criteria conflict: {certs[0][0]} certifies while {refs[0][0]} refutes")
    elif refs:
        name, v = refs[0]
        out = Verdict(REFUTED, witness={"criterion": name, **v.witness}, reason=v.reason)
    elif certs:
        name, v = min(certs, key=lambda c: c[1].bound)
        out = Verdict(CERTIFIED, bound=v.bound, reason=f"{name}: {v.reason}")
    else:
        out = Verdict(INCONCLUSIVE, reason="no criterion decides")
    out.criteria_log = log
    out.notes = all_notes
    return out


def _attempt(name, fn, *args, **kwargs):
    try:
        return name, fn(*args, **kwargs)
    except PreconditionError as exc:
        return name, exc


def assess_mult(u: MeasurableFunction, phi1, phi2, phi3=None, budget: Budget = DEFAULT_BUDGET,
                direction: str = young.PHI1_LEFT, probes: dict | None = None,
                grid: young.Grid = young.DEFAULT_GRID, assume=(), dual_check: bool = True) -> Verdict:
    """Run every applicable criterion for ``M_u : L^phi1 -> L^phi2``."""
    results = [_attempt("probe_witness", mult_probe_witness, u, phi1, phi2, probes, budget)]
    if phi3 is not None:
        results.append(_attempt("mult_sufficient", mult_bounded_sufficient, u, phi1, phi2, phi3, budget, grid, assume))
    results.append(_attempt("mult_sufficient_atomic", mult_bounded_sufficient_atomic, u, phi1, phi2, budget, grid, assume))
    if phi3 is not None:
        results.append(_attempt("mult_necessary", mult_necessary_atomic, u, phi1, phi2, phi3, budget, direction, grid, assume))
    extra = []
    if dual_check and phi3 is not None and any(not isinstance(v, Exception) and v.status == CERTIFIED for _, v in results):
        try:
            ok, info = mult_dual_membership(u, phi1, phi2, phi3, budget, grid)
            extra.append(("mult_dual_membership", LOGGED, {"member": ok, **info}))
        except (PreconditionError, ConjugationError, QuadratureError) as exc:
            extra.append(("mult_dual_membership", REFUSED, str(exc)))
    return _merge(results, extra, [f"hypothesis direction: {direction}"] if phi3 is not None else [])


def assess_comp(t: Transformation, phi1, phi2, phi3=None, budget: Budget = DEFAULT_BUDGET,
                grid: young.Grid = young.DEFAULT_GRID, assume=(), chain_check: bool = True) -> Verdict:
    """Run every applicable criterion for ``C_T : L^phi1 -> L^phi2``."""
    results = [
        _attempt("comp_necessary", comp_necessary, t, phi1, phi2, budget, grid, assume),
        _attempt("comp_sufficient_atomic", comp_sufficient_atomic, t, phi1, phi2, budget, grid, assume),
    ]
    if phi3 is not None:
        results.append(_attempt("comp_via_mult", comp_via_mult, t, phi1, phi2, phi3, budget, grid, assume))
    extra = []
    if chain_check and phi3 is not None:
        try:
            extra.append(("comp_condition_chain", LOGGED, comp_condition_chain(t, phi1, phi2, phi3, budget, grid)))
        except PreconditionError as exc:
            extra.append(("comp_condition_chain", REFUSED, str(exc)))
    return _merge(results, extra)


# -- empirical operator norms -----------------------------------------------


def sample_operator_norm(op: str, symbol, space: MeasureSpace, phi1, phi2, samples: int = 200,
                         rng: np.random.Generator | None = None, tol: float = 1e-12) -> float:
    """Largest ``‖op f‖_{phi2}`` over random atom-supported ``f`` with ``‖f‖_{phi1} = 1``.

    ``op`` is ``"mult"`` (``symbol`` = ``u``) or ``"comp"`` (``symbol`` = ``T``).
    Inputs mix dense Gaussian vectors, single atoms and sparse vectors with
    log-uniform scales.  A lower estimate of the operator norm.
    """
    rng = rng or np.random.default_rng(0)
    n = len(space)
    if n == 0:
        return 0.0
    masses = space.masses.astype(float)
    rows = rng.normal(size=(samples, n)) * np.exp(rng.uniform(-3, 3, size=(samples, n)))
    k = min(n, samples // 4)
    rows[:k] = 0.0
    rows[np.arange(k), rng.choice(n, size=k, replace=False) if k <= n else np.arange(k) % n] = 1.0
    sparse = rng.random((samples, n)) < 0.3
    rows[k : 2 * k] *= sparse[k : 2 * k]
    rows[np.all(rows == 0, axis=1), 0] = 1.0
    norms = luxemburg_norm_batch(rows, masses, phi1, tol)
    rows = rows / norms[:, None]
    if op == "mult":
        out = rows * symbol.atom_values.astype(float)[None, :]
    elif op == "comp":
        images = symbol.images
        out = np.where(images[None, :] >= 0, rows[:, np.clip(images, 0, None)], 0.0)
    else:
        raise ValueError(f"unknown operator kind {op!r}")
    return float(np.max(luxemburg_norm_batch(out, masses, phi2, tol)))
