"""Closed-form boundedness and range criteria between L^p and L^q.

These are independent oracles for the general engine.  They work with the
usual ``‖·‖_p`` norms; bounds are exact operator norms on atoms in that
normalisation.  Only verdicts are meant to be compared with the engine,
which uses ``x^p / p`` gauges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measure import (
    DEFAULT_BUDGET,
    DIVERGED,
    STABLE,
    Budget,
    MeasurableFunction,
    MeasureSpace,
    Transformation,
    integrate_interval,
    nonzero_interval,
    radon_nikodym,
    series_trend,
    sup_trend,
)
from .operators import CERTIFIED, INCONCLUSIVE, REFUTED, Verdict
from .range import FINITE_RANK, INCONCLUSIVE as RANGE_INCONCLUSIVE, NOT_CLOSED_RANGE, RangeReport


@dataclass(frozen=True)
class PqConfig:
    """Exponents ``p`` (domain) and ``q`` (target) with the derived ``r``.

    ``p < q``: ``1/q + 1/r = 1/p``; ``q < p``: ``1/p + 1/r = 1/q``;
    ``p == q``: ``r = inf``.
    """

    p: float
    q: float
    r: float = field(init=False)

    def __post_init__(self):
        if not (self.p > 1 and self.q > 1):
            raise ValueError("p and q must exceed 1")
        if self.p == self.q:
            r = math.inf
        else:
            lo, hi = sorted((self.p, self.q))
            r = 1 / (1 / lo - 1 / hi)
        object.__setattr__(self, "r", r)

    @property
    def ordering(self) -> str:
        return "p<q" if self.p < self.q else ("q<p" if self.q < self.p else "p=q")


def _continuum_integral(fn: MeasurableFunction, power: float, budget: Budget) -> float:
    c = fn.space.continuum
    if c is None or fn.continuum is None:
        return 0.0
    integrand = lambda x: np.abs(fn.at(x)) ** power * c.weight(x)  # noqa: E731
    return integrate_interval(integrand, c.a, c.b, budget.threshold)[0]


def _verdict_from(trend, bound_fn, reason, log_name):
    if trend.status == STABLE:
        v = Verdict(CERTIFIED, bound=bound_fn(trend.value), reason=reason)
    elif trend.status == DIVERGED:
        v = Verdict(REFUTED, witness={"trend": trend.as_dict()}, reason=reason)
    else:
        v = Verdict(INCONCLUSIVE, reason=f"trend {trend.status}")
    v.log(log_name, trend.status, trend.as_dict())
    return v


def mult_pq(u: MeasurableFunction, space: MeasureSpace, cfg: PqConfig, budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """``M_u : L^p -> L^q``.

    ``p < q``: bounded iff ``u = 0`` a.e. on the continuum and
    ``sup |u(A_n)|^r / mu(A_n) < inf`` (norm: that sup to the ``1/r``).
    ``q < p``: bounded iff ``u`` is in ``L^r`` (norm ``‖u‖_r``).
    ``p == q``: bounded iff ``u`` is essentially bounded.
    """
    au = np.abs(u.atom_values.astype(float))
    masses = space.masses.astype(float)
    if cfg.ordering == "p<q":
        interval = nonzero_interval(u, budget)
        if interval is not None:
            v = Verdict(REFUTED, witness={"nonzero_interval": interval}, reason="u not a.e. zero on the continuum")
            v.log("lp_mult_continuum", "fail", interval)
            return v
        with np.errstate(over="ignore"):
            terms = au**cfg.r / masses
        trend = sup_trend(terms, space.truncated, budget.threshold, budget.stable_rtol)
        return _verdict_from(trend, lambda s: s ** (1 / cfg.r), "sup |u|^r / mu", "lp_mult_sup")
    if cfg.ordering == "q<p":
        trend = series_trend(au**cfg.r * masses, space.truncated, budget.threshold)
        if trend.status == DIVERGED:
            return _verdict_from(trend, None, "u not in L^r", "lp_mult_sum")
        cont = _continuum_integral(u, cfg.r, budget)
        if not math.isfinite(cont):
            v = Verdict(REFUTED, witness={"continuum_integral": "inf"}, reason="u not in L^r on the continuum")
            v.log("lp_mult_sum", "diverged", "continuum")
            return v
        total = trend.value + cont
        v = _verdict_from(trend, lambda s: (s + cont) ** (1 / cfg.r), "u in L^r", "lp_mult_sum")
        if v.status == CERTIFIED:
            v.bound = total ** (1 / cfg.r)
        return v
    sup = max(float(np.max(au, initial=0.0)), u.continuum_sup(budget.sup_grid))
    trend = sup_trend(au, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status == STABLE and math.isfinite(sup):
        v = Verdict(CERTIFIED, bound=sup, reason="u essentially bounded")
    elif trend.status == DIVERGED or not math.isfinite(sup):
        v = Verdict(REFUTED, witness={"trend": trend.as_dict()}, reason="u unbounded")
    else:
        v = Verdict(INCONCLUSIVE, reason="sup still growing")
    v.log("lp_mult_linf", trend.status, sup)
    return v


def comp_pq(t: Transformation, space: MeasureSpace, cfg: PqConfig, budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """``C_T : L^p -> L^q``.

    ``p < q``: bounded iff ``mu(T^{-1}(B)) = 0`` and
    ``mu(T^{-1}(A_n))^p <= k mu(A_n)^q`` for a fixed ``k``.  ``q < p``:
    bounded iff ``f0`` is in ``L^{r/q}``; the singleton-partition sum of
    ``Q_T(F_j)^{r/q} mu(F_j)`` is logged alongside.  ``p == q``: bounded
    iff ``f0`` is essentially bounded.
    """
    f0 = radon_nikodym(space, t)
    w = f0.atom_values.astype(float)
    masses = space.masses.astype(float)
    pushed = w * masses
    if cfg.ordering == "p<q":
        interval = nonzero_interval(f0, budget)
        if interval is not None:
            v = Verdict(REFUTED, witness={"nonzero_interval": interval}, reason="mu(T^-1(B)) > 0")
            v.log("lp_comp_continuum", "fail", interval)
            return v
        with np.errstate(over="ignore"):
            terms = pushed**cfg.p / masses**cfg.q
        trend = sup_trend(terms, space.truncated, budget.threshold, budget.stable_rtol)
        v = _verdict_from(trend, lambda k: k ** (1 / (cfg.p * cfg.q)), "sup mu(T^-1 A_n)^p / mu(A_n)^q", "lp_comp_sup")
        v.notes.append("the exponent r plays no role in this ordering")
        return v
    if cfg.ordering == "q<p":
        s = cfg.r / cfg.q
        terms = w**s * masses
        trend = series_trend(terms, space.truncated, budget.threshold)
        partition = float(np.sum(terms))
        if trend.status == DIVERGED:
            v = _verdict_from(trend, None, "f0 not in L^{r/q}", "lp_comp_sum")
            v.log("lp_comp_partition_sum", "singleton", partition)
            return v
        cont = _continuum_integral(f0, s, budget)
        if not math.isfinite(cont):
            v = Verdict(REFUTED, witness={"continuum_integral": "inf"}, reason="f0 not in L^{r/q} on the continuum")
            v.log("lp_comp_sum", "diverged", "continuum")
            return v
        v = _verdict_from(trend, lambda m: (m + cont) ** (1 / cfg.r), "f0 in L^{r/q}", "lp_comp_sum")
        v.log("lp_comp_partition_sum", "singleton", partition)
        return v
    sup = max(float(np.max(w, initial=0.0)), f0.continuum_sup(budget.sup_grid))
    trend = sup_trend(w, space.truncated, budget.threshold, budget.stable_rtol)
    if trend.status == STABLE and math.isfinite(sup):
        v = Verdict(CERTIFIED, bound=sup ** (1 / cfg.p), reason="f0 essentially bounded")
    elif trend.status == DIVERGED:
        v = Verdict(REFUTED, witness={"trend": trend.as_dict()}, reason="f0 unbounded")
    else:
        v = Verdict(INCONCLUSIVE, reason="sup still growing")
    v.log("lp_comp_linf", trend.status, sup)
    return v


def range_pq(symbol, space: MeasureSpace, cfg: PqConfig, budget: Budget = DEFAULT_BUDGET) -> RangeReport:
    """Finite-support classification for ``M_u`` (``symbol`` a function) or ``C_T`` (a transformation).

    Multiplication: finite support gives finite rank; for ``q < p`` a
    nonzero continuum part rules out closed range, while for ``p < q`` the
    statement has no continuum clause.  Composition: finite ``E_T`` and
    ``mu(T^{-1}(B)) = 0``.  ``p == q`` is outside these statements.
    """
    if isinstance(symbol, Transformation):
        kind = "comp"
        fn = radon_nikodym(space, symbol)
        images = symbol.images
    else:
        kind, fn, images = "mult", symbol, None
    idx = np.flatnonzero(np.abs(fn.atom_values.astype(float)) > budget.support_eps)
    ids = tuple(space.ids[i] for i in idx)
    cont_zero = nonzero_interval(fn, budget) is None
    growing = space.truncated and len(idx) > 0 and idx[-1] >= len(space) - len(space) // 10
    report = RangeReport(kind, ids, cont_zero, RANGE_INCONCLUSIVE, regime=cfg.ordering,
                         support_trend="growing" if growing else "stable", _space=space, _images=images)
    if cfg.ordering == "p=q":
        report.clause = "equal exponents are outside the finite-support statements"
        return report
    continuum_clause = kind == "comp" or cfg.ordering == "q<p"
    if not cont_zero:
        if continuum_clause:
            report.classification = NOT_CLOSED_RANGE
            report.clause = "symbol nonzero on the continuum"
        else:
            report.clause = "no continuum clause for p<q multiplication"
        return report
    if growing:
        report.classification = NOT_CLOSED_RANGE
        report.clause = "support still growing"
        return report
    report.classification = FINITE_RANK
    report.rank_bound = len(ids)
    report.clause = "finite support"
    return report
