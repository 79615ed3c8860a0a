"""Strategies for merging two measures that fail the consistency checks.

Every strategy degrades gracefully: on inputs that are already
consistent each one reproduces the plain combination (the rescalers
return the inputs themselves).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import Inconsistent, ZeroConditional
from .measures import (
    CONSISTENCY_TOL,
    DiscreteMeasure,
    _union_space,
    is_consistent,
    marginalize,
    normalize,
    scale_measure,
)

KINDS = (
    "rescale-min",
    "rescale-convex",
    "condition-on-a",
    "condition-on-b",
    "weighted-average",
    "kl-compromise",
)
_NEEDS_GAMMA = {"rescale-convex", "weighted-average"}


@dataclass(frozen=True)
class ReconcileStrategy:
    """A named merge rule, with a mixing weight where the rule needs one."""

    kind: str
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}; choose from {KINDS}")
        if self.kind in _NEEDS_GAMMA:
            if self.gamma is None:
                raise ValueError(f"strategy {self.kind!r} requires gamma")
            if not (0.0 <= self.gamma <= 1.0):
                raise ValueError("gamma must lie in [0, 1]")
        elif self.gamma is not None:
            raise ValueError(f"strategy {self.kind!r} takes no gamma")


def rescale(mu, lam, strategy, tol=CONSISTENCY_TOL):
    """Scale both measures to one common total mass.

    Requires the shapes to already agree on the overlap (condition 1);
    rescaling can only repair a total-mass disagreement.  The target is
    the smaller total for ``rescale-min`` and the gamma-blend of the two
    totals for ``rescale-convex``.
    """
    if strategy.kind not in ("rescale-min", "rescale-convex"):
        raise ValueError(f"{strategy.kind!r} is not a rescaling strategy")
    report = is_consistent(mu, lam, tol)
    if not report.proportional_marginals:
        raise Inconsistent(
            "rescaling cannot reconcile measures whose overlap marginals disagree "
            "(condition 1)",
            report,
        )
    tm, tl = mu.total, lam.total
    if strategy.kind == "rescale-min":
        target = min(tm, tl)
    else:
        target = strategy.gamma * tm + (1.0 - strategy.gamma) * tl
    return scale_measure(mu, target / tm), scale_measure(lam, target / tl)


def _grouped(measure, overlap, rest):
    o_idx = tuple(measure.space.index(v) for v in overlap)
    r_idx = tuple(measure.space.index(v) for v in rest)
    groups = {}
    for x, w in measure.mass.items():
        c = tuple(x[i] for i in o_idx)
        groups.setdefault(c, []).append((tuple(x[i] for i in r_idx), w))
    totals = {c: math.fsum(w for _, w in g) for c, g in groups.items()}
    return groups, totals


def complete_via(mu, lam, side):
    """Trust one measure outright and borrow the other's conditional.

    Side "A" keeps the first measure on its own block and extends each of
    its points with the second measure's overlap-conditional law (and
    symmetrically for side "B").  The trusted side's marginal is
    reproduced exactly.  Raises ZeroConditional where the trusted
    measure puts mass on an overlap value the other measure never
    touches.
    """
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    overlap = tuple(v for v in mu.space.variables if v in set(lam.space.variables))
    union, extra = _union_space(mu, lam)
    mu_only = tuple(v for v in mu.space.variables if v not in set(overlap))
    lam_groups, lam_totals = _grouped(lam, overlap, extra)
    mu_groups, mu_totals = _grouped(mu, overlap, mu_only)
    mu_pos = tuple(union.index(v) for v in mu.space.variables)
    lam_extra_pos = tuple(union.index(v) for v in extra)
    out = {}
    if side == "A":
        for x, w in mu.mass.items():
            c = tuple(x[mu.space.index(v)] for v in overlap)
            denom = lam_totals.get(c, 0.0)
            if denom <= 0.0:
                raise ZeroConditional(
                    f"the trusted measure puts mass on overlap value {c!r} "
                    "where the other measure has none"
                )
            for b, wl in lam_groups[c]:
                cell = [None] * len(union.variables)
                for pos, val in zip(mu_pos, x):
                    cell[pos] = val
                for pos, val in zip(lam_extra_pos, b):
                    cell[pos] = val
                out[tuple(cell)] = w * (wl / denom)
    else:
        o_in_mu = tuple(mu.space.index(v) for v in overlap)
        u_idx = tuple(mu.space.index(v) for v in mu_only)
        mu_only_pos = tuple(union.index(v) for v in mu_only)
        o_pos = tuple(union.index(v) for v in overlap)
        for y, w in lam.mass.items():
            c = tuple(y[lam.space.index(v)] for v in overlap)
            denom = mu_totals.get(c, 0.0)
            if denom <= 0.0:
                raise ZeroConditional(
                    f"the trusted measure puts mass on overlap value {c!r} "
                    "where the other measure has none"
                )
            b = tuple(y[lam.space.index(v)] for v in extra)
            for u, wm in mu_groups[c]:
                cell = [None] * len(union.variables)
                for pos, val in zip(mu_only_pos, u):
                    cell[pos] = val
                for pos, val in zip(o_pos, c):
                    cell[pos] = val
                for pos, val in zip(lam_extra_pos, b):
                    cell[pos] = val
                out[tuple(cell)] = w * (wm / denom)
    return DiscreteMeasure(union, out)


def weighted_average(mu, lam, gamma):
    """Pointwise gamma-blend of the two one-sided completions."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError("gamma must lie in [0, 1]")
    via_a = complete_via(mu, lam, "A")
    via_b = complete_via(mu, lam, "B")
    keys = set(via_a.mass) | set(via_b.mass)
    out = {
        k: gamma * via_a.mass.get(k, 0.0) + (1.0 - gamma) * via_b.mass.get(k, 0.0)
        for k in keys
    }
    return DiscreteMeasure(via_a.space, out)


def suggested_gamma(mu, lam):
    """Mass-proportional mixing weight for the weighted average."""
    tm, tl = mu.total, lam.total
    return tm / (tm + tl)


def kl_compromise(mu, lam):
    """Replace the disputed overlap law with the closest single law.

    The compromise marginal minimizes the sum of the two divergences
    from the normalized overlap marginals, whose minimizer over
    probability vectors is their equal-weight mixture.  Both conditional
    laws are then hung off that marginal, giving a probability measure
    on the union space.  Raises ZeroConditional if either side lacks a
    conditional somewhere the compromise puts mass.
    """
    overlap = tuple(v for v in mu.space.variables if v in set(lam.space.variables))
    union, extra = _union_space(mu, lam)
    mu_only = tuple(v for v in mu.space.variables if v not in set(overlap))
    mu_c = marginalize(normalize(mu), overlap)
    lam_c = marginalize(normalize(lam), overlap)
    keys = set(mu_c.mass) | set(lam_c.mass)
    compromise = {
        c: 0.5 * (mu_c.mass.get(c, 0.0) + lam_c.mass.get(c, 0.0)) for c in keys
    }
    mu_groups, mu_totals = _grouped(mu, overlap, mu_only)
    lam_groups, lam_totals = _grouped(lam, overlap, extra)
    mu_only_pos = tuple(union.index(v) for v in mu_only)
    o_pos = tuple(union.index(v) for v in overlap)
    extra_pos = tuple(union.index(v) for v in extra)
    out = {}
    for c, w_c in compromise.items():
        if w_c <= 0.0:
            continue
        if mu_totals.get(c, 0.0) <= 0.0:
            raise ZeroConditional(
                f"the first measure has no conditional at overlap value {c!r}"
            )
        if lam_totals.get(c, 0.0) <= 0.0:
            raise ZeroConditional(
                f"the second measure has no conditional at overlap value {c!r}"
            )
        for u, wm in mu_groups[c]:
            p_u = wm / mu_totals[c]
            for b, wl in lam_groups[c]:
                cell = [None] * len(union.variables)
                for pos, val in zip(mu_only_pos, u):
                    cell[pos] = val
                for pos, val in zip(o_pos, c):
                    cell[pos] = val
                for pos, val in zip(extra_pos, b):
                    cell[pos] = val
                out[tuple(cell)] = p_u * w_c * (wl / lam_totals[c])
    return DiscreteMeasure(union, out)


def reconcile(mu, lam, strategy, tol=CONSISTENCY_TOL):
    """Dispatch to one strategy; rescalers return a pair, the rest a measure."""
    if strategy.kind in ("rescale-min", "rescale-convex"):
        return rescale(mu, lam, strategy, tol)
    if strategy.kind == "condition-on-a":
        return complete_via(mu, lam, "A")
    if strategy.kind == "condition-on-b":
        return complete_via(mu, lam, "B")
    if strategy.kind == "weighted-average":
        return weighted_average(mu, lam, strategy.gamma)
    return kl_compromise(mu, lam)
