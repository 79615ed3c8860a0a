"""Latent-class machinery: urn predictives, partitions, collapsed Gibbs.

The latent values are draws from a Dirichlet process, so a new
observation either repeats an existing value or picks a fresh one from
the base; classes are the equality classes of those values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dp import ContinuousBase, _discrete_sampler
from .errors import ZeroMass
from .measures import DiscreteMeasure
from .rng import stream


@dataclass(frozen=True)
class UrnState:
    """Values drawn so far, the precision, and the base measure."""

    drawn: tuple
    a: float
    base: object

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError("precision a must be finite and positive")
        if isinstance(self.base, DiscreteMeasure):
            if not self.base.is_probability():
                raise ValueError("a discrete base must be a probability measure")
            for x in self.drawn:
                self.base.space.as_tuple(x)
        elif not isinstance(self.base, ContinuousBase):
            raise TypeError("base must be a DiscreteMeasure or a ContinuousBase")


def urn_predictive(state):
    """Law of the next value: base shrunk by a/(a+n) plus one unit per draw."""
    if not isinstance(state.base, DiscreteMeasure):
        raise TypeError("an explicit predictive law requires a discrete base")
    n = len(state.drawn)
    scale = state.a + n
    mass = {x: state.a * v for x, v in state.base.mass.items()}
    for x in state.drawn:
        key = state.base.space.as_tuple(x)
        mass[key] = mass.get(key, 0.0) + 1.0
    return DiscreteMeasure(state.base.space, {x: v / scale for x, v in mass.items()})


def _base_draw(base):
    if isinstance(base, DiscreteMeasure):
        return _discrete_sampler(base)
    return base.sampler


def sample_partition(a, base, n, cfg, replicate=0):
    """Labels of ``n`` sequential draws, canonicalized by first appearance.

    Each draw is fresh from the base with probability a/(a+i) given i
    previous draws, otherwise a uniformly chosen earlier value; labels
    identify equality classes of the drawn values.
    """
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError("precision a must be finite and positive")
    rng = stream(cfg.seed, replicate)
    draw = _base_draw(base)
    values = []
    for i in range(n):
        if rng.random() * (a + i) < a:
            values.append(draw(rng))
        else:
            values.append(values[int(rng.integers(i))])
    labels = {}
    return [labels.setdefault(v, len(labels)) for v in values]


def expected_clusters(a, n):
    """Mean number of distinct values when the base never repeats atoms."""
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError("precision a must be finite and positive")
    return math.fsum(a / (a + i) for i in range(n))


def _gibbs_weights(i, assignments, data, likelihood, a, base):
    """Candidate values and their unnormalized reassignment weights."""
    if not isinstance(base, DiscreteMeasure):
        raise TypeError("collapsed reassignment requires a discrete base")
    others = [p for j, p in enumerate(assignments) if j != i]
    counts = {}
    for p in others:
        key = base.space.as_tuple(p)
        counts[key] = counts.get(key, 0.0) + 1.0
    candidates = list(base.mass)
    for key in counts:
        if key not in base.mass:
            candidates.append(key)
    weights = []
    for cand in candidates:
        predictive = a * base.mass.get(cand, 0.0) + counts.get(cand, 0.0)
        weights.append(predictive * float(likelihood(data[i], cand)))
    return candidates, weights


def gibbs_reassign(i, assignments, data, likelihood, a, base, rng):
    """Redraw the latent value of observation ``i`` given all the others.

    The urn predictive built from the remaining values is reweighted by
    the likelihood of the observation under each candidate value.
    """
    candidates, weights = _gibbs_weights(i, assignments, data, likelihood, a, base)
    total = math.fsum(weights)
    if total <= 0.0:
        raise ZeroMass(
            "every candidate value has zero reweighted mass; the likelihood "
            "table does not cover the data"
        )
    u = rng.random() * total
    acc = 0.0
    for cand, w in zip(candidates, weights):
        acc += w
        if u < acc:
            return cand
    return candidates[-1]


def gibbs_chain(data, likelihood, a, base, sweeps, cfg, replicate=0):
    """Run index-order sweeps from the all-in-one-class start.

    Every observation begins at one shared value drawn from the base;
    each sweep reassigns observations in index order.  Returns the final
    values and the per-sweep label lists.
    """
    rng = stream(cfg.seed, replicate)
    draw = _base_draw(base)
    assignments = [draw(rng)] * len(data)
    history = []
    for _ in range(sweeps):
        for i in range(len(data)):
            assignments[i] = gibbs_reassign(i, assignments, data, likelihood, a, base, rng)
        labels = {}
        history.append([labels.setdefault(v, len(labels)) for v in assignments])
    return assignments, history


def identity_likelihood(x, pi):
    """Observation equals the latent value outright."""
    return 1.0 if tuple(x) == tuple(pi) else 0.0
