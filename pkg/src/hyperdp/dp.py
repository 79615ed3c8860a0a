"""Dirichlet process engine: parameters, stick-breaking draws, posteriors.

Base measures are either exact discrete measures or opaque continuous
sampling oracles; every exactness claim applies to the discrete case
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import OutsideDomain
from .measures import DiscreteMeasure, ProductSpace, marginalize
from .rng import beta_variate, stream


@dataclass(frozen=True)
class ContinuousBase:
    """Opaque atom sampler for a nonatomic base measure.

    ``sampler`` maps a generator to one draw; ``cdf`` (optional) maps a
    real threshold to cumulative mass and is required only for posterior
    distribution-function estimates.  ``atoms_distinct`` declares that
    two draws never coincide, which degeneracy checks may rely on.
    """

    sampler: Callable
    cdf: Optional[Callable] = None
    atoms_distinct: bool = True
    label: str = "continuous"


@dataclass(frozen=True)
class DPParams:
    """Precision and base measure of one Dirichlet process prior."""

    nu: float
    base: object

    def __post_init__(self):
        object.__setattr__(self, "nu", float(self.nu))
        if not math.isfinite(self.nu) or self.nu <= 0.0:
            raise ValueError("precision nu must be finite and positive")
        if isinstance(self.base, DiscreteMeasure):
            if not self.base.is_probability():
                raise ValueError("a discrete base must be a probability measure")
        elif not isinstance(self.base, ContinuousBase):
            raise TypeError("base must be a DiscreteMeasure or a ContinuousBase")


@dataclass(frozen=True)
class SamplerConfig:
    """Seed and truncation policy for stick-breaking draws."""

    seed: int
    eps: float = 1e-10
    max_atoms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise ValueError("eps must lie strictly between 0 and 1")
        if self.max_atoms < 1:
            raise ValueError("max_atoms must be at least 1")


@dataclass(frozen=True)
class WeightedAtoms:
    """One sampled measure: atoms, their weights, and the folded residual.

    ``space`` is set for draws from a discrete base (atoms are full
    assignments) and ``None`` for opaque continuous draws.
    """

    atoms: tuple
    weights: tuple
    truncation_residual: float
    space: Optional[ProductSpace] = None

    def __post_init__(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError("atoms and weights must have equal length")
        if not self.atoms:
            raise ValueError("a sampled measure needs at least one atom")
        if any(w <= 0.0 for w in self.weights):
            raise ValueError("weights must be strictly positive")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")


def _discrete_sampler(measure):
    support = list(measure.mass)
    cum = np.cumsum(np.array([measure.mass[x] for x in support], dtype=float))

    def draw(rng):
        u = rng.random() * cum[-1]
        i = int(np.searchsorted(cum, u, side="right"))
        return support[min(i, len(support) - 1)]

    return draw


def _base_sampler(base):
    if isinstance(base, DiscreteMeasure):
        return _discrete_sampler(base), base.space
    return base.sampler, None


def sample_dp(params, cfg, replicate=0):
    """One stick-breaking draw, truncated by leftover mass or atom budget.

    Sticks are broken with Beta(1, nu) fractions; when the leftover
    drops below ``cfg.eps`` (or one slot remains), the whole leftover is
    folded into a final fresh atom so weights always sum to one.
    """
    rng = stream(cfg.seed, replicate)
    draw, space = _base_sampler(params.base)
    atoms, weights = [], []
    remaining = 1.0
    while len(atoms) < cfg.max_atoms - 1 and remaining >= cfg.eps:
        p = beta_variate(rng, 1.0, params.nu)
        w = p * remaining
        if w > 0.0:
            atoms.append(draw(rng))
            weights.append(w)
            remaining -= w
    if remaining > 0.0:
        atoms.append(draw(rng))
        weights.append(remaining)
        residual = remaining
    else:
        residual = 0.0
    return WeightedAtoms(tuple(atoms), tuple(weights), residual, space)


def atoms_to_measure(theta):
    """Aggregate equal atoms into one discrete probability measure."""
    if theta.space is None:
        raise TypeError("only draws from a discrete base aggregate to a measure")
    agg = {}
    for a, w in zip(theta.atoms, theta.weights):
        agg[a] = agg.get(a, 0.0) + w
    return DiscreteMeasure(theta.space, agg)


def marginal_atoms(theta, keep):
    """Project every atom onto the variables in ``keep``; weights carry over."""
    if theta.space is None:
        raise TypeError("only draws from a discrete base can be projected")
    sub = theta.space.subspace(keep)
    idx = tuple(theta.space.index(v) for v in sub.variables)
    atoms = tuple(tuple(a[i] for i in idx) for a in theta.atoms)
    return WeightedAtoms(atoms, theta.weights, theta.truncation_residual, sub)


def sample_from_atoms(theta, rng, size):
    """Independent draws from a sampled measure."""
    cum = np.cumsum(np.array(theta.weights, dtype=float))
    out = []
    for _ in range(size):
        u = rng.random() * cum[-1]
        i = int(np.searchsorted(cum, u, side="right"))
        out.append(theta.atoms[min(i, len(theta.atoms) - 1)])
    return out


def finite_partition_law(params, partition):
    """Scaled base masses over a finite partition of the whole space.

    Under the prior, the vector of measures of these events is jointly
    Dirichlet with exactly these numbers as its parameters.
    """
    if not isinstance(params.base, DiscreteMeasure):
        raise TypeError("finite partition laws require a discrete base")
    space = params.base.space
    events = []
    seen = {}
    for k, event in enumerate(partition):
        cell = set()
        for assignment in event:
            x = space.as_tuple(assignment)
            if x in seen:
                raise ValueError(
                    f"assignment {x!r} appears in events {seen[x] + 1} and {k + 1}"
                )
            seen[x] = k
            cell.add(x)
        events.append(cell)
    if len(seen) != space.size():
        raise ValueError("events must cover the whole space")
    return tuple(
        params.nu * math.fsum(params.base.mass.get(x, 0.0) for x in sorted(cell, key=space.sort_key))
        for cell in events
    )


def dp_marginal(params, keep):
    """Prior for the projection onto a variable subset: same precision,
    marginalized base."""
    if not isinstance(params.base, DiscreteMeasure):
        raise TypeError("marginal priors require a discrete base")
    return DPParams(params.nu, marginalize(params.base, keep))


def _coerce_data(space, data):
    out = []
    for obs in data:
        try:
            out.append(space.as_tuple(obs))
        except (ValueError, KeyError) as exc:
            raise OutsideDomain(f"observation {obs!r} is outside the base's space: {exc}") from None
    return out


def dp_posterior(params, data):
    """Exact conjugate update: add one unit of mass per observation.

    The posterior precision grows by the sample size and the base
    becomes the normalized blend of the prior base and the empirical
    point masses.
    """
    if not isinstance(params.base, DiscreteMeasure):
        raise TypeError("exact posterior updates require a discrete base")
    obs = _coerce_data(params.base.space, data)
    n = len(obs)
    if n == 0:
        return params
    scale = params.nu + n
    mass = {x: params.nu * v for x, v in params.base.mass.items()}
    for x in obs:
        mass[x] = mass.get(x, 0.0) + 1.0
    posterior = DiscreteMeasure(params.base.space, {x: v / scale for x, v in mass.items()})
    return DPParams(scale, posterior)


def _base_cdf(base, t):
    if isinstance(base, DiscreteMeasure):
        if len(base.space.variables) != 1:
            raise ValueError("distribution functions need a one-variable base")
        dom = base.space.domains[0]
        if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in dom):
            raise ValueError("distribution functions need real-valued categories")
        return math.fsum(v for (c,), v in base.mass.items() if c <= t)
    if base.cdf is None:
        raise ValueError("this continuous base declares no distribution function")
    return float(base.cdf(t))


def bayes_cdf(params, data, t):
    """Posterior-expected distribution function at threshold ``t``.

    Equals the convex blend of the base distribution function and the
    empirical one, with data weight n / (nu + n); algebraically this is
    (nu * G((-inf, t]) + #{x <= t}) / (nu + n).
    """
    prior = _base_cdf(params.base, t)
    n = len(data)
    if n == 0:
        return prior
    for x in data:
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise ValueError("observations must be real numbers")
    w = n / (params.nu + n)
    empirical = sum(1 for x in data if x <= t) / n
    return (1.0 - w) * prior + w * empirical
