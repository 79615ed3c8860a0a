"""
Sampling a Dirichlet process and updating it on data
=====================================================

A random probability measure drawn around a base: small concentration
puts almost everything on one atom, large concentration hugs the base.
Conditioning is exact conjugate bookkeeping, and the distribution
function estimate blends the prior with the empirical law.
"""

import math

from hyperdp import (
    DiscreteMeasure,
    DPParams,
    ProductSpace,
    SamplerConfig,
    atoms_to_measure,
    bayes_cdf,
    dp_posterior,
    sample_dp,
    uniform_measure,
)

space = ProductSpace.from_domains(("X",), {"X": (0, 1)})
base = uniform_measure(space)

for nu in (0.1, 4.0, 400.0):
    theta = atoms_to_measure(sample_dp(DPParams(nu, base), SamplerConfig(seed=7)))
    print(f"nu={nu:6.1f}  theta({{0}}) = {theta.mass_at((0,)):.4f}")

# Monte Carlo check of the first two moments of theta({0}): mean 1/2,
# variance 1/(4 (nu + 1)).
nu, reps = 4.0, 4000
cfg = SamplerConfig(seed=99)
vals = [
    atoms_to_measure(sample_dp(DPParams(nu, base), cfg, replicate=r)).mass_at((0,))
    for r in range(reps)
]
mean = sum(vals) / reps
var = sum((v - mean) ** 2 for v in vals) / reps
print(f"\nacross {reps} draws: mean {mean:.4f} (expect 0.5),",
      f"variance {var:.4f} (expect {1 / (4 * (nu + 1)):.4f})")

# Conjugate update: nu grows by the sample size and the base absorbs
# the observations.
params = DPParams(2.0, base)
post = dp_posterior(params, [(0,), (0,), (1,)])
print("\nposterior nu:", post.nu)
print("posterior base:", post.base.mass)

# The same arithmetic drives the distribution-function estimate; with
# no data it is the prior, and data drag it toward the empirical law.
skewed = DiscreteMeasure(space, {(0,): 0.9, (1,): 0.1})
prior_only = bayes_cdf(DPParams(3.0, skewed), [], 0.5)
with_data = bayes_cdf(DPParams(3.0, skewed), [1, 1, 1, 1, 1, 1], 0.5)
print(f"\nP(X <= 0.5) with no data: {prior_only:.3f}")
print(f"P(X <= 0.5) after six observations of 1: {with_data:.3f}")
assert math.isclose(prior_only, 0.9)
