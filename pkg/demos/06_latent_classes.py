"""
Latent classes from an urn scheme
==================================

The same concentration parameter that drives random-measure draws
also governs how observations clump into classes: each new arrival
either starts a fresh class or joins an existing one in proportion to
its size.  Collapsed sweeps then sort noisy observations into classes
without ever fixing the number of classes in advance.
"""

from collections import Counter

from hyperdp import (
    ContinuousBase,
    ProductSpace,
    SamplerConfig,
    UrnState,
    expected_clusters,
    gibbs_chain,
    sample_partition,
    uniform_measure,
    urn_predictive,
)

# The predictive for the next observation: base mass plus a bump at
# every value already seen.
space = ProductSpace.from_domains(("X",), {"X": (0, 1, 2)})
base = uniform_measure(space)
pred = urn_predictive(UrnState(((0,), (0,), (2,)), 1.0, base))
print("predictive after seeing 0, 0, 2:", pred.mass)

# How many classes to expect among n arrivals, as a grows.
for a in (0.5, 1.0, 4.0):
    print(f"a={a}: expected classes among 10 arrivals = {expected_clusters(a, 10):.2f}")

# Simulated label sequences.  Labels are first-appearance order, so
# the first one is always 0.
sampler = ContinuousBase(sampler=lambda rng: float(rng.random()))
cfg = SamplerConfig(seed=2024)
counts = Counter(
    len(set(sample_partition(1.0, sampler, 10, cfg, replicate=r))) for r in range(2000)
)
print("\nclass-count histogram over 2000 runs (a=1, n=10):")
for k in sorted(counts):
    print(f"  {k:2d} classes: {'#' * (counts[k] // 25)}")

# Collapsed sweeps recover structure from noisy observations.  Eight
# observations, half 0s and half 2s; the likelihood trusts a match
# strongly, so the sweeps settle on two classes.
data = [(0,), (0,), (2,), (0,), (2,), (2,), (0,), (2,)]

def likelihood(x, pi):
    return 0.9 if x == pi else 0.05

final, history = gibbs_chain(data, likelihood, 1.0, base, 30, SamplerConfig(seed=5))
print("\nfinal class values:", [v[0] for v in final])
print("final labels:      ", history[-1])
sizes = Counter(history[-1])
print("class sizes:", dict(sizes))
