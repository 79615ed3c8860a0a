"""Urn predictives, partition sampling, and collapsed Gibbs reassignment.

The exact oracle for small problems enumerates every latent value
vector (see conftest.exact_partition_law); Monte Carlo checks here stay
small and use 3-sigma bands.
"""

import math

import numpy as np
import pytest

from hyperdp import (
    ContinuousBase,
    DiscreteMeasure,
    ProductSpace,
    SamplerConfig,
    UrnState,
    ZeroMass,
    expected_clusters,
    gibbs_chain,
    gibbs_reassign,
    identity_likelihood,
    sample_partition,
    stream,
    uniform_measure,
    urn_predictive,
)
from hyperdp.mixture import _gibbs_weights

from conftest import exact_partition_law


def one_var_base(masses):
    sp = ProductSpace.from_domains(("X",), {"X": tuple(range(len(masses)))})
    return DiscreteMeasure(sp, {(i,): m for i, m in enumerate(masses)})


def distinct_base():
    return ContinuousBase(sampler=lambda rng: float(rng.random()))


def noisy_likelihood(x, pi):
    return 0.7 if tuple(x) == tuple(pi) else 0.3


# ------------------------------------------------------------------- urn


def test_urn_state_validation():
    base = one_var_base([0.5, 0.5])
    UrnState(((0,),), 1.0, base)
    with pytest.raises(ValueError):
        UrnState((), 0.0, base)
    with pytest.raises(ValueError):
        UrnState((), 1.0, one_var_base([0.5, 0.6]))
    with pytest.raises(ValueError):
        UrnState(((7,),), 1.0, base)
    with pytest.raises(TypeError):
        UrnState((), 1.0, "nope")


def test_urn_predictive_no_draws_is_base():
    base = one_var_base([0.3, 0.7])
    got = urn_predictive(UrnState((), 2.0, base))
    assert got.mass_at((0,)) == pytest.approx(0.3)
    assert got.mass_at((1,)) == pytest.approx(0.7)


def test_urn_predictive_counts_draws():
    base = one_var_base([0.5, 0.5])
    got = urn_predictive(UrnState(((0,),), 1.0, base))
    assert got.mass == {(0,): 0.75, (1,): 0.25}
    twice = urn_predictive(UrnState(((0,), (0,)), 1.0, base))
    assert twice.mass_at((0,)) == pytest.approx(2.5 / 3)


def test_urn_predictive_supports_values_off_the_base():
    base = one_var_base([1.0, 0.0])  # the zero cell is dropped at build
    got = urn_predictive(UrnState(((1,),), 1.0, base))
    assert got.mass_at((1,)) == pytest.approx(0.5)
    assert got.is_probability()


def test_urn_predictive_large_precision_recovers_base():
    base = one_var_base([0.2, 0.3, 0.5])
    state = UrnState(((0,), (2,), (2,)), 1e9, base)
    got = urn_predictive(state)
    gap = max(abs(got.mass_at(x) - base.mass_at(x)) for x in base.space.assignments())
    assert gap < 1e-8


def test_urn_predictive_requires_discrete_base():
    with pytest.raises(TypeError):
        urn_predictive(UrnState((), 1.0, distinct_base()))


# -------------------------------------------------------------- partitions


def test_sample_partition_is_deterministic_and_canonical():
    cfg = SamplerConfig(seed=99)
    labels = sample_partition(1.0, distinct_base(), 12, cfg)
    again = sample_partition(1.0, distinct_base(), 12, cfg)
    assert labels == again
    assert labels[0] == 0
    # first-appearance canonicalization: a new label is always +1
    seen = 0
    for lab in labels:
        assert lab <= seen
        seen = max(seen, lab + 1)
    other = sample_partition(1.0, distinct_base(), 12, cfg, replicate=3)
    assert other != labels


def test_sample_partition_precision_extremes():
    cfg = SamplerConfig(seed=4)
    for r in range(5):
        merged = sample_partition(1e-9, distinct_base(), 6, cfg, replicate=r)
        assert merged == [0] * 6
        split = sample_partition(1e12, distinct_base(), 6, cfg, replicate=r)
        assert split == list(range(6))
    with pytest.raises(ValueError):
        sample_partition(0.0, distinct_base(), 3, cfg)


def test_expected_clusters_values():
    assert expected_clusters(1.0, 3) == pytest.approx(1 + 1 / 2 + 1 / 3)
    assert expected_clusters(2.0, 1) == 1.0
    assert expected_clusters(5.0, 0) == 0.0
    with pytest.raises(ValueError):
        expected_clusters(-1.0, 3)


def test_mean_cluster_count_matches_formula():
    a, n, reps = 1.0, 5, 2000
    cfg = SamplerConfig(seed=31)
    counts = np.empty(reps)
    for r in range(reps):
        counts[r] = len(set(sample_partition(a, distinct_base(), n, cfg, replicate=r)))
    want = expected_clusters(a, n)
    # K is a sum of independent indicators, so its variance is known too
    var = math.fsum((a / (a + i)) * (1 - a / (a + i)) for i in range(n))
    assert abs(counts.mean() - want) < 3 * math.sqrt(var / reps)


def test_three_element_partition_exchangeability():
    # the three "pair plus singleton" patterns are exchangeable, each
    # with probability 1/6 at a=1; compare their counts with chi-square
    reps = 3000
    cfg = SamplerConfig(seed=8)
    counts = {}
    for r in range(reps):
        pattern = tuple(sample_partition(1.0, distinct_base(), 3, cfg, replicate=r))
        counts[pattern] = counts.get(pattern, 0) + 1
    pair_patterns = [(0, 0, 1), (0, 1, 0), (0, 1, 1)]
    pair_counts = [counts.get(p, 0) for p in pair_patterns]
    expected = sum(pair_counts) / 3
    chi2 = sum((c - expected) ** 2 / expected for c in pair_counts)
    assert chi2 < 13.8  # df=2, p about 0.001
    for c in pair_counts:
        assert abs(c / reps - 1 / 6) < 3 * math.sqrt((1 / 6) * (5 / 6) / reps)


def test_sample_partition_matches_enumeration_with_atomic_base():
    # a two-point base can repeat values, so the pair probability is
    # 0.75 rather than the atomless 0.5
    base = one_var_base([0.5, 0.5])
    law = exact_partition_law([(0,), (1,)], lambda x, pi: 1.0, 1.0, base)
    assert law[(0, 0)] == pytest.approx(0.75)
    reps = 2000
    cfg = SamplerConfig(seed=63)
    same = sum(
        sample_partition(1.0, base, 2, cfg, replicate=r) == [0, 0] for r in range(reps)
    )
    assert abs(same / reps - 0.75) < 3 * math.sqrt(0.75 * 0.25 / reps)


# ------------------------------------------------------------------- gibbs


def test_gibbs_weights_match_urn_predictive_under_flat_likelihood():
    base = one_var_base([0.25, 0.75])
    assignments = [(0,), (1,), (1,), (0,)]
    data = assignments
    a = 1.5
    i = 2
    candidates, weights = _gibbs_weights(i, assignments, data, lambda x, pi: 1.0, a, base)
    others = tuple(p for j, p in enumerate(assignments) if j != i)
    predictive = urn_predictive(UrnState(others, a, base))
    total = math.fsum(weights)
    for cand, w in zip(candidates, weights):
        assert w / total == pytest.approx(predictive.mass_at(cand), abs=1e-15)


def test_gibbs_weights_include_off_base_values():
    base = one_var_base([1.0, 0.0])
    candidates, weights = _gibbs_weights(
        0, [(0,), (1,)], [(0,), (1,)], lambda x, pi: 1.0, 1.0, base
    )
    assert (1,) in candidates
    assert weights[candidates.index((1,))] == pytest.approx(1.0)


def test_gibbs_reassign_point_likelihood_pins_value():
    base = one_var_base([0.5, 0.5])
    rng = stream(17)
    data = [(1,), (0,)]
    for _ in range(10):
        got = gibbs_reassign(0, [(0,), (0,)], data, identity_likelihood, 1.0, base, rng)
        assert got == (1,)


def test_gibbs_reassign_zero_likelihood_raises():
    base = one_var_base([0.5, 0.5])
    with pytest.raises(ZeroMass):
        gibbs_reassign(0, [(0,)], [(0,)], lambda x, pi: 0.0, 1.0, base, stream(1))


def test_gibbs_reassign_single_observation_samples_base():
    base = one_var_base([0.2, 0.8])
    rng = stream(23)
    draws = [
        gibbs_reassign(0, [(0,)], [(0,)], lambda x, pi: 1.0, 1.0, base, rng)
        for _ in range(2000)
    ]
    freq = sum(1 for d in draws if d == (1,)) / len(draws)
    assert abs(freq - 0.8) < 3 * math.sqrt(0.8 * 0.2 / 2000)


def test_gibbs_chain_shapes_and_determinism():
    base = one_var_base([0.5, 0.5])
    data = [(0,), (1,), (0,)]
    cfg = SamplerConfig(seed=41)
    final, history = gibbs_chain(data, noisy_likelihood, 1.0, base, 4, cfg)
    assert len(final) == 3
    assert len(history) == 4
    assert all(len(h) == 3 for h in history)
    again, history2 = gibbs_chain(data, noisy_likelihood, 1.0, base, 4, cfg)
    assert final == again and history == history2


def test_gibbs_chain_identity_likelihood_locks_to_data():
    base = one_var_base([0.5, 0.5])
    data = [(0,), (1,), (0,)]
    final, history = gibbs_chain(data, identity_likelihood, 1.0, base, 2, SamplerConfig(seed=5))
    assert final == data
    assert history[-1] == [0, 1, 0]


def test_gibbs_chain_reaches_exact_stationary_law():
    # two observations, soft likelihood: the pattern law is computable
    # by enumeration, and independent short chains should match it
    base = one_var_base([0.5, 0.5])
    data = [(0,), (1,)]
    a = 1.0
    law = exact_partition_law(data, noisy_likelihood, a, base)
    p_same = law[(0, 0)]
    assert p_same == pytest.approx(0.1575 / 0.23)
    reps, sweeps = 600, 12
    cfg = SamplerConfig(seed=2718)
    hits = 0
    for r in range(reps):
        _, history = gibbs_chain(data, noisy_likelihood, a, base, sweeps, cfg, replicate=r)
        hits += history[-1] == [0, 0]
    assert abs(hits / reps - p_same) < 3 * math.sqrt(p_same * (1 - p_same) / reps)


def test_identity_likelihood():
    assert identity_likelihood((0, 1), (0, 1)) == 1.0
    assert identity_likelihood((0, 1), (1, 1)) == 0.0
    assert identity_likelihood([0, 1], (0, 1)) == 1.0
