import itertools

import pytest

from hyperdp import (
    DiscreteMeasure,
    ProductSpace,
    build_graph,
    perfect_ordering,
)


@pytest.fixture
def path_graph():
    return build_graph(("I", "J", "K"), [("I", "J"), ("J", "K")])


@pytest.fixture
def path_decomp(path_graph):
    return perfect_ordering(path_graph)


@pytest.fixture
def space_ij():
    return ProductSpace.from_domains(("I", "J"), {"I": (0, 1), "J": (0, 1)})


@pytest.fixture
def space_jk():
    return ProductSpace.from_domains(("J", "K"), {"J": (0, 1), "K": (0, 1)})


@pytest.fixture
def space_ijk():
    return ProductSpace.from_domains(
        ("I", "J", "K"), {"I": (0, 1), "J": (0, 1), "K": (0, 1)}
    )


@pytest.fixture
def uniform_ij(space_ij):
    return DiscreteMeasure(space_ij, {x: 0.25 for x in space_ij.assignments()})


@pytest.fixture
def copy_jk(space_jk):
    # K repeats J, so the J-value pins down the whole clique
    return DiscreteMeasure(space_jk, {(0, 0): 0.5, (1, 1): 0.5})


def random_joint(rng, variables, domain_sizes):
    """A strictly positive random measure on the given product space."""
    space = ProductSpace.from_domains(
        tuple(variables),
        {v: tuple(range(k)) for v, k in zip(variables, domain_sizes)},
    )
    mass = {x: float(rng.uniform(0.1, 1.0)) for x in space.assignments()}
    return DiscreteMeasure(space, mass)


def all_graphs(n):
    """Every labeled graph on vertices 0..n-1."""
    verts = tuple(range(n))
    pairs = list(itertools.combinations(verts, 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        edges = [p for p, b in zip(pairs, bits) if b]
        yield build_graph(verts, edges)


def exact_partition_law(data, likelihood, a, base):
    """Posterior over label patterns by brute enumeration of value vectors.

    Feasible only for tiny problems: the sum runs over |support| ** n
    latent vectors, scoring each by the sequential urn prior times the
    likelihood, then aggregating vectors into first-appearance label
    patterns.
    """
    support = list(base.mass)
    out = {}
    for vec in itertools.product(support, repeat=len(data)):
        weight = 1.0
        for i, v in enumerate(vec):
            repeats = sum(1 for w in vec[:i] if w == v)
            weight *= (a * base.mass_at(v) + repeats) / (a + i)
        for x, v in zip(data, vec):
            weight *= likelihood(x, v)
        labels = {}
        pattern = tuple(labels.setdefault(v, len(labels)) for v in vec)
        out[pattern] = out.get(pattern, 0.0) + weight
    total = sum(out.values())
    return {k: v / total for k, v in out.items() if v > 0.0}
