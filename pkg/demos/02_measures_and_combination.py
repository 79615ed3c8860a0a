"""
Discrete measures, marginals, and the Markov combination
=========================================================

Two measures that agree on their shared variables can be glued into
one measure on the union of their variables.  The glue hangs each
side's conditional off the shared marginal, so the result factorizes
over the two blocks.
"""

from hyperdp import (
    DiscreteMeasure,
    ProductSpace,
    is_consistent,
    is_markov,
    marginalize,
    markov_combination,
    normalize,
    ordering_from_cliques,
    build_graph,
    uniform_measure,
)

sp_ij = ProductSpace.from_domains(("I", "J"), {"I": (0, 1), "J": (0, 1)})
sp_jk = ProductSpace.from_domains(("J", "K"), {"J": (0, 1), "K": (0, 1)})

# Uniform on (I, J); perfectly correlated on (J, K).
uniform_ij = uniform_measure(sp_ij)
copy_jk = DiscreteMeasure(sp_jk, {(0, 0): 0.5, (1, 1): 0.5})

# Both give J a fair-coin marginal, so they are consistent.
report = is_consistent(uniform_ij, copy_jk)
print("consistent:", report.consistent, "| overlap:", report.overlap)

combined = markov_combination(uniform_ij, copy_jk)
print("combined support:")
for point, mass in sorted(combined.mass.items()):
    print("  ", dict(zip(combined.space.variables, point)), "->", mass)

# Gluing loses nothing: both inputs come back as marginals.
print("I,J marginal restored:", marginalize(combined, ("I", "J")).mass == uniform_ij.mass)
print("J,K marginal restored:", marginalize(combined, ("J", "K")).mass == copy_jk.mass)

# The result is Markov with respect to the two-clique path I - J - K.
graph = build_graph(("I", "J", "K"), [("I", "J"), ("J", "K")])
decomp = ordering_from_cliques(graph, [("I", "J"), ("J", "K")])
print("factorizes over the path:", is_markov(combined, decomp))

# The full uniform joint on three variables also factorizes.  An XOR
# table does not: given J, knowing I pins K, so the ends of the path
# are not conditionally independent.
sp_ijk = ProductSpace.from_domains(
    ("I", "J", "K"), {"I": (0, 1), "J": (0, 1), "K": (0, 1)}
)
xor = normalize(
    DiscreteMeasure(
        sp_ijk, {(0, 0, 0): 1.0, (0, 1, 1): 1.0, (1, 0, 1): 1.0, (1, 1, 0): 1.0}
    )
)
print("uniform joint factorizes:", is_markov(uniform_measure(sp_ijk), decomp))
print("xor table factorizes:", is_markov(xor, decomp))
