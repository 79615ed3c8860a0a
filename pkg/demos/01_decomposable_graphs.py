"""
Decomposable graphs and their clique decompositions
====================================================

A graph qualifies for everything else in this library when it is
connected and chordal.  This script builds a few small graphs, asks
which ones qualify, and walks through the clique/separator/history
bookkeeping that every later construction relies on.
"""

from hyperdp import build_graph, is_decomposable, perfect_ordering
from hyperdp.errors import NotDecomposable

# A path I - J - K: the smallest interesting decomposable graph.
path = build_graph(("I", "J", "K"), [("I", "J"), ("J", "K")])
print("path is decomposable:", is_decomposable(path))

decomp = perfect_ordering(path)
print("cliques:   ", decomp.cliques)
print("separators:", decomp.separators)
print("histories: ", decomp.histories)
print("residuals: ", decomp.residuals)

# The running-intersection property in words: each new clique meets
# everything before it inside a single earlier clique.
for k, sep in enumerate(decomp.separators, start=1):
    print(f"clique {decomp.cliques[k]} attaches through separator {sep}")

# A four-cycle has no chord, so it is rejected outright.
square = build_graph("WXYZ", [("W", "X"), ("X", "Y"), ("Y", "Z"), ("Z", "W")])
print()
print("square is decomposable:", is_decomposable(square))
try:
    perfect_ordering(square)
except NotDecomposable as exc:
    print("perfect_ordering refuses:", exc)

# Adding one chord repairs it.
repaired = build_graph(
    "WXYZ", [("W", "X"), ("X", "Y"), ("Y", "Z"), ("Z", "W"), ("W", "Y")]
)
fixed = perfect_ordering(repaired)
print("with chord W-Y, cliques:", fixed.cliques)

# A complete graph is one single clique; a tree is all edges.
k4 = build_graph("ABCD", [(a, b) for i, a in enumerate("ABCD") for b in "ABCD"[i + 1 :]])
print("K4 cliques:", perfect_ordering(k4).cliques)
star = build_graph("RSTU", [("R", "S"), ("R", "T"), ("R", "U")])
print("star cliques:", perfect_ordering(star).cliques)
