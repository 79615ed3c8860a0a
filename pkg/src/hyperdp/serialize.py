"""JSON and CSV interchange for graphs, measures, and samples.

Masses travel as decimal strings produced by ``repr`` on the float, so
a serialize/parse round trip is bit exact on any platform.  All emitted
key orders are fixed by construction, which keeps byte-level output
deterministic.
"""

from __future__ import annotations

import csv
import io
import json

from .graphs import build_graph
from .measures import DiscreteMeasure, ProductSpace


def mass_str(value):
    return repr(float(value))


def graph_to_dict(g):
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
    }


def graph_from_dict(obj):
    return build_graph(obj["vertices"], [tuple(e) for e in obj["edges"]])


def decomposition_to_dict(decomp):
    return {
        "cliques": [list(c) for c in decomp.cliques],
        "separators": [list(s) for s in decomp.separators],
        "histories": [list(h) for h in decomp.histories],
        "residuals": [list(r) for r in decomp.residuals],
    }


def measure_to_dict(m):
    return {
        "variables": list(m.space.variables),
        "domains": {v: list(dom) for v, dom in zip(m.space.variables, m.space.domains)},
        "points": [
            {
                "assignment": dict(zip(m.space.variables, x)),
                "mass": mass_str(v),
            }
            for x, v in m.mass.items()
        ],
    }


def measure_from_dict(obj):
    space = ProductSpace.from_domains(obj["variables"], obj["domains"])
    mass = {}
    for point in obj["points"]:
        x = space.as_tuple(point["assignment"])
        mass[x] = mass.get(x, 0.0) + float(point["mass"])
    return DiscreteMeasure(space, mass)


def hdp_spec_to_dict(graph, nu, clique_bases):
    return {
        "graph": graph_to_dict(graph),
        "nu": float(nu),
        "clique_bases": [measure_to_dict(b) for b in clique_bases],
    }


def hdp_spec_from_dict(obj):
    """Parse the raw pieces; validation happens when they are assembled."""
    graph = graph_from_dict(obj["graph"])
    nu = float(obj["nu"])
    bases = [measure_from_dict(b) for b in obj["clique_bases"]]
    return graph, nu, bases


def atoms_to_json_line(theta, seed, replicate):
    """One draw as a compact JSON line with reproducibility metadata."""
    atoms = [list(a) if isinstance(a, tuple) else a for a in theta.atoms]
    return json.dumps(
        {
            "atoms": atoms,
            "weights": list(theta.weights),
            "residual": theta.truncation_residual,
            "seed": seed,
            "replicate": replicate,
        }
    )


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _category_parser(domain, var):
    by_str = {}
    for cat in domain:
        key = str(cat)
        if key in by_str:
            raise ValueError(
                f"variable {var!r} has categories that collide as text: {key!r}"
            )
        by_str[key] = cat
    return by_str


def data_from_csv_text(text, space):
    """Observations from CSV with one column per variable.

    Cell text is matched against the string form of each category, so
    numeric and string categories both round trip.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ValueError("data CSV has no header row")
    missing = [v for v in space.variables if v not in reader.fieldnames]
    if missing:
        raise ValueError(f"data CSV is missing columns {missing!r}")
    parsers = {
        v: _category_parser(space.domain(v), v) for v in space.variables
    }
    rows = []
    for lineno, row in enumerate(reader, start=2):
        values = []
        for v in space.variables:
            cell = row[v]
            if cell not in parsers[v]:
                raise ValueError(
                    f"line {lineno}: value {cell!r} is not a category of {v!r}"
                )
            values.append(parsers[v][cell])
        rows.append(tuple(values))
    return rows


def load_data_csv(path, space):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return data_from_csv_text(fh.read(), space)


def likelihood_from_dict(obj, data_space, base_space):
    """Sparse likelihood table f(x | value); absent pairs mean zero."""
    table = {}
    for entry in obj["entries"]:
        x = data_space.as_tuple(entry["x"])
        pi = base_space.as_tuple(entry["pi"])
        table[(x, pi)] = float(entry["prob"])

    def f(x, pi):
        return table.get((tuple(x), tuple(pi)), 0.0)

    return f
