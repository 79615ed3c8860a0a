"""Interchange formats: bit-exact mass strings, JSON dicts, CSV data."""

import json

import pytest

from hyperdp import (
    DiscreteMeasure,
    ProductSpace,
    WeightedAtoms,
    atoms_to_json_line,
    build_graph,
    data_from_csv_text,
    decomposition_to_dict,
    graph_from_dict,
    graph_to_dict,
    hdp_spec_from_dict,
    hdp_spec_to_dict,
    likelihood_from_dict,
    load_data_csv,
    load_json,
    mass_str,
    measure_from_dict,
    measure_to_dict,
    perfect_ordering,
)


AWKWARD = [0.1, 1 / 3, 0.30000000000000004, 1e-300, 2e17, 5e-324]


def test_mass_strings_round_trip_bit_exact():
    for v in AWKWARD:
        assert float(mass_str(v)) == v
    assert mass_str(0.1) == "0.1"


def test_graph_round_trip():
    g = build_graph((3, 1, 2), [(1, 2), (2, 3)])
    d = graph_to_dict(g)
    assert d["vertices"] == [3, 1, 2]
    # pairs are ordered, and listed, by declaration index; 3 came first
    assert d["edges"] == [[3, 2], [1, 2]]
    assert graph_from_dict(d) == g
    assert json.dumps(d) == json.dumps(graph_to_dict(g))


def test_decomposition_to_dict(path_graph):
    d = decomposition_to_dict(perfect_ordering(path_graph))
    assert d["cliques"] == [["I", "J"], ["J", "K"]]
    assert d["separators"] == [["J"]]
    assert d["histories"] == [["I", "J"], ["I", "J", "K"]]
    assert d["residuals"] == [["K"]]


def test_measure_round_trip_preserves_bits():
    sp = ProductSpace.from_domains(("I", "J"), {"I": (0, 1), "J": (0, 1)})
    m = DiscreteMeasure(sp, {(0, 0): 0.1, (0, 1): 1 / 3, (1, 1): 1e-300})
    d = measure_to_dict(m)
    assert d["points"][0] == {"assignment": {"I": 0, "J": 0}, "mass": "0.1"}
    assert measure_from_dict(d) == m
    # a pass through actual JSON text changes nothing
    assert measure_from_dict(json.loads(json.dumps(d))) == m


def test_measure_from_dict_accumulates_duplicates():
    d = {
        "variables": ["X"],
        "domains": {"X": [0, 1]},
        "points": [
            {"assignment": {"X": 0}, "mass": "0.25"},
            {"assignment": {"X": 0}, "mass": "0.25"},
        ],
    }
    assert measure_from_dict(d).mass == {(0,): 0.5}


def test_hdp_spec_round_trip(path_graph, uniform_ij, copy_jk):
    d = hdp_spec_to_dict(path_graph, 4.0, [uniform_ij, copy_jk])
    graph, nu, bases = hdp_spec_from_dict(json.loads(json.dumps(d)))
    assert graph == path_graph
    assert nu == 4.0
    assert bases == [uniform_ij, copy_jk]


def test_atoms_json_line_schema_and_round_trip():
    sp = ProductSpace.from_domains(("X",), {"X": (0, 1)})
    theta = WeightedAtoms(((0,), (1,)), (0.75, 0.25), 1e-11, sp)
    line = atoms_to_json_line(theta, seed=7, replicate=2)
    obj = json.loads(line)
    assert set(obj) == {"atoms", "weights", "residual", "seed", "replicate"}
    assert obj["atoms"] == [[0], [1]]
    assert obj["seed"] == 7 and obj["replicate"] == 2
    rebuilt = WeightedAtoms(
        tuple(tuple(a) for a in obj["atoms"]), tuple(obj["weights"]), obj["residual"], sp
    )
    assert rebuilt == theta


def test_atoms_json_line_scalar_atoms():
    theta = WeightedAtoms((0.125, 0.875), (0.5, 0.5), 0.0, None)
    obj = json.loads(atoms_to_json_line(theta, seed=1, replicate=0))
    assert obj["atoms"] == [0.125, 0.875]


def test_load_json(tmp_path):
    path = tmp_path / "payload.json"
    path.write_text('{"nu": 2.5}', encoding="utf-8")
    assert load_json(path) == {"nu": 2.5}
    with pytest.raises(OSError):
        load_json(tmp_path / "missing.json")


# --------------------------------------------------------------------- csv


def test_csv_parses_numeric_and_text_categories():
    sp = ProductSpace.from_domains(("I", "tag"), {"I": (0, 1), "tag": ("a", "b")})
    rows = data_from_csv_text("I,tag\n0,a\n1,b\n1,a\n", sp)
    assert rows == [(0, "a"), (1, "b"), (1, "a")]


def test_csv_ignores_column_order_and_extras():
    sp = ProductSpace.from_domains(("I", "J"), {"I": (0, 1), "J": (0, 1)})
    rows = data_from_csv_text("note,J,I\nx,1,0\ny,0,1\n", sp)
    assert rows == [(0, 1), (1, 0)]


def test_csv_errors():
    sp = ProductSpace.from_domains(("I", "J"), {"I": (0, 1), "J": (0, 1)})
    with pytest.raises(ValueError, match="missing columns"):
        data_from_csv_text("I\n0\n", sp)
    with pytest.raises(ValueError, match="line 3"):
        data_from_csv_text("I,J\n0,1\n2,0\n", sp)
    with pytest.raises(ValueError, match="header"):
        data_from_csv_text("", sp)
    clash = ProductSpace.from_domains(("X",), {"X": (1, "1")})
    with pytest.raises(ValueError, match="collide"):
        data_from_csv_text("X\n1\n", clash)


def test_load_data_csv(tmp_path):
    sp = ProductSpace.from_domains(("I",), {"I": (0, 1)})
    path = tmp_path / "data.csv"
    path.write_text("I\n0\n1\n1\n", encoding="utf-8")
    assert load_data_csv(path, sp) == [(0,), (1,), (1,)]


def test_likelihood_from_dict():
    sp = ProductSpace.from_domains(("X",), {"X": (0, 1)})
    table = {
        "entries": [
            {"x": {"X": 0}, "pi": {"X": 0}, "prob": 0.9},
            {"x": {"X": 1}, "pi": {"X": 0}, "prob": 0.1},
        ]
    }
    f = likelihood_from_dict(table, sp, sp)
    assert f((0,), (0,)) == 0.9
    assert f([1], (0,)) == 0.1
    assert f((1,), (1,)) == 0.0
    with pytest.raises(ValueError):
        likelihood_from_dict(
            {"entries": [{"x": {"X": 9}, "pi": {"X": 0}, "prob": 1.0}]}, sp, sp
        )
