import numpy as np
import pytest
from conftest import write_synthetic_arn

from c4cluster.arn import (
    DuplicateEdgeWarning,
    parse_arn,
    population_similarity,
    symmetrize,
)
from c4cluster.errors import MalformedLineError, NonpositivePopulationError, UnknownCityError
from c4cluster.fileio import read_edge_list, write_edge_list


def _write(tmp_path, edges, cities):
    e, c = tmp_path / "edges.csv", tmp_path / "cities.csv"
    e.write_text(edges)
    c.write_text(cities)
    return e, c


CITIES = "city_id,name,population\nA,Alpha,1000\nB,Beta,2000\nC,Gamma,3000\n"


def test_mutual_pair_weight_and_one_way_dropped(tmp_path):
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,60\nB,A,120\nA,C,30\n", CITIES)
    net = parse_arn(e, c)
    assert net.summary() == {"nodes": 3, "directed_edges": 3, "mutual_pairs": 1, "one_directional_pairs": 1}
    g = symmetrize(net)
    assert g.weights[0, 1] == pytest.approx(1 / 90)
    assert g.weights[0, 2] == 0 and g.n_edges() == 1


def test_hours_unit(tmp_path):
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,1\nB,A,2\n", CITIES)
    g = symmetrize(parse_arn(e, c, unit="hours"))
    assert g.weights[0, 1] == pytest.approx(1 / 90)


def test_weight_decreases_with_travel_time(tmp_path):
    weights = []
    for t in (60, 90, 200):
        e, c = _write(tmp_path, f"origin,destination,travel_time\nA,B,{t}\nB,A,100\n", CITIES)
        weights.append(symmetrize(parse_arn(e, c)).weights[0, 1])
    assert weights[0] > weights[1] > weights[2]


def test_population_similarity(tmp_path):
    cities = f"city_id,name,population\nA,a,{np.e**2!r}\nB,b,{np.e**4!r}\n"
    e, c = _write(tmp_path, "origin,destination,travel_time\n", cities)
    with pytest.warns(UserWarning):
        net = parse_arn(e, c)
    assert net.n_directed == 0
    s = population_similarity(net)
    assert s.sims[0, 1] == pytest.approx(3.0)


def test_equal_populations(tmp_path):
    cities = "city_id,name,population\nA,a,5000\nB,b,5000\nC,c,5000\n"
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,10\n", cities)
    s = population_similarity(parse_arn(e, c)).sims
    assert np.allclose(s[~np.eye(3, dtype=bool)], np.log(5000))


def test_errors(tmp_path):
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,Z,60\n", CITIES)
    with pytest.raises(UnknownCityError):
        parse_arn(e, c)
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,abc\n", CITIES)
    with pytest.raises(MalformedLineError) as info:
        parse_arn(e, c)
    assert info.value.lineno == 2
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,-5\n", CITIES)
    with pytest.raises(MalformedLineError):
        parse_arn(e, c)
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,3000\n", CITIES)
    with pytest.raises(MalformedLineError):
        parse_arn(e, c)
    e, c = _write(tmp_path, "origin,destination,travel_time\n", "city_id,name,population\nA,a,0\nB,b,5\n")
    with pytest.warns(UserWarning):
        net = parse_arn(e, c)
    with pytest.raises(NonpositivePopulationError):
        population_similarity(net)


def test_duplicate_keeps_first(tmp_path):
    e, c = _write(tmp_path, "origin,destination,travel_time\nA,B,60\nA,B,99\nB,A,60\n", CITIES)
    with pytest.warns(DuplicateEdgeWarning):
        net = parse_arn(e, c)
    assert net.n_directed == 2
    assert symmetrize(net).weights[0, 1] == pytest.approx(1 / 60)


def test_custom_columns_and_headerless(tmp_path):
    e, c = _write(tmp_path, "to,from,mins\nB,A,60\nA,B,60\n", "id,label,pop\nA,a,10\nB,b,20\n")
    net = parse_arn(e, c, edge_columns=("from", "to", "mins"), city_columns=("id", "label", "pop"))
    assert net.summary()["mutual_pairs"] == 1
    e, c = _write(tmp_path, "A,B,60\nB,A,60\n", "A,a,10\nB,b,20\n")
    assert parse_arn(e, c).summary()["mutual_pairs"] == 1


def test_synthetic_counts_and_round_trip(tmp_path):
    edges, cities, n_pairs, n_rows = write_synthetic_arn(tmp_path, one_way=3)
    net = parse_arn(edges, cities)
    mutual, one_way = net.pair_counts()
    assert net.n_directed == n_rows
    assert (mutual, one_way) == (n_pairs - 3, 3)
    g = symmetrize(net)
    assert g.n_edges() == mutual
    write_edge_list(g, tmp_path / "g.tsv")
    back = read_edge_list(tmp_path / "g.tsv", nodes=g.node_ids)
    np.testing.assert_allclose(back.weights, g.weights, rtol=1e-12, atol=0)
