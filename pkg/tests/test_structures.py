"""Meta paths/structures and the stratified construction."""

import pytest

from hinsim import (LinkType, MetaPath, MetaStructure, NetworkSchema,
                    ObjectType, SmsConstructionError, as_meta_path,
                    bfs_tree_height, build_sms, expand_layers, extract_schema,
                    meta_structure_at, n_recurrences)
from hinsim.synthetic import random_bipartite_schema

from conftest import hin_from


def schema_of(names, edges):
    nodes = [ObjectType(i, n) for i, n in enumerate(names)]
    idx = {n: i for i, n in enumerate(names)}
    links = [LinkType(k, nodes[idx[a]], nodes[idx[b]], f"{a}-{b}")
             for k, (a, b) in enumerate(edges)]
    return NetworkSchema(nodes=nodes, edges=links)


@pytest.fixture
def biblio():
    # star: P in the middle, A/V/T leaves
    return schema_of("APVT", [("A", "P"), ("P", "V"), ("P", "T")])


def ids(schema, text):
    return tuple(sorted(schema.type_by_name(n).id for n in text.split(",")))


# -- meta paths and structures ----------------------------------------------

def test_meta_path_basics():
    mp = MetaPath((0, 1, 0), ("A", "P", "A"))
    assert mp.length == 2
    assert mp.source_type == 0 and mp.target_type == 0
    assert mp.is_symmetric()
    assert str(mp) == "(A,P,A)"


def test_meta_path_reverse_roundtrip():
    mp = MetaPath((0, 1, 2), ("A", "P", "V"))
    assert not mp.is_symmetric()
    assert mp.reverse().type_ids == (2, 1, 0)
    assert mp.reverse().reverse() == mp


def test_meta_path_validate(biblio):
    a, p, v = (biblio.type_by_name(n).id for n in "APV")
    MetaPath((a, p, v), ("A", "P", "V")).validate(biblio)
    with pytest.raises(ValueError, match="not adjacent"):
        MetaPath((a, v), ("A", "V")).validate(biblio)


def test_meta_structure_symmetry(biblio):
    a, p = (biblio.type_by_name(n).id for n in "AP")
    vt = ids(biblio, "V,T")
    ms = MetaStructure(((a,), (p,), vt, (p,), (a,)), a, a, ("A", "P", "V", "T"))
    assert ms.height == 4
    assert ms.is_symmetric()
    assert ms.reverse() == ms
    ms.validate(biblio)


def test_meta_structure_layer_guards():
    with pytest.raises(ValueError, match="layer 0"):
        MetaStructure(((0, 1), (0,)), 0, 0)
    with pytest.raises(ValueError, match="last layer"):
        MetaStructure(((0,), (0, 1)), 0, 1)


def test_as_meta_path_collapses_single_type_layers():
    ms = MetaStructure(((0,), (1,), (0,)), 0, 0, ("A", "P"))
    mp = as_meta_path(ms)
    assert mp is not None and mp.type_ids == (0, 1, 0)
    wide = MetaStructure(((0,), (1, 2), (0,)), 0, 0, ("A", "P", "V"))
    assert as_meta_path(wide) is None


# -- SMS construction ---------------------------------------------------------

def test_sms_star_schema(biblio):
    a = biblio.type_by_name("A").id
    sms = build_sms(biblio, a)
    assert sms.h0 == 2
    assert sms.basic_layers == [ids(biblio, "A"), ids(biblio, "P"),
                                ids(biblio, "V,T"), ids(biblio, "P")]
    assert sms.recurrent == (ids(biblio, "V,T"), ids(biblio, "P"))
    assert sms.l1_prime == ids(biblio, "P")
    assert sms.degree1_flag  # A's only schema neighbor is P
    assert not sms.degenerate


def test_sms_layer_periodicity(biblio):
    a = biblio.type_by_name("A").id
    sms = build_sms(biblio, a)
    assert sms.layer_types(17) == ids(biblio, "P")
    assert sms.layer_types(0) == (a,)
    for h in range(2, 12, 2):
        assert sms.layer_types(h) == ids(biblio, "V,T")
    with pytest.raises(ValueError):
        sms.layer_types(-1)


def test_sms_biological_shape():
    schema = schema_of(["G", "T", "GO", "CC", "Si", "Sub"],
                       [("G", "T"), ("G", "GO"), ("G", "CC"),
                        ("CC", "Si"), ("CC", "Sub")])
    g = schema.type_by_name("G").id
    sms = build_sms(schema, g)
    assert sms.h0 == 2
    assert sms.layer_types(1) == ids(schema, "T,GO,CC")
    assert sms.layer_types(2) == ids(schema, "Si,Sub")
    assert sms.layer_types(4) == ids(schema, "Si,Sub")
    assert sms.recurrent == (ids(schema, "Si,Sub"), ids(schema, "CC"))
    # degree-1 neighbors T and GO stay in L1 but not in L1'
    assert sms.l1_prime == ids(schema, "CC")
    assert not sms.degree1_flag  # deg(G) = 3


def test_sms_two_type_path_degenerates():
    schema = schema_of("AB", [("A", "B")])
    sms = build_sms(schema, schema.type_by_name("A").id)
    assert sms.h0 == 1
    assert sms.degenerate
    assert sms.layer_types(2) == ()


def test_sms_isolated_source_rejected():
    schema = schema_of("AB", [("A", "B")])
    lonely = NetworkSchema(nodes=schema.nodes + [ObjectType(2, "C")],
                           edges=schema.edges)
    with pytest.raises(SmsConstructionError, match="no SMS"):
        build_sms(lonely, 2)
    with pytest.raises(SmsConstructionError, match="not in schema"):
        build_sms(schema, 7)


def test_sms_odd_cycle_rejected():
    ring = schema_of("ABCDE", [("A", "B"), ("B", "C"), ("C", "D"),
                               ("D", "E"), ("E", "A")])
    with pytest.raises(SmsConstructionError, match="periodic"):
        build_sms(ring, 0)


def test_sms_self_loop_source_keeps_type():
    schema = schema_of("AB", [("A", "A"), ("A", "B")])
    a = schema.type_by_name("A").id
    sms = build_sms(schema, a)
    assert sms.self_loop_source
    assert a in sms.layer_types(1)
    assert a in sms.layer_types(5)


def test_sms_target_layers(biblio):
    sms = build_sms(biblio, biblio.type_by_name("A").id)
    assert sms.target_layers(10) == [2, 4, 6, 8, 10]


def test_sms_describe_notation(biblio):
    sms = build_sms(biblio, biblio.type_by_name("A").id)
    out = sms.describe()
    assert out.splitlines()[0] == "L_0: A_0"
    assert "P_3" in out
    assert "A_2 (target)" in out


# -- n_recurrences ------------------------------------------------------------

def test_n_recurrences_pinned_values():
    assert n_recurrences(6, 2) == 1
    assert n_recurrences(4, 2) == 0
    assert n_recurrences(12, 3) == 3


def test_n_recurrences_growth():
    for h0 in (1, 2, 3):
        assert n_recurrences(2 * h0, h0) == 0
        for h in range(2 * h0, 20, 2):
            assert n_recurrences(h + 2, h0) == n_recurrences(h, h0) + 1
    assert n_recurrences(2, 3) == 0


def test_n_recurrences_rejects_odd_h():
    with pytest.raises(ValueError, match="even"):
        n_recurrences(5, 2)
    with pytest.raises(ValueError):
        n_recurrences(0, 1)


# -- meta_structure_at --------------------------------------------------------

def test_meta_structure_at_height_two(biblio):
    sms = build_sms(biblio, biblio.type_by_name("A").id)
    ms = meta_structure_at(sms, 2)
    assert [tuple(l) for l in ms.layers] == [ids(biblio, "A"),
                                             ids(biblio, "P"),
                                             ids(biblio, "A")]
    assert as_meta_path(ms).names == ("A", "P", "A")


def test_meta_structure_at_height_four(biblio):
    sms = build_sms(biblio, biblio.type_by_name("A").id)
    ms = meta_structure_at(sms, 4)
    assert ms.layers == (ids(biblio, "A"), ids(biblio, "P"),
                         ids(biblio, "V,T"), ids(biblio, "P"),
                         ids(biblio, "A"))
    assert ms.is_symmetric()


def test_meta_structure_at_rejects_odd(biblio):
    sms = build_sms(biblio, biblio.type_by_name("A").id)
    with pytest.raises(ValueError, match="even"):
        meta_structure_at(sms, 3)


# -- Lemma-2 style properties over random schemas -----------------------------

@pytest.mark.parametrize("seed", range(30))
def test_expansion_properties(seed):
    schema = random_bipartite_schema(seed)
    sms = build_sms(schema, 0)
    h0 = sms.h0
    assert h0 == bfs_tree_height(schema, 0)
    depth = 2 * h0 + 6
    layers, target_layers = expand_layers(schema, 0, depth)

    # target occurrences only on even layers
    assert all(h % 2 == 0 for h in target_layers)
    # finite representation agrees with explicit expansion everywhere
    for h in range(depth + 1):
        assert sms.layer_types(h) == layers[h], f"layer {h}"
    assert sms.target_layers(depth) == target_layers

    for h in target_layers:
        ms = meta_structure_at(sms, h)
        assert ms.layers == tuple(reversed(ms.layers))
        ms.validate(schema)
        assert ms.reverse() == ms


def test_expansion_agreement_on_loaded_network(apvt):
    schema = extract_schema(apvt)
    a = schema.type_by_name("A").id
    sms = build_sms(schema, a)
    layers, target_layers = expand_layers(schema, a, 2 * sms.h0 + 6)
    assert target_layers == sms.target_layers(2 * sms.h0 + 6)
    for h, expected in enumerate(layers):
        assert sms.layer_types(h) == expected


def test_loaded_and_handbuilt_schema_agree(biblio, apvt):
    extracted = extract_schema(apvt)
    for name in "APVT":
        t_e = extracted.type_by_name(name)
        t_b = biblio.type_by_name(name)
        nbrs_e = {extracted.nodes[u].name for u in extracted.neighbors(t_e.id)}
        nbrs_b = {biblio.nodes[u].name for u in biblio.neighbors(t_b.id)}
        assert nbrs_e == nbrs_b
