"""Loader, census, schema extraction, and BFS height."""

import pytest

from hinsim import (HIN, IngestError, bfs_tree_height, extract_schema,
                    load_hin)

from conftest import AP_EDGES, AP_NODES, APVT_EDGES, APVT_NODES, hin_from


def test_census_counts(apvt):
    assert apvt.n_objects() == 12
    assert len(apvt.types) == 4
    assert apvt.n_link_types() == 3
    by_name = {t.name: apvt.count(t.id) for t in apvt.types}
    assert by_name == {"A": 3, "P": 4, "V": 2, "T": 3}
    assert apvt.n_links() == 16


def test_first_seen_ordinals(apvt):
    # per-type ordinals follow file order, independent of other types
    assert [apvt.ordinal(o) for o in ("a1", "a2", "a3")] == [0, 1, 2]
    assert [apvt.ordinal(o) for o in ("p1", "p2", "p3", "p4")] == [0, 1, 2, 3]
    assert apvt.object_at(apvt.objects["t2"][0], 1) == "t2"


def test_links_are_symmetric(apvt):
    assert apvt.linked("a1", "p1")
    assert apvt.linked("p1", "a1")
    assert not apvt.linked("a1", "p3")


def test_duplicate_node_same_type_is_idempotent():
    hin = hin_from("a1\tA\na1\tA\np1\tP\n", "a1\tp1\n")
    assert hin.n_objects() == 2


def test_conflicting_redeclaration_rejected():
    with pytest.raises(IngestError, match="line 2"):
        hin_from("a1\tA\na1\tP\n", "")


def test_edge_to_unknown_object_names_line():
    with pytest.raises(IngestError, match="line 3.*ghost"):
        hin_from("a1\tA\np1\tP\n", "a1\tp1\n\na1\tghost\n")


def test_malformed_node_line_rejected():
    with pytest.raises(IngestError, match="line 1"):
        hin_from("a1 A\n", "")


def test_malformed_edge_line_rejected():
    with pytest.raises(IngestError, match="line 2"):
        hin_from("a1\tA\np1\tP\n", "a1\tp1\na1\tp1\textra\tmore\n")


def test_empty_inputs_give_empty_network():
    hin = hin_from("", "")
    assert hin.n_objects() == 0
    assert hin.n_links() == 0
    assert extract_schema(hin).nodes == []


def test_comments_and_blank_lines_skipped():
    hin = hin_from("# heading\n\na1\tA\n# more\np1\tP\n", "\na1\tp1\n")
    assert hin.n_objects() == 2
    assert hin.n_links() == 1


def test_parallel_edges_collapse_in_pair_matrix():
    hin = hin_from("a1\tA\np1\tP\n", "a1\tp1\na1\tp1\n")
    m = hin.pair_matrix(0, 1)
    assert m[0, 0] == 1.0


def test_explicit_link_name_kept():
    hin = hin_from("a1\tA\np1\tP\n", "a1\tp1\twrites\n")
    assert ("A", "P", "writes") in {
        (hin.types[lo].name, hin.types[hi].name, name)
        for lo, hi, name in hin.undirected_link_types}


def test_derived_link_name_uses_type_pair():
    hin = hin_from("a1\tA\np1\tP\n", "a1\tp1\n")
    assert {n for _, _, n in hin.undirected_link_types} == {"A-P"}


def test_load_accepts_paths(tmp_path):
    nodes = tmp_path / "nodes.tsv"
    edges = tmp_path / "edges.tsv"
    nodes.write_text(AP_NODES)
    edges.write_text(AP_EDGES)
    hin = load_hin(str(nodes), str(edges))
    assert hin.n_objects() == 5


def test_loader_is_deterministic():
    a = hin_from(APVT_NODES, APVT_EDGES)
    b = hin_from(APVT_NODES, APVT_EDGES)
    assert a.objects == b.objects
    assert [t.name for t in a.types] == [t.name for t in b.types]
    for ta in range(len(a.types)):
        for tb in range(len(a.types)):
            assert (a.pair_matrix(ta, tb) != b.pair_matrix(ta, tb)).nnz == 0


def test_extract_schema_edges(apvt):
    schema = extract_schema(apvt)
    names = {frozenset((lt.source_type.name, lt.target_type.name))
             for lt in schema.edges}
    assert names == {frozenset({"A", "P"}), frozenset({"P", "V"}),
                     frozenset({"P", "T"})}
    a, p = schema.type_by_name("A").id, schema.type_by_name("P").id
    v = schema.type_by_name("V").id
    assert schema.adjacent(a, p) and schema.adjacent(p, a)
    assert not schema.adjacent(a, v)


def test_schema_neighbors(apvt):
    schema = extract_schema(apvt)
    p = schema.type_by_name("P").id
    assert schema.neighbors(p) == {schema.type_by_name(n).id
                                   for n in ("A", "V", "T")}


def test_bfs_height_star_schema(apvt):
    schema = extract_schema(apvt)
    assert bfs_tree_height(schema, schema.type_by_name("A").id) == 2
    assert bfs_tree_height(schema, schema.type_by_name("P").id) == 1
    assert bfs_tree_height(schema, schema.type_by_name("V").id) == 2


def test_bfs_height_isolated_type():
    hin = hin_from("a1\tA\np1\tP\nv1\tV\n", "a1\tp1\n")
    schema = extract_schema(hin)
    # V never occurs in any link, so it is isolated at the type level
    vid = [t.id for t in schema.nodes if t.name == "V"][0]
    with pytest.warns(UserWarning, match="unreachable"):
        assert bfs_tree_height(schema, vid) == 0


def test_bfs_height_unknown_type():
    hin = hin_from("a1\tA\np1\tP\n", "a1\tp1\n")
    with pytest.raises(KeyError):
        bfs_tree_height(extract_schema(hin), 99)


def test_validate_passes_on_loaded_network(apvt):
    apvt.validate()


def test_manual_build_matches_loader():
    hin = HIN()
    hin.add_object("a1", "A")
    hin.add_object("p1", "P")
    hin.add_link("a1", "p1")
    other = hin_from("a1\tA\np1\tP\n", "a1\tp1\n")
    assert hin.objects == other.objects
    assert hin.linked("a1", "p1") and other.linked("a1", "p1")
