"""Seeded generators for synthetic networks, schemas, and benchmarks.

Everything here is deterministic given the seed, so tests and benchmark
sweeps can freeze expectations against a generator call instead of shipping
large fixture files.
"""

from __future__ import annotations

import numpy as np

from .hin import HIN, LinkType, NetworkSchema, ObjectType, bfs_tree_height


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed))


def planted_partition_hin(n_authors: int = 200, n_papers: int = 1200,
                          n_venues: int = 600, k: int = 4,
                          noise: float = 0.02, seed: int = 0):
    """Author/paper/venue network with ``k`` planted author communities.

    Authors, papers, and venues are split into ``k`` equal blocks. Each
    paper takes its first author round-robin inside its block (so nobody is
    isolated), adds one or two more block authors, and appears in a block
    venue cycled so every venue gets used. With probability ``noise`` a
    paper also gains a uniformly random cross-block author, and separately a
    uniformly random venue replaces the block one.

    Returns ``(hin, labels)`` where labels maps author id -> block index.
    """
    if k < 1 or n_authors < k or n_papers < k or n_venues < k:
        raise ValueError("need at least one author/paper/venue per block")
    rng = _rng(seed)
    hin = HIN()
    authors = [f"a{i:04d}" for i in range(n_authors)]
    papers = [f"p{i:04d}" for i in range(n_papers)]
    venues = [f"v{i:04d}" for i in range(n_venues)]
    for a in authors:
        hin.add_object(a, "author")
    for p in papers:
        hin.add_object(p, "paper")
    for v in venues:
        hin.add_object(v, "venue")

    labels = {a: i * k // n_authors for i, a in enumerate(authors)}
    authors_by = [[a for a in authors if labels[a] == c] for c in range(k)]
    papers_by = [[p for i, p in enumerate(papers) if i * k // n_papers == c]
                 for c in range(k)]
    venues_by = [[v for i, v in enumerate(venues) if i * k // n_venues == c]
                 for c in range(k)]

    for c in range(k):
        block, vpool = authors_by[c], venues_by[c]
        for j, p in enumerate(papers_by[c]):
            team = {block[j % len(block)]}
            extras = rng.choice(len(block), size=int(rng.integers(1, 3)),
                                replace=False)
            team.update(block[e] for e in extras)
            if rng.random() < noise:
                team.add(authors[int(rng.integers(n_authors))])
            for a in sorted(team):
                hin.add_link(a, p, "writes")
            venue = vpool[j % len(vpool)]
            if rng.random() < noise:
                venue = venues[int(rng.integers(n_venues))]
            hin.add_link(p, venue, "published_in")
    return hin, labels


def random_hin(seed, max_types: int = 4, max_objects: int = 30,
               link_prob: float = 0.35, bipartite: bool = False) -> HIN:
    """Small random network over a random connected type graph.

    The type graph is a random tree plus extra edges (kept across the
    2-coloring when ``bipartite``). Objects are split over types with at
    least one each; object links are Bernoulli per schema edge, forcing one
    link per edge so the extracted schema matches the intended one.
    """
    rng = _rng(seed)
    n_types = int(rng.integers(2, max_types + 1))
    color = [0] * n_types
    tree: list[tuple[int, int]] = []
    for i in range(1, n_types):
        j = int(rng.integers(0, i))
        color[i] = 1 - color[j]
        tree.append((j, i))
    edges = set(tree)
    for a in range(n_types):
        for b in range(a + 1, n_types):
            if (a, b) in edges:
                continue
            if bipartite and color[a] == color[b]:
                continue
            if rng.random() < 0.3:
                edges.add((a, b))

    hin = HIN()
    names = [f"T{i}" for i in range(n_types)]
    n_obj = int(rng.integers(n_types, max_objects + 1))
    counts = np.ones(n_types, dtype=int)
    counts += rng.multinomial(n_obj - n_types, np.full(n_types, 1 / n_types))
    ids = [[f"{names[t]}_{i}" for i in range(counts[t])]
           for t in range(n_types)]
    for t in range(n_types):
        for obj in ids[t]:
            hin.add_object(obj, names[t])
    for a, b in sorted(edges):
        na, nb = counts[a], counts[b]
        mask = rng.random((na, nb)) < link_prob
        if not mask.any():
            mask[int(rng.integers(na)), int(rng.integers(nb))] = True
        for i, j in zip(*np.nonzero(mask)):
            hin.add_link(ids[a][i], ids[b][j])
    return hin


def random_bipartite_schema(seed, max_types: int = 8,
                            extra_prob: float = 0.35) -> NetworkSchema:
    """Connected bipartite type graph whose BFS height from type 0 is >= 2.

    Bipartite and height >= 2 together guarantee the repeated layer
    expansion from type 0 stabilizes right at that height, so these schemas
    exercise the full construction without tripping its odd-cycle guard.
    """
    rng = _rng(seed)
    while True:
        n = int(rng.integers(3, max_types + 1))
        color = [0] * n
        edges: set[tuple[int, int]] = set()
        for i in range(1, n):
            j = int(rng.integers(0, i))
            color[i] = 1 - color[j]
            edges.add((j, i))
        for a in range(n):
            for b in range(a + 1, n):
                if color[a] != color[b] and (a, b) not in edges:
                    if rng.random() < extra_prob:
                        edges.add((a, b))
        nodes = [ObjectType(i, f"T{i}") for i in range(n)]
        links = [LinkType(k, nodes[a], nodes[b], f"T{a}-T{b}")
                 for k, (a, b) in enumerate(sorted(edges))]
        schema = NetworkSchema(nodes=nodes, edges=links)
        if bfs_tree_height(schema, 0) >= 2:
            return schema
