"""Typed multigraph container and schema extraction.

Objects and links carry types; the type-level view (which object types link
to which) is the network schema. Loading is TSV based:

    nodes:  <object_id> TAB <type_name>
    edges:  <src_id> TAB <dst_id> [TAB <link_type_name>]

Every edge is stored in both directions, so all relations are symmetric at
the object level and the schema is symmetric at the type level.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse as sp


class IngestError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ObjectType:
    id: int
    name: str

    def __repr__(self) -> str:
        return f"ObjectType({self.id}, {self.name!r})"


@dataclass(frozen=True)
class LinkType:
    id: int
    source_type: ObjectType
    target_type: ObjectType
    name: str

    def __repr__(self) -> str:
        return (f"LinkType({self.name!r}: "
                f"{self.source_type.name}->{self.target_type.name})")


@dataclass
class NetworkSchema:
    """Type-level graph; adjacency is symmetric by construction."""

    nodes: list[ObjectType]
    edges: list[LinkType]
    adjacency: dict[int, set[int]] = field(default_factory=dict)
    self_loops: set[int] = field(default_factory=set)

    def __post_init__(self) -> None:
        for t in self.nodes:
            self.adjacency.setdefault(t.id, set())
        for lt in self.edges:
            a, b = lt.source_type.id, lt.target_type.id
            self.adjacency.setdefault(a, set()).add(b)
            self.adjacency.setdefault(b, set()).add(a)
            if a == b:
                self.self_loops.add(a)

    def neighbors(self, type_id: int) -> set[int]:
        return self.adjacency[type_id]

    def has_type(self, type_id: int) -> bool:
        return type_id in self.adjacency

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.adjacency.get(a, ())

    def type_by_name(self, name: str) -> ObjectType:
        for t in self.nodes:
            if t.name == name:
                return t
        raise KeyError(f"unknown object type {name!r}")


class HIN:
    """Heterogeneous information network with dense per-type ordinals.

    ``objects`` maps external ids to (type_id, ordinal); ordinals are dense
    in [0, count(type)) and assigned in first-seen order, which fixes matrix
    row/column meaning for everything downstream.
    """

    def __init__(self) -> None:
        self.types: list[ObjectType] = []
        self._type_ids: dict[str, int] = {}
        self.link_types: list[LinkType] = []
        self._link_type_ids: dict[tuple[int, int, str], int] = {}
        self.objects: dict[str, tuple[int, int]] = {}
        self.members: list[list[str]] = []  # per type: ordinal -> object id
        # links[(ta, tb)] = list of (ordinal_a, ordinal_b); both directions kept
        self.links: dict[tuple[int, int], list[tuple[int, int]]] = {}
        # census of undirected link types: (min type, max type, name)
        self.undirected_link_types: set[tuple[int, int, str]] = set()
        self._pair_cache: dict[tuple[int, int], sp.csr_matrix] = {}

    # -- construction -----------------------------------------------------

    def add_type(self, name: str) -> ObjectType:
        if name in self._type_ids:
            return self.types[self._type_ids[name]]
        t = ObjectType(len(self.types), name)
        self.types.append(t)
        self._type_ids[name] = t.id
        self.members.append([])
        return t

    def add_object(self, obj_id: str, type_name: str, line_no: int | None = None) -> None:
        t = self.add_type(type_name)
        if obj_id in self.objects:
            existing_type, _ = self.objects[obj_id]
            if existing_type != t.id:
                raise IngestError(
                    f"object {obj_id!r} re-declared with type {type_name!r}, "
                    f"was {self.types[existing_type].name!r}", line_no)
            return
        ordinal = len(self.members[t.id])
        self.objects[obj_id] = (t.id, ordinal)
        self.members[t.id].append(obj_id)

    def _link_type(self, ta: int, tb: int, name: str) -> LinkType:
        key = (ta, tb, name)
        if key not in self._link_type_ids:
            lt = LinkType(len(self.link_types), self.types[ta], self.types[tb], name)
            self.link_types.append(lt)
            self._link_type_ids[key] = lt.id
        return self.link_types[self._link_type_ids[key]]

    def add_link(self, src_id: str, dst_id: str, link_name: str | None = None,
                 line_no: int | None = None) -> None:
        if src_id not in self.objects:
            raise IngestError(f"edge references unknown object {src_id!r}", line_no)
        if dst_id not in self.objects:
            raise IngestError(f"edge references unknown object {dst_id!r}", line_no)
        ta, oa = self.objects[src_id]
        tb, ob = self.objects[dst_id]
        lo, hi = min(ta, tb), max(ta, tb)
        canon = (link_name if link_name is not None
                 else f"{self.types[lo].name}-{self.types[hi].name}")
        self.undirected_link_types.add((lo, hi, canon))
        if link_name is None:
            link_name = f"{self.types[ta].name}-{self.types[tb].name}"
        self._link_type(ta, tb, link_name)
        rev = (f"{self.types[tb].name}-{self.types[ta].name}"
               if link_name == f"{self.types[ta].name}-{self.types[tb].name}"
               else link_name)
        self._link_type(tb, ta, rev)
        self.links.setdefault((ta, tb), []).append((oa, ob))
        self.links.setdefault((tb, ta), []).append((ob, oa))
        self._pair_cache.clear()

    # -- queries ----------------------------------------------------------

    def n_objects(self) -> int:
        return len(self.objects)

    def n_links(self) -> int:
        # each input edge is stored twice
        return sum(len(v) for v in self.links.values()) // 2

    def n_link_types(self) -> int:
        return len(self.undirected_link_types)

    def count(self, type_id: int) -> int:
        return len(self.members[type_id])

    def object_type(self, obj_id: str) -> ObjectType:
        return self.types[self.objects[obj_id][0]]

    def ordinal(self, obj_id: str) -> int:
        return self.objects[obj_id][1]

    def object_at(self, type_id: int, ordinal: int) -> str:
        return self.members[type_id][ordinal]

    def linked(self, oa: str, ob: str) -> bool:
        ta, ia = self.objects[oa]
        tb, ib = self.objects[ob]
        return self.pair_matrix(ta, tb)[ia, ib] != 0

    def pair_matrix(self, ta: int, tb: int) -> sp.csr_matrix:
        """0/1 object-level adjacency between two types, ordinal-indexed."""
        key = (ta, tb)
        if key not in self._pair_cache:
            pairs = self.links.get(key, [])
            shape = (self.count(ta), self.count(tb))
            if pairs:
                rows, cols = zip(*pairs)
                m = sp.csr_matrix(
                    (np.ones(len(pairs)), (rows, cols)), shape=shape)
                m.data[:] = 1.0  # collapse parallel links
                m.sum_duplicates()
                m.data[:] = 1.0
            else:
                m = sp.csr_matrix(shape)
            self._pair_cache[key] = m
        return self._pair_cache[key]

    def validate(self) -> None:
        """Check endpoint/type consistency of every stored link."""
        for (ta, tb), pairs in self.links.items():
            na, nb = self.count(ta), self.count(tb)
            for oa, ob in pairs:
                if not (0 <= oa < na and 0 <= ob < nb):
                    raise ValueError(
                        f"dangling endpoint in link group "
                        f"({self.types[ta].name},{self.types[tb].name})")


def _iter_lines(source) -> Iterator[tuple[int, str]]:
    if isinstance(source, (str, Path)):
        fh: Iterable[str] = open(source, encoding="utf-8")
    elif isinstance(source, bytes):
        fh = io.StringIO(source.decode("utf-8"))
    else:
        fh = source
    for i, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        yield i, line


def load_hin(nodes_source, edges_source) -> HIN:
    """Build a HIN from nodes/edges TSV sources (paths or line iterables)."""
    hin = HIN()
    for line_no, line in _iter_lines(nodes_source):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise IngestError(f"expected `id<TAB>type`, got {line!r}", line_no)
        hin.add_object(parts[0], parts[1], line_no)
    for line_no, line in _iter_lines(edges_source):
        parts = line.split("\t")
        if len(parts) not in (2, 3) or not parts[0] or not parts[1]:
            raise IngestError(
                f"expected `src<TAB>dst[<TAB>link_type]`, got {line!r}", line_no)
        link_name = parts[2] if len(parts) == 3 else None
        hin.add_link(parts[0], parts[1], link_name, line_no)
    hin.validate()
    return hin


def extract_schema(hin: HIN) -> NetworkSchema:
    """Type-level graph: distinct endpoint-type pairs of links, symmetrized."""
    seen: set[tuple[int, int]] = set()
    edges: list[LinkType] = []
    for (ta, tb) in hin.links:
        a, b = min(ta, tb), max(ta, tb)
        if (a, b) in seen:
            continue
        seen.add((a, b))
        name = f"{hin.types[a].name}-{hin.types[b].name}"
        edges.append(LinkType(len(edges), hin.types[a], hin.types[b], name))
    return NetworkSchema(nodes=list(hin.types), edges=edges)


def bfs_tree_height(schema: NetworkSchema, source_type: int) -> int:
    """Height of the BFS spanning tree rooted at ``source_type`` (root = 0).

    Types unreachable from the source are excluded with a warning; they
    cannot appear in any meta structure rooted there.
    """
    if not schema.has_type(source_type):
        raise KeyError(f"source type {source_type} not in schema")
    depth = {source_type: 0}
    frontier = [source_type]
    while frontier:
        nxt = []
        for t in frontier:
            for u in sorted(schema.neighbors(t)):
                if u not in depth:
                    depth[u] = depth[t] + 1
                    nxt.append(u)
        frontier = nxt
    unreachable = [t for t in schema.nodes if t.id not in depth]
    if unreachable:
        names = ", ".join(t.name for t in unreachable)
        warnings.warn(f"types unreachable from source: {names}; "
                      "they are excluded from SMS construction")
    return max(depth.values())
