"""Meta paths, meta structures, and the stratified meta structure (SMS).

The SMS is the infinite layered DAG obtained by repeatedly expanding the
network schema from a source type, pruning every reappearance of the target
type (no children). Layer type-sets become periodic with period 2 once the
expansion has reached every type, so the whole object is stored finitely:
basic layers L_0..L_{h0+1} plus one recurrent block (L_{h0}, L_{h0+1}).

Layer sets follow the convention of excluding the target type; target
occurrences are tracked separately (they exist on even layers only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hin import NetworkSchema, bfs_tree_height

TypeSet = tuple[int, ...]  # canonically sorted type ids


def _canon(types) -> TypeSet:
    return tuple(sorted(set(types)))


@dataclass(frozen=True)
class MetaPath:
    """Alternating sequence of object types along schema edges."""

    type_ids: tuple[int, ...]
    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.type_ids) != len(self.names):
            raise ValueError("type_ids and names must align")
        if len(self.type_ids) == 0:
            raise ValueError("empty meta path")

    @property
    def length(self) -> int:
        return len(self.type_ids) - 1

    @property
    def source_type(self) -> int:
        return self.type_ids[0]

    @property
    def target_type(self) -> int:
        return self.type_ids[-1]

    def is_symmetric(self) -> bool:
        return self.type_ids == tuple(reversed(self.type_ids))

    def reverse(self) -> "MetaPath":
        return MetaPath(tuple(reversed(self.type_ids)), tuple(reversed(self.names)))

    def validate(self, schema: NetworkSchema) -> None:
        for a, b in zip(self.type_ids, self.type_ids[1:]):
            if not schema.adjacent(a, b):
                raise ValueError(
                    f"consecutive types not adjacent in schema: "
                    f"{self.names[self.type_ids.index(a)]}, "
                    f"{self.names[self.type_ids.index(b)]}")

    def __str__(self) -> str:
        return "(" + ",".join(self.names) + ")"


@dataclass(frozen=True)
class MetaStructure:
    """Layered DAG with a single source and a single target type.

    ``layers[i]`` is the canonical type-set of layer i; edges run between
    consecutive layers wherever the schema has an edge.
    """

    layers: tuple[TypeSet, ...]
    source_type: int
    target_type: int
    type_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.layers) < 1:
            raise ValueError("meta structure needs at least one layer")
        if self.layers[0] != (self.source_type,):
            raise ValueError("layer 0 must be exactly the source type")
        if self.layers[-1] != (self.target_type,):
            raise ValueError("last layer must be exactly the target type")

    @property
    def height(self) -> int:
        return len(self.layers) - 1

    def is_symmetric(self) -> bool:
        return self.layers == tuple(reversed(self.layers))

    def reverse(self) -> "MetaStructure":
        return MetaStructure(tuple(reversed(self.layers)), self.target_type,
                             self.source_type, self.type_names)

    def validate(self, schema: NetworkSchema) -> None:
        for i, (cur, nxt) in enumerate(zip(self.layers, self.layers[1:])):
            for t in cur:
                if not any(schema.adjacent(t, u) for u in nxt):
                    raise ValueError(
                        f"layer {i} type {self._name(t)} has no schema "
                        f"neighbor in layer {i + 1}")

    def _name(self, t: int) -> str:
        return self.type_names[t] if t < len(self.type_names) else str(t)

    def __str__(self) -> str:
        parts = []
        for layer in self.layers:
            if len(layer) == 1:
                parts.append(self._name(layer[0]))
            else:
                parts.append("(" + ",".join(self._name(t) for t in layer) + ")")
        return "(" + ",".join(parts) + ")"


def as_meta_path(ms: MetaStructure) -> MetaPath | None:
    """Collapse to a MetaPath when every layer is a single type."""
    if any(len(layer) != 1 for layer in ms.layers):
        return None
    ids = tuple(layer[0] for layer in ms.layers)
    names = tuple(ms._name(t) for t in ids)
    return MetaPath(ids, names)


class SmsConstructionError(ValueError):
    pass


@dataclass
class StratifiedMetaStructure:
    """Finite description of the infinite expansion.

    ``basic_layers[h]`` for h in 0..h0+1 are the stored type-sets; deeper
    layers repeat with period 2 (``layer_types``). ``degenerate`` marks the
    extinction case where L_{h0+1} is empty (every type there was a pruned
    target occurrence), e.g. a two-type path schema: the SMS is then finite
    and the recurrent matrix is zero.
    """

    source_type: int
    target_type: int
    h0: int
    basic_layers: list[TypeSet]
    recurrent: tuple[TypeSet, TypeSet]
    degree1_flag: bool
    l1_prime: TypeSet
    type_names: tuple[str, ...]
    degenerate: bool = False
    self_loop_source: bool = False
    # schema adjacency snapshot, filled by build_sms
    _schema_adj: dict[int, set[int]] = field(default_factory=dict, repr=False)

    def layer_types(self, h: int) -> TypeSet:
        if h < 0:
            raise ValueError("layer index must be non-negative")
        if h < len(self.basic_layers):
            return self.basic_layers[h]
        return self.basic_layers[self.h0 + ((h - self.h0) % 2)]

    def target_layers(self, up_to: int) -> list[int]:
        """Even layers 2..up_to holding a target occurrence."""
        out = []
        for h in range(2, up_to + 1, 2):
            if any(self.target_type in self._schema_adj.get(t, ())
                   for t in self.layer_types(h - 1)):
                out.append(h)
        return out

    def name_of(self, t: int) -> str:
        return self.type_names[t] if t < len(self.type_names) else str(t)

    def describe(self, max_layer: int | None = None) -> str:
        """Layer listing in ``Type_layer`` notation, layers 0..2h0+2."""
        top = max_layer if max_layer is not None else 2 * self.h0 + 2
        lines = []
        for h in range(top + 1):
            names = [f"{self.name_of(t)}_{h}" for t in self.layer_types(h)]
            if h >= 2 and h % 2 == 0 and any(
                    self.target_type in self._schema_adj.get(t, ())
                    for t in self.layer_types(h - 1)):
                names.append(f"{self.name_of(self.target_type)}_{h} (target)")
            lines.append(f"L_{h}: " + (", ".join(names) if names else "(empty)"))
        return "\n".join(lines)


def n_recurrences(h: int, h0: int) -> int:
    """Count of recurrent blocks inside the height-h symmetric structure."""
    if h % 2 != 0:
        raise ValueError("h must be even")
    if h < 2:
        raise ValueError("h must be >= 2")
    return h // 2 - h0 if h >= 2 * h0 else 0


def build_sms(schema: NetworkSchema, source_type: int,
              verify_depth: int | None = None) -> StratifiedMetaStructure:
    """Construct the SMS for ``source_type`` (target type = source type).

    Raises SmsConstructionError when the expansion does not become periodic
    at h0 (the layer sequence of a schema with odd cycles stabilizes later,
    outside the assumptions behind the closed-form similarity).
    """
    if not schema.has_type(source_type):
        raise SmsConstructionError(f"source type {source_type} not in schema")
    if not schema.neighbors(source_type):
        raise SmsConstructionError("isolated source type: no SMS exists (h0=0)")
    self_loop = source_type in schema.self_loops

    h0 = bfs_tree_height(schema, source_type)
    names = tuple(t.name for t in sorted(schema.nodes, key=lambda t: t.id))

    # expand far enough to verify periodicity empirically
    depth = verify_depth if verify_depth is not None else max(2 * h0 + 4, h0 + 4)
    layers: list[TypeSet] = [(source_type,)]
    for h in range(depth):
        cur = layers[-1]
        nxt: set[int] = set()
        for t in cur:
            nxt |= schema.neighbors(t)
        # target occurrences are pruned: they get no children and stay out
        # of the stored layer set. With a self-loop on the source the type
        # additionally keeps an expandable intermediate role (two-role rule).
        if not self_loop:
            nxt.discard(source_type)
        layers.append(_canon(nxt))

    degenerate = len(layers) > h0 + 1 and not layers[h0 + 1]
    if not degenerate:
        for h in (h0, h0 + 1):
            if h + 2 < len(layers) and layers[h] != layers[h + 2]:
                got = ", ".join(names[t] for t in layers[h + 2])
                want = ", ".join(names[t] for t in layers[h])
                raise SmsConstructionError(
                    f"layer sets not periodic at h0={h0}: L_{h} = {{{want}}} "
                    f"but L_{h + 2} = {{{got}}}; the construction requires "
                    "the schema to reach a period-2 layer sequence by h0 "
                    "(odd schema cycles violate this)")

    basic = layers[:h0 + 2]
    l1 = layers[1] if len(layers) > 1 else ()
    l1_prime = _canon(t for t in l1 if len(schema.neighbors(t)) > 1)
    deg1 = len(schema.neighbors(source_type)) == 1

    sms = StratifiedMetaStructure(
        source_type=source_type,
        target_type=source_type,
        h0=h0,
        basic_layers=[_canon(s) for s in basic],
        recurrent=(basic[h0], basic[h0 + 1] if len(basic) > h0 + 1 else ()),
        degree1_flag=deg1,
        l1_prime=l1_prime,
        type_names=names,
        degenerate=degenerate,
        self_loop_source=self_loop,
    )
    sms._schema_adj = {t.id: set(schema.neighbors(t.id)) for t in schema.nodes}
    return sms


def expand_layers(schema: NetworkSchema, source_type: int, depth: int,
                  track_targets: bool = True):
    """Explicit expansion oracle: (layer type-sets, target-occurrence layers).

    Used by property tests to cross-check the finite SMS representation.
    """
    self_loop = source_type in schema.self_loops
    layers: list[TypeSet] = [(source_type,)]
    target_layers: list[int] = []
    for h in range(depth):
        nxt: set[int] = set()
        for t in layers[-1]:
            nxt |= schema.neighbors(t)
        if source_type in nxt:
            target_layers.append(h + 1)
            if not self_loop:
                nxt.discard(source_type)
        layers.append(_canon(nxt))
    return layers, target_layers


def meta_structure_at(sms: StratifiedMetaStructure, h: int) -> MetaStructure:
    """Symmetric meta structure from the target occurrence at layer h.

    Walk up along parents from the lone target occurrence: layer i keeps
    only the types with a descendant chain reaching that occurrence.
    """
    if h % 2 != 0 or h < 2:
        raise ValueError("h must be even and >= 2")
    adj = sms._schema_adj
    kept: list[TypeSet] = [None] * (h + 1)  # type: ignore[list-item]
    kept[h] = (sms.target_type,)
    # parents of the target occurrence: types on layer h-1 adjacent to it
    below = [t for t in sms.layer_types(h - 1) if sms.target_type in adj[t]]
    if not below:
        raise ValueError(f"no target occurrence at layer {h}")
    kept[h - 1] = _canon(below)
    for i in range(h - 2, 0, -1):
        prev = [t for t in sms.layer_types(i)
                if any(u in adj[t] for u in kept[i + 1])]
        kept[i] = _canon(prev)
        if not prev:
            raise ValueError(f"walk-up broke at layer {i}: no parents")
    kept[0] = (sms.source_type,)
    return MetaStructure(tuple(kept), sms.source_type, sms.target_type,
                         sms.type_names)
