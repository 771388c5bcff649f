"""Layer tuple products, relation matrices, and commuting-matrix machinery.

Multi-type layers index the cartesian product of their member types' object
sets; two tuples are adjacent when every component pair whose types share a
schema edge is linked in the HIN (empty conjunction is vacuously true).
Tuple order is lexicographic over (canonical type order, per-type ordinal),
encoded as row-major mixed-radix integer codes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import lu_factor, lu_solve as _dense_lu_solve

from . import kernels
from .hin import HIN, NetworkSchema, extract_schema
from .structures import MetaPath, MetaStructure, StratifiedMetaStructure

# vacuous (constraint-free) relation matrices are dense; refuse absurd sizes
_DENSE_GUARD = 5_000_000


class LayerProduct:
    """Ordered tuple index set for one layer.

    ``codes is None`` means the full cross product; otherwise ``codes`` is a
    sorted array of surviving mixed-radix codes (a localized restriction).
    """

    def __init__(self, layer_types: tuple[int, ...],
                 members: tuple[tuple[str, ...], ...],
                 codes: np.ndarray | None = None):
        if tuple(sorted(set(layer_types))) != tuple(layer_types):
            raise ValueError("layer_types must be canonically sorted, unique")
        self.layer_types = tuple(layer_types)
        self.members = tuple(tuple(m) for m in members)
        self.radices = np.array([len(m) for m in self.members], dtype=np.int64)
        full = int(np.prod(self.radices)) if len(self.radices) else 0
        if codes is not None:
            codes = np.asarray(codes, dtype=np.int64)
            if len(codes) and (codes[0] < 0 or codes[-1] >= full
                               or np.any(np.diff(codes) <= 0)):
                raise ValueError("codes must be sorted, unique, in range")
        self.codes = codes
        self._full_size = full
        self._ordinals: tuple[dict[str, int], ...] | None = None

    @property
    def strides(self) -> np.ndarray:
        out = np.ones(len(self.radices), dtype=np.int64)
        for i in range(len(self.radices) - 2, -1, -1):
            out[i] = out[i + 1] * self.radices[i + 1]
        return out

    @property
    def size(self) -> int:
        return self._full_size if self.codes is None else len(self.codes)

    def all_codes(self) -> np.ndarray:
        if self.codes is None:
            return np.arange(self._full_size, dtype=np.int64)
        return self.codes

    def code_at(self, pos: int) -> int:
        return pos if self.codes is None else int(self.codes[pos])

    def pos_of_code(self, code: int) -> int:
        if self.codes is None:
            if not 0 <= code < self._full_size:
                raise KeyError(code)
            return int(code)
        i = int(np.searchsorted(self.codes, code))
        if i == len(self.codes) or self.codes[i] != code:
            raise KeyError(code)
        return i

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple(int((code // s) % r)
                     for s, r in zip(self.strides, self.radices))

    def tuple_at(self, pos: int) -> tuple[str, ...]:
        ords = self.decode(self.code_at(pos))
        return tuple(m[o] for m, o in zip(self.members, ords))

    def index(self, objects) -> int:
        if self._ordinals is None:
            self._ordinals = tuple({oid: i for i, oid in enumerate(m)}
                                   for m in self.members)
        if len(objects) != len(self.members):
            raise KeyError(tuple(objects))
        code = 0
        for omap, s, oid in zip(self._ordinals, self.strides, objects):
            code += omap[oid] * int(s)
        return self.pos_of_code(code)

    def subset(self, codes: np.ndarray) -> "LayerProduct":
        return LayerProduct(self.layer_types, self.members, codes)

    def object_tuples(self):
        for pos in range(self.size):
            yield self.tuple_at(pos)

    def same_index_set(self, other: "LayerProduct") -> bool:
        if self.layer_types != other.layer_types:
            return False
        a, b = self.all_codes(), other.all_codes()
        return len(a) == len(b) and bool(np.all(a == b))

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return (f"LayerProduct(types={self.layer_types}, size={self.size}, "
                f"{'full' if self.codes is None else 'subset'})")


@dataclass
class RelationMatrix:
    rows: LayerProduct
    cols: LayerProduct
    mat: sp.csr_matrix

    @property
    def shape(self):
        return self.mat.shape

    def normalized(self) -> "RelationMatrix":
        return RelationMatrix(self.rows, self.cols, row_normalize(self.mat))


@dataclass
class CommutingMatrix:
    rows: LayerProduct
    cols: LayerProduct
    mat: sp.csr_matrix


@dataclass(frozen=True)
class SmsWeights:
    """Decay factor plus per-height structure weights."""

    lam: float
    w: tuple[float, ...]

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie strictly in (0,1), got {self.lam}")
        w = tuple(float(x) for x in self.w)
        object.__setattr__(self, "w", w)
        if any(x < 0.0 or x > 1.0 for x in w):
            raise ValueError("every weight must lie in [0,1]")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {sum(w)}")

    def validate_for(self, h0: int) -> None:
        if len(self.w) != h0:
            raise ValueError(
                f"need {h0} weights (one per structure height), got {len(self.w)}")


def _resolve_types(hin: HIN, type_set) -> tuple[int, ...]:
    ids = []
    for t in type_set:
        if isinstance(t, str):
            if t not in hin._type_ids:
                raise KeyError(f"unknown object type: {t}")
            ids.append(hin._type_ids[t])
        else:
            ids.append(int(t))
    return tuple(sorted(set(ids)))


def layer_product(hin: HIN, type_set) -> LayerProduct:
    ids = _resolve_types(hin, type_set)
    if not ids:
        raise ValueError("empty layer type set")
    members = tuple(tuple(hin.members[t]) for t in ids)
    return LayerProduct(ids, members)


def _empty_product() -> LayerProduct:
    return LayerProduct((), ())


def tuple_adjacent(hin: HIN, schema: NetworkSchema, s, t) -> bool:
    """AND over all component pairs whose types are schema-adjacent."""
    for u in s:
        tu = hin.objects[u][0]
        for v in t:
            tv = hin.objects[v][0]
            if schema.adjacent(tu, tv) and not hin.linked(u, v):
                return False
    return True


def _constraints(hin: HIN, schema: NetworkSchema,
                 rows: LayerProduct, cols: LayerProduct):
    cons = []
    for i, ta in enumerate(rows.layer_types):
        for j, tb in enumerate(cols.layer_types):
            if schema.adjacent(ta, tb):
                m = hin.pair_matrix(ta, tb)
                cons.append((i, j, m.indptr, m.indices))
    return cons


def relation_matrix(hin: HIN, schema: NetworkSchema,
                    rows: LayerProduct, cols: LayerProduct) -> RelationMatrix:
    if rows.size == 0 or cols.size == 0:
        return RelationMatrix(rows, cols,
                              sp.csr_matrix((rows.size, cols.size)))
    cons = _constraints(hin, schema, rows, cols)
    if not cons:
        if rows.size * cols.size > _DENSE_GUARD:
            raise ValueError(
                "layers share no schema edge; the vacuous all-ones relation "
                f"matrix would hold {rows.size * cols.size} entries")
        return RelationMatrix(
            rows, cols, sp.csr_matrix(np.ones((rows.size, cols.size))))
    rpos, ccodes = kernels.expand_product(
        rows.all_codes(), rows.radices, cols.radices, cons)
    if cols.codes is not None:
        # restricted column set: keep only emissions that land inside it
        idx = np.searchsorted(cols.codes, ccodes)
        idx[idx >= len(cols.codes)] = len(cols.codes) - 1 if len(cols.codes) else 0
        keep = (len(cols.codes) > 0) & (cols.codes[idx] == ccodes)
        rpos, cpos = rpos[keep], idx[keep]
    else:
        cpos = ccodes
    mat = sp.csr_matrix(
        (np.ones(len(rpos)), (rpos, cpos)), shape=(rows.size, cols.size))
    mat.data[:] = 1.0
    return RelationMatrix(rows, cols, mat)


def _expand_restricted(hin: HIN, schema: NetworkSchema, rows: LayerProduct,
                       next_types: tuple[int, ...]):
    """Relation matrix from ``rows`` onto only the adjacent next-layer tuples."""
    if not next_types:
        nxt = _empty_product()
        return nxt, RelationMatrix(rows, nxt,
                                   sp.csr_matrix((rows.size, 0)))
    full_next = layer_product(hin, next_types)
    if rows.size == 0:
        nxt = full_next.subset(np.empty(0, dtype=np.int64))
        return nxt, RelationMatrix(rows, nxt, sp.csr_matrix((0, 0)))
    cons = _constraints(hin, schema, rows, full_next)
    if not cons:
        if full_next.size > _DENSE_GUARD:
            raise ValueError("vacuous adjacency onto an oversized layer")
        nxt = full_next
        mat = sp.csr_matrix(np.ones((rows.size, nxt.size)))
        return nxt, RelationMatrix(rows, nxt, mat)
    rpos, ccodes = kernels.expand_product(
        rows.all_codes(), rows.radices, full_next.radices, cons)
    live = np.unique(ccodes)
    nxt = full_next.subset(live)
    cpos = np.searchsorted(live, ccodes)
    mat = sp.csr_matrix(
        (np.ones(len(rpos)), (rpos, cpos)), shape=(rows.size, nxt.size))
    mat.data[:] = 1.0
    return nxt, RelationMatrix(rows, nxt, mat)


def row_normalize(m):
    """Scale nonzero rows to unit sum; all-zero rows stay zero."""
    if sp.issparse(m):
        m = m.tocsr()
        if m.data.size and m.data.min() < 0:
            raise ValueError("row_normalize requires non-negative entries")
        rs = np.asarray(m.sum(axis=1)).ravel()
        inv = np.divide(1.0, rs, out=np.zeros_like(rs, dtype=np.float64),
                        where=rs > 0)
        return sp.diags(inv).tocsr() @ m
    arr = np.asarray(m, dtype=np.float64)
    if arr.size and arr.min() < 0:
        raise ValueError("row_normalize requires non-negative entries")
    rs = arr.sum(axis=1)
    inv = np.divide(1.0, rs, out=np.zeros_like(rs), where=rs > 0)
    return arr * inv[:, None]


def prune_zero_columns(w_prev: RelationMatrix, w_next: RelationMatrix):
    """Drop dead middle tuples: all-zero columns of the left factor together
    with the matching rows of the right factor. Chain products are unchanged.
    """
    if not w_prev.cols.same_index_set(w_next.rows):
        raise ValueError("w_prev columns and w_next rows index different sets")
    alive = np.flatnonzero(w_prev.mat.getnnz(axis=0) > 0)
    if len(alive) == w_prev.cols.size:
        return w_prev, w_next
    mid = w_prev.cols.subset(w_prev.cols.all_codes()[alive])
    left = RelationMatrix(w_prev.rows, mid, w_prev.mat[:, alive].tocsr())
    right = RelationMatrix(mid, w_next.cols, w_next.mat[alive, :].tocsr())
    return left, right


def _structure_layers(structure) -> list[tuple[int, ...]]:
    if isinstance(structure, MetaPath):
        return [(t,) for t in structure.type_ids]
    if isinstance(structure, MetaStructure):
        return [tuple(layer) for layer in structure.layers]
    raise TypeError(f"unsupported structure: {type(structure).__name__}")


def commuting_matrix(hin: HIN, structure, normalized: bool = False,
                     schema: NetworkSchema | None = None) -> CommutingMatrix:
    """Left-to-right chain product of (optionally normalized) relation
    matrices along the structure's layers."""
    if schema is None:
        schema = extract_schema(hin)
    structure.validate(schema)
    layers = _structure_layers(structure)
    prods = [layer_product(hin, L) for L in layers]
    acc = sp.identity(prods[0].size, format="csr")
    for a, b in zip(prods, prods[1:]):
        w = relation_matrix(hin, schema, a, b).mat
        if normalized:
            w = row_normalize(w)
        acc = (acc @ w).tocsr()
    return CommutingMatrix(prods[0], prods[-1], acc)


@dataclass
class LocalizedChain:
    """Progressively restricted tuple sets from one source object.

    ``products[i]`` is the surviving index set of layer i for i = 0..2h0,
    ``mats[i]`` the 0/1 relation matrix between layers i and i+1, and
    ``recurrent`` the square co-occurrence matrix over ``products[h0]``.
    Index sets freeze at layers h0/h0+1: deeper layers reuse them, dropping
    tuples first reached beyond the initial pass.
    """

    products: list[LayerProduct]
    mats: list[RelationMatrix]
    recurrent: sp.csr_matrix
    h0: int

    @property
    def pairs(self):
        return list(zip(self.products[1:], self.mats))


def localized_chain(hin: HIN, sms: StratifiedMetaStructure, source_object: str,
                    schema: NetworkSchema | None = None) -> LocalizedChain:
    if schema is None:
        schema = extract_schema(hin)
    tid, ordinal = hin.objects[source_object]
    if tid != sms.source_type:
        raise ValueError(
            f"object {source_object!r} has type "
            f"{hin.types[tid].name!r}, SMS expects "
            f"{sms.name_of(sms.source_type)!r}")
    h0 = sms.h0
    src = layer_product(hin, (sms.source_type,)).subset(
        np.array([ordinal], dtype=np.int64))
    products = [src]
    mats: list[RelationMatrix] = []
    for i in range(2 * h0):
        if i + 1 >= h0 + 2:
            nxt = products[i - 1]  # frozen recurrent index sets
            rel = relation_matrix(hin, schema, products[i], nxt)
        else:
            nxt, rel = _expand_restricted(hin, schema, products[i],
                                          sms.layer_types(i + 1))
        products.append(nxt)
        mats.append(rel)
    w = mats[h0].mat
    rec = (w @ w.T).tocsr()
    return LocalizedChain(products, mats, rec, h0)


def lu_solve(a, b):
    """Solve a x = b by LU with partial pivoting, verifying the residual."""
    b_arr = np.asarray(b, dtype=np.float64)
    if sp.issparse(a):
        a = a.tocsc()
        n = a.shape[0]
        if a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        try:
            x = spla.splu(a).solve(b_arr)
        except RuntimeError as exc:  # SuperLU signals singularity this way
            raise ArithmeticError(f"LU solve failed: {exc}") from exc
        resid = a @ x - b_arr
    else:
        a_arr = np.asarray(a, dtype=np.float64)
        if a_arr.ndim != 2 or a_arr.shape[0] != a_arr.shape[1]:
            raise ValueError("matrix must be square")
        try:
            x = _dense_lu_solve(lu_factor(a_arr), b_arr)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise ArithmeticError(f"LU solve failed: {exc}") from exc
        resid = a_arr @ x - b_arr
    bound = 1e-10 * (1.0 + np.max(np.abs(b_arr)) if b_arr.size else 1.0)
    if resid.size and np.max(np.abs(resid)) > bound:
        raise ArithmeticError(
            f"LU residual {np.max(np.abs(resid)):.3e} exceeds {bound:.3e} "
            "(matrix singular to working precision?)")
    return x


def truncated_series(a_l, r_bar, a_r, lam: float, k: int):
    """(1-lam) * a_l * (sum_{j=0..k} lam^j r_bar^j) * a_r, the series oracle
    for the LU closed form."""
    if k < 0:
        raise ValueError("k must be >= 0")
    a_l = np.asarray(a_l.todense() if sp.issparse(a_l) else a_l,
                     dtype=np.float64)
    a_r_mat = a_r
    term = a_l.copy()
    acc = a_l.copy()
    for _ in range(k):
        term = lam * (term @ r_bar)
        acc = acc + term
    out = acc @ (a_r_mat.toarray() if sp.issparse(a_r_mat) else a_r_mat)
    return (1.0 - lam) * out


class SmsRowEngine:
    """Normalized SMS similarity rows from one HIN, with caching.

    Per source object the lambda/weight-independent pieces are computed
    once: one row over the target objects for every basic height, plus the
    (left vector, normalized recurrence, right matrix) triple of the
    recurrent term. Rows for any SmsWeights then combine in O(terms), with
    LU solves cached per (source, lambda).
    """

    def __init__(self, hin: HIN, sms: StratifiedMetaStructure,
                 schema: NetworkSchema | None = None):
        self.hin = hin
        self.sms = sms
        self.schema = schema if schema is not None else extract_schema(hin)
        self.targets = layer_product(hin, (sms.target_type,))
        self._dec: dict[str, dict] = {}
        self._solved: dict[tuple[str, float], np.ndarray] = {}
        src_deg = len(self.schema.neighbors(sms.source_type))
        self._case2 = src_deg > 1

    # -- construction of per-source pieces --------------------------------

    def _left_sets(self) -> list[tuple[int, ...]]:
        """Layer type-sets of the left half up to h0 (+1 for the recurrence)."""
        sms = self.sms
        sets = [(sms.source_type,)]
        for i in range(1, sms.h0 + 2):
            if i == 1 and self._case2 and sms.h0 >= 2:
                sets.append(tuple(sms.l1_prime))
            else:
                sets.append(tuple(sms.layer_types(i)))
        return sets

    def _restricted(self, rows: LayerProduct, types: tuple[int, ...]):
        return _expand_restricted(self.hin, self.schema, rows, types)

    def _mirror_normalized(self, rel: RelationMatrix) -> sp.csr_matrix:
        """Localized slice of the transposed normalized forward relation.

        The right half of a symmetric chain is the transpose of the
        normalized left half, so each factor scales column ``j`` by the
        degree of ``j`` against the complete layer universe, not against
        the surviving (localized) tuple set.
        """
        universe = layer_product(self.hin, rel.rows.layer_types)
        fwd = relation_matrix(self.hin, self.schema, rel.cols, universe)
        deg = np.asarray(fwd.mat.sum(axis=1)).ravel()
        inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
        return (rel.mat @ sp.diags(inv)).tocsr()

    def _right_half(self, mid: LayerProduct, h: int) -> np.ndarray:
        """Dense |mid| x |targets| product of the mirrored right half."""
        sms = self.sms
        cur = mid
        acc = None  # dense running product, rows = mid
        for i in range(h // 2, h - 1):
            mirror = h - 1 - i  # next layer's mirror index on the left
            if mirror == 1 and self._case2 and h >= 4:
                types = tuple(sms.l1_prime)
            else:
                types = tuple(sms.layer_types(mirror))
            nxt, rel = self._restricted(cur, types)
            w = self._mirror_normalized(rel)
            acc = w.toarray() if acc is None else acc @ w.toarray()
            cur = nxt
        final = self._mirror_normalized(
            relation_matrix(self.hin, self.schema, cur, self.targets))
        return (final.toarray() if acc is None else acc @ final.toarray())

    def _decompose(self, source_object: str) -> dict:
        if source_object in self._dec:
            return self._dec[source_object]
        sms, hin, schema = self.sms, self.hin, self.schema
        tid, ordinal = hin.objects[source_object]
        if tid != sms.source_type:
            raise ValueError(
                f"object {source_object!r} has type {hin.types[tid].name!r}, "
                f"SMS expects {sms.name_of(sms.source_type)!r}")
        h0 = sms.h0

        sets = self._left_sets()
        prods = [layer_product(hin, (sms.source_type,)).subset(
            np.array([ordinal], dtype=np.int64))]
        lefts = [np.ones((1, 1))]  # cumulative normalized left rows
        mats = []
        for i in range(h0 + 1):
            nxt, rel = self._restricted(prods[-1], sets[i + 1])
            prods.append(nxt)
            mats.append(rel)
            if i < h0:
                lefts.append(lefts[-1] @ row_normalize(rel.mat).toarray())

        basic: dict[int, np.ndarray] = {}
        if h0 >= 2:
            # height-2 term always runs through the full first layer
            if self._case2:
                p1, rel1 = self._restricted(prods[0],
                                            tuple(sms.layer_types(1)))
                v2 = row_normalize(rel1.mat).toarray()
                basic[2] = (v2 @ self._right_half(p1, 2)).ravel()
            else:
                basic[2] = (lefts[1] @ self._right_half(prods[1], 2)).ravel()
            for h in range(4, 2 * h0 - 1, 2):
                basic[h] = (lefts[h // 2]
                            @ self._right_half(prods[h // 2], h)).ravel()

        w_rec = mats[h0].mat if h0 < len(mats) else None
        if w_rec is None or w_rec.shape[1] == 0:
            r_bar = sp.csr_matrix((prods[h0].size, prods[h0].size))
        else:
            r_bar = row_normalize((w_rec @ w_rec.T).tocsr())
        dec = {
            "left": lefts[h0].ravel(),            # over prods[h0]
            "r_bar": r_bar,
            "right": self._right_half(prods[h0], 2 * h0),
            "basic": basic,
        }
        self._dec[source_object] = dec
        return dec

    # -- public API --------------------------------------------------------

    def recurrent_pieces(self, source_object: str):
        """(left vector, normalized recurrence, right matrix) for oracles."""
        d = self._decompose(source_object)
        return d["left"], d["r_bar"], d["right"]

    def basic_rows(self, source_object: str) -> dict[int, np.ndarray]:
        return dict(self._decompose(source_object)["basic"])

    def row(self, source_object: str, weights: SmsWeights) -> np.ndarray:
        weights.validate_for(self.sms.h0)
        d = self._decompose(source_object)
        h0 = self.sms.h0
        out = np.zeros(self.targets.size)
        for h, contrib in d["basic"].items():
            out += weights.w[h // 2 - 1] * contrib
        key = (source_object, weights.lam)
        if key not in self._solved:
            a = (sp.identity(d["r_bar"].shape[0], format="csr")
                 - weights.lam * d["r_bar"])
            self._solved[key] = (lu_solve(a.T, d["left"])
                                 if a.shape[0] else d["left"])
        y = self._solved[key]
        out += weights.w[h0 - 1] * (1.0 - weights.lam) * (y @ d["right"])
        return out

    def target_ids(self) -> list[str]:
        return [self.targets.tuple_at(i)[0] for i in range(self.targets.size)]


def sms_commuting_row(hin: HIN, sms: StratifiedMetaStructure,
                      source_object: str, weights: SmsWeights,
                      schema: NetworkSchema | None = None) -> np.ndarray:
    """One normalized similarity row over all target-type objects."""
    return SmsRowEngine(hin, sms, schema).row(source_object, weights)


def dump_matrix(m, fh) -> None:
    """Coordinate-format text dump for debugging and oracle comparison.

    Header line `# rows=<n> cols=<m>`, then one `row col value` line per
    nonzero, row-major; values use shortest round-trip formatting.
    """
    if sp.issparse(m):
        coo = m.tocoo()
        order = np.lexsort((coo.col, coo.row))
        rows, cols, vals = coo.row[order], coo.col[order], coo.data[order]
        n, k = m.shape
    else:
        arr = np.asarray(m)
        if arr.ndim != 2:
            raise ValueError("dump_matrix expects a 2-D matrix")
        n, k = arr.shape
        rows, cols = np.nonzero(arr)
        vals = arr[rows, cols]
    fh.write(f"# rows={n} cols={k}\n")
    for r, c, v in zip(rows, cols, vals):
        fh.write(f"{r} {c} {float(v)!r}\n")


def load_matrix_dump(fh) -> np.ndarray:
    """Read a dump_matrix file back into a dense array."""
    header = fh.readline()
    m = re.match(r"#\s*rows=(\d+)\s+cols=(\d+)\s*$", header)
    if m is None:
        raise ValueError(f"bad dump header: {header!r}")
    out = np.zeros((int(m.group(1)), int(m.group(2))))
    for line_no, line in enumerate(fh, start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {line_no}: expected `row col value`")
        out[int(parts[0]), int(parts[1])] = float(parts[2])
    return out
