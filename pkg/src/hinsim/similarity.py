"""SMS similarity plus the three baseline measures.

SMSS normalizes the localized similarity row by source/target self-scores;
PathSim does the same over unnormalized symmetric-path counts. BPCRW and
BSCSE are recursive walkers with bias exponent alpha on the branching
factor; both are written as memoized top-down recursions so the matrix
identities they satisfy stay independently testable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .hin import HIN, NetworkSchema, extract_schema
from .matrix import (SmsRowEngine, SmsWeights, commuting_matrix,
                     layer_product, relation_matrix)
from .structures import MetaPath, MetaStructure, StratifiedMetaStructure


@dataclass
class SimilarityResult:
    source_object: str
    metric: str
    target_ids: list[str]
    scores: np.ndarray
    params: dict = field(default_factory=dict)

    def score_of(self, target_id: str) -> float:
        return float(self.scores[self.target_ids.index(target_id)])

    def ranked(self) -> list[tuple[str, float]]:
        """(target, score) sorted by score descending, ties by id ascending."""
        order = sorted(range(len(self.target_ids)),
                       key=lambda i: (-self.scores[i], self.target_ids[i]))
        return [(self.target_ids[i], float(self.scores[i])) for i in order]


def smss(hin: HIN, sms: StratifiedMetaStructure, source_object: str,
         weights: SmsWeights,
         engine: SmsRowEngine | None = None) -> SimilarityResult:
    """2 m(s,t) / (m(s,s) + m(t,t)) over the localized similarity rows.

    Self-scores come from one localized run per distinct target object;
    passing a shared engine reuses those runs across sources.
    """
    eng = engine if engine is not None else SmsRowEngine(hin, sms)
    row = eng.row(source_object, weights)
    targets = eng.target_ids()
    scores = np.zeros(len(targets))
    # the source self-entry sits inside its own row
    src_pos = eng.targets.index((source_object,))
    m_ss = row[src_pos]
    for i, t in enumerate(targets):
        m_tt = eng.row(t, weights)[i]
        denom = m_ss + m_tt
        scores[i] = 2.0 * row[i] / denom if denom > 0 else 0.0
    return SimilarityResult(source_object, "smss", targets, scores,
                            {"lambda": weights.lam, "w": list(weights.w)})


def smss_matrix(hin: HIN, sms: StratifiedMetaStructure, objects: list[str],
                weights: SmsWeights,
                engine: SmsRowEngine | None = None) -> np.ndarray:
    """Stacked SMSS score rows for several sources of the same type.

    Computes each localized row exactly once and normalizes pairwise, so the
    result equals ``vstack([smss(..., o, ...).scores for o in objects])`` at
    a fraction of the cost when ``objects`` covers most of the target type.
    """
    eng = engine if engine is not None else SmsRowEngine(hin, sms)
    targets = eng.target_ids()
    pos = {t: i for i, t in enumerate(targets)}
    try:
        rows_idx = [pos[o] for o in objects]
    except KeyError as exc:
        raise ValueError(
            f"object {exc.args[0]!r} is not of the target type") from exc
    raw = np.vstack([eng.row(t, weights) for t in targets])
    diag = raw.diagonal().copy()
    sel = raw[rows_idx]
    denom = diag[rows_idx][:, None] + diag[None, :]
    out = np.zeros_like(sel)
    np.divide(2.0 * sel, denom, out=out, where=denom > 0)
    return out


def pathsim(hin: HIN, structure, o_s: str, o_t: str,
            schema: NetworkSchema | None = None) -> float:
    """Normalized instance count between two same-type objects along a
    symmetric meta path (or meta structure)."""
    if not structure.is_symmetric():
        raise ValueError("pathsim requires a symmetric structure")
    if schema is None:
        schema = extract_schema(hin)
    end_type = structure.source_type
    for o in (o_s, o_t):
        if hin.objects[o][0] != end_type:
            raise ValueError(f"object {o!r} is not of the endpoint type")
    cm = commuting_matrix(hin, structure, normalized=False, schema=schema)
    i, j = cm.rows.index((o_s,)), cm.cols.index((o_t,))
    m = cm.mat
    num = 2.0 * m[i, j]
    denom = m[i, i] + m[j, j]
    if denom <= 0:
        warnings.warn(f"pathsim({o_s!r},{o_t!r}): zero self-counts, scoring 0")
        return 0.0
    return float(num / denom)


def pathsim_row(hin: HIN, structure, o_s: str,
                schema: NetworkSchema | None = None) -> SimilarityResult:
    """PathSim of one source against every endpoint-type object, from a
    single commuting-matrix evaluation."""
    if not structure.is_symmetric():
        raise ValueError("pathsim requires a symmetric structure")
    if schema is None:
        schema = extract_schema(hin)
    end_type = structure.source_type
    if hin.objects[o_s][0] != end_type:
        raise ValueError(f"object {o_s!r} is not of the endpoint type")
    cm = commuting_matrix(hin, structure, normalized=False, schema=schema)
    m = cm.mat.toarray() if hasattr(cm.mat, "toarray") else np.asarray(cm.mat)
    i = cm.rows.index((o_s,))
    diag = m.diagonal()
    denom = diag[i] + diag
    scores = np.zeros(len(denom))
    np.divide(2.0 * m[i], denom, out=scores, where=denom > 0)
    targets = list(hin.members[end_type])
    return SimilarityResult(o_s, "pathsim", targets, scores,
                            {"structure": str(structure)})


def bpcrw(hin: HIN, meta_path: MetaPath, o_s: str, alpha: float,
          schema: NetworkSchema | None = None) -> SimilarityResult:
    """Biased path-constrained walk: mass splits as m / |neighbors|^alpha at
    each step; mass reaching the end of the path accrues to its object."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0,1]")
    if schema is None:
        schema = extract_schema(hin)
    meta_path.validate(schema)
    tid, ordinal = hin.objects[o_s]
    if tid != meta_path.source_type:
        raise ValueError(f"object {o_s!r} is not of the path's source type")

    steps = [hin.pair_matrix(a, b)
             for a, b in zip(meta_path.type_ids, meta_path.type_ids[1:])]
    n_targets = hin.count(meta_path.target_type)
    memo: dict[tuple[int, int], np.ndarray] = {}

    def dist(pos: int, obj: int) -> np.ndarray:
        if pos == len(steps):
            out = np.zeros(n_targets)
            out[obj] = 1.0
            return out
        key = (pos, obj)
        if key not in memo:
            w = steps[pos]
            nbrs = w.indices[w.indptr[obj]:w.indptr[obj + 1]]
            out = np.zeros(n_targets)
            if len(nbrs):
                share = 1.0 / len(nbrs) ** alpha
                for y in nbrs:
                    out += share * dist(pos + 1, int(y))
            memo[key] = out
        return memo[key]

    scores = dist(0, ordinal)
    targets = list(hin.members[meta_path.target_type])
    return SimilarityResult(o_s, "bpcrw", targets, scores,
                            {"alpha": alpha, "path": str(meta_path)})


def bscse(hin: HIN, structure: MetaStructure, o_s: str, alpha: float,
          schema: NetworkSchema | None = None) -> SimilarityResult:
    """Biased structure-constrained subgraph expansion over layer tuples.

    A partial instance at layer i expands to every adjacent tuple of layer
    i+1, splitting its mass by |expansions|^alpha; fully expanded instances
    credit their terminal object.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0,1]")
    if schema is None:
        schema = extract_schema(hin)
    structure.validate(schema)
    tid, ordinal = hin.objects[o_s]
    if tid != structure.source_type:
        raise ValueError(f"object {o_s!r} is not of the structure's source type")

    prods = [layer_product(hin, layer) for layer in structure.layers]
    rels = [relation_matrix(hin, schema, a, b).mat
            for a, b in zip(prods, prods[1:])]
    n_targets = prods[-1].size
    memo: dict[tuple[int, int], np.ndarray] = {}

    def dist(layer: int, pos: int) -> np.ndarray:
        if layer == len(rels):
            out = np.zeros(n_targets)
            out[pos] = 1.0
            return out
        key = (layer, pos)
        if key not in memo:
            w = rels[layer]
            adj = w.indices[w.indptr[pos]:w.indptr[pos + 1]]
            out = np.zeros(n_targets)
            if len(adj):
                share = 1.0 / len(adj) ** alpha
                for q in adj:
                    out += share * dist(layer + 1, int(q))
            memo[key] = out
        return memo[key]

    scores = dist(0, ordinal)
    targets = list(hin.members[structure.target_type])
    return SimilarityResult(o_s, "bscse", targets, scores,
                            {"alpha": alpha, "structure": str(structure)})
