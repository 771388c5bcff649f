"""Clustering and ranking evaluation, plus the parameter sweep harness.

k-means is seeded k-means++ with Lloyd iterations to an assignment
fixpoint; NMI normalizes mutual information by the arithmetic mean of the
two entropies; nDCG uses gains g_i with discount 1/log2(i+1) over the full
list unless a cutoff is requested. All randomness derives from one 64-bit
seed through numpy SeedSequence spawning.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .hin import HIN
from .matrix import SmsRowEngine, SmsWeights
from .structures import StratifiedMetaStructure


@dataclass
class ClusteringBenchmark:
    labels: dict[str, int]

    @property
    def k(self) -> int:
        return len(set(self.labels.values()))

    def validate_against(self, hin: HIN) -> None:
        missing = [o for o in self.labels if o not in hin.objects]
        if missing:
            raise ValueError(f"benchmark objects not in HIN: {missing[:5]}")


@dataclass
class RelevanceJudgments:
    gains: dict[str, int]

    def __post_init__(self):
        bad = {o: g for o, g in self.gains.items()
               if not isinstance(g, (int, np.integer)) or not 0 <= g <= 3}
        if bad:
            raise ValueError(f"gains must be integers in 0..3, got {bad}")


@dataclass(frozen=True)
class SweepConfig:
    lambda_grid: tuple[float, ...]
    beta_pairs: tuple[tuple[float, float], ...]
    samples_per_pair: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "lambda_grid",
                           tuple(float(l) for l in self.lambda_grid))
        object.__setattr__(self, "beta_pairs",
                           tuple((float(a), float(b))
                                 for a, b in self.beta_pairs))
        if any(not 0.0 < l < 1.0 for l in self.lambda_grid):
            raise ValueError("lambda grid values must lie in (0,1)")
        if any(a < 1 or b < 1 for a, b in self.beta_pairs):
            raise ValueError("Beta hyper-parameters must be >= 1")
        if self.samples_per_pair < 1:
            raise ValueError("samples_per_pair must be >= 1")


def kmeans(features, k: int, seed: int, max_iter: int = 300) -> np.ndarray:
    """Seeded k-means++ / Lloyd, run to assignment fixpoint."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("features must be a 2-D matrix")
    n = x.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} available rows")
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    # k-means++ seeding
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[c] = x[rng.integers(n)]
        else:
            centers[c] = x[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((x - centers[c]) ** 2, axis=1))

    assign = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iter):
        dists = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(dists, axis=1)
        revived: set[int] = set()
        for c in range(k):
            if not np.any(new_assign == c):
                # revive an empty cluster at the farthest unclaimed point
                gaps = dists[np.arange(n), new_assign].copy()
                for r in revived:
                    gaps[r] = -1.0
                far = int(np.argmax(gaps))
                new_assign[far] = c
                revived.add(far)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            centers[c] = x[assign == c].mean(axis=0)
    return assign


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth) -> float:
    """Mutual information over the arithmetic mean of entropies."""
    pred = list(pred)
    truth = list(truth)
    if not pred or len(pred) != len(truth):
        raise ValueError("pred and truth must be equal-length, non-empty")
    n = len(pred)
    p_ids = {v: i for i, v in enumerate(dict.fromkeys(pred))}
    t_ids = {v: i for i, v in enumerate(dict.fromkeys(truth))}
    cont = np.zeros((len(p_ids), len(t_ids)))
    for a, b in zip(pred, truth):
        cont[p_ids[a], t_ids[b]] += 1
    hp = _entropy(cont.sum(axis=1), n)
    ht = _entropy(cont.sum(axis=0), n)
    if hp == 0.0 and ht == 0.0:
        return 1.0  # two trivial single-cluster labelings agree
    mi = 0.0
    rows = cont.sum(axis=1)
    cols = cont.sum(axis=0)
    for i in range(cont.shape[0]):
        for j in range(cont.shape[1]):
            nij = cont[i, j]
            if nij > 0:
                mi += (nij / n) * math.log(n * nij / (rows[i] * cols[j]))
    return mi / ((hp + ht) / 2.0)


def ndcg(ranking, judgments, at: int | None = None) -> float:
    """Graded ranking quality in [0,1]; gains default to 0 when unjudged."""
    gains_map = judgments.gains if isinstance(judgments, RelevanceJudgments) \
        else dict(judgments)
    gains = [gains_map.get(o, 0) for o in ranking]
    if at is not None:
        gains = gains[:at]
    ideal = sorted(gains_map.values(), reverse=True)
    if at is not None:
        ideal = ideal[:at]
    else:
        # pad/trim the ideal list to the evaluated length
        ideal = ideal[:len(gains)]

    def dcg(gs):
        return sum(g / math.log2(i + 1) for i, g in enumerate(gs, start=1))

    idcg = dcg(ideal)
    if idcg <= 0:
        return 0.0
    return dcg(gains) / idcg


def sample_weights(beta_pair, h0: int, samples: int, seed: int):
    """Seeded weight vectors: one Beta draw and its complement at h0=2,
    h0 normalized draws beyond."""
    a, b = beta_pair
    if a <= 0 or b <= 0:
        raise ValueError("Beta hyper-parameters must be positive")
    if h0 < 1:
        raise ValueError("h0 must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    out = []
    for _ in range(samples):
        if h0 == 1:
            out.append((1.0,))
        elif h0 == 2:
            w0 = float(rng.beta(a, b))
            out.append((w0, 1.0 - w0))
        else:
            draws = rng.beta(a, b, size=h0)
            s = draws.sum()
            if s <= 0:
                draws = np.full(h0, 1.0 / h0)
                s = 1.0
            out.append(tuple(float(d / s) for d in draws))
    return out


@dataclass
class SweepRow:
    lam: float
    w: tuple[float, ...]
    score: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    per_lambda_best: dict[float, SweepRow] = field(default_factory=dict)
    best: SweepRow | None = None


def sweep(hin: HIN, sms: StratifiedMetaStructure, task: str,
          config: SweepConfig, benchmark: ClusteringBenchmark | None = None,
          judgments: RelevanceJudgments | None = None,
          source: str | None = None, threads: int = 1) -> SweepResult:
    """Evaluate the SMS similarity across (lambda, sampled weights).

    task "cluster": k-means over similarity rows of every benchmark object,
    scored by NMI against the benchmark. task "rank": one source's ranking
    scored by nDCG against the judgments.

    Cells are pure functions of (data, lambda, w, seed), so running them on
    ``threads`` workers cannot change any score; row order is fixed by the
    (lambda grid, sample) grid either way.
    """
    if task == "cluster":
        if benchmark is None:
            raise ValueError("cluster task needs a benchmark")
        benchmark.validate_against(hin)
    elif task == "rank":
        if judgments is None or source is None:
            raise ValueError("rank task needs judgments and a source object")
    else:
        raise ValueError(f"unknown task: {task}")

    engine = SmsRowEngine(hin, sms)
    h0 = sms.h0
    root = np.random.SeedSequence(config.seed)
    pair_seeds = root.spawn(len(config.beta_pairs) + 1)
    kmeans_seed = int(pair_seeds[-1].generate_state(1)[0])

    samples: list[tuple[float, ...]] = []
    for p_idx, pair in enumerate(config.beta_pairs):
        seed_p = int(pair_seeds[p_idx].generate_state(1)[0])
        samples.extend(sample_weights(pair, h0, config.samples_per_pair,
                                      seed_p))

    cells = [(lam, w) for lam in config.lambda_grid for w in samples]

    def run_cell(cell: tuple[float, tuple[float, ...]]) -> SweepRow:
        lam, w = cell
        score = _evaluate(hin, sms, engine, SmsWeights(lam, w), task,
                          benchmark, judgments, source, kmeans_seed)
        return SweepRow(lam, w, score)

    if threads > 1:
        # engine caches are only ever extended with identical values, so
        # concurrent reuse at worst recomputes a row
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]

    per_lambda: dict[float, SweepRow] = {}
    for r in rows:
        cur = per_lambda.get(r.lam)
        if cur is None or r.score > cur.score:
            per_lambda[r.lam] = r
    best = max(rows, key=lambda r: r.score) if rows else None
    return SweepResult(rows, per_lambda, best)


def _evaluate(hin, sms, engine: SmsRowEngine, weights: SmsWeights, task: str,
              benchmark, judgments, source, kmeans_seed: int) -> float:
    from .similarity import smss, smss_matrix

    if task == "cluster":
        objects = sorted(benchmark.labels)
        feats = smss_matrix(hin, sms, objects, weights, engine=engine)
        truth = [benchmark.labels[o] for o in objects]
        pred = kmeans(feats, benchmark.k, kmeans_seed)
        return nmi(pred.tolist(), truth)
    result = smss(hin, sms, source, weights, engine=engine)
    ranking = [t for t, _ in result.ranked()]
    return ndcg(ranking, judgments)


def load_benchmark(path) -> ClusteringBenchmark:
    """TSV `object_id<TAB>cluster_label` with # comments and blank lines
    allowed; labels are opaque strings."""
    labels: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"line {line_no}: expected `object<TAB>cluster`, "
                    f"got {line!r}")
            labels[parts[0]] = parts[1]
    if not labels:
        raise ValueError("benchmark file holds no labels")
    return ClusteringBenchmark(labels)


def load_judgments(path, source: str | None = None) -> RelevanceJudgments:
    """TSV `source_id<TAB>object_id<TAB>gain` with gains in 0..3.

    Returns the judgments of ``source``; when omitted the file must judge
    exactly one source.
    """
    per_source: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(
                    f"line {line_no}: expected `source<TAB>object<TAB>gain`, "
                    f"got {line!r}")
            try:
                gain = int(parts[2])
            except ValueError:
                raise ValueError(
                    f"line {line_no}: gain must be an integer, "
                    f"got {parts[2]!r}") from None
            per_source.setdefault(parts[0], {})[parts[1]] = gain
    if not per_source:
        raise ValueError("judgments file holds no entries")
    if source is None:
        if len(per_source) != 1:
            raise ValueError(
                "judgments file covers several sources; pass one of: "
                + ", ".join(sorted(per_source)))
        source = next(iter(per_source))
    if source not in per_source:
        raise ValueError(f"no judgments for source {source!r}")
    return RelevanceJudgments(per_source[source])
