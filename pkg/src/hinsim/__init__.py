"""Similarity search over heterogeneous information networks.

The package splits into ingestion (:mod:`hinsim.hin`), structure derivation
(:mod:`hinsim.structures`), the sparse matrix pipeline (:mod:`hinsim.matrix`),
the similarity measures themselves (:mod:`hinsim.similarity`), evaluation
utilities (:mod:`hinsim.evaluation`), and a click CLI (:mod:`hinsim.cli`).
"""

from .evaluation import (ClusteringBenchmark, RelevanceJudgments, SweepConfig,
                         SweepResult, SweepRow, kmeans, load_benchmark,
                         load_judgments, ndcg, nmi, sample_weights, sweep)
from .hin import (HIN, IngestError, LinkType, NetworkSchema, ObjectType,
                  bfs_tree_height, extract_schema, load_hin)
from .kernels import IMPLEMENTATION as kernel_implementation
from .matrix import (CommutingMatrix, LayerProduct, LocalizedChain,
                     RelationMatrix, SmsRowEngine, SmsWeights,
                     commuting_matrix, layer_product, localized_chain,
                     lu_solve, prune_zero_columns, relation_matrix,
                     row_normalize, sms_commuting_row, truncated_series)
from .similarity import (SimilarityResult, bpcrw, bscse, pathsim, smss,
                         smss_matrix)
from .structures import (MetaPath, MetaStructure, SmsConstructionError,
                         StratifiedMetaStructure, as_meta_path, build_sms,
                         expand_layers, meta_structure_at, n_recurrences)

__version__ = "0.1.0"

__all__ = [
    "HIN", "IngestError", "LinkType", "NetworkSchema", "ObjectType",
    "bfs_tree_height", "extract_schema", "load_hin",
    "MetaPath", "MetaStructure", "SmsConstructionError",
    "StratifiedMetaStructure", "as_meta_path", "build_sms", "expand_layers",
    "meta_structure_at", "n_recurrences",
    "CommutingMatrix", "LayerProduct", "LocalizedChain", "RelationMatrix",
    "SmsRowEngine", "SmsWeights", "commuting_matrix", "layer_product",
    "localized_chain", "lu_solve", "prune_zero_columns", "relation_matrix",
    "row_normalize", "sms_commuting_row", "truncated_series",
    "SimilarityResult", "bpcrw", "bscse", "pathsim", "smss", "smss_matrix",
    "ClusteringBenchmark", "RelevanceJudgments", "SweepConfig", "SweepResult",
    "SweepRow", "kmeans", "load_benchmark", "load_judgments", "ndcg", "nmi",
    "sample_weights", "sweep",
    "kernel_implementation", "__version__",
]
