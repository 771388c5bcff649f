"""Shared fixtures and independent oracles.

Networks are built from inline TSV so every test exercises the real loader.
Oracles work from the raw edge list (an id-pair set), never from the
package's adjacency structures, so matrix tests compare two independent
routes to the same numbers.
"""

import io

import numpy as np
import pytest

from hinsim import load_hin


def hin_from(nodes: str, edges: str):
    return load_hin(io.StringIO(nodes), io.StringIO(edges))


class RawGraph:
    """Edge-set view of the same TSV the loader consumed."""

    def __init__(self, nodes: str, edges: str):
        self.type_of = {}
        for line in nodes.strip().splitlines():
            if not line or line.startswith("#"):
                continue
            oid, tname = line.split("\t")[:2]
            self.type_of[oid] = tname
        self.edges = set()
        for line in edges.strip().splitlines():
            if not line or line.startswith("#"):
                continue
            a, b = line.split("\t")[:2]
            self.edges.add((a, b))
            self.edges.add((b, a))
        self.schema_pairs = {(self.type_of[a], self.type_of[b])
                             for a, b in self.edges}

    def adjacent(self, s, t):
        """AND over component pairs whose types share a schema edge."""
        for u in s:
            for v in t:
                if (self.type_of[u], self.type_of[v]) in self.schema_pairs \
                        and (u, v) not in self.edges:
                    return False
        return True

    def relation(self, row_tuples, col_tuples) -> np.ndarray:
        rows = list(row_tuples)
        cols = list(col_tuples)
        out = np.zeros((len(rows), len(cols)))
        for i, s in enumerate(rows):
            for j, t in enumerate(cols):
                if self.adjacent(s, t):
                    out[i, j] = 1.0
        return out


# a small closed author/paper/venue/term network, shaped like the usual
# bibliographic schema; not the walkthrough fixture
APVT_NODES = """\
a1\tA
a2\tA
a3\tA
p1\tP
p2\tP
p3\tP
p4\tP
v1\tV
v2\tV
t1\tT
t2\tT
t3\tT
"""

APVT_EDGES = """\
a1\tp1
a1\tp2
a2\tp2
a2\tp3
a3\tp3
a3\tp4
p1\tv1
p2\tv1
p3\tv2
p4\tv2
p1\tt1
p2\tt1
p2\tt2
p3\tt2
p3\tt3
p4\tt3
"""


@pytest.fixture
def apvt():
    return hin_from(APVT_NODES, APVT_EDGES)


@pytest.fixture
def apvt_raw():
    return RawGraph(APVT_NODES, APVT_EDGES)


# two-type co-authorship core for path measures
AP_NODES = """\
x\tA
y\tA
z\tA
q1\tP
q2\tP
"""

AP_EDGES = """\
x\tq1
y\tq1
y\tq2
z\tq2
"""


@pytest.fixture
def ap():
    return hin_from(AP_NODES, AP_EDGES)
