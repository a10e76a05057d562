"""
Carving-width of planar networks.

The decision procedure answers "is there a carving whose every cut load is
below k" by a closure game over small cuts: a vertex set is buildable when
its cut is below k and it is a singleton or the disjoint union of two
buildable sets, and a carving exists iff some buildable set has a
buildable complement. For 2-connected graphs only bond sides need to be
considered; bonds are the simple cycles of the planar dual, enumerated
with their load bounded by k.

Other connected graphs are split at their cut vertices. The width is the
largest of the block widths and the star loads, and the block witnesses
are glued by hanging each child block, seen from its cut vertex, next to
that vertex's leaf.

Loads are log2 of bond dimensions. In exact mode, used when every weight
is a power of two, loads are integer exponents and comparisons are exact.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..core import reporting
from ..core.ctree import FreeContractionTree, Nested, free_from_nested, metrics
from ..core.embedding import Embedding, embedding_from_rotation
from ..core.errors import EmptyGraph, NotPlanarEmbedding
from ..core.netgraph import NetworkGraph, is_biconnected

DEFAULT_EPS = 1e-9

Split = Optional[Tuple[int, int]]
Block = Tuple[Tuple[str, ...], Optional[str], Optional["CarvingWidthSolver"]]


@dataclass(frozen=True)
class CarvingWidthQuery:
    """Threshold question "carw(graph) < k" on an embedded graph."""

    graph: NetworkGraph
    embedding: Embedding
    k: float
    eps: float = DEFAULT_EPS
    exact_pow2: bool = False


@dataclass
class CarvingWidthResult:
    """Carving-width in the log2 domain with the exact Bs of a witness carving."""

    carw: float
    bs: int
    decision_calls: int
    elapsed: float
    exact: bool = False
    witness: Optional[FreeContractionTree] = field(default=None, repr=False)

    def as_dict(self) -> Dict[str, object]:
        return {
            "carw": self.carw,
            "bs": str(self.bs),
            "decision_calls": self.decision_calls,
            "elapsed": self.elapsed,
            "exact": self.exact,
        }


def is_power_of_two(w: int) -> bool:
    return w > 0 and w & (w - 1) == 0


def load_within(w: int, target: float, eps: float = DEFAULT_EPS, exact_pow2: bool = False) -> bool:
    """True iff the load of a single bond dimension is at most target."""
    if exact_pow2 and is_power_of_two(w):
        return w.bit_length() - 1 <= target
    return math.log2(w) <= target + eps


class CarvingWidthSolver:
    """
    Decision procedure and width search bound to one embedded graph.

    The solver is read-only after construction, so one instance may serve
    concurrent callers.
    """

    def __init__(self, g: NetworkGraph, emb: Embedding, eps: float = DEFAULT_EPS, exact_pow2: bool = False):
        """
        Args:
            g: Simple connected graph with at least two vertices
            emb: Planar embedding of g
            eps: Tolerance of float comparisons
            exact_pow2: Use integer exponents when every weight is a power of two

        Raises:
            NotPlanarEmbedding: If emb does not belong to g
            EmptyGraph: If g has fewer than two vertices
        """
        if emb.graph is not g and emb.graph != g:
            raise NotPlanarEmbedding("the embedding belongs to another graph")
        if g.n < 2:
            raise EmptyGraph("carving-width needs at least two vertices")
        self.graph = g
        self.embedding = emb
        self.eps = eps
        self.exact = exact_pow2 and all(is_power_of_two(w) for w in g.weight.values())
        if exact_pow2 and not self.exact:
            reporting.log("weights are not all powers of two; using float loads")

        self._index = {v: i for i, v in enumerate(g.vertices)}
        self._full = (1 << g.n) - 1
        self._edges = sorted(g.weight)
        self._edge_index = {e: i for i, e in enumerate(self._edges)}
        self._loads = [self.load_of(g.weight[e]) for e in self._edges]
        self._ends = [(self._index[u], self._index[v]) for u, v in self._edges]
        self._star = [self.cut_load(1 << i) for i in range(g.n)]
        self._biconnected = is_biconnected(g)
        self._dual = emb.dual()
        self._blocks: List[Block] = [] if self._biconnected else self._split_blocks()

    def _split_blocks(self) -> List[Block]:
        """
        Blocks in breadth-first order of the block-cut tree.

        Each entry holds the block's vertices, the cut vertex shared with its
        parent block (None for the first) and a solver for blocks of three or
        more vertices. Block solvers inherit the load mode of this one.
        """
        g = self.graph
        blocks = sorted((tuple(sorted(b)) for b in nx.biconnected_components(g.to_networkx())))
        containing: Dict[str, List[int]] = {}
        for i, block in enumerate(blocks):
            for v in block:
                containing.setdefault(v, []).append(i)

        order: List[Tuple[int, Optional[str]]] = [(0, None)]
        seen = {0}
        position = 0
        while position < len(order):
            for v in blocks[order[position][0]]:
                for j in containing[v]:
                    if j not in seen:
                        seen.add(j)
                        order.append((j, v))
            position += 1

        result: List[Block] = []
        for i, cut in order:
            vertices = blocks[i]
            solver = None
            if len(vertices) > 2:
                members = set(vertices)
                sub = NetworkGraph(vertices, [(u, v, w) for (u, v), w in g.weight.items() if u in members and v in members])
                solver = CarvingWidthSolver(sub, embedding_from_rotation(sub, self.embedding.rotation), self.eps, self.exact)
            result.append((vertices, cut, solver))
        return result

    # --- lattice ---

    def load_of(self, w: int):
        return w.bit_length() - 1 if self.exact else math.log2(w)

    def below(self, value, k: float) -> bool:
        """True iff a load counts as strictly less than k."""
        return value < k if self.exact else value < k - self.eps

    def cut_load(self, mask: int):
        total = 0
        for (a, b), load in zip(self._ends, self._loads):
            if (mask >> a & 1) != (mask >> b & 1):
                total += load
        return total

    def width_of(self, t: FreeContractionTree):
        bs = metrics(t).bs
        return bs.bit_length() - 1 if self.exact else math.log2(bs)

    # --- decision ---

    def decide(self, k: float) -> bool:
        """True iff the carving-width is below k."""
        return self.decide_with_witness(k) is not None

    def decide_with_witness(self, k: float) -> Optional[FreeContractionTree]:
        """A carving of width below k, or None when there is none."""
        nested = self._witness(k)
        return None if nested is None else free_from_nested(nested, self.graph)

    def _witness(self, k: float) -> Optional[Nested]:
        g = self.graph
        if g.n == 2:
            return list(g.vertices) if self.below(self._loads[0], k) else None
        if not all(self.below(load, k) for load in self._star):
            return None
        if not self._biconnected:
            return self._glue_blocks(k)
        splits, top = self._close_bonds(k)
        if top is None:
            return None
        return [self._nested(top[0], splits), self._nested(top[1], splits)]

    def _nested(self, mask: int, splits: Dict[int, Split]) -> Nested:
        parts = splits.get(mask)
        if parts is None:
            return self.graph.vertices[mask.bit_length() - 1]
        return [self._nested(parts[0], splits), self._nested(parts[1], splits)]

    def _glue_blocks(self, k: float) -> Optional[Nested]:
        """Carving of a graph with cut vertices from carvings of its blocks; star loads are already below k."""
        top: Optional[Nested] = None
        hanging: Dict[str, List[Nested]] = {}
        for vertices, cut, solver in self._blocks:
            if solver is None:
                nested: Optional[Nested] = list(vertices)
            else:
                nested = solver._witness(k)
                if nested is None:
                    return None
            if cut is None:
                top = nested
            else:
                hanging.setdefault(cut, []).append(hang_from(nested, cut))
        return _expand(top, hanging)

    def _close_bonds(self, k: float) -> Tuple[Dict[int, Split], Optional[Tuple[int, int]]]:
        regions = set(1 << i for i in range(self.graph.n))
        for bond in self._small_bonds(k):
            side = self._side_of(bond)
            regions.add(side)
            regions.add(self._full ^ side)

        by_low: Dict[int, List[int]] = {}
        for region in regions:
            by_low.setdefault(region & -region, []).append(region)
        splits: Dict[int, Split] = {}
        for region in sorted(regions, key=lambda r: (bin(r).count("1"), r)):
            if region & (region - 1) == 0:
                splits[region] = None
                continue
            low = region & -region
            for part in by_low[low]:
                if part != region and part & ~region == 0 and part in splits and (region ^ part) in splits:
                    splits[region] = (part, region ^ part)
                    break
        for region in sorted(splits):
            if region & 1 and (self._full ^ region) in splits:
                return splits, (region, self._full ^ region)
        return splits, None

    def _side_of(self, bond: int) -> int:
        """Vertex mask of the side of a bond containing vertex 0."""
        neighbours: Dict[int, List[int]] = {i: [] for i in range(self.graph.n)}
        for i, (a, b) in enumerate(self._ends):
            if not bond >> i & 1:
                neighbours[a].append(b)
                neighbours[b].append(a)
        mask, stack = 1, [0]
        while stack:
            current = stack.pop()
            for other in neighbours[current]:
                if not mask >> other & 1:
                    mask |= 1 << other
                    stack.append(other)
        return mask

    def _small_bonds(self, k: float) -> set:
        """Edge masks of all bonds with load below k, as simple cycles of the dual."""
        faces = len(self.embedding.faces)
        dual = [
            [(other, self._edge_index[e], self._loads[self._edge_index[e]]) for other, e in self._dual[f]]
            for f in range(faces)
        ]
        found = set()
        for start in range(faces):
            reach = nx.MultiGraph()
            reach.add_nodes_from(range(start, faces))
            for f in range(start, faces):
                for other, index, load in dual[f]:
                    if other >= start and f <= other:
                        reach.add_edge(f, other, weight=load)
            distance = nx.single_source_dijkstra_path_length(reach, start)
            visited = [False] * faces
            visited[start] = True

            def walk(face: int, total, used: int) -> None:
                for other, index, load in dual[face]:
                    if other < start or used >> index & 1:
                        continue
                    reached = total + load
                    if other == start:
                        if face != start and self.below(reached, k):
                            found.add(used | 1 << index)
                        continue
                    if visited[other] or other not in distance:
                        continue
                    if not self.below(reached + distance[other], k):
                        continue
                    visited[other] = True
                    walk(other, reached, used | 1 << index)
                    visited[other] = False

            walk(start, 0, 0)
        return found

    # --- search ---

    def carving_width(self) -> CarvingWidthResult:
        """
        Exact carving-width by doubling then bisection, jumping to witness widths.

        The lower bound starts at the heaviest single edge; each successful
        decision replaces the upper bound by the width of its witness carving,
        and the search stops once nothing strictly below the upper bound exists.
        """
        started = time.perf_counter()
        g = self.graph
        calls = 0
        if g.n == 2:
            best = free_from_nested(list(g.vertices), g)
            return self._result(best, calls, started)

        step = 1 if self.exact else 2 * self.eps
        lo = max(self._loads)
        k = max(2 * lo, 1)
        while True:
            calls += 1
            best = self.decide_with_witness(k)
            reporting.log(f"decide(k={k}) -> {best is not None}")
            if best is not None:
                break
            lo = max(lo, k - self.eps)
            k *= 2
        hi = self.width_of(best)

        while True:
            calls += 1
            better = self.decide_with_witness(hi)
            reporting.log(f"decide(k={hi}) -> {better is not None}")
            if better is None:
                break
            best, hi = better, self.width_of(better)
            if hi - lo <= step:
                continue
            mid = (lo + hi) / 2
            calls += 1
            better = self.decide_with_witness(mid)
            reporting.log(f"decide(k={mid}) -> {better is not None}")
            if better is None:
                lo = mid - (0 if self.exact else self.eps)
            else:
                best, hi = better, self.width_of(better)
        return self._result(best, calls, started)

    def _result(self, best: FreeContractionTree, calls: int, started: float) -> CarvingWidthResult:
        return CarvingWidthResult(
            carw=float(self.width_of(best)),
            bs=metrics(best).bs,
            decision_calls=calls,
            elapsed=time.perf_counter() - started,
            exact=self.exact,
            witness=best,
        )

    def within_width(self, target: float) -> bool:
        """True iff the carving-width is at most `target`."""
        return self.decide(target + (0.5 if self.exact else 2 * self.eps))


def _contains(nested: Nested, leaf: str) -> bool:
    if isinstance(nested, str):
        return nested == leaf
    return any(_contains(child, leaf) for child in nested)


def hang_from(nested: Nested, leaf: str) -> Nested:
    """
    Re-root a carving at one of its leaves and drop that leaf.

    `nested` is a carving with its top node suppressed; the result is the
    rooted tree that remains once `leaf` is cut off, rooted where it hung.
    """
    siblings: List[Nested] = []
    node = nested
    while node != leaf:
        left, right = node
        if _contains(left, leaf):
            siblings.append(right)
            node = left
        else:
            siblings.append(left)
            node = right
    hung = siblings[0]
    for sibling in siblings[1:]:
        hung = [sibling, hung]
    return hung


def _expand(nested: Nested, hanging: Dict[str, List[Nested]]) -> Nested:
    if isinstance(nested, str):
        item: Nested = nested
        for hung in hanging.get(nested, ()):
            item = [item, _expand(hung, hanging)]
        return item
    return [_expand(child, hanging) for child in nested]


def decide(q: CarvingWidthQuery) -> bool:
    """
    True iff carw(q.graph) < q.k.

    Raises:
        NotPlanarEmbedding: If the embedding does not match the graph
    """
    return CarvingWidthSolver(q.graph, q.embedding, q.eps, q.exact_pow2).decide(q.k)


def carving_width(
    g: NetworkGraph, emb: Embedding, eps: float = DEFAULT_EPS, exact_pow2: bool = False
) -> CarvingWidthResult:
    return CarvingWidthSolver(g, emb, eps, exact_pow2).carving_width()


def within_width(
    g: NetworkGraph, emb: Embedding, target: float, eps: float = DEFAULT_EPS, exact_pow2: bool = False
) -> bool:
    return CarvingWidthSolver(g, emb, eps, exact_pow2).within_width(target)

