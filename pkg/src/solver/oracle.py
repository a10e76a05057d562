"""
Exact reference answers for small networks.
Exhaustive tree enumeration, brute-force carving-width, the minimum total
contraction cost by dynamic programming over vertex subsets, and a dense
numeric executor to check contraction sequences end to end.
"""

import math
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core import reporting
from ..core.ctree import FreeContractionTree, Nested, RootedContractionTree, free_from_nested, from_nested
from ..core.errors import BudgetExceeded, DimensionMismatch, InvariantViolation, MalformedSequence, TooLarge
from ..core.netgraph import Edge, NetworkGraph
from .sequencer import ContractionSequence

BRUTE_MAX_VERTICES = 9
EXACT_MAX_VERTICES = 20
REFERENCE_MAX_ASSIGNMENTS = 10 ** 8
EINSUM_MAX_LABELS = 52
NUMERIC_RTOL = 1e-8


# --- enumeration ---


def rooted_shapes(labels: Sequence[str]) -> Iterator[Nested]:
    """Every rooted full binary tree over `labels`, by inserting leaves one at a time."""
    if len(labels) == 1:
        yield labels[0]
        return
    for smaller in rooted_shapes(labels[:-1]):
        yield from _insertions(smaller, labels[-1])


def _insertions(nested: Nested, v: str) -> Iterator[Nested]:
    yield [nested, v]
    if not isinstance(nested, str):
        left, right = nested
        for option in _insertions(left, v):
            yield [option, right]
        for option in _insertions(right, v):
            yield [left, option]


def enumerate_rooted_trees(g: NetworkGraph) -> Iterator[RootedContractionTree]:
    """All (2n-3)!! rooted contraction trees of g."""
    for nested in rooted_shapes(list(g.vertices)):
        yield from_nested(nested, g)


def enumerate_free_trees(g: NetworkGraph) -> Iterator[FreeContractionTree]:
    """All (2n-5)!! free contraction trees of g, as rooted trees on the other leaves hung off the first vertex."""
    first, rest = g.vertices[0], list(g.vertices[1:])
    for nested in rooted_shapes(rest):
        yield free_from_nested([first, nested], g)


class _CutTable:
    """Exact cut weights of vertex masks, memoized."""

    def __init__(self, g: NetworkGraph):
        self.graph = g
        self.index = {v: i for i, v in enumerate(g.vertices)}
        self.ends = [(self.index[u], self.index[v], w) for (u, v), w in g.weight.items()]
        self._memo: Dict[int, int] = {}

    def __call__(self, mask: int) -> int:
        found = self._memo.get(mask)
        if found is None:
            found = math.prod(w for a, b, w in self.ends if (mask >> a & 1) != (mask >> b & 1))
            self._memo[mask] = found
        return found

    def mask(self, nested: Nested) -> int:
        if isinstance(nested, str):
            return 1 << self.index[nested]
        return self.mask(nested[0]) | self.mask(nested[1])


def _free_shape_costs(cut: _CutTable, nested: Nested) -> Tuple[int, int, int]:
    """(Bs, free Ct, lightest arc) of the free tree with vertex 0 hung above `nested`."""
    arcs: List[int] = []
    ct = 0

    def walk(item: Nested) -> int:
        nonlocal ct
        if isinstance(item, str):
            mask = 1 << cut.index[item]
        else:
            x, y = walk(item[0]), walk(item[1])
            mask = x | y
            ct += math.isqrt(cut(x) * cut(y) * cut(mask))
        arcs.append(cut(mask))
        return mask

    walk(nested)
    return max(arcs), ct, min(arcs)


def _check_brute_size(g: NetworkGraph) -> None:
    if g.n > BRUTE_MAX_VERTICES:
        raise TooLarge(f"exhaustive search is limited to {BRUTE_MAX_VERTICES} vertices, got {g.n}")


def brute_bs(g: NetworkGraph) -> Tuple[int, FreeContractionTree]:
    """
    Smallest space bottleneck over every free tree, with a tree achieving it.

    Raises:
        TooLarge: If g has more than BRUTE_MAX_VERTICES vertices
    """
    _check_brute_size(g)
    cut = _CutTable(g)
    if g.n == 2:
        return cut(1), free_from_nested(list(g.vertices), g)
    first, rest = g.vertices[0], list(g.vertices[1:])
    best: Optional[Tuple[int, Nested]] = None
    for nested in rooted_shapes(rest):
        bs = _free_shape_costs(cut, nested)[0]
        if best is None or bs < best[0]:
            best = (bs, nested)
    return best[0], free_from_nested([first, best[1]], g)


def brute_cw(g: NetworkGraph, exact_pow2: bool = False) -> float:
    """Carving-width by exhaustive search; an integer exponent when exact_pow2 and Bs is a power of two."""
    bs, _ = brute_bs(g)
    if exact_pow2 and bs & (bs - 1) == 0:
        return float(bs.bit_length() - 1)
    return math.log2(bs)


def min_ct_over_bs_optimal(g: NetworkGraph) -> Tuple[int, FreeContractionTree]:
    """
    Smallest optimally-rooted Ct among free trees of minimum Bs.

    Returns:
        The rooted total time (free Ct plus lightest arc) and a free tree achieving it
    """
    _check_brute_size(g)
    cut = _CutTable(g)
    if g.n == 2:
        return cut(1), free_from_nested(list(g.vertices), g)
    first, rest = g.vertices[0], list(g.vertices[1:])
    best: Optional[Tuple[int, int, Nested]] = None
    for nested in rooted_shapes(rest):
        bs, ct, lightest = _free_shape_costs(cut, nested)
        key = (bs, ct + lightest)
        if best is None or key < best[:2]:
            best = (bs, ct + lightest, nested)
    return best[1], free_from_nested([first, best[2]], g)


# --- subset dynamic programming ---


def exact_min_ct(g: NetworkGraph, budget_s: Optional[float] = None) -> Tuple[int, RootedContractionTree]:
    """
    Minimum total time over all rooted contraction trees.

    cost(S) is the cheapest way to contract the vertices of S into one tensor:
    the minimum over splits S = X + Y of cost(X) + cost(Y) plus the 3-cut
    weight of (X, Y, rest). Outer products between disconnected parts are allowed.

    Args:
        g: Simple network graph
        budget_s: Wall-clock budget in seconds, unlimited when None

    Returns:
        The optimum and a rooted tree achieving it

    Raises:
        TooLarge: If g has more than EXACT_MAX_VERTICES vertices
        BudgetExceeded: If the budget runs out
    """
    if g.n > EXACT_MAX_VERTICES:
        raise TooLarge(f"subset DP is limited to {EXACT_MAX_VERTICES} vertices, got {g.n}")
    started = time.perf_counter()
    cut = _CutTable(g)
    full = (1 << g.n) - 1
    cuts = [1] * (full + 1)
    for mask in range(1, full + 1):
        cuts[mask] = cut(mask) if mask & (mask - 1) == 0 else 0
    # cut(S + v) = cut(S) * star(v) / w(v, S)^2
    neighbours = [[(cut.index[u], w) for u, w in g.neighbors(v).items()] for v in g.vertices]
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        shared = math.prod(w for other, w in neighbours[low] if rest >> other & 1)
        cuts[mask] = cuts[rest] * cuts[1 << low] // (shared * shared)

    cost = [0] * (full + 1)
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        if budget_s is not None and mask & 0xFFF == 0 and time.perf_counter() - started > budget_s:
            raise BudgetExceeded(f"subset DP exceeded {budget_s}s at {mask}/{full}")
        low = mask & -mask
        best = None
        pick = 0
        outer = cuts[mask]
        part = (mask - 1) & mask
        while part:
            if part & low:
                other = mask ^ part
                partial = cost[part] + cost[other]
                if best is None or partial < best:
                    total = partial + math.isqrt(cuts[part] * cuts[other] * outer)
                    if best is None or total < best:
                        best, pick = total, part
            part = (part - 1) & mask
        cost[mask], choice[mask] = best, pick
    reporting.log(f"subset DP over {g.n} vertices took {time.perf_counter() - started:.2f}s")

    def nested(mask: int) -> Nested:
        if mask & (mask - 1) == 0:
            return g.vertices[mask.bit_length() - 1]
        return [nested(choice[mask]), nested(mask ^ choice[mask])]

    return cost[full], from_nested(nested(full), g)


# --- numeric execution ---


@dataclass
class DenseTensor:
    """A vertex tensor: one axis per incident edge, axes in sorted edge order."""

    labels: Tuple[Edge, ...]
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != len(self.labels):
            raise DimensionMismatch(f"{len(self.labels)} labels for a {self.data.ndim}-axis array")


def random_tensors(g: NetworkGraph, rng: np.random.Generator) -> Dict[str, DenseTensor]:
    """Tensors with standard complex normal entries."""
    tensors = {}
    for v in g.vertices:
        labels = tuple(sorted(g.incident_edges(v)))
        shape = tuple(g.weight[e] for e in labels)
        tensors[v] = DenseTensor(labels, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return tensors


def ones_tensors(g: NetworkGraph) -> Dict[str, DenseTensor]:
    tensors = {}
    for v in g.vertices:
        labels = tuple(sorted(g.incident_edges(v)))
        tensors[v] = DenseTensor(labels, np.ones(tuple(g.weight[e] for e in labels), dtype=complex))
    return tensors


def _check_tensors(g: NetworkGraph, tensors: Mapping[str, DenseTensor]) -> None:
    for v in g.vertices:
        if v not in tensors:
            raise DimensionMismatch(f"no tensor for vertex {v!r}")
        tensor = tensors[v]
        expected = tuple(sorted(g.incident_edges(v)))
        if tensor.labels != expected:
            raise DimensionMismatch(f"tensor {v!r} has labels {tensor.labels}, expected {expected}")
        if tensor.data.shape != tuple(g.weight[e] for e in expected):
            raise DimensionMismatch(f"tensor {v!r} has shape {tensor.data.shape}")


def execute(g: NetworkGraph, tensors: Mapping[str, DenseTensor], seq: ContractionSequence) -> complex:
    """
    Contract the network pairwise in sequence order.

    Each step's multiply-add count (product of all dimensions it touches)
    is checked against the step's time cost.

    Raises:
        DimensionMismatch: If a tensor does not fit its vertex
        MalformedSequence: If an operand is not available
        InvariantViolation: If a step's work differs from its recorded cost
    """
    _check_tensors(g, tensors)
    resident: Dict[frozenset, DenseTensor] = {frozenset([v]): tensors[v] for v in g.vertices}
    weight = g.weight
    for i, step in enumerate(seq.steps):
        if step.left not in resident or step.right not in resident or step.left & step.right:
            raise MalformedSequence(f"step {i}: operands are not available")
        a, b = resident.pop(step.left), resident.pop(step.right)
        touched = sorted(set(a.labels) | set(b.labels))
        out = tuple(e for e in touched if (e in a.labels) != (e in b.labels))
        madds = math.prod(weight[e] for e in touched)
        if madds != step.time_cost:
            raise InvariantViolation(
                f"step {i} performs {madds} multiply-adds but records {step.time_cost}",
                {"step": i, "madds": str(madds), "cost": str(step.time_cost)},
            )
        ids = {e: j for j, e in enumerate(touched)}
        data = np.einsum(a.data, [ids[e] for e in a.labels], b.data, [ids[e] for e in b.labels], [ids[e] for e in out])
        resident[step.result] = DenseTensor(out, np.asarray(data))
    if len(resident) != 1:
        raise MalformedSequence(f"{len(resident)} tensors remain after the last step")
    (result,) = resident.values()
    return complex(result.data)


def full_contraction_reference(g: NetworkGraph, tensors: Mapping[str, DenseTensor]) -> complex:
    """
    Sum over every joint index assignment of the product of tensor entries, with no ordering.

    Raises:
        TooLarge: If there are more than REFERENCE_MAX_ASSIGNMENTS assignments
    """
    _check_tensors(g, tensors)
    assignments = g.total_weight()
    if assignments > REFERENCE_MAX_ASSIGNMENTS or len(g.weight) > EINSUM_MAX_LABELS:
        raise TooLarge(f"{assignments} joint assignments exceed the reference limit")
    ids = {e: j for j, e in enumerate(sorted(g.weight))}
    operands = []
    for v in g.vertices:
        operands += [tensors[v].data, [ids[e] for e in tensors[v].labels]]
    return complex(np.einsum(*operands, [], optimize=False))


@dataclass
class NumericCheck:
    value: complex
    reference: complex

    @property
    def error(self) -> float:
        """Distance to the reference, relative to its magnitude (absolute below 1)."""
        return abs(self.value - self.reference) / max(1.0, abs(self.reference))

    @property
    def ok(self) -> bool:
        return self.error <= NUMERIC_RTOL

    def as_dict(self) -> Dict[str, object]:
        return {
            "value": [self.value.real, self.value.imag],
            "reference": [self.reference.real, self.reference.imag],
            "error": self.error,
            "ok": self.ok,
        }


def numeric_check(g: NetworkGraph, seq: ContractionSequence, rng: np.random.Generator) -> NumericCheck:
    """Run a sequence on random tensors and compare with the unordered reference sum."""
    tensors = random_tensors(g, rng)
    return NumericCheck(execute(g, tensors, seq), full_contraction_reference(g, tensors))
