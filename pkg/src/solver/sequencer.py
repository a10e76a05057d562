"""
Contraction sequences from contraction trees.
Handles rooting for minimal total time, the recursive memory heuristic that
orders sibling subtrees, residency simulation and the FLOP bound.
"""

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Tuple

from ..core.ctree import FreeContractionTree, RootedContractionTree, root_at
from ..core.errors import CarveError, GraphFormatError, MalformedSequence
from ..core.netgraph import NetworkGraph, merge_vertices

FLOPS_PER_MADD = 8


@dataclass(frozen=True)
class ContractionStep:
    """One pairwise contraction of two resident tensors."""

    left: FrozenSet[str]
    right: FrozenSet[str]
    time_cost: int
    result_size: int

    @property
    def result(self) -> FrozenSet[str]:
        return self.left | self.right


@dataclass
class ContractionSequence:
    """Ordered steps of a full contraction with the heuristic's memory estimate."""

    graph: NetworkGraph
    steps: List[ContractionStep]
    cs_alg1: int

    @property
    def ct(self) -> int:
        return sum(step.time_cost for step in self.steps)

    @property
    def peak(self) -> int:
        return simulate_peak(self)

    def validate(self) -> None:
        """
        Check that every operand exists when used and the last step yields the whole network.

        Raises:
            MalformedSequence: On the first offending step
        """
        simulate_peak(self)
        if len(self.steps) != self.graph.n - 1:
            raise MalformedSequence(f"expected {self.graph.n - 1} steps, got {len(self.steps)}")
        if self.steps[-1].result != frozenset(self.graph.vertices):
            raise MalformedSequence("the last step does not produce the whole network")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "steps": [
                {"l": sorted(s.left), "r": sorted(s.right), "cost": str(s.time_cost), "size": str(s.result_size)}
                for s in self.steps
            ],
            "ct": str(self.ct),
            "cs_alg1": str(self.cs_alg1),
            "peak": str(self.peak),
        }


def sequence_from_dict(data: Any, g: NetworkGraph) -> ContractionSequence:
    """
    Parse a sequence document; exact integers are decimal strings.

    Raises:
        GraphFormatError: With the path of the offending field
    """
    if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
        raise GraphFormatError("expected an object with a list of steps", "steps")
    steps = []
    for i, item in enumerate(data["steps"]):
        try:
            steps.append(
                ContractionStep(
                    left=frozenset(str(v) for v in item["l"]),
                    right=frozenset(str(v) for v in item["r"]),
                    time_cost=int(item["cost"]),
                    result_size=int(item["size"]),
                )
            )
        except (KeyError, TypeError, ValueError) as e:
            raise GraphFormatError(f"bad step ({e})", f"steps[{i}]") from None
    try:
        cs_alg1 = int(data.get("cs_alg1", 0))
    except (TypeError, ValueError):
        raise GraphFormatError("expected a decimal integer string", "cs_alg1") from None
    return ContractionSequence(g, steps, cs_alg1)


def optimal_root(t: FreeContractionTree) -> RootedContractionTree:
    """Root on the lightest arc; ties go to the smallest arc id."""
    arc = min(t.arcs, key=lambda a: (t.arc_label(a).exact_weight, a))
    return root_at(t, arc)


def _leaf_weight(t: RootedContractionTree, node: int) -> int:
    return t.arc_label((node, t.parent(node))).exact_weight


def sequence(t: RootedContractionTree) -> ContractionSequence:
    """
    Order the contractions of a rooted tree with the recursive memory heuristic.

    At every internal node the child whose own memory (cs) plus the other's
    peak (CS) is smaller goes first; ties keep the left child first. CS of a
    node is the larger of its own arc weight and the chosen ordering's cost.
    """

    def visit(node: int) -> Tuple[List[ContractionStep], int, int]:
        cs = t.upper_arc_weight(node)
        if t.is_leaf(node):
            return [], _leaf_weight(t, node), cs
        left, right = t.children(node)
        lseq, l_cs_peak, l_cs = visit(left)
        rseq, r_cs_peak, r_cs = visit(right)
        step = ContractionStep(t.subtree(left), t.subtree(right), t.node_label(node).exact_weight, cs)
        left_first = l_cs + r_cs_peak
        right_first = r_cs + l_cs_peak
        if left_first <= right_first:
            return lseq + rseq + [step], max(cs, left_first), cs
        return rseq + lseq + [step], max(cs, right_first), cs

    steps, peak_estimate, _ = visit(t.root)
    return ContractionSequence(t.graph, steps, peak_estimate)


def cs_recursive(t: RootedContractionTree) -> int:
    """Closed-form memory estimate, evaluated bottom-up without building a sequence."""
    peak: Dict[int, int] = {}
    for node in t.postorder():
        if t.is_leaf(node):
            peak[node] = _leaf_weight(t, node)
            continue
        left, right = t.children(node)
        peak[node] = max(
            t.upper_arc_weight(node),
            min(t.upper_arc_weight(left) + peak[right], t.upper_arc_weight(right) + peak[left]),
        )
    return peak[t.root]


def simulate_peak(seq: ContractionSequence) -> int:
    """
    Largest total size of resident tensors over the sequence.

    A vertex tensor is loaded right before its first use; each step holds
    both operands and its result at once, then frees the operands.

    Raises:
        MalformedSequence: If an operand is not available when used
    """
    g = seq.graph
    resident: Dict[FrozenSet[str], int] = {}
    loaded = set()
    total = peak = 0
    for i, step in enumerate(seq.steps):
        if step.left & step.right:
            raise MalformedSequence(f"step {i}: operands overlap")
        for operand in (step.left, step.right):
            if operand in resident:
                continue
            if len(operand) == 1 and operand not in loaded:
                (v,) = operand
                if v not in g.vertices:
                    raise MalformedSequence(f"step {i}: unknown vertex {v!r}")
                loaded.add(operand)
                resident[operand] = g.star_weight(v)
                total += resident[operand]
                continue
            raise MalformedSequence(f"step {i}: operand {sorted(operand)} is not available")
        peak = max(peak, total + step.result_size)
        total -= resident.pop(step.left) + resident.pop(step.right)
        resident[step.result] = step.result_size
        total += step.result_size
    return peak


def flops_lower_bound(ct: int) -> int:
    """Arithmetic instruction lower bound for complex multiply-adds."""
    if ct < 0:
        raise CarveError("total time cannot be negative")
    return FLOPS_PER_MADD * ct


def minor_after(g: NetworkGraph, seq: ContractionSequence, i: int) -> NetworkGraph:
    """The network after the first i steps, each step merging its two operands."""
    current = g
    for step in seq.steps[:i]:
        ids = {}
        for v in current.vertices:
            ids[current.members(v)] = v
        try:
            current = merge_vertices(current, ids[step.left], ids[step.right])
        except KeyError:
            raise MalformedSequence(f"operands {sorted(step.left)} and {sorted(step.right)} are not vertices") from None
    return current
