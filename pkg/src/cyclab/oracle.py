"""Brute-force ground truth.

Everything here answers by exhaustive search and is meant for small graphs;
the point is to be obviously correct so the clever parts of the package can
be tested against it. Budgets make the exhaustion explicit instead of
letting a call run away.

Deterministic witness order: self-loops first, then 2-cycles through a
doubled edge, then simple cycles found by ascending depth-first search (see
cyclab._pure.find_cycle). Re-running a query always returns the same
witness.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from . import _kernels
from .errors import BudgetExceeded, EdgeNotFound, ParameterError, SizeError
from .graph import Graph

# rough per-millisecond step throughput used to translate a wall-clock budget
# into a bound the search kernel can enforce mid-flight
_STEPS_PER_MS = 50_000 if _kernels.BACKEND == "compiled" else 2_000


@dataclass(frozen=True)
class OracleBudget:
    """Hard limits for the exhaustive procedures.

    max_vertices: refuse graphs larger than this outright.
    max_subsets: cap on how many terminal subsets a sweep may examine.
    time_limit_ms: approximate wall-clock cap, enforced between kernel calls
        and, coarsely, inside them via a step bound.
    """

    max_vertices: int = 14
    max_subsets: int | None = None
    time_limit_ms: int | None = None


DEFAULT_BUDGET = OracleBudget()


class _Meter:
    def __init__(self, budget: OracleBudget | None):
        self.budget = budget or DEFAULT_BUDGET
        self.t0 = time.perf_counter()
        self.subsets_used = 0

    def admit(self, g: Graph):
        if g.n > self.budget.max_vertices:
            raise BudgetExceeded(
                f"graph has {g.n} vertices, budget allows {self.budget.max_vertices}"
            )
        if g.n > 64:
            raise SizeError("oracle kernels handle at most 64 vertices")

    def remaining_ms(self):
        if self.budget.time_limit_ms is None:
            return None
        used = (time.perf_counter() - self.t0) * 1000.0
        left = self.budget.time_limit_ms - used
        if left <= 0:
            raise BudgetExceeded("oracle time budget exhausted")
        return left

    def step_limit(self) -> int:
        left = self.remaining_ms()
        if left is None:
            return 0
        return max(1000, int(left * _STEPS_PER_MS))

    def tick_subsets(self, k: int = 1):
        self.subsets_used += k
        if (
            self.budget.max_subsets is not None
            and self.subsets_used > self.budget.max_subsets
        ):
            raise BudgetExceeded(
                f"subset budget {self.budget.max_subsets} exhausted"
            )


def _dense(g: Graph):
    """Adjacency bitmasks over dense indices, plus both id maps."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [0] * g.n
    for u, w in g.edges:
        if u != w:
            adj[idx[u]] |= 1 << idx[w]
            adj[idx[w]] |= 1 << idx[u]
    return adj, idx, g.vertices


def cycle_through(g: Graph, s, budget: OracleBudget | None = None):
    """A cycle of g containing every vertex of s, or None.

    The witness is a tuple of distinct vertices in traversal order; length 1
    means a self-loop, length 2 a doubled edge.
    """
    s = frozenset(s)
    if not s <= set(g.vertices):
        raise ParameterError("s is not a vertex subset")
    meter = _Meter(budget)
    meter.admit(g)

    anchors = [min(s)] if s else list(g.vertices)
    for a in anchors:
        if g.multiplicity(a, a) >= 1 and s <= {a}:
            return (a,)
    for a in anchors:
        for b in g.neighbors(a):
            if b == a or g.multiplicity(a, b) < 2:
                continue
            if not s and b < a:
                continue  # already tried from the other side
            if s <= {a, b}:
                return (a, b)

    adj, idx, back = _dense(g)
    required = 0
    for v in s:
        required |= 1 << idx[v]
    allowed = (1 << g.n) - 1
    status, path = _kernels.find_cycle(
        adj, g.n, required, allowed, step_limit=meter.step_limit()
    )
    if status == 2:
        raise BudgetExceeded("oracle time budget exhausted during cycle search")
    if status == 1:
        return None
    return tuple(back[i] for i in path)


def first_failing_subset(g: Graph, r, k: int, budget: OracleBudget | None = None):
    """First k-subset of r (ascending lex) with no cycle through it, or None.

    None means every k-subset of r lies on some cycle. With |r| < k there is
    nothing to check and the answer is vacuously None.
    """
    r = frozenset(r)
    if not r <= set(g.vertices):
        raise ParameterError("r is not a vertex subset")
    if not isinstance(k, int) or k < 0:
        raise ParameterError("k must be a non-negative integer")
    if k == 0 or len(r) < k:
        return None
    meter = _Meter(budget)
    meter.admit(g)

    if g.is_simple():
        adj, idx, back = _dense(g)
        rs = sorted(idx[v] for v in r)
        cap = meter.budget.max_subsets or 0
        status, mask, checked = _kernels.yes_pac_scan(
            adj, g.n, rs, k, step_limit=meter.step_limit(), max_subsets=cap
        )
        meter.subsets_used = checked
        if status == 2:
            raise BudgetExceeded("oracle budget exhausted during subset sweep")
        meter.remaining_ms()
        if status == 0:
            return None
        return frozenset(back[i] for i in range(g.n) if (mask >> i) & 1)

    # multigraphs go subset by subset so doubled edges and self-loops count
    for combo in itertools.combinations(sorted(r), k):
        meter.tick_subsets()
        meter.remaining_ms()
        if cycle_through(g, combo, meter.budget) is None:
            return frozenset(combo)
    return None


def is_yes_pac(g: Graph, r, k: int, budget: OracleBudget | None = None) -> bool:
    """Does every k-subset of the terminals r lie on a common cycle?"""
    return first_failing_subset(g, r, k, budget) is None


def cyclability(g: Graph, budget: OracleBudget | None = None) -> int:
    """Largest k such that every k vertices lie on a common cycle.

    By convention every non-empty graph is at least 1-cyclable, so the floor
    of the answer is 1 even for acyclic graphs; the empty graph gets 0.
    Equals n exactly for Hamiltonian graphs.
    """
    if g.n == 0:
        return 0
    best = 1
    for k in range(1, g.n + 1):
        if not is_yes_pac(g, g.vertices, k, budget):
            break
        best = max(best, k)
    return best


def hamiltonian(g: Graph, budget: OracleBudget | None = None) -> bool:
    if g.n == 0:
        return False
    return cycle_through(g, g.vertices, budget) is not None


def hamiltonian_with_edge(g: Graph, e, budget: OracleBudget | None = None) -> bool:
    """Is there a Hamiltonian cycle traversing the given edge?"""
    u, w = e
    if g.multiplicity(u, w) < 1 or u == w:
        raise EdgeNotFound(f"edge ({u},{w}) not in graph")
    meter = _Meter(budget)
    meter.admit(g)
    if g.n == 2:
        return g.multiplicity(u, w) >= 2
    adj, idx, back = _dense(g)
    allowed = (1 << g.n) - 1
    status, path = _kernels.find_cycle(
        adj, g.n, allowed, allowed,
        first_u=idx[u], first_v=idx[w], step_limit=meter.step_limit(),
    )
    if status == 2:
        raise BudgetExceeded("oracle time budget exhausted")
    return status == 0


def is_hypohamiltonian(g: Graph, budget: OracleBudget | None = None) -> bool:
    """Not Hamiltonian itself, but every single-vertex deletion is."""
    if g.n < 3 or hamiltonian(g, budget):
        return False
    return all(
        hamiltonian(g.without_vertices([v]), budget) for v in g.vertices
    )
