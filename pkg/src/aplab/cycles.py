"""Cycles and girth in k-uniform hypergraphs.

A cycle of length l >= 2 is a sequence of distinct edges e_1, ..., e_l
together with distinct linking vertices v_1, ..., v_l such that
v_i lies in e_i and e_{i+1} (cyclically).  Girth is the minimum cycle
length, computed through the bipartite incidence graph: hypergraph cycles
of length l correspond exactly to incidence-graph cycles of length 2l, so
girth equals half the incidence girth.

A cycle is minimal when no subset of its vertices and edges forms a
shorter cycle.  Minimal cycles of bounded length are enumerated by a
depth-first search over edge chains; the enumeration is the second,
independent route to girth used by the test-suite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from math import inf

from .progressions import UniformHypergraph

__all__ = [
    "BudgetExceededError",
    "HypergraphCycle",
    "IncidenceGraph",
    "CycleStructureReport",
    "incidence_graph",
    "girth",
    "has_girth_at_least",
    "enumerate_minimal_cycles",
    "validate_cycle",
    "cycle_span",
    "cycle_structure_report",
]


class BudgetExceededError(RuntimeError):
    """Raised when cycle enumeration exceeds its step budget."""


@dataclass(frozen=True)
class HypergraphCycle:
    """Edge indices in cyclic order plus the linking vertex between each
    consecutive pair (linking[i] lies in edges[i] and edges[i+1], cyclically)."""

    edges: tuple[int, ...]
    linking: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.edges) < 2:
            raise ValueError("a cycle needs at least two edges")
        if len(self.edges) != len(self.linking):
            raise ValueError("one linking vertex per edge pair is required")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("cycle edges must be distinct")
        if len(set(self.linking)) != len(self.linking):
            raise ValueError("linking vertices must be distinct")

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite vertex/edge incidence structure of a hypergraph.

    Nodes 0..v-1 are the hypergraph vertices, nodes v..v+e-1 the edges;
    adjacency encodes membership.
    """

    num_vertices: int
    num_edges: int
    adjacency: tuple[tuple[int, ...], ...]


def incidence_graph(H: UniformHypergraph) -> IncidenceGraph:
    v = H.num_vertices
    adj: list[list[int]] = [[] for _ in range(v + H.num_edges)]
    for j, edge in enumerate(H.edge_tuples):
        node = v + j
        for u in edge:
            adj[u].append(node)
            adj[node].append(u)
    return IncidenceGraph(v, H.num_edges, tuple(tuple(a) for a in adj))


def _some_edge_pair_shares_two(H: UniformHypergraph) -> bool:
    seen: set[tuple[int, int]] = set()
    for edge in H.edge_tuples:
        for pair in combinations(edge, 2):
            if pair in seen:
                return True
            seen.add(pair)
    return False


def _shortest_incidence_cycle(G: IncidenceGraph, depth_cap: float = inf) -> float:
    """Length of the shortest incidence-graph cycle, by BFS from every
    vertex-side node.  With a depth cap d, cycles of length up to 2d are
    still found exactly; longer ones may be missed."""
    best = inf
    adj = G.adjacency
    for source in range(G.num_vertices):
        dist = {source: 0}
        parent = {source: -1}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if du >= depth_cap or 2 * du >= best:
                continue
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
    return best


def girth(H: UniformHypergraph) -> int | float:
    """Minimum cycle length of H, or infinity when H is acyclic.

    Two edges sharing two vertices already form a 2-cycle, so that cheap
    scan runs before any BFS.
    """
    if H.num_edges < 2:
        return inf
    if _some_edge_pair_shares_two(H):
        return 2
    best = _shortest_incidence_cycle(incidence_graph(H))
    if best is inf:
        return inf
    return int(best) // 2


def has_girth_at_least(H: UniformHypergraph, g: int) -> bool:
    """True iff H has no cycle shorter than g; exits on the first short cycle."""
    if g < 2:
        raise ValueError(f"girth threshold must be >= 2, got {g}")
    if g == 2 or H.num_edges < 2:
        return True
    if _some_edge_pair_shares_two(H):
        return False
    # any hypergraph cycle of length < g is an incidence cycle of length
    # <= 2(g-1), found by BFS within depth g
    best = _shortest_incidence_cycle(incidence_graph(H), depth_cap=g)
    return not best < 2 * g


class _StepCounter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget: int | None):
        self.steps = 0
        self.budget = budget

    def tick(self) -> None:
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceededError(
                f"cycle enumeration exceeded its budget of {self.budget} steps"
            )


def _subset_supports_cycle(edge_sets: list[frozenset[int]], length: int) -> bool:
    """Is there a cycle of the given length using exactly these edges?"""
    order_pool = range(1, length)
    for perm in permutations(order_pool):
        order = (0, *perm)
        inters = []
        ok = True
        for i in range(length):
            shared = edge_sets[order[i]] & edge_sets[order[(i + 1) % length]]
            if not shared:
                ok = False
                break
            inters.append(shared)
        if not ok:
            continue

        def assign(i: int, used: frozenset[int]) -> bool:
            if i == length:
                return True
            for v in inters[i]:
                if v not in used and assign(i + 1, used | {v}):
                    return True
            return False

        if assign(0, frozenset()):
            return True
    return False


def _is_loose_arrangement(sets: list[frozenset[int]], edges: tuple[int, ...]) -> bool:
    """Cyclically consecutive edges share exactly one vertex, all other
    pairs none.  Such a cycle is minimal: a shorter cycle would need a
    cyclic arrangement of a proper edge subset with every consecutive pair
    intersecting, and the intersection graph here is the cycle graph
    itself, whose proper subgraphs are unions of paths."""
    l = len(edges)
    for a in range(l):
        for b in range(a + 1, l):
            want = 1 if (b - a == 1 or (a == 0 and b == l - 1)) else 0
            if len(sets[edges[a]] & sets[edges[b]]) != want:
                return False
    return True


def _contains_shorter_cycle(edge_sets: list[frozenset[int]], length: int) -> bool:
    for sub_len in range(2, length):
        for idxs in combinations(range(length), sub_len):
            subset = [edge_sets[i] for i in idxs]
            if sub_len == 2:
                if len(subset[0] & subset[1]) >= 2:
                    return True
            elif _subset_supports_cycle(subset, sub_len):
                return True
    return False


def _iter_two_cycles(H: UniformHypergraph, counter: _StepCounter):
    sets = [frozenset(e) for e in H.edges]
    for i, j in combinations(range(len(sets)), 2):
        counter.tick()
        shared = sets[i] & sets[j]
        if len(shared) >= 2:
            for u, v in combinations(sorted(shared), 2):
                yield HypergraphCycle((i, j), (u, v))


def _iter_cycles_of_length(H: UniformHypergraph, length: int, counter: _StepCounter):
    """All minimal cycles of exactly the given length (>= 3).

    Chains start at their smallest edge index (killing rotations) and are
    recorded only when the second edge index is below the last one (killing
    reflections).  A chain is abandoned as soon as its edge set provably
    contains a shorter cycle: a pair sharing two vertices, or an early
    closure with a spare linking vertex.  Survivors are declared minimal by
    the loose-arrangement test or, failing that, an exact subset search, so
    the prunes are pure accelerators.
    """
    sets = [frozenset(e) for e in H.edges]
    E = len(sets)
    neighbour_sets: list[set[int]] = [set() for _ in range(E)]
    big_overlap: list[set[int]] = [set() for _ in range(E)]
    inter: dict[tuple[int, int], frozenset[int]] = {}
    for i, j in combinations(range(E), 2):
        shared = sets[i] & sets[j]
        if shared:
            neighbour_sets[i].add(j)
            neighbour_sets[j].add(i)
            inter[(i, j)] = shared
            inter[(j, i)] = shared
            if len(shared) >= 2:
                big_overlap[i].add(j)
                big_overlap[j].add(i)
    neighbours_sorted = [sorted(s) for s in neighbour_sets]

    def extend(chain: list[int], links: list[int], link_set: set[int], chain_set: set[int]):
        m = len(chain)
        last = chain[-1]
        start = chain[0]
        final = m == length - 1
        if final:
            candidates = sorted(neighbour_sets[last] & neighbour_sets[start])
            floor = max(start, chain[1])
        else:
            candidates = neighbours_sorted[last]
            floor = start
        for e in candidates:
            counter.tick()
            if e <= floor or e in chain_set:
                continue
            overlap = big_overlap[e]
            if overlap and any(c in overlap for c in chain):
                continue
            link_choices = inter[(last, e)] - link_set
            for v in sorted(link_choices):
                pruned = False
                for j in range(1, m - 1):
                    shared = inter.get((chain[j], e))
                    if shared and shared - set(links[j:]) - {v}:
                        # e closes a cycle of length m-j+1 < target inside
                        # the chain's own edges
                        pruned = True
                        break
                if pruned:
                    continue
                if final:
                    closers = inter[(start, e)] - link_set - {v}
                    for u in sorted(closers):
                        edges = (*chain, e)
                        if _is_loose_arrangement(sets, edges) or not _contains_shorter_cycle(
                            [sets[i] for i in edges], length
                        ):
                            yield HypergraphCycle(edges, (*links, v, u))
                else:
                    early = inter.get((start, e))
                    if m >= 2 and early and early - set(links) - {v}:
                        # closing now would give a cycle shorter than target
                        continue
                    chain.append(e)
                    links.append(v)
                    link_set.add(v)
                    chain_set.add(e)
                    yield from extend(chain, links, link_set, chain_set)
                    chain_set.discard(e)
                    link_set.discard(v)
                    links.pop()
                    chain.pop()

    for s in range(E):
        yield from extend([s], [], set(), {s})


def _iter_minimal_cycles(H: UniformHypergraph, l_max: int, counter: _StepCounter):
    yield from _iter_two_cycles(H, counter)
    for length in range(3, l_max + 1):
        yield from _iter_cycles_of_length(H, length, counter)


def enumerate_minimal_cycles(
    H: UniformHypergraph, l_max: int, *, step_budget: int | None = None
) -> list[HypergraphCycle]:
    """All minimal cycles of length 2..l_max, canonically ordered.

    Every 2-cycle is minimal (there is nothing shorter); longer cycles are
    kept only when no subset of their edges supports a shorter cycle.
    Raises :class:`BudgetExceededError` when the search exceeds
    ``step_budget`` elementary steps.  Counts explode with l_max; the
    streaming consumer :func:`cycle_structure_report` avoids holding the
    list.
    """
    if l_max < 2:
        raise ValueError(f"maximum cycle length must be >= 2, got {l_max}")
    counter = _StepCounter(step_budget)
    cycles = list(_iter_minimal_cycles(H, l_max, counter))
    cycles.sort(key=lambda c: (c.length, tuple(sorted(c.edges)), c.edges, c.linking))
    return cycles


def validate_cycle(H: UniformHypergraph, cycle: HypergraphCycle) -> bool:
    """Check the cycle laws directly against H (independent of the search)."""
    l = cycle.length
    if len(set(cycle.edges)) != l or len(set(cycle.linking)) != l:
        return False
    for i in range(l):
        e_cur = H.edges[cycle.edges[i]]
        e_next = H.edges[cycle.edges[(i + 1) % l]]
        v = cycle.linking[i]
        if v not in e_cur or v not in e_next:
            return False
    return True


def cycle_span(H: UniformHypergraph, cycle: HypergraphCycle) -> frozenset[int]:
    """All vertices covered by the cycle's edges."""
    span: set[int] = set()
    for e in cycle.edges:
        span |= H.edges[e]
    return frozenset(span)


@dataclass(frozen=True)
class CycleStructureReport:
    """Span and incidence-degree checks over enumerated minimal cycles.

    For every minimal cycle of length l >= 3 the span must have exactly
    (k-1)*l vertices, each linking vertex must lie in exactly two cycle
    edges and every other spanned vertex in exactly one.  2-cycles are
    exempt.
    """

    k: int
    l_max: int
    cycles_checked: int
    counts_by_length: tuple[tuple[int, int], ...]
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def cycle_structure_report(
    H: UniformHypergraph, l_max: int, *, step_budget: int | None = None
) -> CycleStructureReport:
    if l_max < 3:
        raise ValueError(f"structure checks need l_max >= 3, got {l_max}")
    failures: list[str] = []
    counts: dict[int, int] = {}
    checked = 0
    for cycle in _iter_minimal_cycles(H, l_max, _StepCounter(step_budget)):
        counts[cycle.length] = counts.get(cycle.length, 0) + 1
        if cycle.length < 3:
            continue
        checked += 1
        span = cycle_span(H, cycle)
        expected = (H.k - 1) * cycle.length
        if len(span) != expected:
            failures.append(
                f"cycle {cycle.edges} spans {len(span)} vertices, expected {expected}"
            )
            continue
        linking = set(cycle.linking)
        for v in span:
            deg = sum(1 for e in cycle.edges if v in H.edges[e])
            want = 2 if v in linking else 1
            if deg != want:
                failures.append(
                    f"cycle {cycle.edges}: vertex {H.vertices[v]} has degree {deg}, expected {want}"
                )
    return CycleStructureReport(
        k=H.k,
        l_max=l_max,
        cycles_checked=checked,
        counts_by_length=tuple(sorted(counts.items())),
        failures=tuple(failures),
    )
