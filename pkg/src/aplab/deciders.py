"""Certificate-producing deciders for colouring properties of integer sets.

All four properties reduce to the same kind of question: does a colouring
(or a subset) avoiding some forbidden pattern exist?  The search assigns
colours in restricted-growth style, so each set partition is visited
exactly once, and keeps a forward-checked domain per uncoloured element:
the moment a progression has all but one member coloured, the free member
either loses the colour that would complete a monochromatic pattern or is
pinned to the colours already on the progression (rainbow avoidance).  An
emptied domain prunes the branch immediately.

Two further structural facts keep realistic instances fast.  Constraints
never span connected components of the AP hypergraph, so components are
decided independently (smallest first) and their witnesses recombined.
Within a component, elements are ordered so that progressions complete as
early as possible; the searched partition space is unchanged.

A failed search proves the property holds; a successful one returns the
witness colouring or subset.  Witnesses can be re-checked with the
validators at the bottom of this module, which only use the counting layer
and share no code with the search.

Searches accept an optional node budget.  A budget overrun is a third
outcome (verdict ``None``), never silently coerced to a boolean; the Monte
Carlo layer records it separately.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .colourings import Colouring, count_coloured_aps, is_alpha_bounded, normalize
from .progressions import GroundSet, enumerate_aps

__all__ = [
    "DecisionResult",
    "is_can_k_vdw",
    "is_r_k_vdw",
    "is_alpha_k_rb",
    "is_alpha_k_sz",
    "max_ap_free_subset",
    "certificate_refutes_can",
    "certificate_refutes_rkvdw",
    "certificate_refutes_alpharb",
    "certificate_refutes_alphasz",
]

_UNBOUNDED = 1 << 62


@dataclass(frozen=True)
class DecisionResult:
    """Outcome of one decision.

    ``verdict`` is True (property holds), False (fails, with certificate),
    or None when the node budget ran out before either was proven.
    """

    verdict: bool | None
    certificate: Colouring | GroundSet | None
    nodes_explored: int
    elapsed: float

    @property
    def exhausted(self) -> bool:
        return self.verdict is None


def _ap_position_tuples(A: GroundSet, k: int) -> list[tuple[int, ...]]:
    index = A.index_of
    return [tuple(index(t) for t in ap.terms()) for ap in enumerate_aps(A, k)]


def _aps_by_last_position(A: GroundSet, k: int) -> list[list[tuple[int, ...]]]:
    """For each element position, the position tuples of progressions ending there."""
    by_last: list[list[tuple[int, ...]]] = [[] for _ in range(len(A))]
    for positions in _ap_position_tuples(A, k):
        by_last[positions[-1]].append(positions[:-1])
    return by_last


def _ensure_recursion_room(depth: int) -> None:
    needed = depth + 100
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)


def _components(m: int, aps: list[tuple[int, ...]]) -> list[list[int]]:
    """Connected components of positions under 'share an AP', via union-find."""
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for positions in aps:
        root = find(positions[0])
        for j in positions[1:]:
            rj = find(j)
            if rj != root:
                parent[rj] = root
    buckets: dict[int, list[int]] = {}
    for i in range(m):
        buckets.setdefault(find(i), []).append(i)
    return sorted(buckets.values(), key=lambda comp: (len(comp), comp[0]))


def _completion_order(comp: list[int], aps: list[tuple[int, ...]]) -> list[int]:
    """Order a component so progressions become fully coloured early.

    Greedy: repeatedly take the element completing the most progressions
    against the chosen prefix (then the most one-short progressions, then
    the highest AP degree), ties to the smallest element.  The search space
    is order-independent; only pruning power changes.
    """
    if len(comp) <= 2:
        return list(comp)
    members = {pos: [] for pos in comp}
    for idx, positions in enumerate(aps):
        if positions[0] in members:
            for pos in positions:
                members[pos].append(idx)
    unordered = [len(positions) for positions in aps]
    score1 = {pos: 0 for pos in comp}
    score2 = {pos: 0 for pos in comp}
    degree = {pos: len(members[pos]) for pos in comp}
    remaining = set(comp)
    order: list[int] = []
    while remaining:
        best = min(
            remaining, key=lambda pos: (-score1[pos], -score2[pos], -degree[pos], pos)
        )
        order.append(best)
        remaining.discard(best)
        for idx in members[best]:
            unordered[idx] -= 1
            left = unordered[idx]
            if left in (1, 2):
                for pos in aps[idx]:
                    if pos in remaining:
                        if left == 1:
                            score1[pos] += 1
                            score2[pos] -= 1
                        else:
                            score2[pos] += 1
    return order


def _search_block(
    m: int,
    aps: list[tuple[int, ...]],
    *,
    forbid_mono: bool,
    forbid_rainbow: bool,
    palette_cap: int | None = None,
    class_cap: int | None = None,
    node_budget: int | None = None,
) -> tuple[list[int] | None, int, bool]:
    """Backtracking over m positions constrained by the given progressions.

    ``aps`` holds position tuples; each constrains its highest position,
    and that constraint is pushed into the position's domain as soon as the
    other members are coloured.  Returns (assignment, nodes, exhausted);
    the assignment is None when no qualifying colouring exists or the
    budget ran out.
    """
    if m == 0:
        return [], 0, False
    pal_cap = m if palette_cap is None else min(palette_cap, m)
    budget = _UNBOUNDED if node_budget is None else node_budget
    # group each AP under the member coloured second-to-last
    by_trigger: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(m)]
    for positions in aps:
        ordered = sorted(positions)
        last = ordered[-1]
        by_trigger[ordered[-2]].append((last, tuple(ordered[:-1])))
    cols = [0] * m
    sizes = [0] * (m + 1)
    allowed = [-1] * m  # -1: unrestricted; otherwise a bitmask of colours
    forbidden = [0] * m
    trail: list[tuple[int, bool, int]] = []
    nodes = 0
    exhausted = False
    full_window = (1 << pal_cap) - 1
    _ensure_recursion_room(m)

    def propagate(trigger: int, used: int) -> bool:
        for last, others in by_trigger[trigger]:
            c0 = cols[others[0]]
            mono = True
            seen = 0
            dup = False
            for j in others:
                c = cols[j]
                if c != c0:
                    mono = False
                bit = 1 << c
                if seen & bit:
                    dup = True
                seen |= bit
            if mono:
                if forbid_mono:
                    old = forbidden[last]
                    new = old | (1 << c0)
                    if new != old:
                        trail.append((last, False, old))
                        forbidden[last] = new
            elif forbid_rainbow and not dup:
                old = allowed[last]
                new = old & seen
                if new != old:
                    trail.append((last, True, old))
                    allowed[last] = new
            a = allowed[last]
            if a == 0:
                return False
            if a != -1:
                if a & ~forbidden[last] == 0:
                    return False
            elif used >= pal_cap and full_window & ~forbidden[last] == 0:
                return False
        return True

    def go(i: int, used: int) -> bool:
        nonlocal nodes, exhausted
        if i == m:
            return True
        window = (1 << (used + 1 if used < pal_cap else used)) - 1
        candidates = allowed[i] & ~forbidden[i] & window
        while candidates:
            bit = candidates & -candidates
            candidates ^= bit
            c = bit.bit_length() - 1
            if class_cap is not None and sizes[c] >= class_cap:
                continue
            nodes += 1
            if nodes > budget:
                exhausted = True
                return False
            cols[i] = c
            sizes[c] += 1
            new_used = used + 1 if c == used else used
            mark = len(trail)
            if propagate(i, new_used) and go(i + 1, new_used):
                return True
            while len(trail) > mark:
                pos, is_allowed, old = trail.pop()
                if is_allowed:
                    allowed[pos] = old
                else:
                    forbidden[pos] = old
            sizes[c] -= 1
            if exhausted:
                return False
        return False

    found = go(0, 0)
    return (cols if found else None), nodes, exhausted


def _search_colouring(
    A: GroundSet,
    k: int,
    *,
    forbid_mono: bool,
    forbid_rainbow: bool,
    palette_cap: int | None = None,
    class_cap: int | None = None,
    node_budget: int | None = None,
) -> tuple[tuple[int, ...] | None, int, bool]:
    """Find a colouring of A avoiding the forbidden patterns.

    Constraints live inside single progressions, so components of the AP
    hypergraph are colourable independently: a pattern-free colouring of A
    exists iff each component has one.  Without a palette cap the
    per-component witnesses combine on disjoint palettes; under a palette
    cap they reuse the same colours (no progression crosses components).
    A global class-size cap could not be split soundly, so it disables the
    decomposition.
    """
    m = len(A)
    if m == 0:
        return (), 0, False
    aps = _ap_position_tuples(A, k)
    if class_cap is not None:
        assignment, nodes, exhausted = _search_block(
            m,
            aps,
            forbid_mono=forbid_mono,
            forbid_rainbow=forbid_rainbow,
            palette_cap=palette_cap,
            class_cap=class_cap,
            node_budget=node_budget,
        )
        if assignment is None:
            return None, nodes, exhausted
        return normalize(A, assignment).assignment, nodes, exhausted

    shared_palette = palette_cap is not None
    by_member: dict[int, list[tuple[int, ...]]] = {}
    for positions in aps:
        by_member.setdefault(positions[0], []).append(positions)
    cols = [0] * m
    offset = 0
    total_nodes = 0
    budget_left = node_budget
    saw_exhausted = False
    for comp in _components(m, aps):
        if len(comp) == 1:
            cols[comp[0]] = 0 if shared_palette else offset
            offset += 1
            continue
        local_aps = [positions for pos in comp for positions in by_member.get(pos, ())]
        order = _completion_order(comp, local_aps)
        rank = {pos: i for i, pos in enumerate(order)}
        comp_aps = [tuple(rank[j] for j in positions) for positions in local_aps]
        assignment, nodes, exhausted = _search_block(
            len(comp),
            comp_aps,
            forbid_mono=forbid_mono,
            forbid_rainbow=forbid_rainbow,
            palette_cap=palette_cap,
            node_budget=budget_left,
        )
        total_nodes += nodes
        if budget_left is not None:
            budget_left = max(budget_left - nodes, 0)
        if exhausted:
            saw_exhausted = True
            continue
        if assignment is None:
            # this component alone forces the pattern; the whole set follows
            return None, total_nodes, False
        shift = 0 if shared_palette else offset
        for pos, c in zip(order, assignment):
            cols[pos] = shift + c
        offset += max(assignment) + 1
    if saw_exhausted:
        return None, total_nodes, True
    return normalize(A, cols).assignment, total_nodes, False


def is_can_k_vdw(A: GroundSet, k: int, *, node_budget: int | None = None) -> DecisionResult:
    """Does every colouring of A (any palette) give a monochromatic or rainbow k-AP?

    A False verdict carries a colouring under which every k-AP in A is
    neither monochromatic nor rainbow.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    t0 = time.perf_counter()
    assignment, nodes, exhausted = _search_colouring(
        A, k, forbid_mono=True, forbid_rainbow=True, node_budget=node_budget
    )
    elapsed = time.perf_counter() - t0
    if assignment is not None:
        return DecisionResult(False, Colouring(A, assignment), nodes, elapsed)
    if exhausted:
        return DecisionResult(None, None, nodes, elapsed)
    return DecisionResult(True, None, nodes, elapsed)


def is_r_k_vdw(A: GroundSet, r: int, k: int, *, node_budget: int | None = None) -> DecisionResult:
    """Does every r-colouring of A give a monochromatic k-AP?"""
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    if r < 1:
        raise ValueError(f"number of colours must be >= 1, got {r}")
    t0 = time.perf_counter()
    assignment, nodes, exhausted = _search_colouring(
        A, k, forbid_mono=True, forbid_rainbow=False, palette_cap=r, node_budget=node_budget
    )
    elapsed = time.perf_counter() - t0
    if assignment is not None:
        return DecisionResult(False, Colouring(A, assignment), nodes, elapsed)
    if exhausted:
        return DecisionResult(None, None, nodes, elapsed)
    return DecisionResult(True, None, nodes, elapsed)


def is_alpha_k_rb(
    A: GroundSet,
    alpha: Fraction | float | int | str,
    k: int,
    *,
    node_budget: int | None = None,
    palette_cap: int | None = None,
) -> DecisionResult:
    """Does every alpha-bounded colouring of A give a rainbow k-AP?

    The search only visits palettes of size at most floor(4/alpha): an
    alpha-bounded rainbow-free colouring exists iff one with that few
    colours does, because merging small classes preserves both properties
    and cannot create rainbow progressions.  ``palette_cap`` overrides the
    cap for cross-checking that reduction; leave it at None otherwise.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if alpha > 1:
        raise ValueError(f"alpha must be at most 1, got {alpha}")
    t0 = time.perf_counter()
    m = len(A)
    p, q = alpha.numerator, alpha.denominator
    if m == 0:
        # the empty colouring is alpha-bounded and rainbow-free
        return DecisionResult(False, Colouring(A, ()), 0, time.perf_counter() - t0)
    class_cap = (p * m) // q
    if class_cap == 0:
        # even singleton classes overshoot the bound: no alpha-bounded
        # colouring exists and the property holds vacuously
        return DecisionResult(True, None, 0, time.perf_counter() - t0)
    cap = (4 * q) // p if palette_cap is None else palette_cap
    assignment, nodes, exhausted = _search_colouring(
        A,
        k,
        forbid_mono=False,
        forbid_rainbow=True,
        palette_cap=cap,
        class_cap=class_cap,
        node_budget=node_budget,
    )
    elapsed = time.perf_counter() - t0
    if assignment is not None:
        return DecisionResult(False, Colouring(A, assignment), nodes, elapsed)
    if exhausted:
        return DecisionResult(None, None, nodes, elapsed)
    return DecisionResult(True, None, nodes, elapsed)


def _find_ap_free_subset(
    A: GroundSet,
    k: int,
    threshold: int,
    node_budget: int | None,
) -> tuple[tuple[int, ...] | None, int, bool]:
    """Search for an AP-free subset of A with at least ``threshold`` elements."""
    m = len(A)
    if threshold <= 0:
        return (), 0, False
    if threshold > m:
        return None, 0, False
    by_last = _aps_by_last_position(A, k)
    budget = _UNBOUNDED if node_budget is None else node_budget
    chosen = [False] * m
    picked: list[int] = []
    nodes = 0
    exhausted = False
    _ensure_recursion_room(m)

    def go(i: int) -> bool:
        nonlocal nodes, exhausted
        if len(picked) >= threshold:
            return True
        if len(picked) + (m - i) < threshold:
            return False
        nodes += 1
        if nodes > budget:
            exhausted = True
            return False
        if not any(all(chosen[j] for j in others) for others in by_last[i]):
            chosen[i] = True
            picked.append(i)
            if go(i + 1):
                return True
            picked.pop()
            chosen[i] = False
            if exhausted:
                return False
        return go(i + 1)

    found = go(0)
    return (tuple(picked) if found else None), nodes, exhausted


def is_alpha_k_sz(
    A: GroundSet,
    alpha: Fraction | float | int | str,
    k: int,
    *,
    node_budget: int | None = None,
) -> DecisionResult:
    """Does every subset of A with at least alpha*|A| elements contain a k-AP?

    Equivalent to: the largest AP-free subset of A has size < alpha*|A|
    (compared exactly over rationals).  A False verdict carries an AP-free
    subset of size >= ceil(alpha*|A|).
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if alpha > 1:
        raise ValueError(f"alpha must be at most 1, got {alpha}")
    t0 = time.perf_counter()
    m = len(A)
    p, q = alpha.numerator, alpha.denominator
    threshold = -((-p * m) // q)  # ceil(alpha * m)
    positions, nodes, exhausted = _find_ap_free_subset(A, k, threshold, node_budget)
    elapsed = time.perf_counter() - t0
    if positions is not None:
        witness = GroundSet(tuple(A.elements[i] for i in positions), A.n)
        return DecisionResult(False, witness, nodes, elapsed)
    if exhausted:
        return DecisionResult(None, None, nodes, elapsed)
    return DecisionResult(True, None, nodes, elapsed)


def max_ap_free_subset(A: GroundSet, k: int) -> GroundSet:
    """A maximum subset of A containing no k-AP (a maximum independent set
    of the AP hypergraph); among maximum subsets the lexicographically
    smallest element tuple is returned.

    Include-first depth-first branch and bound over elements in increasing
    order: the first maximum-size subset that search order meets is the
    lexicographically smallest one.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    m = len(A)
    by_last = _aps_by_last_position(A, k)
    chosen = [False] * m
    picked: list[int] = []
    best: list[int] = []
    _ensure_recursion_room(m)

    def go(i: int) -> None:
        nonlocal best
        if i == m:
            if len(picked) > len(best):
                best = picked.copy()
            return
        if len(picked) + (m - i) <= len(best):
            return
        if not any(all(chosen[j] for j in others) for others in by_last[i]):
            chosen[i] = True
            picked.append(i)
            go(i + 1)
            picked.pop()
            chosen[i] = False
        go(i + 1)

    go(0)
    return GroundSet(tuple(A.elements[i] for i in best), A.n)


# --- independent certificate validators -----------------------------------
#
# These deliberately go through the counting layer only, so a buggy search
# cannot vouch for itself.


def certificate_refutes_can(A: GroundSet, k: int, chi: Colouring) -> bool:
    """chi witnesses that A lacks the canonical van der Waerden property."""
    if chi.domain != A:
        return False
    counts = count_coloured_aps(A, chi, k)
    return counts.mono == 0 and counts.rainbow == 0


def certificate_refutes_rkvdw(A: GroundSet, r: int, k: int, chi: Colouring) -> bool:
    if chi.domain != A or chi.palette_size > r:
        return False
    return count_coloured_aps(A, chi, k).mono == 0


def certificate_refutes_alpharb(
    A: GroundSet, alpha: Fraction | float | int | str, k: int, chi: Colouring
) -> bool:
    if chi.domain != A or not is_alpha_bounded(chi, alpha):
        return False
    return count_coloured_aps(A, chi, k).rainbow == 0


def certificate_refutes_alphasz(
    A: GroundSet, alpha: Fraction | float | int | str, k: int, B: GroundSet
) -> bool:
    alpha = Fraction(alpha)
    if not B.issubset(A):
        return False
    if enumerate_aps(B, k):
        return False
    return len(B) * alpha.denominator >= alpha.numerator * len(A)
