"""Brute-force reference implementations, independent of the library.

Everything here enumerates raw search spaces directly (all (a, d) pairs,
all set partitions, all subsets, all edge arrangements) so the values it
produces can vouch for the much faster library code.  Expected values
frozen in the test modules were computed with these.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import inf


def brute_aps_in_interval(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for a in range(1, n + 1):
        for d in range(1, n):
            terms = tuple(a + i * d for i in range(k))
            if terms[-1] > n:
                break
            out.append(terms)
    return out


def brute_aps_in_set(elems, k: int) -> list[tuple[int, ...]]:
    members = set(elems)
    if not members:
        return []
    top = max(members)
    out = []
    for a in sorted(members):
        for d in range(1, top):
            terms = tuple(a + i * d for i in range(k))
            if terms[-1] > top:
                break
            if all(t in members for t in terms):
                out.append(terms)
    return out


def iter_rg_partitions(m: int, max_blocks: int | None = None):
    """All restricted-growth strings of length m (all set partitions)."""
    if m == 0:
        yield ()
        return
    a = [0] * m

    def rec(i: int, used: int):
        if i == m:
            yield tuple(a)
            return
        for c in range(used):
            a[i] = c
            yield from rec(i + 1, used)
        if max_blocks is None or used < max_blocks:
            a[i] = used
            yield from rec(i + 1, used + 1)

    yield from rec(0, 0)


def pattern_counts(ap_positions, assignment) -> tuple[int, int, int]:
    """(mono, rainbow, neither) pattern counts of APs given by position tuples."""
    mono = rainbow = neither = 0
    for positions in ap_positions:
        colours = [assignment[i] for i in positions]
        first = colours[0]
        if all(c == first for c in colours):
            mono += 1
        elif len(set(colours)) == len(colours):
            rainbow += 1
        else:
            neither += 1
    return mono, rainbow, neither


def _ap_positions(elems, k: int):
    index = {x: i for i, x in enumerate(elems)}
    return [tuple(index[t] for t in ap) for ap in brute_aps_in_set(elems, k)]


def naive_is_can(elems, k: int):
    """(verdict, witness assignment or None) by sweeping every partition."""
    positions = _ap_positions(elems, k)
    for assignment in iter_rg_partitions(len(elems)):
        mono, rainbow, _ = pattern_counts(positions, assignment)
        if mono == 0 and rainbow == 0:
            return False, assignment
    return True, None


def naive_is_rkvdw(elems, r: int, k: int):
    positions = _ap_positions(elems, k)
    for assignment in iter_rg_partitions(len(elems), max_blocks=r):
        mono, _, _ = pattern_counts(positions, assignment)
        if mono == 0:
            return False, assignment
    return True, None


def naive_is_alpharb(elems, alpha, k: int):
    alpha = Fraction(alpha)
    m = len(elems)
    positions = _ap_positions(elems, k)
    p, q = alpha.numerator, alpha.denominator
    found_any_bounded = False
    for assignment in iter_rg_partitions(m):
        sizes: dict[int, int] = {}
        for c in assignment:
            sizes[c] = sizes.get(c, 0) + 1
        if any(s * q > p * m for s in sizes.values()):
            continue
        found_any_bounded = True
        _, rainbow, _ = pattern_counts(positions, assignment)
        if rainbow == 0:
            return False, assignment
    if m == 0:
        return False, ()
    return True, None if found_any_bounded else None


def naive_is_alphasz(elems, alpha, k: int):
    alpha = Fraction(alpha)
    m = len(elems)
    p, q = alpha.numerator, alpha.denominator
    elems = tuple(elems)
    for size in range(m, -1, -1):
        if size * q < p * m:
            break
        for subset in combinations(elems, size):
            if not brute_aps_in_set(subset, k):
                return False, subset
    return True, None


def naive_max_ap_free(elems, k: int):
    elems = tuple(elems)
    best: tuple = ()
    for size in range(len(elems), 0, -1):
        hits = [s for s in combinations(elems, size) if not brute_aps_in_set(s, k)]
        if hits:
            return min(hits)
    return best


def naive_girth(edge_sets) -> float:
    """Shortest cycle length by trying every edge arrangement directly."""
    edge_sets = [frozenset(e) for e in edge_sets]
    e = len(edge_sets)
    for length in range(2, e + 1):
        for idxs in combinations(range(e), length):
            if _arrangement_has_cycle([edge_sets[i] for i in idxs], length):
                return length
    return inf


def _arrangement_has_cycle(sets, length: int) -> bool:
    if length == 2:
        return len(sets[0] & sets[1]) >= 2
    for perm in permutations(range(1, length)):
        order = (0, *perm)
        inters = []
        ok = True
        for i in range(length):
            shared = sets[order[i]] & sets[order[(i + 1) % length]]
            if not shared:
                ok = False
                break
            inters.append(shared)
        if not ok:
            continue

        def assign(i: int, used):
            if i == length:
                return True
            for v in inters[i]:
                if v not in used and assign(i + 1, used | {v}):
                    return True
            return False

        if assign(0, frozenset()):
            return True
    return False
