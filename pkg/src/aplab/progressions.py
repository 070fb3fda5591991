"""Arithmetic progressions inside finite integer sets.

A k-term progression a, a+d, ..., a+(k-1)d is identified with its element
set, so only d >= 1 is stored (d and -d describe the same set).  Every
enumeration below is ordered lexicographically in (a, d), which keeps
outputs deterministic and diffable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

__all__ = [
    "ArithmeticProgression",
    "GroundSet",
    "UniformHypergraph",
    "enumerate_aps",
    "count_aps_in_interval",
    "aps_through_element",
    "aps_through_pair",
    "build_ap_hypergraph",
]


@dataclass(frozen=True, order=True)
class ArithmeticProgression:
    """The progression a, a+d, ..., a+(k-1)d with a >= 1 and d >= 1."""

    a: int
    d: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError(f"progression length must be >= 3, got {self.k}")
        if self.a < 1:
            raise ValueError(f"first term must be a positive integer, got {self.a}")
        if self.d < 1:
            raise ValueError(f"common difference must be >= 1, got {self.d}")

    @property
    def last(self) -> int:
        return self.a + (self.k - 1) * self.d

    def terms(self) -> tuple[int, ...]:
        return tuple(self.a + i * self.d for i in range(self.k))

    def __contains__(self, x: int) -> bool:
        off = x - self.a
        return 0 <= off <= (self.k - 1) * self.d and off % self.d == 0


@dataclass(frozen=True)
class GroundSet:
    """A finite subset of {1, ..., n}, stored strictly increasing.

    ``n`` is the ambient bound; it may exceed the largest element (relevant
    when the set was sampled from [n]).  Membership tests are O(1) via a
    hashed index, which is the contract the search layers rely on.
    """

    elements: tuple[int, ...]
    n: int | None = None

    def __post_init__(self) -> None:
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        for prev, cur in zip(elems, elems[1:]):
            if cur <= prev:
                raise ValueError("elements must be strictly increasing")
        if elems and elems[0] < 1:
            raise ValueError("elements must be positive integers")
        n = self.n
        if n is None:
            n = elems[-1] if elems else 0
            object.__setattr__(self, "n", n)
        if n < 0:
            raise ValueError(f"ambient bound must be >= 0, got {n}")
        if elems and elems[-1] > n:
            raise ValueError(f"element {elems[-1]} exceeds ambient bound {n}")

    @classmethod
    def from_iterable(cls, items: Iterable[int], n: int | None = None) -> "GroundSet":
        return cls(tuple(sorted(set(items))), n)

    @classmethod
    def interval(cls, n: int) -> "GroundSet":
        """The full interval {1, ..., n}."""
        if n < 0:
            raise ValueError(f"interval bound must be >= 0, got {n}")
        return cls(tuple(range(1, n + 1)), n)

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __contains__(self, x: int) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, x: int) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise ValueError(f"{x} is not an element of the ground set") from None

    def issubset(self, other: "GroundSet") -> bool:
        return self._members <= other._members


@dataclass(frozen=True)
class UniformHypergraph:
    """A k-uniform hypergraph over an indexed vertex list.

    Edges are frozensets of vertex indices; each must have exactly k
    distinct members and duplicates are rejected.
    """

    k: int
    vertices: tuple
    edges: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"uniformity must be >= 2, got {self.k}")
        object.__setattr__(self, "vertices", tuple(self.vertices))
        edges = tuple(frozenset(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        v = len(self.vertices)
        for e in edges:
            if len(e) != self.k:
                raise ValueError(f"edge {sorted(e)} does not have {self.k} distinct vertices")
            for i in e:
                if not 0 <= i < v:
                    raise ValueError(f"edge {sorted(e)} uses vertex index {i} out of range")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges are not allowed")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(e)) for e in self.edges)

    @cached_property
    def edges_by_vertex(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(len(self.vertices))]
        for j, e in enumerate(self.edges):
            for i in e:
                adj[i].append(j)
        return tuple(tuple(a) for a in adj)


def enumerate_aps(A: GroundSet, k: int) -> list[ArithmeticProgression]:
    """All k-term progressions whose elements all lie in A, in (a, d) order."""
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    out: list[ArithmeticProgression] = []
    if len(A) < k:
        return out
    top = A.elements[-1]
    span = k - 1
    for a in A.elements:
        if a + span > top:
            break
        for d in range(1, (top - a) // span + 1):
            x = a
            for _ in range(span):
                x += d
                if x not in A:
                    break
            else:
                out.append(ArithmeticProgression(a, d, k))
    return out


def count_aps_in_interval(n: int, k: int) -> int:
    """Exact number of k-term progressions contained in {1, ..., n}.

    Computed arithmetically (for each difference d there are n - (k-1)d
    admissible first terms), independently of :func:`enumerate_aps`.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    if n < k:
        return 0
    span = k - 1
    return sum(n - span * d for d in range(1, (n - 1) // span + 1))


def aps_through_element(x: int, n: int, k: int) -> list[ArithmeticProgression]:
    """All k-term progressions inside {1, ..., n} that contain x.

    The result has at most k*n entries: x occupies one of k positions and
    the difference is below n.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    if not 1 <= x <= n:
        raise ValueError(f"element {x} outside the interval [1, {n}]")
    out: list[ArithmeticProgression] = []
    span = k - 1
    for i in range(k):
        d = 1
        while True:
            a = x - i * d
            if a < 1:
                break
            if a + span * d > n:
                if i == 0:
                    break
                d += 1
                continue
            out.append(ArithmeticProgression(a, d, k))
            d += 1
    out.sort()
    return out


def aps_through_pair(x: int, y: int, k: int, n: int | None = None) -> list[ArithmeticProgression]:
    """All k-term progressions over the positive integers containing both x and y.

    At most k**2 progressions qualify (one per ordered position pair).
    When ``n`` is given the result is filtered to progressions inside [1, n].
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    if x == y:
        raise ValueError("the two elements must be distinct")
    lo, hi = min(x, y), max(x, y)
    gap = hi - lo
    out: list[ArithmeticProgression] = []
    for step in range(1, k):
        if gap % step:
            continue
        d = gap // step
        for i in range(k - step):
            a = lo - i * d
            if a < 1:
                break
            ap = ArithmeticProgression(a, d, k)
            if n is None or ap.last <= n:
                out.append(ap)
    out.sort()
    return out


def build_ap_hypergraph(A: GroundSet, k: int) -> UniformHypergraph:
    """The k-uniform hypergraph on A whose edges are the k-term progressions in A."""
    aps = enumerate_aps(A, k)
    index = {x: i for i, x in enumerate(A.elements)}
    edges = tuple(frozenset(index[t] for t in ap.terms()) for ap in aps)
    return UniformHypergraph(k, A.elements, edges)
