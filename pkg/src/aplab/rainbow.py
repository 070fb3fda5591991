"""The rainbow hypergraph on colour/integer pairs and its container structure.

Vertices are pairs (colour, integer) with colours 0..r-1 and integers
1..n; edges are the k-term progressions whose colour coordinates are
pairwise distinct.  Degree statistics, projections, embeddings of coloured
sets, and the constructive extraction of a dense low-colour-diversity core
from a sparse vertex subset all live here.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Iterator

from .colourings import Colouring
from .progressions import GroundSet, UniformHypergraph, enumerate_aps

__all__ = [
    "RainbowHypergraph",
    "VertexSubset",
    "ContainerStructure",
    "DegreeBoundRow",
    "DegreeBoundReport",
    "build_rainbow_hypergraph",
    "max_degree",
    "verify_degree_bounds",
    "project",
    "colour_set",
    "embed_coloured_set",
    "count_rainbow_edges_in",
    "extract_container_structure",
]


@dataclass(frozen=True)
class RainbowHypergraph:
    """All rainbow k-term progressions over [r] x [n].

    Vertex (w, x) has index w*n + (x-1).  The edge count equals
    (number of k-APs in [n]) * r * (r-1) * ... * (r-k+1): each progression
    combines with each injective colour assignment.
    """

    n: int
    k: int
    r: int
    hyper: UniformHypergraph

    @property
    def num_vertices(self) -> int:
        return self.hyper.num_vertices

    @property
    def num_edges(self) -> int:
        return self.hyper.num_edges

    def vertex_index(self, colour: int, x: int) -> int:
        if not (0 <= colour < self.r and 1 <= x <= self.n):
            raise ValueError(f"({colour}, {x}) is not a vertex of the hypergraph")
        return colour * self.n + (x - 1)

    def vertex_pair(self, index: int) -> tuple[int, int]:
        colour, off = divmod(index, self.n)
        return colour, off + 1


def build_rainbow_hypergraph(n: int, k: int, r: int) -> RainbowHypergraph:
    """Construct the full rainbow hypergraph for [r] x [n].

    Requires r >= k: with fewer colours than positions no rainbow edge can
    exist and the degree bounds below would be vacuously broken.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    if r < k:
        raise ValueError(f"palette size must be at least k={k}, got {r}")
    if n < 1:
        raise ValueError(f"ambient bound must be >= 1, got {n}")
    vertices = tuple((w, x) for w in range(r) for x in range(1, n + 1))
    edges = []
    for ap in enumerate_aps(GroundSet.interval(n), k):
        xs = ap.terms()
        for colours in permutations(range(r), k):
            edges.append(frozenset(w * n + (x - 1) for w, x in zip(colours, xs)))
    hyper = UniformHypergraph(k, vertices, tuple(edges))
    return RainbowHypergraph(n, k, r, hyper)


def max_degree(R: RainbowHypergraph, ell: int, *, passes: int = 1) -> int:
    """Maximum number of edges containing any fixed set of ell vertices.

    Computed by hashing the ell-subsets of every edge (never by scanning
    all ell-subsets of the vertex set).  Memory is about
    e(R) * C(k, ell) counter entries; ``passes`` > 1 trades time for
    memory by bucketing subsets over several sweeps.
    """
    if not 1 <= ell <= R.k:
        raise ValueError(f"subset size must be in [1, {R.k}], got {ell}")
    if passes < 1:
        raise ValueError(f"passes must be >= 1, got {passes}")
    edge_tuples = R.hyper.edge_tuples
    best = 0
    for bucket in range(passes):
        counts: Counter[tuple[int, ...]] = Counter()
        for edge in edge_tuples:
            for sub in combinations(edge, ell):
                if passes == 1 or hash(sub) % passes == bucket:
                    counts[sub] += 1
        if counts:
            best = max(best, max(counts.values()))
    return best


@dataclass(frozen=True)
class DegreeBoundRow:
    ell: int
    degree: int
    bound: float
    passed: bool


@dataclass(frozen=True)
class DegreeBoundReport:
    """Per-level degree bounds for a rainbow hypergraph.

    The main bound, with c = k^3 * r^k, is
        max ell-degree <= c * n^(-(ell-1)/(k-1)) * e / v
    checked exactly in integers as
        (degree * v)^(k-1) * n^(ell-1) <= (c * e)^(k-1).
    ``edge_count_ok`` records e * k^2 >= n^2 and the two headline degree
    bounds are kept as separate flags.
    """

    n: int
    k: int
    r: int
    num_vertices: int
    num_edges: int
    rows: tuple[DegreeBoundRow, ...]
    edge_count_ok: bool
    degree1_ok: bool
    degree2_ok: bool

    @property
    def all_pass(self) -> bool:
        return (
            all(row.passed for row in self.rows)
            and self.edge_count_ok
            and self.degree1_ok
            and self.degree2_ok
        )

    def csv_rows(self) -> list[str]:
        lines = ["ell,degree,bound,pass"]
        for row in self.rows:
            lines.append(f"{row.ell},{row.degree},{row.bound!r},{str(row.passed).lower()}")
        return lines


def verify_degree_bounds(R: RainbowHypergraph) -> DegreeBoundReport:
    """Check every ell-degree of R against its theoretical bound, exactly."""
    n, k, r = R.n, R.k, R.r
    v = R.num_vertices
    e = R.num_edges
    c = k**3 * r**k
    rows = []
    degrees = {}
    for ell in range(1, k + 1):
        deg = max_degree(R, ell)
        degrees[ell] = deg
        # degree <= c * n^(-(ell-1)/(k-1)) * e/v, cross-multiplied to integers
        ok = (deg * v) ** (k - 1) * n ** (ell - 1) <= (c * e) ** (k - 1)
        bound = c * n ** (-(ell - 1) / (k - 1)) * e / v
        rows.append(DegreeBoundRow(ell, deg, bound, ok))
    return DegreeBoundReport(
        n=n,
        k=k,
        r=r,
        num_vertices=v,
        num_edges=e,
        rows=tuple(rows),
        edge_count_ok=e * k**2 >= n**2,
        degree1_ok=degrees[1] <= k * n * r ** (k - 1),
        degree2_ok=degrees[2] <= k**2 * r ** (k - 2),
    )


@dataclass(frozen=True)
class VertexSubset:
    """A subset of the vertex pairs [r] x [n]."""

    n: int
    r: int
    members: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        members = frozenset((int(w), int(x)) for w, x in self.members)
        object.__setattr__(self, "members", members)
        for w, x in members:
            if not (0 <= w < self.r and 1 <= x <= self.n):
                raise ValueError(f"({w}, {x}) lies outside [0, {self.r}) x [1, {self.n}]")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], n: int, r: int) -> "VertexSubset":
        return cls(n, r, frozenset(pairs))

    @classmethod
    def full(cls, n: int, r: int) -> "VertexSubset":
        return cls(n, r, frozenset((w, x) for w in range(r) for x in range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.members

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.members))

    @cached_property
    def fibre_masks(self) -> dict[int, int]:
        """Colour bitmask per integer with a nonempty fibre."""
        masks: dict[int, int] = {}
        for w, x in self.members:
            masks[x] = masks.get(x, 0) | (1 << w)
        return masks


def project(U: VertexSubset) -> GroundSet:
    """The integers whose fibre in U is nonempty."""
    return GroundSet(tuple(sorted(U.fibre_masks)), U.n)


def colour_set(U: VertexSubset, x: int) -> frozenset[int]:
    """The colours in which x appears in U."""
    mask = U.fibre_masks.get(x, 0)
    return frozenset(w for w in range(U.r) if mask >> w & 1)


def embed_coloured_set(chi: Colouring, r: int, n: int | None = None) -> VertexSubset:
    """Map a coloured set Z into vertex pairs {(colour(z), z) : z in Z}.

    The embedding is independent in the rainbow hypergraph exactly when the
    colouring has no rainbow k-AP.
    """
    if chi.palette_size > r:
        raise ValueError(
            f"colouring uses {chi.palette_size} colours, exceeding palette size {r}"
        )
    ambient = chi.domain.n if n is None else n
    pairs = frozenset(zip(chi.assignment, chi.domain.elements))
    return VertexSubset(ambient, r, pairs)


def _count_injective(masks: list[int]) -> int:
    """Number of ways to pick pairwise-distinct colours, one from each mask."""
    if len(masks) == 3:
        ma, mb, mc = masks
        ca, cb, cc = ma.bit_count(), mb.bit_count(), mc.bit_count()
        ab = (ma & mb).bit_count()
        ac = (ma & mc).bit_count()
        bc = (mb & mc).bit_count()
        abc = (ma & mb & mc).bit_count()
        return ca * cb * cc - ab * cc - ac * cb - bc * ca + 2 * abc

    def rec(i: int, used: int) -> int:
        if i == len(masks):
            return 1
        total = 0
        avail = masks[i] & ~used
        while avail:
            bit = avail & -avail
            avail ^= bit
            total += rec(i + 1, used | bit)
        return total

    return rec(0, 0)


def count_rainbow_edges_in(U: VertexSubset, k: int) -> int:
    """Number of rainbow-hypergraph edges induced by the vertex subset U.

    Counted without materialising the hypergraph: for each k-AP in the
    projection, the injective colour choices within the fibres are counted
    directly.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    masks = U.fibre_masks
    total = 0
    for ap in enumerate_aps(project(U), k):
        total += _count_injective([masks[x] for x in ap.terms()])
    return total


@dataclass(frozen=True)
class ContainerStructure:
    """Core structure extracted from a vertex subset with few induced edges.

    ``b_set`` collects the integers whose whole fibre falls inside the small
    colour pool ``omega``; ``colour_budget`` is the ceiling the pool has to
    respect.  The three conclusion flags record whether |B| >= n/4,
    |omega| <= budget and fibre containment actually hold for this input;
    the two hypothesis flags record whether the input was dense in
    projection and sparse in induced edges.
    """

    projection: GroundSet
    high_fibre: GroundSet
    reduced: GroundSet
    b_set: GroundSet
    omega: frozenset[int]
    colour_budget: int
    rainbow_edge_count: int
    projection_dense: bool
    edges_sparse: bool
    b_large: bool
    omega_within_budget: bool
    fibres_contained: bool

    @property
    def conclusions_hold(self) -> bool:
        return self.b_large and self.omega_within_budget and self.fibres_contained


def extract_container_structure(
    U: VertexSubset,
    k: int,
    beta: Fraction | float | int | str,
    eps: Fraction | float | int | str,
) -> ContainerStructure:
    """Run the core-extraction construction on a vertex subset.

    Steps, applied unconditionally: project U onto the integers, drop the
    integers carrying k or more colours, collect the colours that still
    appear on at least beta*n/4 of the remaining integers into ``omega``,
    and keep the integers whose fibre lies inside ``omega``.  The colour
    budget is ceil(4k/beta).  Validity flags report which of the expected
    bounds hold for this particular input; ``eps`` only parameterises the
    edge-sparsity flag.
    """
    if k < 3:
        raise ValueError(f"progression length must be >= 3, got {k}")
    beta = Fraction(beta)
    eps = Fraction(eps)
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    n = U.n
    masks = U.fibre_masks
    proj = sorted(masks)
    high = [x for x in proj if masks[x].bit_count() >= k]
    reduced = [x for x in proj if masks[x].bit_count() < k]

    # colours appearing on at least beta*n/4 integers of the reduced set
    colour_counts = [0] * U.r
    for x in reduced:
        mask = masks[x]
        while mask:
            bit = mask & -mask
            mask ^= bit
            colour_counts[bit.bit_length() - 1] += 1
    pb, qb = beta.numerator, beta.denominator
    omega = frozenset(w for w in range(U.r) if 4 * qb * colour_counts[w] >= pb * n)
    omega_mask = 0
    for w in omega:
        omega_mask |= 1 << w

    b_elems = tuple(x for x in reduced if masks[x] & ~omega_mask == 0)
    budget = -((-4 * k * qb) // pb)  # ceil(4k / beta)
    edge_count = count_rainbow_edges_in(U, k)
    pe, qe = eps.numerator, eps.denominator
    return ContainerStructure(
        projection=GroundSet(tuple(proj), n),
        high_fibre=GroundSet(tuple(high), n),
        reduced=GroundSet(tuple(reduced), n),
        b_set=GroundSet(b_elems, n),
        omega=omega,
        colour_budget=budget,
        rainbow_edge_count=edge_count,
        projection_dense=4 * len(proj) >= 3 * n,
        edges_sparse=edge_count * qe < pe * n * n,
        b_large=4 * len(b_elems) >= n,
        omega_within_budget=len(omega) <= budget,
        fibres_contained=all(masks[x] & ~omega_mask == 0 for x in b_elems),
    )
