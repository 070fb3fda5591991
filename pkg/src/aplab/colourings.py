"""Colourings of ground sets in restricted-growth normal form.

A colouring is stored as one colour index per element, in element order,
with the first element coloured 0 and every later colour at most one above
the maximum seen so far.  That canonical form represents each induced
partition exactly once, and the deciders search this space directly.

Class-size bounds are compared as exact rationals throughout; no
floating-point threshold ever decides boundedness.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .progressions import ArithmeticProgression, GroundSet, enumerate_aps

__all__ = [
    "APClass",
    "APCounts",
    "Colouring",
    "normalize",
    "is_alpha_bounded",
    "is_merging",
    "merge_colours",
    "classify_ap",
    "count_coloured_aps",
]


class APClass(Enum):
    MONOCHROMATIC = "monochromatic"
    RAINBOW = "rainbow"
    NEITHER = "neither"


class APCounts(NamedTuple):
    mono: int
    rainbow: int
    neither: int


@dataclass(frozen=True)
class Colouring:
    """A colouring of a ground set, canonical under colour relabelling."""

    domain: GroundSet
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        assignment = tuple(self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != len(self.domain):
            raise ValueError(
                f"assignment covers {len(assignment)} elements, domain has {len(self.domain)}"
            )
        top = -1
        for c in assignment:
            if not 0 <= c <= top + 1:
                raise ValueError(
                    f"assignment {assignment} is not in restricted-growth form"
                )
            if c > top:
                top = c

    @classmethod
    def constant(cls, domain: GroundSet) -> "Colouring":
        return cls(domain, (0,) * len(domain))

    @classmethod
    def distinct(cls, domain: GroundSet) -> "Colouring":
        return cls(domain, tuple(range(len(domain))))

    @property
    def palette_size(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    @cached_property
    def _colour_by_element(self) -> dict[int, int]:
        return dict(zip(self.domain.elements, self.assignment))

    def colour_of(self, x: int) -> int:
        try:
            return self._colour_by_element[x]
        except KeyError:
            raise ValueError(f"{x} is not in the colouring's domain") from None

    def class_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.palette_size
        for c in self.assignment:
            sizes[c] += 1
        return tuple(sizes)


def normalize(domain: GroundSet, assignment: Mapping[int, object] | Sequence[object]) -> Colouring:
    """Canonicalise a raw colour map into restricted-growth form.

    ``assignment`` is either a mapping from every element of the domain to
    an arbitrary hashable label, or a sequence of labels aligned with the
    domain's element order.  Partial assignments are rejected.
    """
    if isinstance(assignment, Mapping):
        labels = []
        for x in domain.elements:
            if x not in assignment:
                raise ValueError(f"assignment missing a colour for element {x}")
            labels.append(assignment[x])
    else:
        labels = list(assignment)
        if len(labels) != len(domain):
            raise ValueError(
                f"assignment has {len(labels)} entries, domain has {len(domain)} elements"
            )
    seen: dict[object, int] = {}
    canon = tuple(seen.setdefault(label, len(seen)) for label in labels)
    return Colouring(domain, canon)


def is_alpha_bounded(chi: Colouring, alpha: Fraction | float | int | str) -> bool:
    """True iff every colour class has size at most alpha * |domain| (exactly)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    m = len(chi.domain)
    p, q = alpha.numerator, alpha.denominator
    return all(s * q <= p * m for s in chi.class_sizes())


def is_merging(phi: Colouring, chi: Colouring) -> bool:
    """True iff phi can be obtained from chi by merging colour classes.

    Equivalently: chi's partition refines phi's, i.e. there is a colour map
    pi with phi = pi o chi.
    """
    if phi.domain != chi.domain:
        raise ValueError("colourings must share the same domain")
    mapping: dict[int, int] = {}
    for c_chi, c_phi in zip(chi.assignment, phi.assignment):
        if mapping.setdefault(c_chi, c_phi) != c_phi:
            return False
    return True


def merge_colours(chi: Colouring, alpha: Fraction | float | int | str) -> Colouring:
    """Greedily merge small colour classes of an alpha-bounded colouring.

    While two colour classes both have size at most alpha*|A|/2, the two
    with the smallest colour indices are merged (the smaller index wins).
    The result is a merging of ``chi`` that is still alpha-bounded and uses
    at most floor(4/alpha) colours.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not is_alpha_bounded(chi, alpha):
        raise ValueError("input colouring is not alpha-bounded")
    m = len(chi.domain)
    p, q = alpha.numerator, alpha.denominator
    labels = list(chi.assignment)
    sizes: dict[int, int] = {}
    for c in labels:
        sizes[c] = sizes.get(c, 0) + 1
    while True:
        small = sorted(c for c, s in sizes.items() if 2 * s * q <= p * m)
        if len(small) < 2:
            break
        keep, absorb = small[0], small[1]
        labels = [keep if c == absorb else c for c in labels]
        sizes[keep] += sizes.pop(absorb)
    return normalize(chi.domain, labels)


def classify_ap(chi: Colouring, ap: ArithmeticProgression) -> APClass:
    """Monochromatic, rainbow or neither, for a fully coloured progression."""
    colours = [chi.colour_of(x) for x in ap.terms()]
    first = colours[0]
    if all(c == first for c in colours):
        return APClass.MONOCHROMATIC
    if len(set(colours)) == len(colours):
        return APClass.RAINBOW
    return APClass.NEITHER


def count_coloured_aps(A: GroundSet, chi: Colouring, k: int) -> APCounts:
    """Counts of monochromatic / rainbow / neither k-term progressions in A."""
    if chi.domain != A:
        raise ValueError("colouring domain must equal the ground set")
    cols = chi.assignment
    index = A.index_of
    mono = rainbow = neither = 0
    for ap in enumerate_aps(A, k):
        colours = [cols[index(t)] for t in ap.terms()]
        first = colours[0]
        if all(c == first for c in colours):
            mono += 1
        elif len(set(colours)) == len(colours):
            rainbow += 1
        else:
            neither += 1
    return APCounts(mono, rainbow, neither)
