"""Bounded chain complexes of free abelian groups and spectral pages.

A complex stores one free rank per degree on a contiguous range, plus the
boundary matrices between adjacent degrees.  Homology and cohomology come
out in canonical form; cohomology is, by a single global convention, the
homology of the degreewise transposed complex with degrees negated.

Spectral pages are finite: a dictionary of nonzero entries together with an
explicit support region.  Only two page-passage facts are implemented (the
E_1 → E_2 step, and the top-corner E_3 entry of a two-row page) because
nothing downstream needs more.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .abgroup import FgAbGroup, Hom, compose, group_from_presentation, subquotient
from .intmat import IntMatrix, smith_diagonal


class NonComplexError(Exception):
    """Composite of two consecutive boundaries is nonzero."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"boundary composite nonzero at degree {degree}")


class SupportViolationError(Exception):
    """A nonzero spectral entry sits outside the declared support region."""

    def __init__(self, position: tuple[int, int], message: str | None = None):
        self.position = position
        super().__init__(message or f"nonzero entry outside support at {position}")


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex on degrees lowest_degree .. lowest_degree + len - 1.

    ``boundaries[k]`` is the boundary map out of degree lowest_degree + k + 1
    into degree lowest_degree + k, so it has shape ranks[k] × ranks[k + 1].
    """

    lowest_degree: int
    ranks: tuple[int, ...]
    boundaries: tuple[IntMatrix, ...]

    def __post_init__(self) -> None:
        expected = max(len(self.ranks) - 1, 0)
        if len(self.boundaries) != expected:
            raise ValueError(
                f"{len(self.boundaries)} boundary maps for {len(self.ranks)} degrees")
        for k, b in enumerate(self.boundaries):
            want = (self.ranks[k], self.ranks[k + 1])
            if b.shape != want:
                raise ValueError(
                    f"boundary out of degree {self.lowest_degree + k + 1} has shape "
                    f"{b.shape}, expected {want}")

    @classmethod
    def from_lists(cls, lowest_degree: int, ranks: Iterable[int],
                   boundaries: Iterable[IntMatrix]) -> "ChainComplex":
        return cls(lowest_degree, tuple(ranks), tuple(boundaries))

    @property
    def degrees(self) -> range:
        return range(self.lowest_degree, self.lowest_degree + len(self.ranks))

    def rank(self, d: int) -> int:
        if d in self.degrees:
            return self.ranks[d - self.lowest_degree]
        return 0

    def boundary(self, d: int) -> IntMatrix:
        """The map from degree d to degree d - 1 (zero outside the range)."""
        k = d - self.lowest_degree - 1
        if 0 <= k < len(self.boundaries):
            return self.boundaries[k]
        return IntMatrix.zero(self.rank(d - 1), self.rank(d))


def validate_complex(c: ChainComplex) -> None:
    """Raise NonComplexError at the first degree whose composite is nonzero.

    The reported degree is the upper one: degree d means the composite
    boundary(d - 1) @ boundary(d) failed.
    """
    for d in c.degrees:
        if not (c.boundary(d - 1) @ c.boundary(d)).is_zero():
            raise NonComplexError(d)


def homology(c: ChainComplex, i: int) -> FgAbGroup:
    """H_i = ker(boundary out of i) / im(boundary into i), canonical form.

    For a free complex the answer reads off two Smith forms: the free rank
    is rank_i minus the two boundary ranks, and the torsion is the list of
    invariant factors of the incoming boundary that exceed 1.
    """
    out_rank = sum(1 for x in smith_diagonal(c.boundary(i)) if x != 0)
    incoming = smith_diagonal(c.boundary(i + 1))
    free = c.rank(i) - out_rank - sum(1 for x in incoming if x != 0)
    return FgAbGroup(free, tuple(x for x in incoming if x > 1))


def dualize(c: ChainComplex) -> ChainComplex:
    """The transposed complex, reindexed so that H^i(c) = H_{-i}(dualize(c))."""
    ranks = tuple(reversed(c.ranks))
    boundaries = tuple(b.transpose() for b in reversed(c.boundaries))
    top = c.lowest_degree + len(c.ranks) - 1
    return ChainComplex(-top, ranks, boundaries)


def cohomology(c: ChainComplex, i: int) -> FgAbGroup:
    """H^i with integer coefficients, in canonical form.

    >>> circle = ChainComplex(0, (1, 1), (IntMatrix.zero(1, 1),))
    >>> str(cohomology(circle, 1))
    'Z'
    """
    return homology(dualize(c), -i)


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** d * c.rank(d) for d in c.degrees)


@dataclass
class SpectralPage:
    """One page of a first-quadrant spectral sequence, finitely supported.

    ``entries`` holds the nonzero groups; anything absent is zero.  The
    differentials on page r have bidegree (r, 1 - r) and are keyed by their
    source position.  ``support`` is the region where nonzero entries are
    allowed at all; it never grows when passing to a later page.
    """

    page_no: int
    entries: dict[tuple[int, int], FgAbGroup] = field(default_factory=dict)
    differentials: dict[tuple[int, int], Hom] = field(default_factory=dict)
    support: frozenset[tuple[int, int]] = frozenset()

    def entry(self, p: int, q: int) -> FgAbGroup:
        return self.entries.get((p, q), FgAbGroup.zero())

    def differential(self, p: int, q: int) -> Hom:
        d = self.differentials.get((p, q))
        if d is not None:
            return d
        r = self.page_no
        return Hom.zero(self.entry(p, q), self.entry(p + r, q - r + 1))

    def validate(self) -> None:
        """Check support, differential shapes, and d ∘ d = 0."""
        r = self.page_no
        for (p, q), g in self.entries.items():
            if not g.is_trivial() and (p, q) not in self.support:
                raise SupportViolationError((p, q))
        for (p, q), d in self.differentials.items():
            if d.source != self.entry(p, q):
                raise ValueError(f"differential at {(p, q)} has wrong source")
            if d.target != self.entry(p + r, q - r + 1):
                raise ValueError(f"differential at {(p, q)} has wrong target")
        for (p, q) in self.differentials:
            nxt = (p + r, q - r + 1)
            if nxt in self.differentials:
                if not compose(self.differentials[nxt], self.differentials[(p, q)]).is_zero():
                    raise ValueError(f"differentials fail d∘d = 0 at {(p, q)}")


def e2_page(e1: SpectralPage, support: Iterable[tuple[int, int]]) -> SpectralPage:
    """Homology of the d_1 differentials: ker(d_1)/im(d_1) at each position.

    The result carries no differentials; whatever is known about d_2 enters
    later through explicit flags.  A nonzero result outside the declared
    support region raises SupportViolationError rather than being silently
    dropped.
    """
    if e1.page_no != 1:
        raise ValueError(f"expected a page 1, got page {e1.page_no}")
    e1.validate()
    region = frozenset(support)
    entries: dict[tuple[int, int], FgAbGroup] = {}
    for (p, q) in sorted(e1.entries):
        outgoing = e1.differential(p, q)
        incoming = e1.differential(p - 1, q)
        group = subquotient(outgoing, incoming)
        if group.is_trivial():
            continue
        if (p, q) not in region:
            raise SupportViolationError((p, q))
        entries[(p, q)] = group
    return SpectralPage(2, entries, {}, region)


@dataclass(frozen=True)
class TaggedGroup:
    """A group known exactly, or an upper bound when a differential is opaque.

    When ``exact`` is false, ``group`` is the bound: the true value is a
    quotient of it by some image of ``source_bound``, so its free rank lies
    between ``min_rank`` and the rank of the bound.
    """

    group: FgAbGroup
    exact: bool
    source_bound: FgAbGroup = FgAbGroup.zero()
    min_rank: int = 0

    def __post_init__(self) -> None:
        if self.exact and not self.source_bound.is_trivial():
            raise ValueError("exact value cannot carry a source bound")

    @classmethod
    def exactly(cls, group: FgAbGroup) -> "TaggedGroup":
        return cls(group, True, FgAbGroup.zero(), group.free_rank)

    def __str__(self) -> str:
        if self.exact:
            return str(self.group)
        return f"{self.group} (bound; quotient by an image of {self.source_bound})"


def e3_top_corner(e2: SpectralPage, n: int, d2_known_zero: bool) -> TaggedGroup:
    """E_3 at position (n-1, 0) of a two-row page with rows q in {0, 1}.

    The only differential that can touch the corner on page 2 arrives from
    (n-3, 1).  With the flag set, or with a trivial source, the corner is
    exact and equal to its E_2 value; otherwise the E_2 value is an upper
    bound and the rank can drop by at most the rank of the source.
    """
    if e2.page_no != 2:
        raise ValueError(f"expected a page 2, got page {e2.page_no}")
    for (p, q), g in e2.entries.items():
        if not g.is_trivial() and q not in (0, 1):
            raise ValueError(f"two-row page has an entry at q = {q}")
    corner = e2.entry(n - 1, 0)
    source = e2.entry(n - 3, 1)
    if d2_known_zero or source.is_trivial():
        return TaggedGroup.exactly(corner)
    min_rank = max(0, corner.free_rank - source.free_rank)
    return TaggedGroup(corner, False, source, min_rank)


def complex_from_ranks_and_maps(
        lowest_degree: int,
        data: Mapping[int, int],
        maps: Mapping[int, IntMatrix]) -> ChainComplex:
    """Assemble a ChainComplex from per-degree ranks and boundary maps.

    ``maps[d]`` is the boundary out of degree d.  Degrees missing from
    ``data`` get rank zero; missing maps are zero maps.
    """
    if not data:
        return ChainComplex(lowest_degree, (), ())
    top = max(data)
    ranks = tuple(data.get(d, 0) for d in range(lowest_degree, top + 1))
    boundaries = []
    for d in range(lowest_degree + 1, top + 1):
        b = maps.get(d)
        if b is None:
            b = IntMatrix.zero(data.get(d - 1, 0), data.get(d, 0))
        boundaries.append(b)
    return ChainComplex(lowest_degree, ranks, tuple(boundaries))
