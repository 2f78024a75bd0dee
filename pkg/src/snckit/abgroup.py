"""Finitely generated abelian groups, exactly.

A group is stored in canonical form (free rank plus a divisibility chain of
torsion orders), so structural equality coincides with isomorphism.  Groups
are produced from integer presentation matrices via Smith normal form, and
homomorphisms between them are matrices on canonical generators, validated
against torsion at construction time.

The canonical generator order is: free generators first, then torsion
generators with ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, NamedTuple

from .intmat import (
    IntMatrix,
    column_lattice_basis,
    kernel_basis,
    smith_normal_form,
    solve_exact,
    unimodular_inverse,
)


def _divisibility_chain(factors: Iterable[int]) -> tuple[int, ...]:
    """Sort torsion orders into a chain t_1 | t_2 | ... by gcd/lcm exchange.

    Each exchange preserves the isomorphism class of the direct sum of
    cyclic groups (Z/a ⊕ Z/b ≅ Z/gcd ⊕ Z/lcm) and strictly decreases the
    smaller factor unless the pair already divides, so the loop terminates.
    """
    vals = [abs(int(t)) for t in factors]
    if any(v == 0 for v in vals):
        raise ValueError("torsion order 0 is not a torsion order")
    vals = [v for v in vals if v != 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a != 0:
                    vals[i], vals[j] = gcd(a, b), lcm(a, b)
                    changed = True
    return tuple(v for v in sorted(vals) if v != 1)


@dataclass(frozen=True)
class FgAbGroup:
    """A finitely generated abelian group Z^r ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k.

    The torsion orders satisfy t_i ≥ 2 and t_i | t_{i+1}, which makes the
    representation unique: two values compare equal exactly when the groups
    are isomorphic.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"negative free rank {self.free_rank}")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion order {t} < 2; use canonical form")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def zero(cls) -> "FgAbGroup":
        return cls(0)

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, order: int) -> "FgAbGroup":
        """Z/order, with order 0 meaning Z itself."""
        if order == 0:
            return cls(1)
        return cls(0, _divisibility_chain([order]))

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int]) -> "FgAbGroup":
        return cls(free_rank, _divisibility_chain(factors))

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def order_of_generator(self, i: int) -> int:
        """Order of the i-th canonical generator (0 for a free generator)."""
        if not 0 <= i < self.ngens:
            raise IndexError(f"generator index {i} out of range")
        if i < self.free_rank:
            return 0
        return self.torsion[i - self.free_rank]

    def torsion_order(self) -> int:
        """The order of the torsion subgroup."""
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


ZERO_GROUP = FgAbGroup.zero()
Z = FgAbGroup.free(1)


def presentation_matrix(g: FgAbGroup) -> IntMatrix:
    """The canonical relation matrix of g on its canonical generators.

    One column per torsion generator, carrying its order; free generators
    get no relations.
    """
    k = len(g.torsion)
    rows = [[0] * k for _ in range(g.ngens)]
    for i, t in enumerate(g.torsion):
        rows[g.free_rank + i][i] = t
    return IntMatrix(rows, ncols=k)


def group_from_presentation(relations: IntMatrix, generators: int) -> FgAbGroup:
    """The cokernel Z^generators / (column span of relations), canonical.

    >>> str(group_from_presentation(IntMatrix([[2]]), 1))
    'Z/2'
    >>> str(group_from_presentation(IntMatrix.zero(3, 0), 3))
    'Z^3'
    """
    if relations.nrows != generators:
        raise ValueError(
            f"relation matrix has {relations.nrows} rows for {generators} generators")
    sf = smith_normal_form(relations)
    return FgAbGroup(generators - sf.rank, sf.torsion_factors())


@dataclass(frozen=True)
class Presentation:
    """A cokernel together with coordinates on its canonical generators.

    ``to_canonical`` rewrites a vector on the presenting generators as a
    vector on the canonical generators of ``group``; ``lift`` is a section
    of it (to_canonical @ lift is the identity).
    """

    group: FgAbGroup
    to_canonical: IntMatrix
    lift: IntMatrix


def presentation(relations: IntMatrix, generators: int) -> Presentation:
    """Like group_from_presentation, but keeps the change of coordinates."""
    if relations.nrows != generators:
        raise ValueError(
            f"relation matrix has {relations.nrows} rows for {generators} generators")
    sf = smith_normal_form(relations)
    diag = sf.diagonal
    free_idx = [i for i in range(generators) if i >= len(diag) or diag[i] == 0]
    tors_idx = [i for i in range(len(diag)) if diag[i] > 1]
    order = free_idx + tors_idx
    group = FgAbGroup(len(free_idx), tuple(diag[i] for i in tors_idx))
    to_canonical = sf.u.take_rows(order)
    lift = unimodular_inverse(sf.u).take_columns(order)
    return Presentation(group, to_canonical, lift)


@dataclass(frozen=True)
class Hom:
    """A homomorphism between groups in canonical form.

    The matrix has one column per source generator and one row per target
    generator; column j holds the image of the j-th canonical generator.
    Construction fails when some column violates the torsion of its
    generator, i.e. when the assignment does not define a homomorphism.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not map "
                f"{self.source.ngens} generators to {self.target.ngens}")
        for j in range(self.source.ngens):
            s = self.source.order_of_generator(j)
            if s == 0:
                continue
            for i in range(self.target.ngens):
                t = self.target.order_of_generator(i)
                e = self.matrix[i, j]
                if t == 0:
                    if s * e != 0:
                        raise ValueError(
                            f"entry ({i}, {j}) = {e} sends a generator of order "
                            f"{s} to a free generator")
                elif (s * e) % t != 0:
                    raise ValueError(
                        f"entry ({i}, {j}) = {e} violates torsion: "
                        f"{s} * {e} is nonzero mod {t}")

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "Hom":
        return cls(source, target, IntMatrix.zero(target.ngens, source.ngens))

    @classmethod
    def identity(cls, g: FgAbGroup) -> "Hom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    def is_zero(self) -> bool:
        """Whether every generator maps to zero in the target."""
        for i in range(self.target.ngens):
            t = self.target.order_of_generator(i)
            for j in range(self.source.ngens):
                e = self.matrix[i, j]
                if (t == 0 and e != 0) or (t != 0 and e % t != 0):
                    return False
        return True


def compose(f: Hom, g: Hom) -> Hom:
    """The composite f ∘ g (apply g first)."""
    if g.target != f.source:
        raise ValueError(f"cannot compose: {g.target} is not {f.source}")
    return Hom(g.source, f.target, f.matrix @ g.matrix)


def _preimage_of_torsion(matrix: IntMatrix, target: FgAbGroup) -> IntMatrix:
    """Basis of the lattice {x : matrix·x = 0 in target}, as columns.

    Solutions are integer vectors x with matrix·x in the relation lattice
    of the target, computed from the kernel of [matrix | relations].
    """
    m_src = matrix.ncols
    stacked = matrix.hstack(presentation_matrix(target))
    kb = kernel_basis(stacked)
    return column_lattice_basis(kb.take_rows(range(m_src)))


def kernel_lattice(h: Hom) -> IntMatrix:
    """Basis (as columns) of the vectors on source generators killed by h."""
    return _preimage_of_torsion(h.matrix, h.target)


class HomAnalysis(NamedTuple):
    kernel: FgAbGroup
    image: FgAbGroup
    cokernel: FgAbGroup


def hom_analyze(h: Hom) -> HomAnalysis:
    """Kernel, image, and cokernel of a homomorphism, all canonical.

    >>> doubling = Hom(Z, Z, IntMatrix([[2]]))
    >>> [str(g) for g in hom_analyze(doubling)]
    ['0', 'Z', 'Z/2']
    """
    m_src = h.source.ngens
    cokernel = group_from_presentation(
        h.matrix.hstack(presentation_matrix(h.target)), h.target.ngens)
    lat = _preimage_of_torsion(h.matrix, h.target)
    rels = solve_exact(lat, presentation_matrix(h.source))
    if rels is None:  # pragma: no cover - validation makes this unreachable
        raise AssertionError("source relations escaped the kernel lattice")
    kernel = group_from_presentation(rels, lat.ncols)
    image = group_from_presentation(lat, m_src)
    return HomAnalysis(kernel, image, cokernel)


def kernel_presentation(h: Hom) -> Presentation:
    """The kernel of h, with coordinates on the preimage-lattice basis.

    The presenting generators are the columns of the lattice basis returned
    by the same computation as hom_analyze, so two kernels extracted from
    homs sharing a source can be compared generator-by-generator.
    """
    lat = _preimage_of_torsion(h.matrix, h.target)
    rels = solve_exact(lat, presentation_matrix(h.source))
    if rels is None:  # pragma: no cover
        raise AssertionError("source relations escaped the kernel lattice")
    return presentation(rels, lat.ncols)


def subquotient(outgoing: Hom, incoming: Hom) -> FgAbGroup:
    """ker(outgoing) / im(incoming) at the shared middle group.

    Raises when the image of ``incoming`` does not land in the kernel of
    ``outgoing``, which is exactly the failure of the two maps to compose
    to zero.
    """
    if incoming.target != outgoing.source:
        raise ValueError(
            f"maps do not meet: incoming lands in {incoming.target}, "
            f"outgoing leaves from {outgoing.source}")
    mid = outgoing.source
    lat = _preimage_of_torsion(outgoing.matrix, outgoing.target)
    rels_in = incoming.matrix.hstack(presentation_matrix(mid))
    q = solve_exact(lat, rels_in)
    if q is None:
        raise ValueError("incoming image does not lie in the outgoing kernel")
    return group_from_presentation(q, lat.ncols)


def direct_sum(gs: Iterable[FgAbGroup]) -> FgAbGroup:
    """Direct sum in canonical form.

    >>> str(direct_sum([FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)]))
    'Z/6'
    """
    free = 0
    factors: list[int] = []
    for g in gs:
        free += g.free_rank
        factors.extend(g.torsion)
    return FgAbGroup(free, _divisibility_chain(factors))
