"""Descriptors for the negative homotopy K-theory of a resolved singularity.

The inputs are the dual complex of the exceptional divisor and the
Neron-Severi data of its strata; the outputs are structured reports that
track, piece by piece, which parts of KH in degrees 1-n and -n are computed
exactly and which are only bounded by an opaque differential or by the
points of a semiabelian group.

Divisible groups (tori, abelian varieties) never appear as actual groups:
the torus is carried as a rank plus a finite root-of-unity part, abelian
pieces as a dimension.  Every honest group in a report is finitely
generated and in canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .abgroup import (
    FgAbGroup,
    Hom,
    compose,
    direct_sum,
    hom_analyze,
    kernel_lattice,
    presentation,
    presentation_matrix,
)
from .chaincx import SpectralPage, cohomology, e3_top_corner, homology
from .intmat import IntMatrix, solve_exact
from .snc import SncDivisor, build_dual_complex, validate_snc

ALGEBRAICALLY_CLOSED = "algebraically_closed"
GENERAL_FIELD = "general"
_FIELD_MODES = (ALGEBRAICALLY_CLOSED, GENERAL_FIELD)


class ComplexViolationError(Exception):
    """Consecutive Neron-Severi pullback maps do not compose to zero."""


class LevelMismatchError(Exception):
    """Picard data levels do not match the ambient dimension."""


@dataclass(frozen=True)
class TorusDescriptor:
    """The torus part of the units cohomology of the dual complex.

    ``rank`` counts copies of the multiplicative group; ``mu_part`` is the
    finite root-of-unity contribution that a universal-coefficient reading
    of H^{n-1}(D(E), units) retains but a plain tensor reading kills.  The
    two readings disagree exactly when ``mu_ambiguous`` is set; both values
    are reported rather than silently choosing one.

    Over a general field the computation is only valid when the relevant
    homology is torsion-free; otherwise the descriptor is undetermined.
    """

    rank: int
    mu_part: FgAbGroup
    field_mode: str
    determined: bool = True
    mu_ambiguous: bool = False

    def is_trivial_group(self) -> bool:
        return self.determined and self.rank == 0 and self.mu_part.is_trivial()

    def __str__(self) -> str:
        if not self.determined:
            return "undetermined (general field, torsion obstructs)"
        parts = [f"torus rank {self.rank}"]
        if not self.mu_part.is_trivial():
            parts.append(f"mu-part {self.mu_part}"
                         + (" [ambiguous]" if self.mu_ambiguous else ""))
        return ", ".join(parts)


def torus_descriptor(hn1: FgAbGroup, hn2_homology_torsion_free: bool,
                     field_mode: str) -> TorusDescriptor:
    """Read the torus H^{n-1}(D(E), units) off integral cohomology.

    Over an algebraically closed field the rank is the free rank of
    H^{n-1}(D(E), Z) and the torsion survives as roots of unity.  Over a
    general field the same reading needs H_{n-2}(D(E), Z) torsion-free;
    without that hypothesis nothing is claimed.
    """
    if field_mode not in _FIELD_MODES:
        raise ValueError(f"unknown field mode {field_mode!r}")
    if field_mode == GENERAL_FIELD and not hn2_homology_torsion_free:
        return TorusDescriptor(0, FgAbGroup.zero(), field_mode, determined=False)
    mu = FgAbGroup(0, hn1.torsion)
    return TorusDescriptor(hn1.free_rank, mu, field_mode,
                           determined=True, mu_ambiguous=not mu.is_trivial())


@dataclass(frozen=True)
class PicardLevel:
    """Neron-Severi group and abelian-variety dimension at one level."""

    p: int
    ns: FgAbGroup
    pic0_dim: int

    def __post_init__(self) -> None:
        if self.pic0_dim < 0:
            raise ValueError(f"negative Pic^0 dimension at level {self.p}")


@dataclass(frozen=True)
class PicardInput:
    """User-supplied Picard-side data of the stratum levels.

    Levels run over p = n-4, n-3, n-2 (the first absent when n = 3), and
    ``maps`` holds the pullback map from each level to the next.  The
    cokernel dimension of the induced map on abelian-variety parts is an
    input, not something the combinatorics can know.
    """

    n: int
    levels: tuple[PicardLevel, ...]
    maps: tuple[Hom, ...]
    coker_pic0_dim: int
    ker_beta_known: FgAbGroup | None = None

    def __post_init__(self) -> None:
        if self.coker_pic0_dim < 0:
            raise ValueError("negative coker(Pic^0) dimension")
        if len(self.levels) < 2:
            raise ValueError("need at least the levels n-3 and n-2")
        ps = [lv.p for lv in self.levels]
        if ps != sorted(ps) or len(set(ps)) != len(ps):
            raise ValueError(f"levels must be strictly increasing, got {ps}")
        if ps != list(range(ps[0], ps[0] + len(ps))):
            raise ValueError(f"levels must be consecutive, got {ps}")
        if len(self.maps) != len(self.levels) - 1:
            raise ValueError(
                f"{len(self.maps)} maps for {len(self.levels)} levels")
        for k, h in enumerate(self.maps):
            if h.source != self.levels[k].ns or h.target != self.levels[k + 1].ns:
                raise ValueError(f"map {k} does not join levels {ps[k]} and {ps[k + 1]}")

    def levels_expected_for(self, n: int) -> set[int]:
        return {n - 3, n - 2} if n == 3 else {n - 4, n - 3, n - 2}


class NsAnalysis(NamedTuple):
    ker_ns: FgAbGroup
    coker_ns: FgAbGroup
    gamma: FgAbGroup


class _NsComputation(NamedTuple):
    ker_ns: FgAbGroup
    coker_ns: FgAbGroup
    gamma: FgAbGroup
    surjection: Hom


def _ns_computation(pi: PicardInput) -> _NsComputation:
    """Kernel/cokernel of the top map plus the lattice quotient Gamma.

    Gamma is the cohomology of the NS complex one step before its end.  It
    is computed on the same kernel-lattice basis as ker(NS) so that the
    canonical quotient map between them comes out as an explicit matrix.
    """
    main = pi.maps[-1]
    if len(pi.maps) >= 2:
        below = pi.maps[-2]
        if not compose(main, below).is_zero():
            raise ComplexViolationError(
                "NS maps do not compose to zero between levels "
                f"{pi.levels[-3].p} and {pi.levels[-1].p}")
        incoming = below.matrix
    else:
        incoming = IntMatrix.zero(main.source.ngens, 0)

    analysis = hom_analyze(main)
    lat = kernel_lattice(main)
    r_mid = presentation_matrix(main.source)
    rels_ker = solve_exact(lat, r_mid)
    rels_gamma = solve_exact(lat, incoming.hstack(r_mid))
    if rels_ker is None or rels_gamma is None:  # pragma: no cover
        raise AssertionError("relations escaped the kernel lattice")
    pres_ker = presentation(rels_ker, lat.ncols)
    pres_gamma = presentation(rels_gamma, lat.ncols)
    surjection = Hom(pres_ker.group, pres_gamma.group,
                     pres_gamma.to_canonical @ pres_ker.lift)
    return _NsComputation(analysis.kernel, analysis.cokernel,
                          pres_gamma.group, surjection)


def ns_analysis(pi: PicardInput) -> NsAnalysis:
    """ker(NS), coker(NS) of the last pullback map, and the lattice Gamma.

    Gamma equals ker(NS) when there is no level below n-3 or its map is
    zero; a nonzero lower map cuts Gamma down to a proper quotient.
    """
    comp = _ns_computation(pi)
    return NsAnalysis(comp.ker_ns, comp.coker_ns, comp.gamma)


@dataclass(frozen=True)
class OneMotiveDescriptor:
    """The two lattices and the semiabelian shape of the associated 1-motive.

    The lattice map into the semiabelian group is not determined by our
    inputs, so ``map_status`` stays opaque; what is stored exactly is the
    surjection from the primed lattice (ker NS) onto the unprimed one
    (Gamma), as an explicit matrix on canonical generators.
    """

    lattice_lprime: FgAbGroup
    lattice_l: FgAbGroup
    surjection: Hom
    torus: TorusDescriptor
    abelian_dim: int
    map_status: str = "opaque"


def one_motive_descriptor(pi: PicardInput, td: TorusDescriptor,
                          ) -> OneMotiveDescriptor:
    comp = _ns_computation(pi)
    return OneMotiveDescriptor(
        lattice_lprime=comp.ker_ns,
        lattice_l=comp.gamma,
        surjection=comp.surjection,
        torus=td,
        abelian_dim=pi.coker_pic0_dim,
    )


@dataclass(frozen=True)
class GroupValue:
    """A finitely generated group, known exactly or only as a bound.

    When ``exact`` is false the true group is a quotient of ``value`` (or,
    for assembled extensions, shares its rank); ``note`` says which opaque
    ingredient is responsible.
    """

    value: FgAbGroup
    exact: bool
    note: str = ""

    @classmethod
    def exactly(cls, g: FgAbGroup, note: str = "") -> "GroupValue":
        return cls(g, True, note)

    def __str__(self) -> str:
        tag = "exact" if self.exact else "bound"
        suffix = f"; {self.note}" if self.note else ""
        return f"{self.value} ({tag}{suffix})"


@dataclass(frozen=True)
class SesDescriptor:
    """A short exact sequence 0 → sub → total → quotient → 0, tagged.

    ``total`` is resolved to an actual group only when both ends are exact
    and the extension is forced (free quotient, or a trivial end); even
    unresolved, its free rank is the sum of the end ranks.
    """

    sub: GroupValue
    quotient: GroupValue
    total: GroupValue
    split: bool


def assemble_extension(sub: GroupValue, quotient: GroupValue) -> SesDescriptor:
    """Resolve an extension of ``quotient`` by ``sub`` where possible."""
    bound = direct_sum([sub.value, quotient.value])
    if sub.exact and quotient.exact:
        if quotient.value.is_trivial():
            return SesDescriptor(sub, quotient, GroupValue(sub.value, True), True)
        if sub.value.is_trivial():
            return SesDescriptor(sub, quotient, GroupValue(quotient.value, True), True)
        if quotient.value.is_free():
            return SesDescriptor(
                sub, quotient,
                GroupValue(bound, True, "split: free quotient"), True)
        return SesDescriptor(
            sub, quotient,
            GroupValue(bound, False, "extension unresolved; rank exact"), False)
    return SesDescriptor(
        sub, quotient, GroupValue(bound, False, "an end is not exact"), False)


@dataclass(frozen=True)
class UnitsCohomology:
    """The units cohomology of the exceptional divisor, piece by piece.

    It is an extension of coker(Pic) by the torus; coker(Pic) in turn is an
    extension of the exactly computed coker(NS) by the image of a map beta
    out of a divisible group of dimension ``coker_pic0_dim``.  The kernel
    of beta is finitely generated because ker(NS) surjects onto it.
    """

    torus: TorusDescriptor
    coker_pic0_dim: int
    ker_beta: GroupValue
    coker_ns: FgAbGroup
    coker_pic: GroupValue


@dataclass(frozen=True)
class KerAlphaDescriptor:
    """ker(alpha) as an extension of im(d_2) by ker(beta).

    ``ker_ns_bound`` is the standing resolution-independent bound: whatever
    ker(beta) turns out to be, it is a quotient of ker(NS).
    """

    ses: SesDescriptor
    ker_ns_bound: FgAbGroup


@dataclass(frozen=True)
class KhReport:
    """Everything computed about KH in degrees -n and 1-n of the base.

    ``kh_top`` is exact in every case.  ``kh_value`` describes the degree
    1-n group as an extension; it is an honest finitely generated group
    only when ``kh_is_finitely_generated`` is set (trivial torus and no
    divisible Picard part), and exact only when additionally no opaque
    differential intervenes.
    """

    n: int
    field_mode: str
    kh_top: FgAbGroup
    h_n_minus_3: FgAbGroup
    h_n_minus_2: FgAbGroup
    units_cohomology: UnitsCohomology
    one_motive: OneMotiveDescriptor
    kh_value: SesDescriptor
    kh_is_finitely_generated: bool
    ker_alpha: KerAlphaDescriptor
    coker_alpha: SesDescriptor
    n3_exact: bool
    d2_top_known_zero: bool


def kh_top(d: SncDivisor) -> FgAbGroup:
    """H^{n-1}(D(E), Z), which is the whole of KH in degree -n."""
    validate_snc(d)
    cx = build_dual_complex(d).chain_complex()
    return cohomology(cx, d.n - 1)


def kh_report(d: SncDivisor, pi: PicardInput,
              field_mode: str = ALGEBRAICALLY_CLOSED) -> KhReport:
    """Assemble the full degree 1-n report from divisor plus Picard data."""
    if field_mode not in _FIELD_MODES:
        raise ValueError(f"unknown field mode {field_mode!r}")
    validate_snc(d)
    n = d.n
    if pi.n != n:
        raise LevelMismatchError(f"Picard data is for n = {pi.n}, divisor has n = {n}")
    have = {lv.p for lv in pi.levels}
    want = pi.levels_expected_for(n)
    if have != want:
        raise LevelMismatchError(f"expected levels {sorted(want)}, got {sorted(have)}")

    cx = build_dual_complex(d).chain_complex()
    top = cohomology(cx, n - 1)
    hn3 = cohomology(cx, n - 3)
    hn2 = cohomology(cx, n - 2)

    comp = _ns_computation(pi)
    td = torus_descriptor(top, homology(cx, n - 2).is_free(), field_mode)

    # The divisible piece inside coker(Pic) dies only when its dimension is
    # zero AND taking points is exact, i.e. over an algebraically closed
    # field; a zero-dimensional cokernel of varieties can still leave
    # rational-point torsion behind otherwise.
    divisible_trivial = (pi.coker_pic0_dim == 0
                         and field_mode == ALGEBRAICALLY_CLOSED)

    if pi.ker_beta_known is not None:
        ker_beta = GroupValue(pi.ker_beta_known, True, "supplied with input")
    elif divisible_trivial:
        ker_beta = GroupValue(FgAbGroup.zero(), True,
                              "coker(Pic^0) has no points")
    else:
        ker_beta = GroupValue(comp.ker_ns, False,
                              "a quotient of ker(NS); divisible part opaque")

    coker_pic = GroupValue(
        comp.coker_ns, divisible_trivial,
        "" if divisible_trivial else "finitely generated part only; "
        "extension by an image of the divisible piece")
    units = UnitsCohomology(
        torus=td,
        coker_pic0_dim=pi.coker_pic0_dim,
        ker_beta=ker_beta,
        coker_ns=comp.coker_ns,
        coker_pic=coker_pic,
    )

    one_motive = OneMotiveDescriptor(
        lattice_lprime=comp.ker_ns,
        lattice_l=comp.gamma,
        surjection=comp.surjection,
        torus=td,
        abelian_dim=pi.coker_pic0_dim,
    )

    d2_known_zero = n == 3 or hn3.is_trivial()

    # Finitely generated shadow of the descent page around the top corner:
    # the integral cohomology row, plus the units corner carrying coker(NS)
    # as its finitely generated part.
    entries: dict[tuple[int, int], FgAbGroup] = {}
    support = {(n - 1, 0)}
    for p in range(n):
        support.add((p, 1))
        g = cohomology(cx, p)
        if not g.is_trivial():
            entries[(p, 1)] = g
    if not comp.coker_ns.is_trivial():
        entries[(n - 1, 0)] = comp.coker_ns
    corner = e3_top_corner(SpectralPage(2, entries, {}, frozenset(support)),
                           n, d2_known_zero)

    kh_is_fg = td.is_trivial_group() and divisible_trivial
    sub_note = []
    if not corner.exact:
        sub_note.append("modulo the image of the degree-2 differential")
    if not kh_is_fg:
        sub_note.append("finitely generated part only")
    kh_sub = GroupValue(corner.group, corner.exact and kh_is_fg,
                        "; ".join(sub_note))
    kh_value = assemble_extension(kh_sub, GroupValue.exactly(hn2))

    if d2_known_zero:
        im_d2 = GroupValue(FgAbGroup.zero(), True,
                           "the degree-2 differential vanishes")
    else:
        im_d2 = GroupValue(hn3, False, "image of an opaque map out of H^{n-3}")
    ker_alpha = KerAlphaDescriptor(
        ses=assemble_extension(ker_beta, im_d2),
        ker_ns_bound=comp.ker_ns,
    )

    coker_alpha = assemble_extension(
        GroupValue.exactly(comp.coker_ns), GroupValue.exactly(hn2))

    return KhReport(
        n=n,
        field_mode=field_mode,
        kh_top=top,
        h_n_minus_3=hn3,
        h_n_minus_2=hn2,
        units_cohomology=units,
        one_motive=one_motive,
        kh_value=kh_value,
        kh_is_finitely_generated=kh_is_fg,
        ker_alpha=ker_alpha,
        coker_alpha=coker_alpha,
        n3_exact=n == 3,
        d2_top_known_zero=d2_known_zero,
    )
