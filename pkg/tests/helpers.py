"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they check: invariant
factors come from minors and cofactor determinants, direct sums from prime
factorization, and simpliciality from raw vertex sets of the dual complex.
"""
from __future__ import annotations

import itertools
import math
import random

from snckit import (
    ChainComplex,
    FgAbGroup,
    Hom,
    IntMatrix,
    PicardInput,
    PicardLevel,
    SncDivisor,
    SpectralPage,
    blowup_point_on_double_curve,
    blowup_stratum_component,
    build_dual_complex,
    validate_snc,
)


# ---------------------------------------------------------------------------
# integer-matrix oracles


def cofactor_det(rows: list[list[int]]) -> int:
    """Determinant by cofactor expansion; fine for the tiny oracle sizes."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def minors_invariant_factors(a: IntMatrix) -> list[int]:
    """Invariant factors via gcds of k-by-k minors (use only on dims <= 4)."""
    nr, nc = a.shape
    rows = a.to_lists()
    factors = []
    prev = 1
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in itertools.combinations(range(nr), k):
            for ci in itertools.combinations(range(nc), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = math.gcd(g, cofactor_det(sub))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return factors


def random_matrix(rng: random.Random, max_dim: int = 6, span: int = 9) -> IntMatrix:
    nr = rng.randint(0, max_dim)
    nc = rng.randint(0, max_dim)
    return IntMatrix([[rng.randint(-span, span) for _ in range(nc)]
                      for _ in range(nr)], ncols=nc)


def prime_power_chain(orders: list[int]) -> tuple[int, ...]:
    """Divisibility chain of a torsion product, recomputed via factorization."""
    powers: dict[int, list[int]] = {}
    for t in orders:
        assert t >= 2
        d = 2
        while d * d <= t:
            if t % d == 0:
                e = 0
                while t % d == 0:
                    t //= d
                    e += 1
                powers.setdefault(d, []).append(d ** e)
            d += 1
        if t > 1:
            powers.setdefault(t, []).append(t)
    depth = max((len(v) for v in powers.values()), default=0)
    chain = []
    for slot in range(depth):
        piece = 1
        for p in sorted(powers):
            ranked = sorted(powers[p], reverse=True)
            if slot < len(ranked):
                piece *= ranked[slot]
        chain.append(piece)
    return tuple(reversed(chain))


# ---------------------------------------------------------------------------
# named divisors


def triangle_cycle() -> SncDivisor:
    """Three surfaces meeting pairwise in one curve, no triple point."""
    return SncDivisor.build(3, ["E1", "E2", "E3"], [
        ("c12", ("E1", "E2"), {}),
        ("c13", ("E1", "E3"), {}),
        ("c23", ("E2", "E3"), {}),
    ])


def parallel_edges() -> SncDivisor:
    """Two surfaces whose intersection has two curve components."""
    return SncDivisor.build(3, ["1", "2"], [
        ("ca", ("1", "2"), {}),
        ("cb", ("1", "2"), {}),
    ])


def interval_divisor() -> SncDivisor:
    return SncDivisor.build(3, ["1", "2"], [("c", ("1", "2"), {})])


def full_simplex() -> SncDivisor:
    """Triangle cycle plus the triple point filling the 2-cell."""
    return SncDivisor.build(3, ["E1", "E2", "E3"], [
        ("c12", ("E1", "E2"), {}),
        ("c13", ("E1", "E3"), {}),
        ("c23", ("E2", "E3"), {}),
        ("t", ("E1", "E2", "E3"), {"E1": "c23", "E2": "c13", "E3": "c12"}),
    ])


def simplex_divisor(n: int, comps: list[str], max_depth: int) -> SncDivisor:
    """One stratum component per subset of size 2..max_depth (full skeleton)."""
    strata = []
    ids: dict[tuple[str, ...], str] = {}
    for size in range(2, max_depth + 1):
        for subset in itertools.combinations(comps, size):
            sid = "+".join(subset)
            ids[subset] = sid
            parents = {}
            if size >= 3:
                parents = {c: ids[tuple(x for x in subset if x != c)]
                           for c in subset}
            strata.append((sid, subset, parents))
    return SncDivisor.build(n, comps, strata)


def sphere4() -> SncDivisor:
    """Five fourfold components whose dual complex is the 3-sphere bd(Delta^4)."""
    return simplex_divisor(4, ["E1", "E2", "E3", "E4", "E5"], 4)


def random_divisor(rng: random.Random, max_components: int = 8) -> SncDivisor:
    """A valid divisor with random strata, duplicates, and sometimes blowups.

    Starts from a downward-closed family of index subsets (one stratum
    component each), clones some strata to create bad intersections, rewires
    triple-point parents between clones when no deeper strata constrain
    them, and occasionally applies a blowup to the result.  Every return
    value passes validate_snc.
    """
    n = rng.randint(2, 5)
    m = rng.randint(1, min(max_components - 2, 6))
    comps = [f"E{i + 1}" for i in range(m)]
    top = min(n, m)

    family: set[tuple[int, ...]] = set()
    if top >= 2:
        for _ in range(rng.randint(0, m + 2)):
            size = rng.randint(2, top)
            family.add(tuple(sorted(rng.sample(range(m), size))))
        queue = list(family)
        while queue:
            sub = queue.pop()
            if len(sub) <= 2:
                continue
            for drop in sub:
                face = tuple(x for x in sub if x != drop)
                if face not in family:
                    family.add(face)
                    queue.append(face)

    primary: dict[tuple[int, ...], str] = {}
    copies: dict[tuple[int, ...], list[str]] = {}
    strata: list[tuple[str, tuple[str, ...], dict[str, str]]] = []
    max_depth = max((len(s) for s in family), default=0)
    for sub in sorted(family, key=lambda s: (len(s), s)):
        base = "+".join(comps[i] for i in sub)
        # clones are safe at any depth: deeper strata only ever name the
        # primary copy as parent, so nothing dangles
        names = [base]
        names += [f"{base}~{k}" for k in range(rng.choice((0, 0, 0, 1, 1, 2)))]
        primary[sub] = base
        copies[sub] = names
        for name in names:
            parents = {}
            if len(sub) >= 3:
                parents = {comps[i]: primary[tuple(x for x in sub if x != i)]
                           for i in sub}
            strata.append((name, tuple(comps[i] for i in sub), parents))

    if max_depth == 3:
        # parent commutation is only pinned down from depth 4 up, so triple
        # points at the top may attach to any copy of their double curves
        rewired = []
        for name, subset, parents in strata:
            if len(subset) == 3 and rng.random() < 0.5:
                idx = tuple(comps.index(c) for c in subset)
                parents = {c: rng.choice(copies[tuple(x for x in idx
                                                      if comps[x] != c)])
                           for c in subset}
            rewired.append((name, subset, parents))
        strata = rewired

    d = SncDivisor.build(n, comps, strata)
    validate_snc(d)

    for _ in range(2):
        if len(d.components) >= max_components or rng.random() > 0.3:
            break
        curves = [s for s in d.strata if s.depth == 2]
        if not curves:
            break
        if d.n == 3 and rng.random() < 0.4:
            d, _ = blowup_point_on_double_curve(d, rng.choice(curves).id)
        else:
            d, _ = blowup_stratum_component(d, rng.choice([s.id for s in d.strata]))
        validate_snc(d)
    return d


# ---------------------------------------------------------------------------
# dual-complex oracles


def brute_force_bad(d: SncDivisor) -> tuple[dict[frozenset[str], int], bool]:
    """Count duplicate vertex sets among the cells of the dual complex."""
    dc = build_dual_complex(d)
    seen: dict[frozenset[str], int] = {}
    for layer in dc.cells[1:]:
        for cell in layer:
            key = frozenset(cell.vertices)
            seen[key] = seen.get(key, 0) + 1
    dup = {k: v for k, v in seen.items() if v >= 2}
    return dup, not dup


def one_row_page(cx: ChainComplex) -> SpectralPage:
    """The Cech page of the cover: degree-p cells along the row q = 0."""
    entries: dict[tuple[int, int], FgAbGroup] = {}
    diffs: dict[tuple[int, int], Hom] = {}
    ranks = cx.ranks
    for p, r in enumerate(ranks):
        if r:
            entries[(p, 0)] = FgAbGroup.free(r)
    for p in range(len(ranks) - 1):
        delta = cx.boundaries[p].transpose()
        diffs[(p, 0)] = Hom(FgAbGroup.free(ranks[p]),
                            FgAbGroup.free(ranks[p + 1]), delta)
    support = frozenset((p, 0) for p in range(len(ranks)))
    return SpectralPage(1, entries, diffs, support)


# ---------------------------------------------------------------------------
# Picard inputs


def zero_picard(n: int, ranks: dict[int, FgAbGroup], coker_pic0_dim: int = 0,
                pic0: dict[int, int] | None = None) -> PicardInput:
    """Picard data with zero pullback maps between the given level groups."""
    ps = sorted(ranks)
    levels = tuple(PicardLevel(p, ranks[p], (pic0 or {}).get(p, 0)) for p in ps)
    maps = tuple(Hom.zero(ranks[ps[k]], ranks[ps[k + 1]])
                 for k in range(len(ps) - 1))
    return PicardInput(n, levels, maps, coker_pic0_dim)


def triangle_picard() -> PicardInput:
    """Three plane-like components: NS maps Z^3 -> Z^3 by pairwise differences."""
    ns0 = FgAbGroup.free(3)
    ns1 = FgAbGroup.free(3)
    restriction = Hom(ns0, ns1, IntMatrix([[1, -1, 0], [1, 0, -1], [0, 1, -1]]))
    return PicardInput(3, (PicardLevel(0, ns0, 0), PicardLevel(1, ns1, 0)),
                       (restriction,), 0)
