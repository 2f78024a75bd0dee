"""The NK correction separating K-theory from homotopy K-theory.

In the bottom negative degree the difference is a single Du Bois invariant:
the image of NK in degree 1-n is a k-vector space whose dimension is
b^{0,n-1}, and K in that degree is an extension of KH by it.  The invariants
themselves are inputs; they require resolution differentials this package
does not model, and they are only defined here for isolated singular points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .khasm import KhReport


class MissingEntryError(Exception):
    """A required Du Bois entry is absent from the table."""


class NonIsolatedError(Exception):
    """Du Bois bookkeeping is only defined at isolated singular points."""


@dataclass(frozen=True)
class DuBoisTable:
    """Du Bois invariants b^{p,q} of one isolated singular point.

    ``entries`` maps (p, q) to a nonnegative length.  A table with
    ``isolated`` unset is carried but refused by every consumer; there is
    no honest NK answer for non-isolated singularities.
    """

    entries: dict[tuple[int, int], int]
    isolated: bool = True

    def __post_init__(self) -> None:
        for (p, q), b in self.entries.items():
            if b < 0:
                raise ValueError(f"negative Du Bois invariant b^{{{p},{q}}} = {b}")

    def get(self, p: int, q: int) -> int | None:
        return self.entries.get((p, q))


@dataclass(frozen=True)
class NkDescriptor:
    """The NK module in degree 1-n: a vector space tensored with tQ[t].

    Countably infinite dimensional over k whenever ``v_dim`` is positive,
    and zero exactly when ``v_dim`` is zero.
    """

    v_dim: int

    def is_zero(self) -> bool:
        return self.v_dim == 0

    def __str__(self) -> str:
        if self.v_dim == 0:
            return "0"
        return f"{self.v_dim}-dim V ⊗ tQ[t]"


def nk_descriptor(b: DuBoisTable, n: int) -> NkDescriptor:
    """NK in degree 1-n from the single invariant b^{0,n-1}.

    >>> str(nk_descriptor(DuBoisTable({(0, 2): 3}), 3))
    '3-dim V ⊗ tQ[t]'
    """
    if not b.isolated:
        raise NonIsolatedError(
            "NK in degree 1-n is only computed for isolated singular points")
    v = b.get(0, n - 1)
    if v is None:
        raise MissingEntryError(f"Du Bois table has no entry (0, {n - 1})")
    return NkDescriptor(v)


@dataclass(frozen=True)
class KReport:
    """K-theory in degree 1-n: an extension of KH by a vector space.

    ``v_dim`` is the dimension of the vector-space kernel of K → KH; when
    it is zero the two theories agree in this degree.  ``surjectivity_note``
    records that one degree up, K → KH is onto.
    """

    kh: KhReport
    v_dim: int
    nk_shape: NkDescriptor
    surjectivity_note: bool
    k_equals_kh: bool


def k_report(kh: KhReport, b: DuBoisTable) -> KReport:
    """Attach the NK layer to a finished KH report."""
    nk = nk_descriptor(b, kh.n)
    return KReport(
        kh=kh,
        v_dim=nk.v_dim,
        nk_shape=nk,
        surjectivity_note=True,
        k_equals_kh=nk.is_zero(),
    )
