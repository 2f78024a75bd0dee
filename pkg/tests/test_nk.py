"""Du Bois bookkeeping and the K vs KH comparison in the bottom degree."""
import pytest

from helpers import triangle_cycle, triangle_picard
from snckit import DuBoisTable, k_report, kh_report, nk_descriptor
from snckit.nk import MissingEntryError, NkDescriptor, NonIsolatedError


def test_table_lookup_and_validation():
    t = DuBoisTable({(0, 2): 3, (1, 1): 0})
    assert t.get(0, 2) == 3
    assert t.get(1, 1) == 0
    assert t.get(2, 0) is None
    with pytest.raises(ValueError):
        DuBoisTable({(0, 2): -1})


def test_descriptor_examples():
    assert str(nk_descriptor(DuBoisTable({(0, 2): 3}), 3)) == "3-dim V ⊗ tQ[t]"
    zero = nk_descriptor(DuBoisTable({(0, 3): 0}), 4)
    assert zero.is_zero()
    assert str(zero) == "0"
    assert NkDescriptor(1).v_dim == 1


def test_descriptor_requires_the_bottom_row_entry():
    with pytest.raises(MissingEntryError):
        nk_descriptor(DuBoisTable({(1, 2): 5}), 3)
    with pytest.raises(MissingEntryError):
        # right invariant, wrong dimension
        nk_descriptor(DuBoisTable({(0, 2): 5}), 4)


def test_descriptor_refuses_non_isolated_points():
    with pytest.raises(NonIsolatedError):
        nk_descriptor(DuBoisTable({(0, 2): 1}, isolated=False), 3)


def test_k_report_extends_the_triangle_kh_report():
    kh = kh_report(triangle_cycle(), triangle_picard())
    rep = k_report(kh, DuBoisTable({(0, 2): 2}))
    assert rep.kh is kh
    assert rep.v_dim == 2
    assert str(rep.nk_shape) == "2-dim V ⊗ tQ[t]"
    assert rep.surjectivity_note
    assert not rep.k_equals_kh


def test_k_report_collapses_when_the_invariant_vanishes():
    kh = kh_report(triangle_cycle(), triangle_picard())
    rep = k_report(kh, DuBoisTable({(0, 2): 0}))
    assert rep.v_dim == 0
    assert rep.nk_shape.is_zero()
    assert rep.k_equals_kh


def test_k_report_propagates_table_errors():
    kh = kh_report(triangle_cycle(), triangle_picard())
    with pytest.raises(MissingEntryError):
        k_report(kh, DuBoisTable({(0, 1): 1}))
    with pytest.raises(NonIsolatedError):
        k_report(kh, DuBoisTable({(0, 2): 1}, isolated=False))
