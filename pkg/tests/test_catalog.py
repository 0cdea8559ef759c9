from math import factorial

import numpy as np
import pytest

from diagbase.catalog import (CATALOG_ENV, CatalogError, aut_action, emit_entry, family_of,
                              get_spec, h_exact, h_for_name, h_formula, is_simple, list_catalog,
                              load_spec, out_bound_check, validate_entry)
from diagbase.perm import enumerate_group

AUT_ORDERS = {"A5": 120, "A6": 1440, "A7": 5040, "L2(7)": 336, "L2(8)": 1512,
              "L2(11)": 1320, "L2(13)": 2184}
H_VALUES = {"A5": 6, "A6": 24, "A7": 120, "L2(7)": 8, "L2(8)": 9, "L2(11)": 12, "L2(13)": 14}


def test_catalog_lists_builtin_groups():
    names = list_catalog()
    assert set(AUT_ORDERS) | {"M11"} <= set(names)


@pytest.mark.parametrize("name", sorted(AUT_ORDERS))
def test_automorphism_group_orders(name):
    a = aut_action(name)
    assert a.aut_order == AUT_ORDERS[name]
    assert a.aut_order == a.order * a.out_order
    assert int(a.inn_flags.sum()) == a.order


@pytest.mark.parametrize("name", sorted(H_VALUES))
def test_h_exact_matches_formula(name):
    a = aut_action(name)
    h, wit = h_exact(a)
    assert h == H_VALUES[name] == h_for_name(name)
    assert int((a.A[wit] == np.arange(a.order)).sum()) == h
    # scanning every automorphism, not just prime order ones, gives the same answer
    assert h_exact(a, full_scan=True)[0] == h


def test_formula_rows():
    assert h_formula("A", 9) == factorial(7)
    assert h_formula("M11") == 48
    assert h_formula("L", 2, 8) == 9
    assert h_formula("L", 2, 16) == 60          # |PGL_2(4)|
    assert h_formula("L", 3, 4) == 168          # |PGL_3(2)|, 3 | 2+1
    assert h_formula("2B2", 8) == 64
    assert h_formula("G2", 3) == 3**5 * 24
    with pytest.raises(CatalogError):
        h_formula("L", 2, 3)
    with pytest.raises(CatalogError):
        family_of("PSU9000")


def test_automorphisms_are_multiplicative(a5):
    assert a5.check_multiplicative()
    assert aut_action("L2(7)").check_multiplicative(pairs=300, seed=1)


def test_out_subgroups():
    a6 = aut_action("A6")
    assert len(a6.out_subgroups) == 5
    assert sorted(a6.out_element_orders) == [1, 2, 2, 2]
    assert aut_action("A5").parse_out("full") == (0, 1)
    assert aut_action("A5").parse_out("1") == (0,)
    with pytest.raises(CatalogError):
        a6.parse_out("1,2")


def test_out_bound(a5):
    assert out_bound_check(a5).holds


def test_spec_round_trip():
    e = get_spec("L2(7)")
    again = load_spec(emit_entry(e))
    assert again.order == 168 and again.t_generators == e.t_generators
    assert is_simple(validate_entry(e))


def test_non_simple_is_detected():
    e = get_spec("A5", check=False)
    from diagbase.perm import Permutation
    s4 = enumerate_group([Permutation.from_cycles([(0, 1)], 4), Permutation.from_cycles([(0, 1, 2, 3)], 4)])
    assert not is_simple(s4)
    assert e.degree == 5


@pytest.mark.parametrize("text, msg", [
    ("degree 3\n", "must start"),
    ("name X\ndegree 3\norder 3\nout 1\np 0 0 1\n", "malformed"),
    ("name X\ndegree 3\norder 3\nout 1\np 1 2 0 3\n", "degree"),
    ("name X\ndegree 3\norder 3\np 1 2 0\n", "incomplete"),
    ("name X\ndegree 3\norder 6\nout 1\np 1 2 0\n", "order"),
])
def test_malformed_catalog_records(text, msg):
    with pytest.raises(CatalogError, match=msg):
        load_spec(text)


def test_catalog_directory_override(tmp_path, monkeypatch):
    (tmp_path / "tiny.txt").write_text(emit_entry(get_spec("A5")).replace("name A5", "name MyA5"))
    monkeypatch.setenv(CATALOG_ENV, str(tmp_path))
    assert list_catalog() == ["MyA5"]
    assert get_spec("MyA5").order == 60
