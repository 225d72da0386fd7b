import pytest

from wclone.rational import INF, Rat
from wclone.wrel import (
    Language,
    WeightedRelation,
    add,
    empty_relation,
    equality_relation,
    feas,
    minimise,
    normalize_relation,
    opt,
    scale,
    shift,
    tables_equal,
    wrel_from_values,
)


def U(*values):
    return wrel_from_values(2, 1, values)


def test_feas_examples():
    assert feas(U(0, INF)).table == (Rat(0), INF)
    assert feas(U(1, 3)).table == (Rat(0), Rat(0))
    b = wrel_from_values(2, 2, (0, 1, INF, 2))
    assert feas(b).table == (Rat(0), Rat(0), INF, Rat(0))


def test_feas_is_zero_scaling():
    g = wrel_from_values(2, 2, (0, 1, INF, 2))
    assert tables_equal(scale(g, 0), feas(g))
    assert tables_equal(feas(scale(g, 0)), scale(g, 0))


def test_opt_examples():
    assert opt(U(1, 3)).table == (Rat(0), INF)
    const5 = wrel_from_values(2, 2, (5, 5, 5, 5))
    assert opt(const5).table == (Rat(0),) * 4
    allinf = wrel_from_values(2, 2, (INF,) * 4)
    assert opt(allinf).table == (INF,) * 4


def test_opt_invariance_under_shift_and_positive_scale():
    g = wrel_from_values(2, 2, (0, 1, INF, 2))
    assert tables_equal(opt(shift(g, Rat(-7))), opt(g))
    assert tables_equal(opt(scale(g, Rat(3, 2))), opt(g))


def test_add_examples():
    u = U(0, 1)
    assert add(u, (0,), u, (0,), 1).table == (Rat(0), Rat(2))
    a = U(0, INF)
    b = U(INF, 0)
    assert add(a, (0,), b, (0,), 1).table == (INF, INF)
    eq = equality_relation(2)
    combined = add(eq, (0, 1), u, (0,), 2)
    assert combined.table == (Rat(0), INF, INF, Rat(1))


def test_add_index_map_errors():
    u = U(0, 1)
    with pytest.raises(ValueError):
        add(u, (1,), u, (0,), 1)
    with pytest.raises(ValueError):
        add(u, (0, 0), u, (0,), 1)


def test_minimise_examples():
    g = wrel_from_values(2, 2, (0, 1, 2, 3))
    assert minimise(g, 1).table == (Rat(0), Rat(2))
    eq = equality_relation(2)
    assert minimise(eq, 1).table == (Rat(0), Rat(0))
    allinf = wrel_from_values(2, 2, (INF,) * 4)
    assert minimise(allinf, 1).table == (INF, INF)


def test_minimise_commutes_with_itself():
    g = wrel_from_values(2, 3, (0, 4, INF, 1, 7, 2, 5, 3))
    both_at_once = minimise(g, 2)
    one_by_one = minimise(minimise(g, 1), 1)
    assert tables_equal(both_at_once, one_by_one)


def test_minimise_errors():
    g = wrel_from_values(2, 2, (0, 1, 2, 3))
    with pytest.raises(ValueError):
        minimise(g, 2)


def test_scale_shift_examples():
    assert scale(U(0, 1), Rat(3, 2)).table == (Rat(0), Rat(3, 2))
    assert shift(U(0, INF), -7).table == (Rat(-7), INF)
    with pytest.raises(ValueError):
        scale(U(0, 1), -1)


def test_scale_zero_infinity_convention():
    g = U(5, INF)
    assert scale(g, 0).table == (Rat(0), INF)


def test_equality_and_empty():
    assert equality_relation(2).table == (Rat(0), INF, INF, Rat(0))
    assert empty_relation(2).table == (INF, INF)
    eq3 = equality_relation(3)
    zeros = [v for v in eq3.table if v == 0]
    assert len(zeros) == 3


def test_relation_normalization():
    rel = wrel_from_values(2, 1, (5, INF))
    assert normalize_relation(rel).table == (Rat(0), INF)
    not_rel = wrel_from_values(2, 1, (0, 1))
    with pytest.raises(ValueError):
        normalize_relation(not_rel)


def test_table_length_validation():
    with pytest.raises(ValueError):
        WeightedRelation(2, 2, (Rat(0),) * 3)


def test_language_sorted_names_and_domain_check():
    lang = Language(2, {"b": U(0, 1), "a": U(1, 0)})
    assert lang.names() == ("a", "b")
    with pytest.raises(ValueError):
        Language(3, {"x": U(0, 1)})


def test_feas_tuples_order():
    g = wrel_from_values(2, 2, (INF, 1, INF, 0))
    assert g.feas_tuples() == ((0, 1), (1, 1))
