import itertools

import pytest

from wclone.algebra import (
    Operation,
    OperationSet,
    TupleMatrix,
    all_tuples,
    apply,
    clone_closure,
    enumerate_ops,
    index_tuple,
    projection,
    projections,
    superpose,
    tuple_index,
)
from wclone.errors import CapExceededError

from conftest import oracle_apply, op_value

MIN2 = Operation(2, 2, (0, 0, 0, 1))
MAX2 = Operation(2, 2, (0, 1, 1, 1))
NEG = Operation(2, 1, (1, 0))
ID2 = Operation(2, 1, (0, 1))


def test_tuple_index_examples():
    assert tuple_index((0, 0), 2) == 0
    assert tuple_index((1, 1), 2) == 3
    # radix rule: leftmost most significant, 1*3 + 2
    assert tuple_index((1, 2), 3) == 5


def test_tuple_index_bijection():
    for d, arity in [(2, 3), (3, 2)]:
        for i in range(d**arity):
            t = index_tuple(i, arity, d)
            assert tuple_index(t, d) == i
        seen = {index_tuple(i, arity, d) for i in range(d**arity)}
        assert len(seen) == d**arity


def test_tuple_index_range_errors():
    with pytest.raises(ValueError):
        index_tuple(8, 3, 2)
    with pytest.raises(ValueError):
        tuple_index((2,), 2)


def test_projection_tables():
    assert projection(2, 1, 1).table == (0, 1)
    assert projection(2, 2, 1).table == (0, 0, 1, 1)
    assert projection(2, 2, 2).table == (0, 1, 0, 1)
    with pytest.raises(ValueError):
        projection(2, 2, 3)
    with pytest.raises(ValueError):
        projection(2, 2, 0)


def test_projection_is_projection():
    for k in (1, 2, 3):
        for i in range(1, k + 1):
            p = projection(2, k, i)
            assert p.is_projection()
            assert p.projection_coordinate() == i - 1
    assert not MIN2.is_projection()


def test_apply_projection_returns_column():
    x = TupleMatrix(2, ((0, 1), (1, 0)))
    assert apply(projection(2, 2, 1), x) == (0, 1)
    assert apply(projection(2, 2, 2), x) == (1, 0)


def test_apply_min_rowwise():
    x = TupleMatrix(2, ((0, 1), (1, 1)))
    assert apply(MIN2, x) == (0, 1)


def test_apply_single_column_is_entrywise():
    x = TupleMatrix(2, ((1, 0, 1),))
    assert apply(NEG, x) == (0, 1, 0)


def test_apply_matches_oracle():
    for cols in itertools.product(list(all_tuples(2, 2)), repeat=2):
        x = TupleMatrix(2, cols)
        assert apply(MIN2, x) == oracle_apply(MIN2, cols)


def test_apply_shape_errors():
    with pytest.raises(ValueError):
        apply(MIN2, TupleMatrix(2, ((0, 1),)))


def test_superpose_projection_identity():
    gs = (MIN2, MAX2)
    assert superpose(projection(2, 2, 1), gs) == MIN2
    assert superpose(projection(2, 2, 2), gs) == MAX2


def test_superpose_min_of_equal_args_is_identity():
    e = projection(2, 1, 1)
    assert superpose(MIN2, (e, e)) == e


def test_superpose_max_min_max_is_max():
    # brute force over all 4 inputs
    composed = superpose(MAX2, (MIN2, MAX2))
    for args in all_tuples(2, 2):
        expected = op_value(MAX2, [op_value(MIN2, args), op_value(MAX2, args)])
        assert op_value(composed, args) == expected
    assert composed == MAX2


def test_superpose_with_projections_is_identity():
    for f in enumerate_ops(2, 2):
        assert superpose(f, projections(2, 2)) == f


def test_superpose_associativity_small():
    # (f[g])[h] = f[g_1[h], ..., g_k[h]] on d=2, arities <= 2
    ops2 = list(enumerate_ops(2, 2))[:6] + [MIN2, MAX2]
    hs = (projection(2, 2, 2), MAX2)
    for f in (MIN2, MAX2):
        for gs in itertools.product(ops2, repeat=2):
            left = superpose(superpose(f, gs), hs)
            right = superpose(f, tuple(superpose(g, hs) for g in gs))
            assert left == right


def test_enumerate_counts():
    assert len(list(enumerate_ops(2, 1))) == 4
    assert len(list(enumerate_ops(2, 2))) == 16
    assert len(list(enumerate_ops(3, 1))) == 27


def test_enumerate_no_duplicates_lex_order():
    ops = list(enumerate_ops(2, 2))
    tables = [o.table for o in ops]
    assert tables == sorted(tables)
    assert len(set(tables)) == 16


def test_enumerate_cap():
    with pytest.raises(CapExceededError) as exc:
        list(enumerate_ops(3, 3))
    assert exc.value.sizes["count"] == 3**27


def test_clone_closure_projections_only():
    cc = clone_closure(OperationSet(2, []), 2)
    assert set(cc) == {projection(2, 1, 1), projection(2, 2, 1), projection(2, 2, 2)}


def test_clone_closure_min_arity1():
    cc = clone_closure(OperationSet(2, [MIN2]), 1)
    assert set(cc) == {ID2}


def test_clone_closure_negation():
    cc = clone_closure(OperationSet(2, [NEG]), 1)
    assert set(cc) == {ID2, NEG}


def test_clone_closure_contains_generators_and_is_closed():
    gens = OperationSet(2, [MIN2, MAX2])
    cc = clone_closure(gens, 2)
    assert MIN2 in cc and MAX2 in cc
    members = list(cc)
    for f in members:
        for gs in itertools.product(cc.of_arity(2), repeat=f.arity):
            assert superpose(f, gs) in cc


def test_clone_closure_deterministic():
    a = clone_closure(OperationSet(2, [MIN2, MAX2]), 2)
    b = clone_closure(OperationSet(2, [MAX2, MIN2]), 2)
    assert list(a) == list(b)


def test_operation_set_order_and_dedupe():
    s = OperationSet(2, [MAX2, MIN2, MIN2, NEG])
    assert list(s) == [NEG, MIN2, MAX2]
    assert len(s) == 3


def test_operation_validation():
    with pytest.raises(ValueError):
        Operation(2, 2, (0, 0, 0))
    with pytest.raises(ValueError):
        Operation(2, 1, (0, 2))
    with pytest.raises(ValueError):
        Operation(1, 1, (0,))
