import pickle

import pytest

from wclone.rational import (
    INF,
    Rat,
    ceil_rat,
    ext_add,
    ext_eq,
    ext_le,
    ext_lt,
    ext_min,
    ext_scale,
    ext_shift,
    floor_rat,
    format_value,
    is_inf,
    parse_rat,
    parse_value,
)


def test_infinity_absorbs_addition():
    assert ext_add(INF, Rat(5)) is INF
    assert ext_add(Rat(-3), INF) is INF
    assert ext_add(Rat(1, 2), Rat(1, 3)) == Rat(5, 6)


def test_zero_times_infinity_is_infinity():
    # The cost-function convention: Feas(gamma) = 0 * gamma.
    assert ext_scale(Rat(0), INF) is INF
    assert ext_scale(Rat(0), Rat(7)) == 0
    assert ext_scale(Rat(3, 2), INF) is INF


def test_scale_rejects_negative_factor():
    with pytest.raises(ValueError):
        ext_scale(Rat(-1), Rat(2))


def test_shift_keeps_infinity():
    assert ext_shift(INF, Rat(-7)) is INF
    assert ext_shift(Rat(0), Rat(-7)) == Rat(-7)


def test_ordering_with_infinity():
    assert ext_lt(Rat(10**9), INF)
    assert not ext_lt(INF, Rat(10**9))
    assert not ext_lt(INF, INF)
    assert ext_le(INF, INF)
    assert ext_min(INF, Rat(2)) == Rat(2)


def test_ext_eq_distinguishes_inf():
    assert ext_eq(INF, INF)
    assert not ext_eq(INF, Rat(0))
    assert ext_eq(Rat(2, 4), Rat(1, 2))


def test_parse_and_format_round_trip():
    for text in ["0", "7", "-3", "5/3", "-22/7"]:
        assert format_value(parse_rat(text)) == text
    assert parse_value("inf") is INF
    assert format_value(INF) == "inf"


def test_parse_rejects_zero_denominator():
    with pytest.raises(ValueError):
        parse_rat("1/0")


def test_floor_ceil():
    assert floor_rat(Rat(7, 2)) == 3
    assert ceil_rat(Rat(7, 2)) == 4
    assert floor_rat(Rat(-7, 2)) == -4
    assert ceil_rat(Rat(-7, 2)) == -3
    assert ceil_rat(Rat(4)) == 4


def test_inf_pickles_to_the_singleton():
    assert pickle.loads(pickle.dumps(INF)) is INF
