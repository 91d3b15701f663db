from collections import Counter

import pytest
from hypothesis import given
import hypothesis.strategies as st

from sawtooth import (
    LabeledDataset,
    RecurrentSpec,
    ap_image_check,
    classification_error,
    compile_recurrent,
    constant,
    identity,
    max_shallow_width,
    mirror_network,
    n_ap,
    n_ap_literal,
    network_lower_bound,
    piece_count,
    rational,
    sawtooth_lower_bound,
)

from conftest import pwl_functions

q = rational


def test_n_ap_four():
    assert n_ap(4).points == ((0, 0), (q("1/4"), 1), (q("1/2"), 0), (q("3/4"), 1))


def test_n_ap_one():
    assert n_ap(1).points == ((0, 0),)


def test_n_ap_three_alternates():
    d = n_ap(3)
    assert d.ys == [0, 1, 0]
    assert d.xs == sorted(d.xs)


def test_n_ap_zero_rejected():
    with pytest.raises(ValueError):
        n_ap(0)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 100, 257])
def test_n_ap_label_counts(n):
    assert Counter(n_ap(n).ys)[0] == (n + 1) // 2


def test_literal_coordinates():
    d = n_ap_literal(4)
    assert d.xs == [q(i) / 16 for i in range(1, 5)]
    assert d.ys == [1, 0, 1, 0]


def test_dataset_validation():
    with pytest.raises(ValueError):
        LabeledDataset(((0, 0), (0, 1)))
    with pytest.raises(ValueError):
        LabeledDataset(((0, 2),))


@pytest.mark.parametrize("k", range(1, 9))
def test_error_examples(k):
    data = n_ap(2**k)
    assert classification_error(constant(0), data) == q("1/2")
    f = compile_recurrent(RecurrentSpec(mirror_network(), k))
    assert classification_error(f, data) == 0


def test_identity_on_four_points():
    # 1[x >= 1/2] misses x = 1/4 (label 1) and x = 1/2 (label 0)
    assert classification_error(identity(), n_ap(4)) == q("1/2")


def test_error_empty_dataset():
    with pytest.raises(ValueError):
        classification_error(identity(), LabeledDataset(()))


@given(pwl_functions(max_pieces=6), st.integers(1, 120))
def test_error_denominator_and_floor(f, n):
    err = classification_error(f, n_ap(n))
    assert 0 <= err <= 1
    assert n % err.denominator == 0
    assert err >= sawtooth_lower_bound(n, piece_count(f))


def test_sawtooth_bound_examples():
    assert sawtooth_lower_bound(256, 16) == q("1/4")
    assert sawtooth_lower_bound(256, 64) == 0
    assert sawtooth_lower_bound(256, 200) == 0
    k, l = 11, 2
    m = q(2) ** 3  # 2**((11-3)/2 - 1), an exact integer here
    assert sawtooth_lower_bound(2**k, int(2 * m) ** l) == q("1/6")


def test_network_bound_examples():
    assert network_lower_bound(256, 2, 2, 2).bound == q("1/4")
    assert network_lower_bound(256, 2, 2, 2).k == 8
    assert network_lower_bound(256, 2, 8, 2).bound == 0
    r = network_lower_bound(2**10, 2, 5, 2)
    assert r.bound >= q("1/6")
    assert r.to_dict()["bound"] == "13/64"


@pytest.mark.parametrize(
    "k,l,m", [(10, 2, 5), (11, 2, 8), (4, 1, 1), (3, 1, 0), (20, 3, 25), (8, 3, 1), (5, 3, 0)]
)
def test_max_shallow_width(k, l, m):
    assert max_shallow_width(k, l) == m


def test_bound_report_range():
    for n in (1, 5, 64, 1000):
        for t in (1, 2, 3):
            b = network_lower_bound(n, t, 1, 1).bound
            assert 0 <= b <= q("1/3")


@pytest.mark.parametrize("k", range(2, 9))
def test_ap_image(k):
    assert ap_image_check(k)


def test_ap_image_rejects_k1():
    with pytest.raises(ValueError):
        ap_image_check(1)
