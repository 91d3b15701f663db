import json

import pytest
from hypothesis import given

from sawtooth import RecurrentSpec, mirror_map, mirror_network, stump, PwlFunction, rational
from sawtooth.serialize import (
    FormatError,
    dump_dataset,
    dump_network,
    dump_pwl,
    load_dataset,
    load_network,
    load_pwl,
    pwl_to_dict,
)
from sawtooth.alternating import n_ap
from sawtooth.network import NetworkSpec, Neuron

from conftest import pwl_functions


def test_mirror_json_layout():
    d = pwl_to_dict(mirror_map())
    assert d == {
        "breakpoints": ["0", "1/2", "1"],
        "pieces": [
            {"slope": "0", "intercept": "0"},
            {"slope": "2", "intercept": "0"},
            {"slope": "-2", "intercept": "2"},
            {"slope": "0", "intercept": "0"},
        ],
    }


@given(pwl_functions())
def test_pwl_round_trip_is_byte_identical(f):
    text = dump_pwl(f)
    g = load_pwl(text)
    assert g == f
    assert dump_pwl(g) == text


def test_non_lowest_terms_input_normalized():
    f = load_pwl('{"breakpoints": ["2/4"], "pieces": [{"slope": "0", "intercept": "0"}, {"slope": "4/2", "intercept": "-1"}]}')
    assert f.breakpoints == (rational("1/2"),)
    assert '"1/2"' in dump_pwl(f)


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"breakpoints": ["0"], "pieces": [{"slope": "0", "intercept": "0"}]}',
        '{"breakpoints": ["1", "0"], "pieces": [{"slope": "0", "intercept": "0"}, {"slope": "0", "intercept": "0"}, {"slope": "0", "intercept": "0"}]}',
        '{"breakpoints": [], "pieces": [{"slope": 0.5, "intercept": "0"}]}',
        '{"breakpoints": [], "pieces": [{"slope": "1/0", "intercept": "0"}]}',
        '{"pieces": []}',
    ],
)
def test_bad_pwl_rejected(text):
    with pytest.raises(FormatError):
        load_pwl(text)


def test_network_round_trip():
    net = mirror_network()
    assert load_network(dump_network(net)) == net
    rnet = RecurrentSpec(net, 3)
    back = load_network(dump_network(rnet))
    assert isinstance(back, RecurrentSpec) and back.iterations == 3 and back.base == net


def test_activation_forms():
    for sigma, tag in [(stump(rational("1/2")), "stump:1/2"), (stump(0), "stump:0")]:
        net = NetworkSpec(((Neuron(0, (1,)),),), activation=sigma)
        d = json.loads(dump_network(net))
        assert d["activation"] == tag
        assert load_network(dump_network(net)).activation == sigma
    custom = PwlFunction([0, 1], [(0, 0), (1, 0), (0, 1)])
    net = NetworkSpec(((Neuron(0, (1,)),),), activation=custom)
    assert isinstance(json.loads(dump_network(net))["activation"], dict)
    assert load_network(dump_network(net)).activation == custom


@pytest.mark.parametrize(
    "text",
    [
        '{"layers": []}',
        '{"layers": [[{"bias": "0", "weights": ["1", "2"]}]]}',
        '{"activation": "tanh", "layers": [[{"bias": "0", "weights": ["1"]}]]}',
        '{"layers": [[{"bias": "0", "weights": ["1"]}]], "iterations": 0}',
        '{"layers": [[{"bias": "0"}]]}',
        '{"layers": [[{"bias": "0", "weights": ["1"]}, {"bias": "0", "weights": ["1"]}]]}',
    ],
)
def test_bad_network_rejected(text):
    with pytest.raises(FormatError):
        load_network(text)


def test_dataset_csv():
    text = dump_dataset(n_ap(4))
    assert text == "x,y\n0,0\n1/4,1\n1/2,0\n3/4,1\n"
    assert load_dataset(text) == n_ap(4)


@pytest.mark.parametrize("text", ["", "a,b\n", "x,y\n0,2\n", "x,y\n1,0\n0,1\n", "x,y\nfoo,1\n"])
def test_bad_dataset_rejected(text):
    with pytest.raises(FormatError):
        load_dataset(text)
