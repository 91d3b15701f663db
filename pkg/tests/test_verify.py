import pytest

from sawtooth import compile_network, piece_count, pwl_equal, mirror_map, pwl_compose, rational, constant
from sawtooth import verify
from sawtooth.pwl import PwlFunction, pwl_add as real_add
from sawtooth.verify import (
    GeneratorConfig,
    SUITES,
    grid_oracle,
    random_network,
    random_sawtooth,
    replay_case,
    run_suite,
    window_pieces,
)


def test_generator_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(lo=1, hi=1)
    with pytest.raises(ValueError):
        GeneratorConfig(coef_bound=0)
    with pytest.raises(ValueError):
        GeneratorConfig(max_pieces=0)


def test_random_sawtooth_contract():
    assert piece_count(random_sawtooth(GeneratorConfig(seed=3, max_pieces=1))) == 1
    assert pwl_equal(random_sawtooth(GeneratorConfig(seed=11)), random_sawtooth(GeneratorConfig(seed=11)))
    for seed in range(1000):
        f = random_sawtooth(GeneratorConfig(seed=seed, max_pieces=8))
        assert piece_count(f) <= 8
        for b in f.breakpoints:
            assert -2 <= b <= 2
            assert b.denominator & (b.denominator - 1) == 0


def test_random_network_contract():
    net = random_network(GeneratorConfig(seed=1, width=1, depth=1))
    assert len(net.layers) == 1 and len(net.layers[0]) == 1
    assert random_network(GeneratorConfig(seed=5)) == random_network(GeneratorConfig(seed=5))
    for seed in range(500):
        net = random_network(GeneratorConfig(seed=seed, width=2, depth=2))
        assert net.depth == 2 and net.width <= 2
        assert piece_count(compile_network(net)) <= 16


def test_grid_oracle_examples():
    fm = mirror_map()
    res = grid_oracle(fm, -1, 2, 3 * 2**10 + 1)
    assert (res.segments, res.slopes) == (4, [0, 2, -2, 0])
    assert grid_oracle(constant(1), 0, 1, 3).segments == 1
    assert grid_oracle(pwl_compose(fm, fm), -1, 2, 3 * 2**10 + 1).segments == 6


def test_grid_oracle_off_grid_kink():
    # kink at 1/3 falls strictly between dyadic grid points
    f = PwlFunction([rational("1/3")], [(1, 0), (-1, rational("2/3"))])
    res = grid_oracle(f, 0, 1, 2**8 + 1)
    assert res.segments == 2 and res.slopes == [1, -1]


def test_grid_oracle_never_exceeds_symbolic():
    for seed in range(60):
        f = compile_network(random_network(GeneratorConfig(seed=seed, width=3, depth=2)))
        slopes, narrow = window_pieces(f, -2, 2)
        res = grid_oracle(f, -2, 2, 4 * 2**6 + 1)
        assert res.segments <= len(slopes)
        if narrow >= 4 * rational(1) / 2**6:
            assert res.slopes == slopes


def test_grid_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        grid_oracle(mirror_map(), 1, 1, 10)
    with pytest.raises(ValueError):
        grid_oracle(mirror_map(), 0, 1, 2)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes(name):
    report = run_suite(name, verify.DEFAULT_CASES.get(name, 25), seed=7)
    assert report.passed, report.counterexamples
    assert report.cases == verify.DEFAULT_CASES.get(name, 25)


def test_suite_examples():
    assert run_suite("add_bound", 1000, 7).failures == 0
    r = run_suite("fmk_closed_form", 12, 0)
    assert (r.cases, r.failures) == (12, 0)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", 1, 0)


def test_suite_deterministic():
    a = run_suite("threshold_crossings", 20, 4).to_dict()
    b = run_suite("threshold_crossings", 20, 4).to_dict()
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_parallel_matches_serial():
    serial = run_suite("compose_bound", 12, 9)
    parallel = run_suite("compose_bound", 12, 9, workers=2)
    assert (serial.failures, serial.cases) == (parallel.failures, parallel.cases)


def _off_by_one_add(f, g):
    # extra unit step: one more piece than allowed and wrong values right of 0
    return real_add(real_add(f, g), PwlFunction([0], [(0, 0), (0, 1)]))


def test_mutation_is_caught_and_replayable(monkeypatch):
    monkeypatch.setattr(verify._pwl, "pwl_add", _off_by_one_add)
    report = run_suite("add_bound", 30, 3)
    assert report.failures > 0
    cx = report.counterexamples[0]
    assert "f" in cx and "g" in cx
    again = replay_case("add_bound", 3, cx["case"])
    assert again["message"] == cx["message"]
