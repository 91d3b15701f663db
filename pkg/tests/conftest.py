from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from sawtooth import PwlFunction, rational

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def fm_ref(x):
    """Mirror map straight from its case definition, on Fractions."""
    x = Fraction(int(x.numerator), int(x.denominator))
    if 0 <= x <= Fraction(1, 2):
        return 2 * x
    if Fraction(1, 2) < x <= 1:
        return 2 * (1 - x)
    return Fraction(0)


def fm_iter_ref(x, k):
    for _ in range(k):
        x = fm_ref(x)
    return x


def dyadics(lo=-4, hi=4, bits=6):
    return st.integers(lo * 2**bits, hi * 2**bits).map(lambda n: rational(n) / 2**bits)


@st.composite
def pwl_functions(draw, max_pieces=7, jumps=True, point_values=True):
    bps = sorted(set(draw(st.lists(dyadics(-3, 3, 4), max_size=max_pieces - 1))))
    slopes = draw(st.lists(dyadics(-3, 3, 2), min_size=len(bps) + 1, max_size=len(bps) + 1))
    icepts = draw(st.lists(dyadics(-3, 3, 2), min_size=len(bps) + 1, max_size=len(bps) + 1))
    if not jumps:
        for i, b in enumerate(bps):
            icepts[i + 1] = slopes[i] * b + icepts[i] - slopes[i + 1] * b
    points = {}
    if point_values and bps:
        for b in draw(st.lists(st.sampled_from(bps), max_size=2)):
            points[b] = draw(dyadics(-3, 3, 2))
    return PwlFunction(bps, list(zip(slopes, icepts)), points)


def probe_points(*fns, extra=()):
    """Breakpoints of all ``fns`` and points just either side of them."""
    eps = rational(1) / 2**12
    xs = [rational(x) for x in extra]
    for f in fns:
        for b in f.breakpoints:
            xs.extend((b - eps, b, b + eps))
    return xs


@pytest.fixture
def fm():
    from sawtooth import mirror_map

    return mirror_map()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
