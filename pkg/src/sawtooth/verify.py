"""Seeded instance generators, a sampling oracle, and executable property suites.

Every suite case draws its own sub-seed from ``(seed, case_index)``, so a
failing case can be replayed alone and results do not depend on scheduling.

The error lower bound is a statement about every shallow network; sampling
networks can only catch an implementation that violates it, never confirm it.
"""

from __future__ import annotations

import hashlib
import random
from bisect import bisect_right
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from . import pwl as _pwl
from .alternating import (
    classification_error,
    n_ap,
    network_lower_bound,
    sawtooth_lower_bound,
    ap_image_check,
)
from .network import (
    NetworkSpec,
    Neuron,
    RecurrentSpec,
    compile_network,
    compile_recurrent,
    evaluate_network,
    mirror_closed_form,
    mirror_closed_form_pwl,
    mirror_map,
    mirror_network,
    relu,
    stump,
)
from .pwl import HALF, ExactRational, PwlFunction, format_rational, piece_count, rational
from .serialize import network_to_dict, pwl_to_dict


# -- generators ------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    max_pieces: int = 8
    lo: ExactRational = rational(-2)
    hi: ExactRational = rational(2)
    coef_bound: ExactRational = rational(4)
    width: int = 2
    depth: int = 2
    denom_bits: int = 10
    activation: Optional[PwlFunction] = None
    continuous: bool = False

    def __post_init__(self):
        for name in ("lo", "hi", "coef_bound"):
            object.__setattr__(self, name, rational(getattr(self, name)))
        if not self.lo < self.hi:
            raise ValueError("breakpoint range is empty")
        if self.coef_bound <= 0:
            raise ValueError("coef_bound must be positive")
        if self.max_pieces < 1 or self.width < 1 or self.depth < 1:
            raise ValueError("max_pieces, width and depth must be positive")
        if self.denom_bits < 0:
            raise ValueError("denom_bits must be nonnegative")


def random_dyadic(rng: random.Random, lo, hi, bits: int) -> ExactRational:
    """Dyadic rational in ``[lo, hi]`` with denominator at most ``2**bits``."""
    lo, hi = rational(lo), rational(hi)
    while True:
        den = 2 ** rng.randint(0, bits)
        a = -((-lo.numerator * den) // lo.denominator)
        b = (hi.numerator * den) // hi.denominator
        if a <= b:
            return rational(rng.randint(a, b)) / den
        bits += 1


def random_sawtooth(cfg: GeneratorConfig) -> PwlFunction:
    """Random canonical function with at most ``cfg.max_pieces`` pieces.

    Breakpoints sometimes collide and pieces sometimes repeat or go flat, so
    canonical merging gets exercised.
    """
    rng = random.Random(cfg.seed)
    t = rng.randint(1, cfg.max_pieces)
    coarse = min(cfg.denom_bits, 2)
    raw = set()
    for _ in range(t - 1):
        bits = coarse if rng.random() < 0.3 else cfg.denom_bits
        raw.add(random_dyadic(rng, cfg.lo, cfg.hi, bits))
    bps = sorted(raw)
    B = cfg.coef_bound
    pieces = []
    for i in range(len(bps) + 1):
        r = rng.random()
        if i and r < 0.15:
            pieces.append(pieces[-1])
            continue
        slope = rational(0) if r < 0.3 else random_dyadic(rng, -B, B, 3)
        if i and (cfg.continuous or r < 0.7):
            s0, c0 = pieces[-1]
            b = bps[i - 1]
            intercept = s0 * b + c0 - slope * b
        else:
            intercept = random_dyadic(rng, -B, B, 3)
        pieces.append((slope, intercept))
    return PwlFunction(bps, pieces)


def random_network(cfg: GeneratorConfig) -> NetworkSpec:
    """Random network of depth ``cfg.depth`` with hidden widths at most ``cfg.width``.

    Each bias is chosen so that the neuron's pre-activation vanishes at a
    random point of ``[lo, hi]``; with fully random biases most ReLU nets come
    out dead or affine on the region of interest.
    """
    rng = random.Random(cfg.seed)
    B = cfg.coef_bound
    sigma = cfg.activation if cfg.activation is not None else relu()
    widths = [rng.randint(1, cfg.width) for _ in range(cfg.depth - 1)] + [1]
    layers = []
    for w in widths:
        width_in = len(layers[-1]) if layers else 1
        layer = []
        for _ in range(w):
            weights = tuple(random_dyadic(rng, -B, B, 2) for _ in range(width_in))
            u = random_dyadic(rng, cfg.lo, cfg.hi, 3)
            inputs = [u]
            for prev in layers:
                inputs = [sigma(n.bias + sum(a * v for a, v in zip(n.weights, inputs))) for n in prev]
            level = sum(a * v for a, v in zip(weights, inputs))
            layer.append(Neuron(-level, weights))
        layers.append(tuple(layer))
    return NetworkSpec(layers=tuple(layers), activation=sigma)


# -- grid oracle -----------------------------------------------------------------


@dataclass
class OracleResult:
    segments: int
    slopes: list
    starts: list
    spacing: ExactRational


def grid_oracle(f: Callable, lo, hi, samples: int) -> OracleResult:
    """Detect affine segments of ``f`` from exact samples on a uniform grid.

    A segment is a maximal run of at least two grid intervals with equal first
    differences (zero second difference).  A lone interval between runs is
    taken to straddle a kink or jump and is not counted.
    """
    lo, hi = rational(lo), rational(hi)
    if not lo < hi:
        raise ValueError("degenerate range")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    h = (hi - lo) / (samples - 1)
    ys = [f(lo + h * i) for i in range(samples)]
    diffs = [b - a for a, b in zip(ys, ys[1:])]
    runs = []
    start = 0
    for i in range(1, len(diffs) + 1):
        if i == len(diffs) or diffs[i] != diffs[start]:
            runs.append((start, i - start, diffs[start]))
            start = i
    if len(runs) > 1:
        runs = [r for r in runs if r[1] >= 2]
    return OracleResult(
        segments=len(runs),
        slopes=[d / h for _, _, d in runs],
        starts=[lo + h * s for s, _, _ in runs],
        spacing=h,
    )


def window_pieces(f: PwlFunction, lo, hi) -> tuple:
    """Slopes of the pieces of ``f`` meeting the open window, and its narrowest width."""
    lo, hi = rational(lo), rational(hi)
    edges = [lo] + [b for b in f.breakpoints if lo < b < hi] + [hi]
    slopes = [f.slopes[bisect_right(f.breakpoints, a)] for a in edges[:-1]]
    widths = [b - a for a, b in zip(edges, edges[1:])]
    return slopes, min(widths)


# -- suites ----------------------------------------------------------------------


@dataclass
class SuiteReport:
    suite: str
    cases: int
    failures: int
    seed: int
    wall_time: float
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": self.failures,
            "seed": self.seed,
            "wall_time": round(self.wall_time, 4),
            "counterexamples": self.counterexamples,
        }


class CaseFailure(AssertionError):
    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


def case_seed(seed: int, index: int) -> int:
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _sub(rng):
    return rng.getrandbits(64)


def _probes(rng, count, lo, hi, fns=(), bits=12):
    """Random dyadic probes plus every breakpoint of ``fns`` and its near neighbours."""
    eps = rational(1) / 2**20
    xs = [random_dyadic(rng, lo, hi, bits) for _ in range(count)]
    for f in fns:
        for b in f.breakpoints:
            xs.extend((b - eps, b, b + eps))
    return xs


def _check(cond, message, **details):
    if not cond:
        raise CaseFailure(message, **details)


def _fn(f):
    return pwl_to_dict(f)


def _suite_add_bound(seed, index, probes):
    rng = random.Random(seed)
    base = GeneratorConfig(max_pieces=8)
    f = random_sawtooth(replace(base, seed=_sub(rng)))
    g = random_sawtooth(replace(base, seed=_sub(rng)))
    h = _pwl.pwl_add(f, g)
    details = dict(f=_fn(f), g=_fn(g))
    _check(piece_count(h) <= piece_count(f) + piece_count(g), "f+g exceeds k+l pieces", **details)
    for x in _probes(rng, probes, -3, 3, (f, g)):
        _check(h(x) == f(x) + g(x), f"f+g wrong at {format_rational(x)}", **details)


def _suite_compose_bound(seed, index, probes):
    rng = random.Random(seed)
    base = GeneratorConfig(max_pieces=8)
    f = random_sawtooth(replace(base, seed=_sub(rng)))
    g = random_sawtooth(replace(base, seed=_sub(rng)))
    h = _pwl.pwl_compose(f, g)
    details = dict(f=_fn(f), g=_fn(g))
    _check(piece_count(h) <= piece_count(f) * piece_count(g), "f∘g exceeds kl pieces", **details)
    for x in _probes(rng, probes, -3, 3, (g, h)):
        _check(h(x) == f(g(x)), f"f∘g wrong at {format_rational(x)}", **details)


def _random_net(rng, max_width=4, max_depth=3, activations=("relu",)):
    kind = rng.choice(activations)
    if kind == "relu":
        sigma = relu()
    elif kind == "stump":
        sigma = stump(random_dyadic(rng, -1, 1, 2))
    else:
        sigma = random_sawtooth(GeneratorConfig(seed=_sub(rng), max_pieces=4, lo=-1, hi=1))
    cfg = GeneratorConfig(
        seed=_sub(rng),
        width=rng.randint(1, max_width),
        depth=rng.randint(1, max_depth),
        activation=sigma,
    )
    return random_network(cfg)


def _suite_network_bound(seed, index, probes):
    rng = random.Random(seed)
    net = _random_net(rng, 4, 3, ("relu", "relu", "stump"))
    f = compile_network(net)
    details = dict(network=network_to_dict(net))
    _check(piece_count(f) <= net.piece_bound(), "compiled net exceeds (tm)^l pieces", **details)
    for x in _probes(rng, probes, -4, 4, (f,)):
        _check(f(x) == evaluate_network(net, x), f"compiled net wrong at {format_rational(x)}", **details)


def _suite_threshold(seed, index, probes):
    rng = random.Random(seed)
    f = random_sawtooth(GeneratorConfig(seed=_sub(rng), max_pieces=10, lo=-1, hi=2, coef_bound=2))
    t = piece_count(f)
    c = _pwl.threshold_classifier(f)
    details = dict(f=_fn(f))
    _check(c.region_count <= 2 * t, "classifier has more than 2t regions", **details)
    _check(c.label_changes <= 2 * t - 1, "more than 2t-1 crossings of 1/2", **details)
    pts = _probes(rng, probes, -2, 3, (f,))
    pts.extend(c.boundaries)
    for x in pts:
        _check(c(x) == int(f(x) >= HALF), f"classifier wrong at {format_rational(x)}", **details)


def _suite_lower_bound(seed, index, probes):
    rng = random.Random(seed)
    f = random_sawtooth(
        GeneratorConfig(seed=_sub(rng), max_pieces=rng.choice((2, 4, 8, 16)), lo=0, hi=1, coef_bound=8)
    )
    n = rng.randint(1, 256)
    err = classification_error(f, n_ap(n))
    bound = sawtooth_lower_bound(n, piece_count(f))
    _check(err >= bound, f"error {err} below bound {bound} at n={n}", f=_fn(f), n=n)


def _suite_shallow_floor(seed, index, probes):
    rng = random.Random(seed)
    net = random_network(GeneratorConfig(seed=_sub(rng), width=2, depth=2))
    err = classification_error(compile_network(net), n_ap(256))
    _check(err >= rational(1) / 4, f"error {err} below 1/4", network=network_to_dict(net))


_FMK_CACHE: dict = {}


def _mirror_iterate(k):
    if k not in _FMK_CACHE:
        _FMK_CACHE[k] = compile_recurrent(RecurrentSpec(mirror_network(), k))
    return _FMK_CACHE[k]


def _suite_fmk_closed_form(seed, index, probes):
    rng = random.Random(seed)
    k = index % 12 + 1
    f = _mirror_iterate(k)
    _check(_pwl.pwl_equal(mirror_closed_form_pwl(k), f), f"closed form differs from compiled f_m^{k}", k=k)
    for x in _probes(rng, probes, 0, 1, bits=k + 8) + [rational(0), rational(1)]:
        _check(mirror_closed_form(x, k) == f(x), f"closed form wrong at {format_rational(x)}", k=k)


def _suite_mirror_pre(seed, index, probes):
    rng = random.Random(seed)
    g = random_sawtooth(GeneratorConfig(seed=_sub(rng), lo=-1, hi=3))
    h = _pwl.pwl_compose(g, mirror_map())
    for x in _probes(rng, probes, 0, 1) + [rational(0), HALF, rational(1)]:
        want = g(2 * x) if x <= HALF else g(2 - 2 * x)
        _check(h(x) == want, f"g∘f_m wrong at {format_rational(x)}", g=_fn(g))


def _suite_mirror_post(seed, index, probes):
    rng = random.Random(seed)
    g = random_sawtooth(GeneratorConfig(seed=_sub(rng), lo=-1, hi=1, coef_bound=2))
    h = _pwl.pwl_compose(mirror_map(), g)
    xs = _probes(rng, probes, -2, 2, (g,))
    # aim some probes at points where g lands in [0, 1]
    for s, c in g.pieces:
        if s != 0:
            xs.append((random_dyadic(rng, 0, 1, 6) - c) / s)
    for x in xs:
        y = g(x)
        if 0 <= y <= HALF:
            want = 2 * y
        elif HALF < y <= 1:
            want = 2 * (1 - y)
        else:
            continue
        _check(h(x) == want, f"f_m∘g wrong at {format_rational(x)}", g=_fn(g))


def _suite_fmk_symmetry(seed, index, probes):
    rng = random.Random(seed)
    k = index % 10 + 1
    f = _mirror_iterate(k)
    for x in _probes(rng, probes, 0, 1, bits=k + 6):
        _check(f(x) == f(1 - x), f"f_m^{k} not symmetric at {format_rational(x)}", k=k)


def _suite_ap_image(seed, index, probes):
    k = index % 11 + 2
    _check(ap_image_check(k), f"image of the 2^{k}-ap is not a doubled 2^{k - 1}-ap", k=k)


def _suite_theorem_gap(seed, index, probes):
    rng = random.Random(seed)
    net = _random_net(rng, 3, 3, ("relu", "stump", "sawtooth"))
    k = rng.randint(3, 8)
    n = 2**k
    err = classification_error(compile_network(net), n_ap(n))
    report = network_lower_bound(n, net.activation_pieces, net.width, net.depth)
    _check(
        err >= report.bound,
        f"error {err} below bound {report.bound}",
        network=network_to_dict(net),
        n=n,
    )


def _suite_oracle(seed, index, probes):
    rng = random.Random(seed)
    f = compile_network(_random_net(rng, 3, 2))
    lo, hi = rational(-3), rational(3)
    spacing = rational(1) / 2**10
    slopes, narrowest = window_pieces(f, lo, hi)
    if narrowest < 4 * spacing:
        return  # too fine for this grid; the inequality below still applies
    res = grid_oracle(f, lo, hi, int((hi - lo) / spacing) + 1)
    _check(res.segments == len(slopes), f"oracle saw {res.segments} segments, expected {len(slopes)}", f=_fn(f))
    _check(res.slopes == slopes, "oracle slopes differ", f=_fn(f))


SUITES = {
    "add_bound": (_suite_add_bound, 50),
    "compose_bound": (_suite_compose_bound, 50),
    "network_bound": (_suite_network_bound, 20),
    "threshold_crossings": (_suite_threshold, 50),
    "lower_bound": (_suite_lower_bound, 0),
    "shallow_floor": (_suite_shallow_floor, 0),
    "fmk_closed_form": (_suite_fmk_closed_form, 100),
    "mirror_precompose": (_suite_mirror_pre, 100),
    "mirror_postcompose": (_suite_mirror_post, 100),
    "fmk_symmetry": (_suite_fmk_symmetry, 100),
    "ap_image": (_suite_ap_image, 0),
    "theorem_gap": (_suite_theorem_gap, 0),
    "oracle_agreement": (_suite_oracle, 0),
}

DEFAULT_CASES = {
    "fmk_closed_form": 12,
    "fmk_symmetry": 10,
    "ap_image": 11,
}


def _run_case(name, seed, index, probes):
    fn, default_probes = SUITES[name]
    sub = case_seed(seed, index)
    try:
        fn(sub, index, default_probes if probes is None else probes)
    except CaseFailure as exc:
        return {"case": index, "case_seed": sub, "message": str(exc), **exc.details}
    return None


def run_suite(name: str, cases: int, seed: int = 0, probes: Optional[int] = None, workers: int = 1) -> SuiteReport:
    """Run ``cases`` instances of a named property; see ``SUITES``."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    if cases < 1:
        raise ValueError("cases must be positive")
    start = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(
                pool.map(_run_case, [name] * cases, [seed] * cases, range(cases), [probes] * cases)
            )
    else:
        results = [_run_case(name, seed, i, probes) for i in range(cases)]
    bad = [r for r in results if r is not None]
    return SuiteReport(
        suite=name,
        cases=cases,
        failures=len(bad),
        seed=seed,
        wall_time=time.perf_counter() - start,
        counterexamples=bad[:10],
    )


def replay_case(name: str, seed: int, index: int, probes: Optional[int] = None):
    """Re-run one case; returns the counterexample dict or ``None``."""
    return _run_case(name, seed, index, probes)
