"""Alternating-point datasets, exact classification error and lower bounds."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from typing import Optional

from .network import mirror_map
from .pwl import HALF, ExactRational, PwlFunction, format_rational, rational


@dataclass(frozen=True)
class LabeledDataset:
    points: tuple

    def __post_init__(self):
        pts = tuple((rational(x), int(y)) for x, y in self.points)
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError("dataset x values must be strictly increasing")
        if any(y not in (0, 1) for _, y in pts):
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def xs(self):
        return [x for x, _ in self.points]

    @property
    def ys(self):
        return [y for _, y in self.points]


@dataclass(frozen=True)
class BoundReport:
    n: int
    t: int
    m: Optional[int]
    l: Optional[int]
    k: Optional[int]
    bound: ExactRational

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bound"] = format_rational(self.bound)
        d["bound_decimal"] = float(self.bound)
        return d


def n_ap(n: int) -> LabeledDataset:
    """``n`` evenly spaced points ``i/n`` in ``[0, 1)`` labelled ``i mod 2``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    step = rational(1) / n
    return LabeledDataset(tuple((step * i, i % 2) for i in range(n)))


def n_ap_literal(n: int) -> LabeledDataset:
    """The ``x_i = i * 2**-n`` variant, ``i = 1..n``, label 0 on even ``i``.

    Kept for comparison only: at ``n = 2**k`` these points are not fit by the
    k-fold mirror map.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    step = rational(1) / 2**n
    return LabeledDataset(tuple((step * i, 0 if i % 2 == 0 else 1) for i in range(1, n + 1)))


def classification_error(f: PwlFunction, data: LabeledDataset) -> ExactRational:
    """Fraction of points where ``1[f(x) >= 1/2]`` differs from the label."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    wrong = sum(1 for x, y in data if int(f(x) >= HALF) != y)
    return rational(wrong) / len(data)


def sawtooth_lower_bound(n: int, t: int) -> ExactRational:
    """Error floor ``max(0, (n - 4t) / 3n)`` for any t-sawtooth on the n-ap."""
    if n < 1 or t < 1:
        raise ValueError("n and t must be positive")
    return max(rational(0), rational(n - 4 * t) / (3 * n))


def network_lower_bound(n: int, t: int, m: int, l: int) -> BoundReport:
    if min(n, t, m, l) < 1:
        raise ValueError("n, t, m, l must be positive")
    k = n.bit_length() - 1 if n & (n - 1) == 0 else None
    return BoundReport(n=n, t=t, m=m, l=l, k=k, bound=sawtooth_lower_bound(n, (t * m) ** l))


def max_shallow_width(k: int, l: int) -> int:
    """Largest integer ``m`` with ``m <= 2**((k-3)/l - 1)``, i.e. ``(2m)**l <= 2**(k-3)``.

    Returns 0 when no positive width qualifies.
    """
    if k < 3:
        return 0
    cap = 2 ** (k - 3)
    m = 0
    lo, hi = 0, 2 ** ((k - 3) // l + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        if (2 * mid) ** l <= cap:
            m = mid
            lo = mid + 1
        else:
            hi = mid - 1
    return m


def ap_image_check(k: int) -> bool:
    """Does the mirror map send the ``2**k``-ap onto a doubled ``2**(k-1)``-ap?

    Expected image multiset: the point at 0 once, every other point of the
    half-size problem twice, plus one extra point at ``x = 1`` whose label
    continues the alternation.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n = 2**k
    fm = mirror_map()
    image = Counter((fm(x), y) for x, y in n_ap(n))
    half = n_ap(n // 2)
    expected = Counter()
    for j, (x, y) in enumerate(half):
        expected[(x, y)] += 1 if j == 0 else 2
    expected[(rational(1), (n // 2) % 2)] += 1
    return image == expected
