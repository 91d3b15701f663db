"""Exact piecewise-affine functions of one real variable.

A :class:`PwlFunction` is stored as sorted breakpoints plus one affine map per
piece.  Piece ``i`` is active on ``[b[i-1], b[i])``, so the value at a
breakpoint normally belongs to the piece on its right.  Compositions with
discontinuous functions can produce values at a breakpoint that match the left
piece or neither piece; those are kept in a small ``point_values`` table so that
every result stays exact.
"""

from __future__ import annotations

import re
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from gmpy2 import mpq

ExactRational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def rational(value) -> ExactRational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, mpq, :class:`fractions.Fraction` and strings of the form
    ``"p"`` or ``"p/q"``.  Floats are refused: they would silently carry
    binary rounding into exact code.
    """
    if isinstance(value, ExactRational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ValueError(f"not a rational literal: {value!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return mpq(int(m.group(1)), den)
    if type(value).__name__ == "mpz":
        return mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q) -> str:
    """Lowest-terms text, ``"p/q"`` or ``"p"`` for integers."""
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class AffinePiece(NamedTuple):
    slope: ExactRational
    intercept: ExactRational

    def __call__(self, x):
        return self.slope * x + self.intercept


def _canonical(bps, slopes, icepts, points):
    """Merge adjacent identical maps and drop redundant point values.

    ``points`` maps breakpoint index to the exact value there.  Returns new
    lists in canonical form.
    """
    out_b = []
    out_s = [slopes[0]]
    out_c = [icepts[0]]
    out_p = {}
    if not points:
        add_b, add_s, add_c = out_b.append, out_s.append, out_c.append
        ps, pc = slopes[0], icepts[0]
        for b, s, c in zip(bps, slopes[1:], icepts[1:]):
            if s == ps and c == pc:
                continue
            add_b(b)
            add_s(s)
            add_c(c)
            ps, pc = s, c
        return out_b, out_s, out_c, out_p
    for i, b in enumerate(bps):
        s = slopes[i + 1]
        c = icepts[i + 1]
        v = points.get(i)
        if v is not None and v == s * b + c:
            v = None
        if v is None and s == out_s[-1] and c == out_c[-1]:
            continue
        if v is not None:
            out_p[len(out_b)] = v
        out_b.append(b)
        out_s.append(s)
        out_c.append(c)
    return out_b, out_s, out_c, out_p


class PwlFunction:
    """Canonical piecewise-affine function R -> R with exact coefficients.

    Instances are immutable.  The constructor validates and canonicalizes;
    ``pieces`` has one more entry than ``breakpoints``.
    """

    __slots__ = ("_bps", "_slopes", "_icepts", "_points", "_continuous")

    def __init__(
        self,
        breakpoints: Iterable = (),
        pieces: Iterable = ((0, 0),),
        point_values: Mapping | None = None,
    ):
        bps = [rational(b) for b in breakpoints]
        pcs = [(rational(s), rational(c)) for s, c in pieces]
        if len(pcs) != len(bps) + 1:
            raise ValueError(
                f"{len(bps)} breakpoints need {len(bps) + 1} pieces, got {len(pcs)}"
            )
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        points = {}
        if point_values:
            index = {b: i for i, b in enumerate(bps)}
            for x, v in point_values.items():
                x = rational(x)
                if x not in index:
                    raise ValueError(f"point value at {x} is not on a breakpoint")
                points[index[x]] = rational(v)
        b, s, c, p = _canonical(bps, [q[0] for q in pcs], [q[1] for q in pcs], points)
        self._set(b, s, c, p)

    def _set(self, bps, slopes, icepts, points):
        self._bps = tuple(bps)
        self._slopes = tuple(slopes)
        self._icepts = tuple(icepts)
        self._points = points
        self._continuous = None

    @classmethod
    def _raw(cls, bps, slopes, icepts, points=None, canonical=False, continuous=None):
        if not canonical:
            bps, slopes, icepts, points = _canonical(bps, slopes, icepts, points)
        obj = cls.__new__(cls)
        obj._set(bps, slopes, icepts, points or {})
        obj._continuous = continuous
        return obj

    # -- accessors ---------------------------------------------------------

    @property
    def breakpoints(self) -> tuple:
        return self._bps

    @property
    def pieces(self) -> tuple:
        return tuple(AffinePiece(s, c) for s, c in zip(self._slopes, self._icepts))

    @property
    def slopes(self) -> tuple:
        return self._slopes

    @property
    def intercepts(self) -> tuple:
        return self._icepts

    @property
    def point_values(self) -> dict:
        """Breakpoints whose value is not given by the piece on their right."""
        return {self._bps[i]: v for i, v in sorted(self._points.items())}

    def __len__(self):
        return len(self._slopes)

    # -- evaluation --------------------------------------------------------

    def __call__(self, x):
        bps = self._bps
        i = bisect_right(bps, x)
        if self._points and i and bps[i - 1] == x and (i - 1) in self._points:
            return self._points[i - 1]
        return self._slopes[i] * x + self._icepts[i]

    def left_value(self, i: int):
        """Limit from the left at breakpoint ``i``."""
        b = self._bps[i]
        return self._slopes[i] * b + self._icepts[i]

    def right_value(self, i: int):
        b = self._bps[i]
        return self._slopes[i + 1] * b + self._icepts[i + 1]

    def value_at_breakpoint(self, i: int):
        v = self._points.get(i)
        return self.right_value(i) if v is None else v

    def is_continuous(self) -> bool:
        if self._continuous is None:
            self._continuous = not self._points and all(
                self.left_value(i) == self.right_value(i) for i in range(len(self._bps))
            )
        return self._continuous

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PwlFunction):
            return NotImplemented
        return (
            self._bps == other._bps
            and self._slopes == other._slopes
            and self._icepts == other._icepts
            and self._points == other._points
        )

    def __hash__(self):
        return hash((self._bps, self._slopes, self._icepts, tuple(sorted(self._points.items()))))

    def __repr__(self):
        if len(self._slopes) > 8:
            return f"<PwlFunction with {len(self._slopes)} pieces>"
        parts = [f"{format_rational(s)}x+{format_rational(c)}" for s, c in zip(self._slopes, self._icepts)]
        bps = ", ".join(format_rational(b) for b in self._bps)
        return f"PwlFunction([{bps}], [{'; '.join(parts)}])"

    # operator sugar; the module functions are the primary API
    def __add__(self, other):
        if isinstance(other, PwlFunction):
            return pwl_add(self, other)
        return pwl_scale_shift(self, ONE, rational(other))

    __radd__ = __add__

    def __neg__(self):
        return pwl_scale_shift(self, -ONE, ZERO)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        return pwl_scale_shift(self, rational(a), ZERO)

    __rmul__ = __mul__


# -- constructors -----------------------------------------------------------


def constant(c) -> PwlFunction:
    return PwlFunction._raw((), (ZERO,), (rational(c),), canonical=True, continuous=True)


def affine(slope, intercept=0) -> PwlFunction:
    return PwlFunction._raw(
        (), (rational(slope),), (rational(intercept),), canonical=True, continuous=True
    )


def identity() -> PwlFunction:
    return affine(1, 0)


# -- operations -------------------------------------------------------------


def pwl_eval(f: PwlFunction, x) -> ExactRational:
    return f(rational(x))


def piece_count(f: PwlFunction) -> int:
    """Number of intervals in the coarsest partition on which ``f`` is affine.

    A point value equal to neither neighbouring piece is a one-point interval
    of its own and counts as a piece.
    """
    n = len(f._slopes)
    for i, v in f._points.items():
        if v != f.left_value(i):
            n += 1
    return n


def pwl_equal(f: PwlFunction, g: PwlFunction) -> bool:
    return f == g


def pwl_scale_shift(f: PwlFunction, a, c) -> PwlFunction:
    """``x -> a*f(x) + c``."""
    a = rational(a)
    c = rational(c)
    if a == 0:
        return constant(c)
    slopes = [a * s for s in f._slopes]
    icepts = [a * b + c for b in f._icepts]
    points = {i: a * v + c for i, v in f._points.items()}
    return PwlFunction._raw(f._bps, slopes, icepts, points, canonical=True, continuous=f._continuous)


def pwl_add(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    """Pointwise sum by a single merge of the two breakpoint sequences."""
    fb, gb = f._bps, g._bps
    fs, fc, gs, gc = f._slopes, f._icepts, g._slopes, g._icepts
    with_points = bool(f._points or g._points)
    bps = []
    slopes = [fs[0] + gs[0]]
    icepts = [fc[0] + gc[0]]
    points = {}
    i = j = 0
    nf, ng = len(fb), len(gb)
    while i < nf or j < ng:
        if j >= ng or (i < nf and fb[i] < gb[j]):
            b = fb[i]
            fv = f.value_at_breakpoint(i) if with_points else None
            gv = g(b) if with_points else None
            i += 1
        elif i >= nf or gb[j] < fb[i]:
            b = gb[j]
            fv = f(b) if with_points else None
            gv = g.value_at_breakpoint(j) if with_points else None
            j += 1
        else:
            b = fb[i]
            fv = f.value_at_breakpoint(i) if with_points else None
            gv = g.value_at_breakpoint(j) if with_points else None
            i += 1
            j += 1
        if with_points:
            points[len(bps)] = fv + gv
        bps.append(b)
        slopes.append(fs[i] + gs[j])
        icepts.append(fc[i] + gc[j])
    both = True if f._continuous and g._continuous else None
    return PwlFunction._raw(bps, slopes, icepts, points, continuous=both)


def pwl_compose(outer: PwlFunction, inner: PwlFunction) -> PwlFunction:
    """``x -> outer(inner(x))``.

    Each inner piece with nonzero slope is split at the preimages of the outer
    breakpoints its image crosses; a flat inner piece maps into one outer value.
    """
    fb, fs, fc = outer._bps, outer._slopes, outer._icepts
    gb, gs, gc = inner._bps, inner._slopes, inner._icepts
    nf = len(fb)
    bps = []
    slopes = []
    icepts = []
    add_b = bps.append
    add_s = slopes.append
    add_c = icepts.append
    last = len(gs) - 1
    for j in range(len(gs)):
        a = gs[j]
        c = gc[j]
        left = gb[j - 1] if j > 0 else None
        right = gb[j] if j < last else None
        if left is not None:
            add_b(left)
        if a == 0:
            add_s(ZERO)
            add_c(outer(c))
            continue
        if a > 0:
            k = 0 if left is None else bisect_right(fb, a * left + c)
            add_s(fs[k] * a)
            add_c(fs[k] * c + fc[k])
            hi = None if right is None else a * right + c
            if c == 0:
                while k < nf and (hi is None or fb[k] < hi):
                    add_b(fb[k] / a)
                    k += 1
                    add_s(fs[k] * a)
                    add_c(fc[k])
                continue
            while k < nf and (hi is None or fb[k] < hi):
                add_b((fb[k] - c) / a)
                k += 1
                add_s(fs[k] * a)
                add_c(fs[k] * c + fc[k])
        else:
            k = nf if left is None else bisect_left(fb, a * left + c)
            add_s(fs[k] * a)
            add_c(fs[k] * c + fc[k])
            lo = None if right is None else a * right + c
            while k > 0 and (lo is None or fb[k - 1] > lo):
                k -= 1
                add_b((fb[k] - c) / a)
                add_s(fs[k] * a)
                add_c(fs[k] * c + fc[k])
    points = None
    if not (outer.is_continuous() and not inner._points):
        # values at new breakpoints may not follow the right-hand piece
        points = {i: outer(inner(x)) for i, x in enumerate(bps)}
    both = True if outer._continuous and inner._continuous else None
    return PwlFunction._raw(bps, slopes, icepts, points, continuous=both)


# -- thresholding -------------------------------------------------------------


class ThresholdClassifier:
    """Piecewise-constant 0/1 function given by sorted boundaries.

    ``labels[i]`` holds on the open region between boundaries ``i-1`` and
    ``i``; ``point_labels[i]`` is the label at boundary ``i`` itself.  When
    every point label equals the label to its right this is the usual
    ``[b[i-1], b[i])`` layout.
    """

    __slots__ = ("boundaries", "labels", "point_labels")

    def __init__(self, boundaries: Sequence, labels: Sequence[int], point_labels: Sequence[int] | None = None):
        boundaries = [rational(b) for b in boundaries]
        labels = [int(y) for y in labels]
        if point_labels is None:
            point_labels = labels[1:]
        point_labels = [int(y) for y in point_labels]
        if len(labels) != len(boundaries) + 1 or len(point_labels) != len(boundaries):
            raise ValueError("need one label per region and one per boundary")
        if any(y not in (0, 1) for y in labels + point_labels):
            raise ValueError("labels must be 0 or 1")
        for a, b in zip(boundaries, boundaries[1:]):
            if not a < b:
                raise ValueError("boundaries must be strictly increasing")
        out_b, out_l, out_p = [], [labels[0]], []
        for i, b in enumerate(boundaries):
            if labels[i + 1] == out_l[-1] == point_labels[i]:
                continue
            out_b.append(b)
            out_l.append(labels[i + 1])
            out_p.append(point_labels[i])
        self.boundaries = tuple(out_b)
        self.labels = tuple(out_l)
        self.point_labels = tuple(out_p)

    def __call__(self, x) -> int:
        i = bisect_right(self.boundaries, x)
        if i and self.boundaries[i - 1] == x:
            return self.point_labels[i - 1]
        return self.labels[i]

    def _runs(self):
        seq = [self.labels[0]]
        for p, y in zip(self.point_labels, self.labels[1:]):
            seq.extend((p, y))
        runs = 1
        for a, b in zip(seq, seq[1:]):
            runs += a != b
        return runs

    @property
    def region_count(self) -> int:
        """Maximal intervals of constant label (isolated points count)."""
        return self._runs()

    @property
    def label_changes(self) -> int:
        return self._runs() - 1

    def intervals(self, label: int = 1) -> list:
        """Maximal intervals carrying ``label`` as ``(lo, hi, lo_closed, hi_closed)``.

        ``None`` stands for an infinite end.
        """
        # alternate open regions and boundary points, left to right
        elems = [(self.labels[0], None, None, self.boundaries[0] if self.boundaries else None)]
        bs = self.boundaries
        for i, (p, y) in enumerate(zip(self.point_labels, self.labels[1:])):
            elems.append((p, "pt", bs[i], bs[i]))
            elems.append((y, None, bs[i], bs[i + 1] if i + 1 < len(bs) else None))
        out = []
        start = end = None
        for y, kind, lo, hi in elems:
            if y == label:
                if start is None:
                    start = (lo, kind == "pt")
                end = (hi, kind == "pt")
            elif start is not None:
                out.append((start[0], end[0], start[1], end[1]))
                start = None
        if start is not None:
            out.append((start[0], end[0], start[1], end[1]))
        return out

    def __eq__(self, other):
        if not isinstance(other, ThresholdClassifier):
            return NotImplemented
        return (self.boundaries, self.labels, self.point_labels) == (
            other.boundaries,
            other.labels,
            other.point_labels,
        )

    def __repr__(self):
        return (
            f"ThresholdClassifier({[format_rational(b) for b in self.boundaries]}, "
            f"{list(self.labels)}, {list(self.point_labels)})"
        )


def _piece_label(s, c, lo, hi, level):
    """Labels on the open interval (lo, hi) for ``s*x + c >= level``.

    Returns ``(labels, boundaries, point_labels)`` for the sub-regions.
    """
    if s == 0:
        return [int(c >= level)], [], []
    x0 = (level - c) / s
    if (lo is None or x0 > lo) and (hi is None or x0 < hi):
        if s > 0:
            return [0, 1], [x0], [1]
        return [1, 0], [x0], [1]
    right_of_crossing = lo is not None and x0 <= lo
    return [int(right_of_crossing == (s > 0))], [], []


def threshold_classifier(f: PwlFunction, level=HALF) -> ThresholdClassifier:
    """The classifier ``x -> 1[f(x) >= level]``."""
    level = rational(level)
    bps = f._bps
    labels, bounds, plabels = [], [], []
    for i in range(len(f._slopes)):
        lo = bps[i - 1] if i > 0 else None
        hi = bps[i] if i < len(bps) else None
        if i > 0:
            bounds.append(lo)
            plabels.append(int(f.value_at_breakpoint(i - 1) >= level))
        ls, bs, ps = _piece_label(f._slopes[i], f._icepts[i], lo, hi, level)
        labels.extend(ls)
        bounds.extend(bs)
        plabels.extend(ps)
    return ThresholdClassifier(bounds, labels, plabels)
